//! C ABI for `o2basis`.
//!
//! Every function returns an [`O2bStatus`]; results come back through out
//! pointers. Bases live behind the opaque [`O2bBasis`] handle and strings
//! handed out must be released with [`o2b_string_free`]. After a failure,
//! [`o2b_last_error_message`] describes it (per thread).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use o2basis::basis_builder::GeneratorSet;
use o2basis::cleaner::minimal_basis;
use o2basis::cli::presets::{find_preset, resolve_summands, FactorNorm};
use o2basis::cli::report::{build_report, to_json, Document, InputDesc, ReportOptions, REPORT_VERSION, VERIFY_SEED};
use o2basis::diophantine::{dim_invariant_space, MultiDegree};
use o2basis::harmonic::HarmonicSignature;
use o2basis::poly_algebra::Parity;
use o2basis::translator::{check_translation, translate};
use o2basis::{Error, Group, Mode};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum O2bStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Unknown preset, unparsable input or a bad argument value.
    Usage = 3,
    /// An exactness or verification check failed.
    Internal = 4,
    OutOfRange = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum O2bGroup {
    So2 = 0,
    O2 = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum O2bMode {
    Invariants = 0,
    Covariants = 1,
}

/// A computed minimal integrity basis.
pub struct O2bBasis {
    input: InputDesc,
    norms: Vec<FactorNorm>,
    set: GeneratorSet,
}

macro_rules! try_st {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(st) => return st,
        }
    };
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: O2bStatus, msg: impl AsRef<str>) -> O2bStatus {
    set_error(msg.as_ref());
    status
}

fn from_error(e: &Error) -> O2bStatus {
    let status = match e {
        Error::Parse(_) | Error::Contract(_) => O2bStatus::Usage,
        _ => O2bStatus::Internal,
    };
    fail(status, e.to_string())
}

/// Run `f`, converting panics into `Internal`.
fn guard(f: impl FnOnce() -> O2bStatus) -> O2bStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(O2bStatus::Internal, "panic inside o2basis"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, O2bStatus> {
    if p.is_null() {
        return Err(fail(O2bStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(O2bStatus::InvalidUtf8, "argument is not UTF-8"))
}

fn out_string(s: String, out: *mut *mut c_char) -> O2bStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            O2bStatus::Ok
        }
        Err(_) => fail(O2bStatus::Internal, "string contains a NUL byte"),
    }
}

fn resolve_input(s: &str) -> o2basis::Result<(InputDesc, HarmonicSignature, Vec<FactorNorm>)> {
    let s = s.trim();
    if s.starts_with("H:") {
        let sig = HarmonicSignature::parse(s)?;
        return Ok((InputDesc { kind: "signature".into(), value: sig.to_grammar() }, sig, Vec::new()));
    }
    if s.starts_with('T') && s[1..].starts_with(|c: char| c.is_ascii_digit()) {
        let (sig, norms) = resolve_summands(&[s.to_string()])?;
        return Ok((InputDesc { kind: "symmetry".into(), value: s.into() }, sig, norms));
    }
    let p = find_preset(s)?;
    let (sig, norms) = p.resolve()?;
    Ok((InputDesc { kind: "preset".into(), value: p.name }, sig, norms))
}

fn group_of(group: i32) -> Result<Group, O2bStatus> {
    match group {
        x if x == O2bGroup::So2 as i32 => Ok(Group::SO2),
        x if x == O2bGroup::O2 as i32 => Ok(Group::O2),
        _ => Err(fail(O2bStatus::Usage, format!("unknown group {group}"))),
    }
}

/// Compute the minimal basis of `input`: a preset name (`ela`), a signature
/// (`H:0*2,2,4`) or a symmetry spec (`T4 sym=(12),(34)`). `group` is an
/// [`O2bGroup`] value and `mode` an [`O2bMode`] value. On success `*out`
/// owns a handle to free with [`o2b_basis_free`].
///
/// # Safety
/// `input` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn o2b_basis_compute(input: *const c_char, group: i32, mode: i32, out: *mut *mut O2bBasis) -> O2bStatus {
    guard(|| {
        if out.is_null() {
            return fail(O2bStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let s = match read_str(input) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let g = try_st!(group_of(group));
        let m = match mode {
            x if x == O2bMode::Invariants as i32 => Mode::Invariants,
            x if x == O2bMode::Covariants as i32 => Mode::Covariants,
            _ => return fail(O2bStatus::Usage, format!("unknown mode {mode}")),
        };
        let computed = resolve_input(s).and_then(|(input, sig, norms)| {
            let (mut set, _) = minimal_basis(&sig, g, m)?;
            set.sort_for_display();
            Ok(O2bBasis { input, norms, set })
        });
        match computed {
            Ok(b) => {
                *out = Box::into_raw(Box::new(b));
                O2bStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `basis` must come from [`o2b_basis_compute`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn o2b_basis_free(basis: *mut O2bBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

unsafe fn basis_ref<'a>(basis: *const O2bBasis) -> Result<&'a O2bBasis, O2bStatus> {
    basis.as_ref().ok_or_else(|| fail(O2bStatus::NullPointer, "null basis handle"))
}

/// Number of generators.
///
/// # Safety
/// `basis` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn o2b_basis_len(basis: *const O2bBasis, out: *mut usize) -> O2bStatus {
    guard(|| {
        let b = try_st!(basis_ref(basis));
        if out.is_null() {
            return fail(O2bStatus::NullPointer, "null output pointer");
        }
        *out = b.set.len();
        O2bStatus::Ok
    })
}

/// Number of generators of covariant order 0.
///
/// # Safety
/// `basis` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn o2b_basis_invariant_count(basis: *const O2bBasis, out: *mut usize) -> O2bStatus {
    guard(|| {
        let b = try_st!(basis_ref(basis));
        if out.is_null() {
            return fail(O2bStatus::NullPointer, "null output pointer");
        }
        *out = b.set.invariant_count();
        O2bStatus::Ok
    })
}

unsafe fn generator<'a>(basis: *const O2bBasis, index: usize) -> Result<(&'a O2bBasis, &'a o2basis::poly_algebra::Generator), O2bStatus> {
    let b = basis_ref(basis)?;
    match b.set.generators.get(index) {
        Some(g) => Ok((b, g)),
        None => Err(fail(O2bStatus::OutOfRange, format!("generator index {index} out of range (len {})", b.set.len()))),
    }
}

/// Covariant order and polynomial degree of generator `index` (0-based).
///
/// # Safety
/// `basis` must be a live handle; `order` and `degree` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn o2b_generator_grading(basis: *const O2bBasis, index: usize, order: *mut u32, degree: *mut u32) -> O2bStatus {
    guard(|| {
        let (_, g) = try_st!(generator(basis, index));
        if order.is_null() || degree.is_null() {
            return fail(O2bStatus::NullPointer, "null output pointer");
        }
        *order = g.order;
        *degree = g.degree;
        O2bStatus::Ok
    })
}

/// Whether generator `index` changes sign under a reflection.
///
/// # Safety
/// `basis` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn o2b_generator_is_hemitropic(basis: *const O2bBasis, index: usize, out: *mut bool) -> O2bStatus {
    guard(|| {
        let (_, g) = try_st!(generator(basis, index));
        if out.is_null() {
            return fail(O2bStatus::NullPointer, "null output pointer");
        }
        *out = g.parity == Parity::Hemitropic;
        O2bStatus::Ok
    })
}

/// Complex formula of generator `index`, e.g. `Re(z₂²z̄₄)`.
///
/// # Safety
/// `basis` must be a live handle and `out` a valid pointer; free the string
/// with [`o2b_string_free`].
#[no_mangle]
pub unsafe extern "C" fn o2b_generator_formula(basis: *const O2bBasis, index: usize, ascii: bool, out: *mut *mut c_char) -> O2bStatus {
    guard(|| {
        let (b, g) = try_st!(generator(basis, index));
        if out.is_null() {
            return fail(O2bStatus::NullPointer, "null output pointer");
        }
        out_string(g.formula(&b.set.layout, ascii), out)
    })
}

/// Tensorial formula of generator `index`: the ASCII expression grammar when
/// `ascii`, otherwise the typeset notation.
///
/// # Safety
/// As for [`o2b_generator_formula`].
#[no_mangle]
pub unsafe extern "C" fn o2b_generator_tensorial(basis: *const O2bBasis, index: usize, ascii: bool, out: *mut *mut c_char) -> O2bStatus {
    guard(|| {
        let (b, g) = try_st!(generator(basis, index));
        if out.is_null() {
            return fail(O2bStatus::NullPointer, "null output pointer");
        }
        match translate(g, &b.set.layout) {
            Ok(e) => out_string(if ascii { e.to_ascii() } else { e.pretty(&b.set.layout) }, out),
            Err(e) => from_error(&e),
        }
    })
}

/// Check every tensorial formula on `trials` random rational assignments.
///
/// # Safety
/// `basis` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn o2b_basis_verify(basis: *const O2bBasis, trials: usize) -> O2bStatus {
    guard(|| {
        let b = try_st!(basis_ref(basis));
        for g in &b.set.generators {
            let res = translate(g, &b.set.layout).and_then(|e| check_translation(g, &e, &b.set.layout, trials, VERIFY_SEED));
            if let Err(e) = res {
                return from_error(&e);
            }
        }
        O2bStatus::Ok
    })
}

/// The versioned JSON report of the basis.
///
/// # Safety
/// `basis` must be a live handle and `out` a valid pointer; free the string
/// with [`o2b_string_free`].
#[no_mangle]
pub unsafe extern "C" fn o2b_basis_to_json(basis: *const O2bBasis, out: *mut *mut c_char) -> O2bStatus {
    guard(|| {
        let b = try_st!(basis_ref(basis));
        if out.is_null() {
            return fail(O2bStatus::NullPointer, "null output pointer");
        }
        let doc = build_report(b.input.clone(), &b.set, &b.norms, None, ReportOptions::default())
            .map(|r| Document { version: REPORT_VERSION, reports: vec![r] })
            .and_then(|d| to_json(&d));
        match doc {
            Ok(s) => out_string(s, out),
            Err(e) => from_error(&e),
        }
    })
}

/// Dimension of the space of invariants of multidegree `k` for harmonic
/// factors of the given `orders` (both of length `r`).
///
/// # Safety
/// `orders` and `k` must point to `r` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn o2b_hilbert_dimension(orders: *const u32, k: *const u32, r: usize, group: i32, out: *mut u64) -> O2bStatus {
    guard(|| {
        if out.is_null() || (r > 0 && (orders.is_null() || k.is_null())) {
            return fail(O2bStatus::NullPointer, "null pointer argument");
        }
        let (orders, k) = if r == 0 { (&[][..], &[][..]) } else { (std::slice::from_raw_parts(orders, r), std::slice::from_raw_parts(k, r)) };
        if orders.contains(&0) {
            return fail(O2bStatus::Usage, "harmonic orders must be >= 1");
        }
        let g = try_st!(group_of(group));
        let d = dim_invariant_space(&MultiDegree(k.to_vec()), orders, g);
        match u64::try_from(d) {
            Ok(v) => {
                *out = v;
                O2bStatus::Ok
            }
            Err(_) => fail(O2bStatus::OutOfRange, "dimension exceeds 64 bits"),
        }
    })
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn o2b_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread (empty if none). The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn o2b_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
