//! Property checks shared by the proptest suite and the acceptance run.
//! Each `check_*` takes a generated case and fails through `prop_assert!`.

use std::collections::HashSet;

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use o2basis::diophantine::{hilbert_basis, MonomialSolution};
use o2basis::harmonic::{decompose, identity_power, leading_part, sym_decompose};
use o2basis::poly_algebra::{expand, Generator, Parity};
use o2basis::tensor_core::{
    harmonic_basis_polys, harmonic_tensor, poly_bracket, poly_transvectant, rotation, HomogeneousPoly, SymmetrySpec, Tensor,
};
use o2basis::translator::{eval_tensor, translate, Assignment};
use o2basis::{gauss, Gaussian, Group, Mode, Rational};

use super::{arb_rational, arb_sym_tensor, arb_tensor, basis, rat};

pub type CaseResult = Result<(), TestCaseError>;

pub const CASES: u32 = 100;

pub fn omega() -> Gaussian {
    gauss(rat(3, 5), rat(4, 5))
}

/// Rotation with cosine 3/5 and sine 4/5, i.e. multiplication by `ω`.
pub fn rot() -> [[Rational; 2]; 2] {
    rotation(rat(3, 5), rat(4, 5))
}

pub fn sigma() -> [[Rational; 2]; 2] {
    [[Rational::one(), Rational::zero()], [Rational::zero(), -Rational::one()]]
}

fn mat_mul(a: &[[Rational; 2]; 2], b: &[[Rational; 2]; 2]) -> [[Rational; 2]; 2] {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn gpow(z: &Gaussian, k: u32) -> Gaussian {
    (0..k).fold(gauss(Rational::one(), Rational::zero()), |acc, _| acc * z)
}

pub fn arb_gaussian() -> impl Strategy<Value = Gaussian> {
    (arb_rational(), arb_rational()).prop_map(|(a, b)| gauss(a, b))
}

/// `Re(w (x+iy)^k)`.
pub fn re_poly(w: &Gaussian, k: usize) -> HomogeneousPoly {
    let (re, im) = harmonic_basis_polys(k);
    re.scale(&w.re).sub(&im.scale(&w.im))
}

/// `Im(w (x+iy)^k)`.
pub fn im_poly(w: &Gaussian, k: usize) -> HomogeneousPoly {
    let (re, im) = harmonic_basis_polys(k);
    im.scale(&w.re).add(&re.scale(&w.im))
}

/// Polynomial of the harmonic tensor with component `z`: `Re(z̄ (x+iy)^n)`.
pub fn h_poly(n: usize, z: &Gaussian) -> HomogeneousPoly {
    re_poly(&z.conj(), n)
}

fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer((1u64 << e).into())
    } else {
        Rational::one() / Rational::from_integer((1u64 << -e).into())
    }
}

// ---- tensor operations against their polynomial counterparts ----

pub fn binary_case() -> impl Strategy<Value = ((Tensor, HomogeneousPoly), (Tensor, HomogeneousPoly), usize)> {
    (arb_sym_tensor(4), arb_sym_tensor(4), any::<usize>())
}

pub fn check_operations((a, b, pick): ((Tensor, HomogeneousPoly), (Tensor, HomogeneousPoly), usize)) -> CaseResult {
    let ((ta, pa), (tb, pb)) = (a, b);
    prop_assert_eq!(ta.sym_product(&tb).to_poly(), pa.mul(&pb));

    let r = pick % (ta.order().min(tb.order()) + 1);
    let t = ta.r_contract(&tb, r).unwrap();
    prop_assert_eq!(t.to_poly(), poly_transvectant(&pa, &pb, r).unwrap());

    if ta.order() >= 1 && tb.order() >= 1 {
        prop_assert_eq!(ta.skew_contract(&tb).unwrap().to_poly(), poly_bracket(&pa, &pb).unwrap());
    }
    let n = ta.order();
    if n >= 2 {
        let lap = pa.laplacian().scale(&(Rational::one() / Rational::from_integer(((n * (n - 1)) as i64).into())));
        prop_assert_eq!(ta.trace().unwrap().to_poly(), lap);
    }
    Ok(())
}

pub fn check_polarization((t, p): (Tensor, HomogeneousPoly), raw: Tensor) -> CaseResult {
    prop_assert!(t.is_symmetric());
    prop_assert_eq!(t.to_poly(), p.clone());
    prop_assert_eq!(p.polarize(), t);
    // polarize ∘ φ is the total symmetrisation
    prop_assert_eq!(raw.to_poly().polarize(), raw.symmetrize());
    Ok(())
}

pub fn polarization_case() -> impl Strategy<Value = ((Tensor, HomogeneousPoly), Tensor)> {
    (arb_sym_tensor(5), (0usize..=4).prop_flat_map(arb_tensor))
}

// ---- exact equivariance ----

pub fn equivariance_case() -> impl Strategy<Value = (usize, Gaussian, Tensor, Tensor, usize)> {
    (1usize..=6, arb_gaussian(), (0usize..=3).prop_flat_map(arb_tensor), (0usize..=3).prop_flat_map(arb_tensor), any::<usize>())
}

/// Harmonic tensors rotate by `ω^n` and reflect by conjugation; products and
/// contractions commute with every orthogonal map, `×` picks up `det g`.
pub fn check_tensor_equivariance((n, z, a, b, pick): (usize, Gaussian, Tensor, Tensor, usize)) -> CaseResult {
    let h = harmonic_tensor(n, &z.re, &z.im);
    let zr = gpow(&omega(), n as u32) * &z;
    prop_assert_eq!(h.transform(&rot()), harmonic_tensor(n, &zr.re, &zr.im));
    prop_assert_eq!(h.transform(&sigma()), harmonic_tensor(n, &z.re, &-z.im.clone()));
    prop_assert_eq!(a.transform(&sigma()), a.sigma_action());

    let rs = mat_mul(&rot(), &sigma());
    for (g, det) in [(rot(), 1i64), (sigma(), -1), (rs, -1)] {
        let (ga, gb) = (a.transform(&g), b.transform(&g));
        prop_assert_eq!(a.sym_product(&b).transform(&g), ga.sym_product(&gb));
        let r = pick % (a.order().min(b.order()) + 1);
        prop_assert_eq!(a.r_contract(&b, r).unwrap().transform(&g), ga.r_contract(&gb, r).unwrap());
        if a.order() >= 1 && b.order() >= 1 {
            let (sa, sb) = (a.symmetrize(), b.symmetrize());
            let lhs = sa.skew_contract(&sb).unwrap().transform(&g);
            let rhs = sa.transform(&g).skew_contract(&sb.transform(&g)).unwrap().scale(&Rational::from_integer(det.into()));
            prop_assert_eq!(lhs, rhs);
        }
    }
    Ok(())
}

/// Presets small enough for dense tensor evaluation of every generator.
pub const EQUIVARIANCE_PRESETS: &[&str] = &["t3", "piez", "sym3", "photoela", "ela", "ela2"];

pub fn generator_case() -> impl Strategy<Value = (usize, bool, bool, usize, u64)> {
    (0..EQUIVARIANCE_PRESETS.len(), any::<bool>(), any::<bool>(), any::<usize>(), any::<u64>())
}

/// For a random generator of a random preset basis: the polynomial is fixed
/// by `z_l ↦ ω^{n_l} z_l` and mapped to `±` itself by `z_l ↔ z̄_l`, and its
/// tensorial formula is exactly equivariant on random inputs.
pub fn check_generator_equivariance((p, o2, cov, pick, seed): (usize, bool, bool, usize, u64)) -> CaseResult {
    let group = if o2 { Group::O2 } else { Group::SO2 };
    let mode = if cov { Mode::Covariants } else { Mode::Invariants };
    let set = basis(EQUIVARIANCE_PRESETS[p], group, mode);
    let layout = &set.layout;
    let g: &Generator = &set.generators[pick % set.len()];
    let sign = if g.parity == Parity::Hemitropic { -Rational::one() } else { Rational::one() };

    let e = expand(g, layout);
    prop_assert_eq!(e.rotate(&layout.orders, &omega()), e.clone());
    prop_assert_eq!(e.reflect(layout.n_lambda), e.scale(&gauss(sign.clone(), Rational::zero())));

    let expr = translate(g, layout).unwrap();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let a = Assignment::random(layout, &mut rng);
    let t = eval_tensor(&expr, &a).unwrap();

    let mut ar = a.clone();
    for (z, &n) in ar.z.iter_mut().zip(&layout.orders) {
        *z = gpow(&omega(), n) * &*z;
    }
    prop_assert_eq!(eval_tensor(&expr, &ar).unwrap(), t.transform(&rot()));

    let mut af = a.clone();
    for z in af.z.iter_mut() {
        *z = z.conj();
    }
    for x in af.xis.iter_mut() {
        *x = -x.clone();
    }
    prop_assert_eq!(eval_tensor(&expr, &af).unwrap(), t.transform(&sigma()).scale(&sign));
    Ok(())
}

// ---- identities between harmonic polynomials ----

pub fn identity_case() -> impl Strategy<Value = (usize, usize, usize, Gaussian, Gaussian, Vec<(usize, Gaussian)>)> {
    (1usize..=6, 1usize..=6, any::<usize>(), arb_gaussian(), arb_gaussian(), prop::collection::vec((1usize..=4, arb_gaussian()), 1..=3))
}

pub fn check_identities(
    (n1, n2, pick, z1, z2, factors): (usize, usize, usize, Gaussian, Gaussian, Vec<(usize, Gaussian)>),
) -> CaseResult {
    let (n1, n2, z1, z2) = if n1 <= n2 { (n1, n2, z1, z2) } else { (n2, n1, z2, z1) };
    let (h1, h2) = (h_poly(n1, &z1), h_poly(n2, &z2));
    let q = HomogeneousPoly::q();
    let w = &z1 * z2.conj();

    // {h1, h2}_r = 2^{r-1} (zz̄)^{n1-r} Re(z1 z̄2 z^{n2-n1}), 1 <= r <= n1
    let r = 1 + pick % n1;
    let rhs = q.pow(n1 - r).mul(&re_poly(&w, n2 - n1)).scale(&pow2(r as i64 - 1));
    prop_assert_eq!(poly_transvectant(&h1, &h2, r).unwrap(), rhs);

    // [h1, h2] = (zz̄)^{n1-1} Im(z1 z̄2 z^{n2-n1})
    let rhs = q.pow(n1 - 1).mul(&im_poly(&w, n2 - n1));
    prop_assert_eq!(poly_bracket(&h1, &h2).unwrap(), rhs);

    // [q, h1] = Im(z̄1 z^{n1})
    prop_assert_eq!(poly_bracket(&q, &h1).unwrap(), im_poly(&z1.conj(), n1));

    // (h1 ⋯ hp)' = 2^{1-p} Re(z̄1 ⋯ z̄p z^{Σn})
    let p = factors.len();
    let total: usize = factors.iter().map(|f| f.0).sum();
    let prod = factors.iter().fold(HomogeneousPoly::constant(Rational::one()), |acc, (n, z)| acc.mul(&h_poly(*n, z)));
    let zbar = factors.iter().fold(gauss(Rational::one(), Rational::zero()), |acc, (_, z)| acc * z.conj());
    let rhs = re_poly(&zbar, total).scale(&pow2(1 - p as i64));
    prop_assert_eq!(prod.leading_harmonic(), rhs.clone());
    let dense = factors.iter().fold(Tensor::scalar(Rational::one()), |acc, (n, z)| acc.sym_product(&harmonic_tensor(*n, &z.re, &z.im)));
    prop_assert_eq!(leading_part(&dense).unwrap().to_poly(), rhs);
    Ok(())
}

/// `Im(m_p) Im(m_q) = Re(m_p m̄_q) - Re(m_p) Re(m_q)` on expansions.
pub fn im_im_case() -> impl Strategy<Value = (Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>)> {
    let v = || prop::collection::vec(0u32..=3, 3);
    (v(), v(), v(), v())
}

pub fn check_im_im((a1, b1, a2, b2): (Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>)) -> CaseResult {
    let sig = o2basis::harmonic::HarmonicSignature::new(0, 0, vec![1, 2, 3]).unwrap();
    let layout = o2basis::poly_algebra::Layout::new(&sig, Group::O2, Mode::Invariants);
    let (mp, mq) = (MonomialSolution::new(a1, b1), MonomialSolution::new(a2, b2));
    let lhs = Generator::product(vec![Generator::im(mp.clone(), &layout), Generator::im(mq.clone(), &layout)], &layout);
    let rhs_a = Generator::re(mp.mul(&mq.conjugate()), &layout);
    let rhs_b = Generator::product(vec![Generator::re(mp, &layout), Generator::re(mq, &layout)], &layout);
    prop_assert_eq!(expand(&lhs, &layout), expand(&rhs_a, &layout).sub(&expand(&rhs_b, &layout)));
    Ok(())
}

// ---- harmonic projections ----

pub const DECOMPOSITION_SPECS: &[&str] = &["T2", "T3", "T3 sym=(23)", "T4 sym=(12),(34)", "T4 sym=(12),(34),major", "T4", "T5 sym=all"];

pub fn projection_case() -> impl Strategy<Value = ((Tensor, HomogeneousPoly), usize, bool, Vec<Rational>)> {
    (arb_sym_tensor(7), 0..DECOMPOSITION_SPECS.len(), any::<bool>(), prop::collection::vec(arb_rational(), 16))
}

/// `S = Σ id^{⊙k} ⊙ H_k` with traceless `H_k`; explicit decompositions
/// reconstruct their input and intertwine the group action.
pub fn check_projection(((s, p), spec, o2, coords): ((Tensor, HomogeneousPoly), usize, bool, Vec<Rational>)) -> CaseResult {
    let parts = sym_decompose(&s).unwrap();
    let n = s.order();
    prop_assert_eq!(parts.len(), n / 2 + 1);
    let mut sum = Tensor::zeros(n);
    for (k, h) in parts.iter().enumerate() {
        prop_assert_eq!(h.order(), n - 2 * k);
        prop_assert!(h.is_symmetric());
        if h.order() >= 2 {
            prop_assert!(h.trace().unwrap().is_zero());
        }
        sum = sum.add(&identity_power(k).sym_product(h));
    }
    prop_assert_eq!(sum, s);
    prop_assert_eq!(parts[0].to_poly(), p.leading_harmonic());

    let group = if o2 { Group::O2 } else { Group::SO2 };
    let dec = decompose(&SymmetrySpec::parse(DECOMPOSITION_SPECS[spec]).unwrap(), group).unwrap();
    let sub = dec.subspace();
    let t = sub.tensor_from_coords(&coords[..sub.dim()]);
    let c = dec.extract_components(&t).unwrap();
    prop_assert_eq!(dec.reconstruct(&c), t.clone());

    let cr = dec.extract_components(&t.transform(&rot())).unwrap();
    prop_assert_eq!(&cr.lambdas, &c.lambdas);
    prop_assert_eq!(&cr.xis, &c.xis);
    for ((zr, z), pl) in cr.zs.iter().zip(&c.zs).zip(&dec.planes) {
        prop_assert_eq!(zr, &(gpow(&omega(), pl.order) * z));
    }
    if o2 {
        let cs = dec.extract_components(&t.transform(&sigma())).unwrap();
        prop_assert_eq!(&cs.lambdas, &c.lambdas);
        prop_assert_eq!(cs.xis, c.xis.iter().map(|x| -x.clone()).collect::<Vec<_>>());
        prop_assert_eq!(cs.zs, c.zs.iter().map(|z| z.conj()).collect::<Vec<_>>());
    }
    Ok(())
}

// ---- Hilbert basis against brute force ----

pub const BRUTE_FORCE_DEGREE: u32 = 12;

pub fn hilbert_case() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=6, 1..=3)
}

/// Every irreducible solution of total degree `<= 12` is in the computed
/// basis and vice versa. With orders `<= 6` no basis element can exceed
/// degree 12, so this is a full completeness check.
pub fn check_hilbert_basis(orders: Vec<u32>) -> CaseResult {
    let r = orders.len();
    let mut sols: Vec<Vec<u32>> = Vec::new();
    let mut cur = vec![0u32; 2 * r];
    enumerate(&orders, 0, BRUTE_FORCE_DEGREE, &mut cur, &mut sols);
    let set: HashSet<Vec<u32>> = sols.iter().cloned().collect();
    let mut irreducible: HashSet<Vec<u32>> = HashSet::new();
    for s in &sols {
        if !has_proper_part(s, &set) {
            irreducible.insert(s.clone());
        }
    }
    let hb = hilbert_basis(&orders);
    let got: HashSet<Vec<u32>> = hb.iter().map(|m| m.alpha.iter().chain(&m.beta).copied().collect()).collect();
    prop_assert_eq!(got.len(), hb.len(), "duplicates in the Hilbert basis");
    prop_assert!(hb.iter().all(|m| m.total_degree() <= BRUTE_FORCE_DEGREE));
    prop_assert_eq!(got, irreducible);
    Ok(())
}

fn enumerate(orders: &[u32], i: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let r = orders.len();
    if i == 2 * r {
        let w: i64 = (0..r).map(|j| orders[j] as i64 * (cur[j] as i64 - cur[r + j] as i64)).sum();
        if w == 0 && cur.iter().any(|&x| x > 0) {
            out.push(cur.clone());
        }
        return;
    }
    for k in 0..=budget {
        cur[i] = k;
        enumerate(orders, i + 1, budget - k, cur, out);
    }
    cur[i] = 0;
}

fn has_proper_part(s: &[u32], set: &HashSet<Vec<u32>>) -> bool {
    let mut t = vec![0u32; s.len()];
    loop {
        // odometer over 0 <= t <= s
        let mut i = 0;
        while i < s.len() && t[i] == s[i] {
            t[i] = 0;
            i += 1;
        }
        if i == s.len() {
            return false;
        }
        t[i] += 1;
        if t.as_slice() != s && set.contains(&t) {
            return true;
        }
    }
}
