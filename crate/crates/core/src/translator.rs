//! Tensorial formulas for the complex generators, and their exact
//! verification.
//!
//! A monomial `m = z^{k0} Π_U z_u^{α_u} Π_C z̄_c^{β_c}` (the covariant
//! variable unconjugated, `N1 = Σ_U α_u n_u <= N2 = Σ_C β_c n_c`) gives
//!
//! * `Re m = 2^{p+s-1-N1} (⊙U)' ⋮_{N1} (⊙C)'`,
//! * `Im m` the same with the first factor `C_1` of the second group
//!   replaced by `id × C_1`,
//!
//! where `p`, `s` count the factors of each group with multiplicity. The
//! rule `φ(id × H) = Im(z̄_H (x+iy)^n)` behind the `Im` form amounts to the
//! substitution `z_H ↦ i z_H`.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diophantine::MonomialSolution;
use crate::error::{contract, internal};
use crate::harmonic::leading_part;
use crate::poly_algebra::{expand, subscript, Generator, GeneratorKind, Layout};
use crate::tensor_core::{harmonic_basis_polys, harmonic_tensor, poly_bracket, poly_transvectant, rat_factorial, HomogeneousPoly, Tensor};
use crate::{gauss, q, qi, Error, Gaussian, Rational, Result};

/// Tensor expression tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum TensorExpr {
    /// Harmonic factor tensor `H_l`.
    Factor { index: usize, order: u32, label: String },
    Identity,
    Lambda { index: usize },
    Xi { index: usize },
    Scale { factor: SerRational, expr: Box<TensorExpr> },
    SymProduct { factors: Vec<TensorExpr> },
    /// `a ⋮_r b`.
    Contract { left: Box<TensorExpr>, right: Box<TensorExpr>, r: u32 },
    /// `a × b`.
    Cross { left: Box<TensorExpr>, right: Box<TensorExpr> },
    /// Leading harmonic part `e'`.
    Leading { expr: Box<TensorExpr> },
    /// `tr^k e`.
    Trace { expr: Box<TensorExpr>, k: u32 },
}

/// Rational that serializes as the string `p/q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerRational(pub Rational);

impl Serialize for SerRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rat_string(&self.0))
    }
}

impl<'de> Deserialize<'de> for SerRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(SerRational).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

/// `p/q`, or `p` for integers.
pub fn rat_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let d: num_bigint::BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(a.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

fn bx(e: TensorExpr) -> Box<TensorExpr> {
    Box::new(e)
}

impl TensorExpr {
    pub fn scale(c: Rational, e: TensorExpr) -> TensorExpr {
        if c.is_one() {
            e
        } else {
            TensorExpr::Scale { factor: SerRational(c), expr: bx(e) }
        }
    }

    pub fn contract(a: TensorExpr, b: TensorExpr, r: u32) -> TensorExpr {
        TensorExpr::Contract { left: bx(a), right: bx(b), r }
    }

    pub fn cross(a: TensorExpr, b: TensorExpr) -> TensorExpr {
        TensorExpr::Cross { left: bx(a), right: bx(b) }
    }

    pub fn leading(e: TensorExpr) -> TensorExpr {
        TensorExpr::Leading { expr: bx(e) }
    }

    pub fn trace(e: TensorExpr, k: u32) -> TensorExpr {
        if k == 0 {
            e
        } else {
            TensorExpr::Trace { expr: bx(e), k }
        }
    }

    /// Tensor order of the expression, or a contract error when some node's
    /// operands have incompatible orders.
    pub fn order(&self) -> Result<u32> {
        Ok(match self {
            TensorExpr::Factor { order, .. } => *order,
            TensorExpr::Identity => 2,
            TensorExpr::Lambda { .. } | TensorExpr::Xi { .. } => 0,
            TensorExpr::Scale { expr, .. } | TensorExpr::Leading { expr } => expr.order()?,
            TensorExpr::SymProduct { factors } => factors.iter().map(TensorExpr::order).sum::<Result<u32>>()?,
            TensorExpr::Contract { left, right, r } => {
                let (a, b) = (left.order()?, right.order()?);
                if *r > a || *r > b {
                    return contract(format!("{r}-contraction of orders {a} and {b}"));
                }
                a + b - 2 * r
            }
            TensorExpr::Cross { left, right } => {
                let (a, b) = (left.order()?, right.order()?);
                if a == 0 || b == 0 {
                    return contract("cross product needs orders >= 1");
                }
                a + b - 2
            }
            TensorExpr::Trace { expr, k } => {
                let n = expr.order()?;
                if 2 * k > n {
                    return contract(format!("tr^{k} of order {n}"));
                }
                n - 2 * k
            }
        })
    }

    /// Largest order of any subexpression.
    pub fn max_order(&self) -> Result<u32> {
        let own = self.order()?;
        let sub = match self {
            TensorExpr::Scale { expr, .. } | TensorExpr::Leading { expr } | TensorExpr::Trace { expr, .. } => expr.max_order()?,
            TensorExpr::SymProduct { factors } => {
                factors.iter().map(TensorExpr::max_order).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(0)
            }
            TensorExpr::Contract { left, right, .. } | TensorExpr::Cross { left, right } => left.max_order()?.max(right.max_order()?),
            _ => 0,
        };
        Ok(own.max(sub))
    }

    /// Prefix ASCII grammar:
    /// `H<label>`, `id`, `lambda<k>`, `xi<k>`, `scale(p/q,e)`, `sym(e,…)`,
    /// `contract<r>(a,b)`, `cross(a,b)`, `lead(e)`, `tr<k>(e)`.
    pub fn to_ascii(&self) -> String {
        match self {
            TensorExpr::Factor { label, .. } => format!("H{label}"),
            TensorExpr::Identity => "id".into(),
            TensorExpr::Lambda { index } => format!("lambda{}", index + 1),
            TensorExpr::Xi { index } => format!("xi{}", index + 1),
            TensorExpr::Scale { factor, expr } => format!("scale({},{})", rat_string(&factor.0), expr.to_ascii()),
            TensorExpr::SymProduct { factors } => {
                format!("sym({})", factors.iter().map(TensorExpr::to_ascii).collect::<Vec<_>>().join(","))
            }
            TensorExpr::Contract { left, right, r } => format!("contract{r}({},{})", left.to_ascii(), right.to_ascii()),
            TensorExpr::Cross { left, right } => format!("cross({},{})", left.to_ascii(), right.to_ascii()),
            TensorExpr::Leading { expr } => format!("lead({})", expr.to_ascii()),
            TensorExpr::Trace { expr, k } => format!("tr{k}({})", expr.to_ascii()),
        }
    }

    /// Inverse of [`TensorExpr::to_ascii`]; factor labels are resolved in
    /// `layout`.
    pub fn parse_ascii(s: &str, layout: &Layout) -> Result<TensorExpr> {
        let mut p = AsciiParser { s: s.as_bytes(), pos: 0, layout };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!("trailing input at {} in {s:?}", p.pos)));
        }
        Ok(e)
    }

    /// Paper-style rendering (`⊙`, `⋮`, `×`, `′`, `tr`); `layout` supplies
    /// the names of scalar variables.
    pub fn pretty(&self, layout: &Layout) -> String {
        self.render(layout, false)
    }

    fn render(&self, layout: &Layout, nested: bool) -> String {
        let wrap = |s: String| if nested { format!("({s})") } else { s };
        match self {
            TensorExpr::Factor { label, .. } => {
                let digits: String = label.chars().take_while(char::is_ascii_digit).collect();
                format!("H{}{}", subscript(&digits), &label[digits.len()..])
            }
            TensorExpr::Identity => "id".into(),
            TensorExpr::Lambda { index } => scalar_name("λ", *index, layout.n_lambda),
            TensorExpr::Xi { index } => scalar_name("ξ", *index, layout.n_xi),
            TensorExpr::Scale { factor, expr } => wrap(format!("{} {}", rat_string(&factor.0), expr.render(layout, true))),
            TensorExpr::SymProduct { factors } => {
                wrap(factors.iter().map(|f| f.render(layout, true)).collect::<Vec<_>>().join(" ⊙ "))
            }
            TensorExpr::Contract { left, right, r } => {
                let op = match r {
                    1 => "·".to_string(),
                    2 => ":".to_string(),
                    3 => "⋮".to_string(),
                    _ => format!("⋮{}", subscript(&r.to_string())),
                };
                wrap(format!("{} {op} {}", left.render(layout, true), right.render(layout, true)))
            }
            TensorExpr::Cross { left, right } => wrap(format!("{} × {}", left.render(layout, true), right.render(layout, true))),
            TensorExpr::Leading { expr } => format!("{}′", expr.render(layout, true)),
            TensorExpr::Trace { expr, k } => {
                let pow = if *k == 1 { String::new() } else { superscript_str(*k) };
                format!("tr{pow}({})", expr.render(layout, false))
            }
        }
    }
}

fn scalar_name(sym: &str, index: usize, count: usize) -> String {
    if count == 1 {
        sym.to_string()
    } else {
        format!("{sym}{}", subscript(&(index + 1).to_string()))
    }
}

fn superscript_str(k: u32) -> String {
    k.to_string()
        .chars()
        .map(|c| match c {
            '0' => '⁰',
            '1' => '¹',
            '2' => '²',
            '3' => '³',
            '4' => '⁴',
            '5' => '⁵',
            '6' => '⁶',
            '7' => '⁷',
            '8' => '⁸',
            _ => '⁹',
        })
        .collect()
}

struct AsciiParser<'a> {
    s: &'a [u8],
    pos: usize,
    layout: &'a Layout,
}

impl AsciiParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} at byte {}", self.pos)))
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected {:?}", c as char))
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn until(&mut self, stop: u8) -> String {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos] != stop {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn args(&mut self) -> Result<Vec<TensorExpr>> {
        self.eat(b'(')?;
        let mut out = vec![self.expr()?];
        loop {
            self.skip_ws();
            match self.s.get(self.pos) {
                Some(b',') => {
                    self.pos += 1;
                    out.push(self.expr()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return self.err("expected ',' or ')'"),
            }
        }
    }

    fn two(&mut self) -> Result<(TensorExpr, TensorExpr)> {
        let mut a = self.args()?;
        if a.len() != 2 {
            return self.err("expected two arguments");
        }
        let b = a.pop().unwrap();
        Ok((a.pop().unwrap(), b))
    }

    fn one(&mut self) -> Result<TensorExpr> {
        let mut a = self.args()?;
        if a.len() != 1 {
            return self.err("expected one argument");
        }
        Ok(a.pop().unwrap())
    }

    fn expr(&mut self) -> Result<TensorExpr> {
        let w = self.word();
        let num = |prefix: &str| -> Option<u32> { w.strip_prefix(prefix).and_then(|d| d.parse().ok()) };
        if w == "id" {
            return Ok(TensorExpr::Identity);
        }
        if w == "scale" {
            self.eat(b'(')?;
            let c = self.until(b',');
            let c = parse_rational(&c).ok_or_else(|| Error::Parse(format!("bad rational {c:?}")))?;
            self.eat(b',')?;
            let e = self.expr()?;
            self.eat(b')')?;
            return Ok(TensorExpr::Scale { factor: SerRational(c), expr: bx(e) });
        }
        if w == "sym" {
            return Ok(TensorExpr::SymProduct { factors: self.args()? });
        }
        if w == "cross" {
            let (a, b) = self.two()?;
            return Ok(TensorExpr::cross(a, b));
        }
        if w == "lead" {
            return Ok(TensorExpr::leading(self.one()?));
        }
        if let Some(r) = num("contract") {
            let (a, b) = self.two()?;
            return Ok(TensorExpr::contract(a, b, r));
        }
        if let Some(k) = num("tr") {
            return Ok(TensorExpr::Trace { expr: bx(self.one()?), k });
        }
        if let Some(k) = num("lambda").filter(|&k| k >= 1 && (k as usize) <= self.layout.n_lambda) {
            return Ok(TensorExpr::Lambda { index: k as usize - 1 });
        }
        if let Some(k) = num("xi").filter(|&k| k >= 1 && (k as usize) <= self.layout.n_xi) {
            return Ok(TensorExpr::Xi { index: k as usize - 1 });
        }
        if let Some(label) = w.strip_prefix('H') {
            let first = self.layout.first_factor();
            if let Some(i) = (first..self.layout.r()).find(|&i| self.layout.labels[i] == label) {
                return Ok(factor(self.layout, i));
            }
        }
        self.err(&format!("unknown symbol {w:?}"))
    }
}

fn factor(layout: &Layout, i: usize) -> TensorExpr {
    TensorExpr::Factor { index: i, order: layout.orders[i], label: layout.labels[i].clone() }
}

/// Which of the equivalent `Im` formulas to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ImForm {
    /// `id ×` on the first factor of the conjugated group, positive sign.
    #[default]
    Canonical,
    /// `id ×` on the first factor of the unconjugated group, negative sign.
    Minus,
    /// `tr^{N1-1}((⊙U)' × (⊙C)')`.
    Trace,
}

/// Tensorial formula of a generator (canonical `Im` form).
pub fn translate(g: &Generator, layout: &Layout) -> Result<TensorExpr> {
    translate_with(g, layout, ImForm::Canonical)
}

/// Trace-power form; the generator must contain an `Im` monomial.
pub fn translate_im_trace_form(g: &Generator, layout: &Layout) -> Result<TensorExpr> {
    if !contains_im(g) {
        return contract("trace form applies to generators with an Im factor");
    }
    translate_with(g, layout, ImForm::Trace)
}

fn contains_im(g: &Generator) -> bool {
    match &g.kind {
        GeneratorKind::Im(_) => true,
        GeneratorKind::Product(fs) => fs.iter().any(contains_im),
        _ => false,
    }
}

pub fn translate_with(g: &Generator, layout: &Layout, form: ImForm) -> Result<TensorExpr> {
    let e = match &g.kind {
        GeneratorKind::Lambda(k) => TensorExpr::Lambda { index: *k },
        GeneratorKind::Xi(i) => TensorExpr::Xi { index: *i },
        GeneratorKind::ModSq(l) => {
            if layout.covariant && *l == 0 {
                TensorExpr::Identity
            } else {
                let n = layout.orders[*l];
                TensorExpr::scale(pow2(1 - n as i64), TensorExpr::contract(factor(layout, *l), factor(layout, *l), n))
            }
        }
        GeneratorKind::Re(m) => monomial_expr(m, layout, None)?,
        GeneratorKind::Im(m) => {
            if m.is_self_conjugate() {
                return contract("Im of a self-conjugate monomial vanishes");
            }
            monomial_expr(m, layout, Some(form))?
        }
        GeneratorKind::Product(fs) => TensorExpr::SymProduct {
            factors: fs.iter().map(|f| translate_with(f, layout, form)).collect::<Result<_>>()?,
        },
    };
    if e.order()? != g.order {
        return internal(format!("formula of order {} for a generator of order {}", e.order()?, g.order));
    }
    Ok(e)
}

fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(num_bigint::BigInt::one() << e as usize)
    } else {
        Rational::new(num_bigint::BigInt::one(), num_bigint::BigInt::one() << (-e) as usize)
    }
}

fn sym_leading(mut fs: Vec<TensorExpr>) -> Option<TensorExpr> {
    match fs.len() {
        0 => None,
        1 => fs.pop(),
        _ => Some(TensorExpr::leading(TensorExpr::SymProduct { factors: fs })),
    }
}

/// `Re m` (`im = None`) or `Im m` in the requested form.
fn monomial_expr(m: &MonomialSolution, layout: &Layout, im: Option<ImForm>) -> Result<TensorExpr> {
    let first = layout.first_factor();
    let mut m = m.clone();
    let mut sign = Rational::one();
    let weights = |m: &MonomialSolution| -> (u32, u32) {
        let wu = (first..m.len()).map(|i| m.alpha[i] * layout.orders[i]).sum();
        let wc = (first..m.len()).map(|i| m.beta[i] * layout.orders[i]).sum();
        (wu, wc)
    };
    let (mut n1, mut n2) = weights(&m);
    let conj_z = layout.covariant && m.beta[0] > 0;
    if conj_z || (!(layout.covariant && m.alpha[0] > 0) && n1 > n2) {
        m = m.conjugate();
        (n1, n2) = weights(&m);
        if im.is_some() {
            sign = -sign;
        }
    }
    if n1 > n2 {
        return internal("unbalanced monomial");
    }
    let mut u = Vec::new();
    let mut c = Vec::new();
    for i in first..m.len() {
        u.extend(std::iter::repeat_n(factor(layout, i), m.alpha[i] as usize));
        c.extend(std::iter::repeat_n(factor(layout, i), m.beta[i] as usize));
    }
    let (p, s) = (u.len() as i64, c.len() as i64);
    if s == 0 {
        return internal("monomial without conjugated factors");
    }
    let idx = |e: TensorExpr| TensorExpr::cross(TensorExpr::Identity, e);

    if p == 0 {
        // covariant of the conjugated group alone
        let mut c = c;
        if im.is_some() {
            c[0] = idx(c[0].clone());
        }
        let e = sym_leading(c).expect("nonempty");
        return Ok(TensorExpr::scale(sign * pow2(s - 1), e));
    }
    let pref = pow2(p + s - 1 - n1 as i64);
    let e = match im {
        None => TensorExpr::contract(sym_leading(u).unwrap(), sym_leading(c).unwrap(), n1),
        Some(ImForm::Canonical) => {
            let mut c = c;
            c[0] = idx(c[0].clone());
            TensorExpr::contract(sym_leading(u).unwrap(), sym_leading(c).unwrap(), n1)
        }
        Some(ImForm::Minus) => {
            let mut u = u;
            u[0] = idx(u[0].clone());
            sign = -sign;
            TensorExpr::contract(sym_leading(u).unwrap(), sym_leading(c).unwrap(), n1)
        }
        Some(ImForm::Trace) => {
            let k = pow2(p + s - 2 * n1 as i64) * rat_factorial((n1 + n2 - 2) as usize)
                / (rat_factorial((n1 - 1) as usize) * rat_factorial((n2 - 1) as usize));
            let cr = TensorExpr::cross(sym_leading(u).unwrap(), sym_leading(c).unwrap());
            return Ok(TensorExpr::scale(sign * k, TensorExpr::trace(cr, n1 - 1)));
        }
    };
    Ok(TensorExpr::scale(sign * pref, e))
}

/// Values of the factors for one evaluation: `z_l` per harmonic factor
/// (the covariant slot is ignored), `λ_k`, `ξ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub z: Vec<Gaussian>,
    pub lambdas: Vec<Rational>,
    pub xis: Vec<Rational>,
}

impl Assignment {
    /// Small random Gaussian rationals.
    pub fn random(layout: &Layout, rng: &mut impl Rng) -> Assignment {
        let rat = |rng: &mut dyn rand::RngCore| q(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        Assignment {
            z: (0..layout.r()).map(|_| gauss(rat(rng), rat(rng))).collect(),
            lambdas: (0..layout.n_lambda).map(|_| rat(rng)).collect(),
            xis: (0..layout.n_xi).map(|_| rat(rng)).collect(),
        }
    }

    fn factor_poly(&self, index: usize, order: u32) -> HomogeneousPoly {
        let (re, im) = harmonic_basis_polys(order as usize);
        re.scale(&self.z[index].re).add(&im.scale(&self.z[index].im))
    }
}

/// Evaluate through polynomials: `⊙` is the product, `⋮_r` with `r` equal
/// to an operand order is the transvectant, `×` the bracket, `′` the leading
/// harmonic part and `tr^k` a scaled power of the Laplacian.
pub fn eval_poly(e: &TensorExpr, a: &Assignment) -> Result<HomogeneousPoly> {
    Ok(match e {
        TensorExpr::Factor { index, order, .. } => a.factor_poly(*index, *order),
        TensorExpr::Identity => HomogeneousPoly::q(),
        TensorExpr::Lambda { index } => HomogeneousPoly::constant(a.lambdas[*index].clone()),
        TensorExpr::Xi { index } => HomogeneousPoly::constant(a.xis[*index].clone()),
        TensorExpr::Scale { factor, expr } => eval_poly(expr, a)?.scale(&factor.0),
        TensorExpr::SymProduct { factors } => {
            let mut acc = HomogeneousPoly::constant(Rational::one());
            for f in factors {
                acc = acc.mul(&eval_poly(f, a)?);
            }
            acc
        }
        TensorExpr::Contract { left, right, r } => {
            let (pl, pr) = (eval_poly(left, a)?, eval_poly(right, a)?);
            let r = *r as usize;
            if r != pl.degree() && r != pr.degree() {
                return contract("polynomial evaluation needs a contraction over a full operand");
            }
            poly_transvectant(&pl, &pr, r)?
        }
        TensorExpr::Cross { left, right } => poly_bracket(&eval_poly(left, a)?, &eval_poly(right, a)?)?,
        TensorExpr::Leading { expr } => eval_poly(expr, a)?.leading_harmonic(),
        TensorExpr::Trace { expr, k } => {
            let p = eval_poly(expr, a)?;
            let (n, k) = (p.degree(), *k as usize);
            if 2 * k > n {
                return contract("trace power above half the order");
            }
            p.laplacian_pow(k).scale(&(rat_factorial(n - 2 * k) / rat_factorial(n)))
        }
    })
}

/// Evaluate with dense tensors.
pub fn eval_tensor(e: &TensorExpr, a: &Assignment) -> Result<Tensor> {
    Ok(match e {
        TensorExpr::Factor { index, order, .. } => harmonic_tensor(*order as usize, &a.z[*index].re, &a.z[*index].im),
        TensorExpr::Identity => Tensor::identity(),
        TensorExpr::Lambda { index } => Tensor::scalar(a.lambdas[*index].clone()),
        TensorExpr::Xi { index } => Tensor::scalar(a.xis[*index].clone()),
        TensorExpr::Scale { factor, expr } => eval_tensor(expr, a)?.scale(&factor.0),
        TensorExpr::SymProduct { factors } => {
            let mut acc = Tensor::scalar(Rational::one());
            for f in factors {
                acc = acc.sym_product(&eval_tensor(f, a)?);
            }
            acc
        }
        TensorExpr::Contract { left, right, r } => eval_tensor(left, a)?.r_contract(&eval_tensor(right, a)?, *r as usize)?,
        TensorExpr::Cross { left, right } => eval_tensor(left, a)?.skew_contract(&eval_tensor(right, a)?)?,
        TensorExpr::Leading { expr } => leading_part(&eval_tensor(expr, a)?)?,
        TensorExpr::Trace { expr, k } => {
            let mut t = eval_tensor(expr, a)?;
            for _ in 0..*k {
                t = t.trace()?;
            }
            t
        }
    })
}

/// The generator as a polynomial in `(x, y)`: the complex variables take the
/// values of `a`, and the covariant variable becomes `x + iy`.
pub fn generator_value(g: &Generator, layout: &Layout, a: &Assignment) -> Result<HomogeneousPoly> {
    let p = expand(g, layout);
    let r = layout.r();
    let k0 = g.order as usize;
    let mut acc = vec![gauss(Rational::zero(), Rational::zero()); k0 + 1];
    for (e, c) in p.terms() {
        let mut coef = c.clone();
        for i in layout.first_factor()..r {
            for _ in 0..e[i] {
                coef *= &a.z[i];
            }
            for _ in 0..e[r + i] {
                coef *= a.z[i].conj();
            }
        }
        for (k, &d) in e[2 * r..].iter().enumerate() {
            let v = if k < layout.n_lambda { &a.lambdas[k] } else { &a.xis[k - layout.n_lambda] };
            for _ in 0..d {
                coef = coef.scale(v.clone());
            }
        }
        let (zp, zbp) = if layout.covariant { (e[0] as usize, e[r] as usize) } else { (0, 0) };
        if zp + zbp != k0 {
            return internal("generator is not homogeneous in the covariant variable");
        }
        // (x + iy)^zp (x - iy)^zbp, indexed by the power of x
        let mut poly = vec![gauss(Rational::one(), Rational::zero())];
        for sgn in std::iter::repeat_n(1, zp).chain(std::iter::repeat_n(-1, zbp)) {
            let mut next = vec![gauss(Rational::zero(), Rational::zero()); poly.len() + 1];
            for (j, t) in poly.iter().enumerate() {
                next[j + 1] += t; // times x
                next[j] += t * gauss(Rational::zero(), qi(sgn)); // times ±iy
            }
            poly = next;
        }
        for (j, t) in poly.into_iter().enumerate() {
            acc[j] += &coef * t;
        }
    }
    if acc.iter().any(|c| !c.im.is_zero()) {
        return internal("generator value is not real");
    }
    HomogeneousPoly::from_coeffs(acc.into_iter().map(|c| c.re).collect())
}

/// Dense tensor evaluation is also cross-checked up to this order.
pub const DENSE_CHECK_MAX_ORDER: u32 = 10;

/// Number of leading trials that also run the dense check.
pub const DENSE_CHECK_TRIALS: usize = 2;

/// Evaluate `expr` at `trials` random assignments and compare exactly with
/// the generator's value. The first mismatch is reported as
/// [`Error::Translation`].
pub fn check_translation(g: &Generator, expr: &TensorExpr, layout: &Layout, trials: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = g.formula(layout, true);
    let dense = expr.max_order()? <= DENSE_CHECK_MAX_ORDER;
    for trial in 0..trials {
        let a = Assignment::random(layout, &mut rng);
        let want = generator_value(g, layout, &a)?;
        let got = eval_poly(expr, &a)?;
        if got != want {
            return Err(Error::Translation { generator: name, detail: mismatch(&a, &want, &got) });
        }
        if dense && trial < DENSE_CHECK_TRIALS {
            let t = eval_tensor(expr, &a)?;
            if t.to_poly() != want {
                return Err(Error::Translation { generator: name, detail: format!("dense evaluation differs; {}", mismatch(&a, &want, &t.to_poly())) });
            }
        }
    }
    Ok(())
}

fn mismatch(a: &Assignment, want: &HomogeneousPoly, got: &HomogeneousPoly) -> String {
    let z: Vec<String> = a.z.iter().map(|c| format!("{}{:+}i", rat_string(&c.re), c.im)).collect();
    format!("at z = [{}]: expected {:?}, got {:?}", z.join(", "), coeff_strings(want), coeff_strings(got))
}

fn coeff_strings(p: &HomogeneousPoly) -> Vec<String> {
    p.coeffs().iter().map(rat_string).collect()
}

/// Whether `expr` reproduces `g` on `trials` random assignments.
pub fn verify_translation(g: &Generator, expr: &TensorExpr, layout: &Layout, trials: usize) -> bool {
    check_translation(g, expr, layout, trials, 0x5eed).is_ok()
}

impl fmt::Display for TensorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::HarmonicSignature;
    use crate::{Group, Mode};

    fn ela() -> Layout {
        Layout::new(&HarmonicSignature::parse("H:0*2,2,4").unwrap(), Group::O2, Mode::Invariants)
    }

    #[test]
    fn ela_forms() {
        let l = ela();
        let m = MonomialSolution::new(vec![2, 0], vec![0, 1]);
        let re = Generator::re(m.clone(), &l);
        let im = Generator::im(m, &l);
        assert_eq!(translate(&re, &l).unwrap().to_ascii(), "scale(1/4,contract4(lead(sym(H2,H2)),H4))");
        assert_eq!(translate(&im, &l).unwrap().to_ascii(), "scale(1/4,contract4(lead(sym(H2,H2)),cross(id,H4)))");
        assert_eq!(translate_im_trace_form(&im, &l).unwrap().to_ascii(), "scale(5/8,tr3(cross(lead(sym(H2,H2)),H4)))");
        for form in [ImForm::Canonical, ImForm::Minus, ImForm::Trace] {
            let e = translate_with(&im, &l, form).unwrap();
            check_translation(&im, &e, &l, 5, 1).unwrap();
        }
        check_translation(&re, &translate(&re, &l).unwrap(), &l, 5, 1).unwrap();
        let ms = Generator::mod_sq(1, &l);
        assert_eq!(translate(&ms, &l).unwrap().to_ascii(), "scale(1/8,contract4(H4,H4))");
    }

    #[test]
    fn wrong_prefactor_is_caught() {
        let l = ela();
        let g = Generator::mod_sq(0, &l);
        let e = TensorExpr::scale(q(1, 3), TensorExpr::contract(factor(&l, 0), factor(&l, 0), 2));
        assert!(!verify_translation(&g, &e, &l, 3));
        assert!(verify_translation(&g, &translate(&g, &l).unwrap(), &l, 3));
    }

    #[test]
    fn ascii_round_trip() {
        let l = ela();
        let e = translate(&Generator::im(MonomialSolution::new(vec![2, 0], vec![0, 1]), &l), &l).unwrap();
        assert_eq!(TensorExpr::parse_ascii(&e.to_ascii(), &l).unwrap(), e);
        assert!(TensorExpr::parse_ascii("contract4(H2", &l).is_err());
    }

    #[test]
    fn covariant_im_is_id_cross_h() {
        let l = Layout::new(&HarmonicSignature::parse("H:0*2,2,4").unwrap(), Group::O2, Mode::Covariants);
        let g = Generator::im(MonomialSolution::new(vec![2, 0, 0], vec![0, 1, 0]), &l);
        let e = translate(&g, &l).unwrap();
        assert_eq!(e.to_ascii(), "cross(id,H2)");
        check_translation(&g, &e, &l, 5, 2).unwrap();
    }
}
