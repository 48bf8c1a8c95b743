//! Sparse polynomials over the Gaussian rationals in the harmonic variables
//! `z_l, z̄_l` (and the scalar variables `λ_k, ξ_i`), plus the symbolic
//! generators that the basis builder produces.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::diophantine::{MonomialSolution, MultiDegree};
use crate::error::contract;
use crate::harmonic::HarmonicSignature;
use crate::{gauss, linalg, q, Gaussian, Group, Mode, Rational, Result};

/// Variable layout shared by generators and polynomials.
///
/// Harmonic factors come first with the covariant variable (order 1) at
/// index 0 in covariant mode; scalar variables are `λ_1…λ_{m0}` followed by
/// `ξ_1…ξ_{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub orders: Vec<u32>,
    /// Factor labels (`2a`, `4`, …); the covariant variable has label `""`.
    pub labels: Vec<String>,
    pub covariant: bool,
    pub n_lambda: usize,
    pub n_xi: usize,
}

impl Layout {
    pub fn new(sig: &HarmonicSignature, group: Group, mode: Mode) -> Layout {
        let sig = sig.for_group(group);
        let covariant = mode == Mode::Covariants;
        let mut orders = Vec::new();
        let mut labels = Vec::new();
        if covariant {
            orders.push(1);
            labels.push(String::new());
        }
        orders.extend(&sig.orders);
        labels.extend(sig.factor_labels());
        Layout { orders, labels, covariant, n_lambda: sig.m_0, n_xi: sig.m_minus1 }
    }

    /// Number of harmonic variables `r`.
    pub fn r(&self) -> usize {
        self.orders.len()
    }

    pub fn n_scalars(&self) -> usize {
        self.n_lambda + self.n_xi
    }

    /// First index of the tensor factors proper (1 in covariant mode).
    pub fn first_factor(&self) -> usize {
        usize::from(self.covariant)
    }

    /// Display name of harmonic variable `i`.
    pub fn var_name(&self, i: usize, ascii: bool) -> String {
        if self.covariant && i == 0 {
            return "z".into();
        }
        let label = &self.labels[i];
        if ascii {
            return format!("z{label}");
        }
        let digits: String = label.chars().take_while(char::is_ascii_digit).collect();
        let rest = &label[digits.len()..];
        format!("z{}{rest}", subscript(&digits))
    }

    pub fn scalar_name(&self, lambda: bool, k: usize, ascii: bool) -> String {
        let (sym, count) = match (lambda, ascii) {
            (true, false) => ("λ", self.n_lambda),
            (true, true) => ("lambda", self.n_lambda),
            (false, false) => ("ξ", self.n_xi),
            (false, true) => ("xi", self.n_xi),
        };
        if count == 1 {
            sym.to_string()
        } else if ascii {
            format!("{sym}{}", k + 1)
        } else {
            format!("{sym}{}", subscript(&(k + 1).to_string()))
        }
    }
}

pub(crate) fn subscript(digits: &str) -> String {
    digits
        .chars()
        .map(|c| match c {
            '0' => '₀',
            '1' => '₁',
            '2' => '₂',
            '3' => '₃',
            '4' => '₄',
            '5' => '₅',
            '6' => '₆',
            '7' => '₇',
            '8' => '₈',
            '9' => '₉',
            other => other,
        })
        .collect()
}

fn superscript(n: u32) -> String {
    n.to_string()
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

/// Behaviour under the reflection `σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    #[serde(rename = "isotropic")]
    Isotropic,
    #[serde(rename = "hemitropic")]
    Hemitropic,
}

impl Parity {
    pub fn mul(self, o: Parity) -> Parity {
        if self == o {
            Parity::Isotropic
        } else {
            Parity::Hemitropic
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data")]
pub enum GeneratorKind {
    Lambda(usize),
    Xi(usize),
    ModSq(usize),
    Re(MonomialSolution),
    Im(MonomialSolution),
    Product(Vec<Generator>),
}

/// A symbolic polynomial invariant (or covariant, through the covariant
/// variable) with its grading.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub kind: GeneratorKind,
    /// Degrees in the harmonic variables.
    pub multidegree: MultiDegree,
    /// Covariant order `k_0` (0 for invariants).
    pub order: u32,
    /// Polynomial degree in the tensor components.
    pub degree: u32,
    pub parity: Parity,
}

impl Generator {
    fn graded(kind: GeneratorKind, k: MultiDegree, scalars: u32, parity: Parity, layout: &Layout) -> Generator {
        let order = if layout.covariant { k.0[0] } else { 0 };
        let degree = k.total() - order + scalars;
        Generator { kind, multidegree: k, order, degree, parity }
    }

    pub fn lambda(k: usize, layout: &Layout) -> Generator {
        Self::graded(GeneratorKind::Lambda(k), MultiDegree::zero(layout.r()), 1, Parity::Isotropic, layout)
    }

    pub fn xi(i: usize, layout: &Layout) -> Generator {
        Self::graded(GeneratorKind::Xi(i), MultiDegree::zero(layout.r()), 1, Parity::Hemitropic, layout)
    }

    pub fn mod_sq(l: usize, layout: &Layout) -> Generator {
        Self::graded(GeneratorKind::ModSq(l), MultiDegree::unit(layout.r(), l, 2), 0, Parity::Isotropic, layout)
    }

    pub fn re(m: MonomialSolution, layout: &Layout) -> Generator {
        let k = m.multidegree();
        Self::graded(GeneratorKind::Re(m), k, 0, Parity::Isotropic, layout)
    }

    pub fn im(m: MonomialSolution, layout: &Layout) -> Generator {
        let k = m.multidegree();
        Self::graded(GeneratorKind::Im(m), k, 0, Parity::Hemitropic, layout)
    }

    pub fn product(factors: Vec<Generator>, layout: &Layout) -> Generator {
        let k = factors.iter().fold(MultiDegree::zero(layout.r()), |acc, g| acc.add(&g.multidegree));
        let parity = factors.iter().fold(Parity::Isotropic, |p, g| p.mul(g.parity));
        let scalars: u32 = factors.iter().map(Generator::scalar_degree).sum();
        Self::graded(GeneratorKind::Product(factors), k, scalars, parity, layout)
    }

    /// Degree in the scalar variables `λ, ξ`.
    pub fn scalar_degree(&self) -> u32 {
        match &self.kind {
            GeneratorKind::Lambda(_) | GeneratorKind::Xi(_) => 1,
            GeneratorKind::Product(fs) => fs.iter().map(Generator::scalar_degree).sum(),
            _ => 0,
        }
    }

    /// Whether the generator is a product of two `Im` monomials.
    pub fn is_im_im(&self) -> bool {
        matches!(&self.kind, GeneratorKind::Product(fs) if fs.len() == 2 && fs.iter().all(|f| matches!(f.kind, GeneratorKind::Im(_))))
    }

    /// Whether the generator is `ξ_i Im(m)`.
    pub fn is_xi_im(&self) -> bool {
        matches!(&self.kind, GeneratorKind::Product(fs) if fs.len() == 2
            && matches!(fs[0].kind, GeneratorKind::Xi(_))
            && matches!(fs[1].kind, GeneratorKind::Im(_)))
    }

    /// Complex formula, e.g. `Re(z₂²z̄₄)`.
    pub fn formula(&self, layout: &Layout, ascii: bool) -> String {
        match &self.kind {
            GeneratorKind::Lambda(k) => layout.scalar_name(true, *k, ascii),
            GeneratorKind::Xi(i) => layout.scalar_name(false, *i, ascii),
            GeneratorKind::ModSq(l) => monomial_string(&MonomialSolution::mod_sq(layout.r(), *l), layout, ascii),
            GeneratorKind::Re(m) => format!("Re({})", monomial_string(m, layout, ascii)),
            GeneratorKind::Im(m) => format!("Im({})", monomial_string(m, layout, ascii)),
            GeneratorKind::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|f| f.formula(layout, ascii)).collect();
                parts.join(if ascii { "*" } else { " " })
            }
        }
    }
}

/// `z₂²z̄₄`; the ASCII form writes `z2^2*conj(z4)`.
pub fn monomial_string(m: &MonomialSolution, layout: &Layout, ascii: bool) -> String {
    let mut out = String::new();
    for i in 0..m.len() {
        for (e, conj) in [(m.alpha[i], false), (m.beta[i], true)] {
            if e == 0 {
                continue;
            }
            let name = layout.var_name(i, ascii);
            if ascii {
                if !out.is_empty() {
                    out.push('*');
                }
                if conj {
                    let _ = write!(out, "conj({name})");
                } else {
                    out.push_str(&name);
                }
                if e > 1 {
                    let _ = write!(out, "^{e}");
                }
            } else {
                let mut chars = name.chars();
                let first = chars.next().unwrap_or('z');
                out.push(first);
                if conj {
                    out.push('\u{0304}');
                }
                out.push_str(chars.as_str());
                if e > 1 {
                    out.push_str(&superscript(e));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// Exponent key `[α_1…α_r, β_1…β_r, s_1…s_m]`.
pub type Exponent = Vec<u8>;

/// Sparse polynomial with Gaussian-rational coefficients. Zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPolynomial {
    r: usize,
    s: usize,
    terms: BTreeMap<Exponent, Gaussian>,
}

fn g_one() -> Gaussian {
    gauss(Rational::one(), Rational::zero())
}

fn g_is_zero(c: &Gaussian) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

impl GradedPolynomial {
    pub fn zero(r: usize, s: usize) -> Self {
        GradedPolynomial { r, s, terms: BTreeMap::new() }
    }

    pub fn constant(r: usize, s: usize, c: Gaussian) -> Self {
        let mut p = Self::zero(r, s);
        p.add_term(vec![0; 2 * r + s], c);
        p
    }

    pub fn one(r: usize, s: usize) -> Self {
        Self::constant(r, s, g_one())
    }

    /// `c · Π z^α z̄^β`.
    pub fn monomial(m: &MonomialSolution, s: usize, c: Gaussian) -> Self {
        let r = m.len();
        let mut e: Exponent = m.alpha.iter().chain(&m.beta).map(|&x| to_u8(x)).collect();
        e.extend(std::iter::repeat_n(0, s));
        let mut p = Self::zero(r, s);
        p.add_term(e, c);
        p
    }

    /// The scalar variable number `k` (λ's first, then ξ's).
    pub fn scalar_var(r: usize, s: usize, k: usize) -> Self {
        let mut e = vec![0u8; 2 * r + s];
        e[2 * r + k] = 1;
        let mut p = Self::zero(r, s);
        p.add_term(e, g_one());
        p
    }

    pub fn n_harmonic(&self) -> usize {
        self.r
    }

    pub fn n_scalars(&self) -> usize {
        self.s
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Gaussian> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u8]) -> Gaussian {
        self.terms.get(e).cloned().unwrap_or_else(|| gauss(Rational::zero(), Rational::zero()))
    }

    fn add_term(&mut self, e: Exponent, c: Gaussian) {
        if g_is_zero(&c) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if g_is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&gauss(-Rational::one(), Rational::zero())))
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        let mut p = Self::zero(self.r, self.s);
        for (e, x) in &self.terms {
            p.add_term(e.clone(), x * c);
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero(self.r, self.s);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a.checked_add(*b).expect("exponent overflow")).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    /// Complex conjugate: `z ↔ z̄` and conjugated coefficients.
    pub fn conj(&self) -> Self {
        let mut p = Self::zero(self.r, self.s);
        for (e, c) in &self.terms {
            p.add_term(self.swap(e), c.conj());
        }
        p
    }

    fn swap(&self, e: &[u8]) -> Exponent {
        let r = self.r;
        let mut f = e.to_vec();
        f[..r].copy_from_slice(&e[r..2 * r]);
        f[r..2 * r].copy_from_slice(&e[..r]);
        f
    }

    /// Real iff `coeff(β, α) = conj(coeff(α, β))` for every term.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Action of the reflection: `z_l ↦ z̄_l`, `ξ_i ↦ -ξ_i`; `n_lambda`
    /// tells where the `ξ` variables start.
    pub fn reflect(&self, n_lambda: usize) -> Self {
        let mut p = Self::zero(self.r, self.s);
        for (e, c) in &self.terms {
            let xi_deg: u32 = e[2 * self.r + n_lambda..].iter().map(|&x| x as u32).sum();
            let c = if xi_deg % 2 == 1 { -c.clone() } else { c.clone() };
            p.add_term(self.swap(e), c);
        }
        p
    }

    /// Substitute `z_l ↦ ω^{n_l} z_l`, `z̄_l ↦ ω̄^{n_l} z̄_l`.
    pub fn rotate(&self, orders: &[u32], omega: &Gaussian) -> Self {
        let omega_bar = omega.conj();
        let mut p = Self::zero(self.r, self.s);
        for (e, c) in &self.terms {
            let w: i64 = (0..self.r).map(|i| orders[i] as i64 * (e[i] as i64 - e[self.r + i] as i64)).sum();
            let f = if w >= 0 { gpow(omega, w as u32) } else { gpow(&omega_bar, (-w) as u32) };
            p.add_term(e.clone(), c * f);
        }
        p
    }

    /// Multidegree `α + β` in the harmonic variables, or `None` if the
    /// polynomial is zero or not multihomogeneous.
    pub fn multidegree(&self) -> Option<MultiDegree> {
        let mut it = self.terms.keys().map(|e| MultiDegree((0..self.r).map(|i| (e[i] + e[self.r + i]) as u32).collect()));
        let first = it.next()?;
        it.all(|k| k == first).then_some(first)
    }

    /// Value at `z_l`, with `z̄_l = conj(z_l)`, and scalar values `s`.
    pub fn eval(&self, z: &[Gaussian], s: &[Rational]) -> Gaussian {
        let mut acc = gauss(Rational::zero(), Rational::zero());
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..self.r {
                if e[i] > 0 {
                    t *= gpow(&z[i], e[i] as u32);
                }
                if e[self.r + i] > 0 {
                    t *= gpow(&z[i].conj(), e[self.r + i] as u32);
                }
            }
            for k in 0..self.s {
                for _ in 0..e[2 * self.r + k] {
                    t = t.scale(s[k].clone());
                }
            }
            acc += t;
        }
        acc
    }
}

fn to_u8(x: u32) -> u8 {
    u8::try_from(x).expect("exponent above 255")
}

pub(crate) fn gpow(z: &Gaussian, k: u32) -> Gaussian {
    let mut acc = g_one();
    for _ in 0..k {
        acc *= z;
    }
    acc
}

/// Polynomial expansion of a symbolic generator in the variables of
/// `layout`.
pub fn expand(g: &Generator, layout: &Layout) -> GradedPolynomial {
    let (r, s) = (layout.r(), layout.n_scalars());
    let half = q(1, 2);
    match &g.kind {
        GeneratorKind::Lambda(k) => GradedPolynomial::scalar_var(r, s, *k),
        GeneratorKind::Xi(i) => GradedPolynomial::scalar_var(r, s, layout.n_lambda + *i),
        GeneratorKind::ModSq(l) => GradedPolynomial::monomial(&MonomialSolution::mod_sq(r, *l), s, g_one()),
        GeneratorKind::Re(m) => {
            let c = gauss(half, Rational::zero());
            GradedPolynomial::monomial(m, s, c.clone()).add(&GradedPolynomial::monomial(&m.conjugate(), s, c))
        }
        GeneratorKind::Im(m) => {
            // (m - m̄) / 2i
            let c = gauss(Rational::zero(), -half);
            GradedPolynomial::monomial(m, s, c.clone()).sub(&GradedPolynomial::monomial(&m.conjugate(), s, c))
        }
        GeneratorKind::Product(fs) => {
            fs.iter().fold(GradedPolynomial::one(r, s), |acc, f| acc.mul(&expand(f, layout)))
        }
    }
}

/// Rank over ℚ of real multihomogeneous polynomials of multidegree `k`,
/// each Gaussian coefficient split into two rational coordinates.
pub fn rank_of_set(polys: &[GradedPolynomial], k: &MultiDegree) -> Result<usize> {
    let mut index: BTreeMap<&Exponent, usize> = BTreeMap::new();
    for p in polys {
        if !p.is_zero() && p.multidegree().as_ref() != Some(k) {
            return contract(format!("polynomial is not of multidegree {k}"));
        }
        for e in p.terms.keys() {
            let n = index.len();
            index.entry(e).or_insert(n);
        }
    }
    let cols = 2 * index.len();
    let rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| {
            let mut v = vec![Rational::zero(); cols];
            for (e, c) in &p.terms {
                let j = index[e];
                v[2 * j] = c.re.clone();
                v[2 * j + 1] = c.im.clone();
            }
            v
        })
        .collect();
    Ok(linalg::rank(&rows))
}
