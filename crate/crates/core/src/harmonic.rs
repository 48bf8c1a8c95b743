//! Explicit harmonic decomposition of a tensor space, component extraction,
//! and the harmonic expansion of totally symmetric tensors.
//!
//! Eigenplanes of `ρ'(u)` are found as kernels of `M² + n² I` over the
//! rationals. Inside each plane the vector `p` is taken in the `+1` part of
//! the reflection and `q = ρ'(u)p / n`, so `ρ'(u)p = n q`, `ρ'(u)q = -n p`,
//! `ρ(σ)p = p` and `ρ(σ)q = -q`. A factor tensor `a p + b q` then has the
//! complex coordinate `z = a + ib`, and a rotation by `θ` multiplies it by
//! `e^{inθ}`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{contract, internal};
use crate::linalg::{self, Matrix};
use crate::tensor_core::{SubspaceBasis, SymmetrySpec, Tensor};
use crate::{gauss, qi, Error, Gaussian, Group, Rational, Result};

/// Multiset of irreducible labels `m₋₁ H₋₁ ⊕ m₀ H⁰ ⊕ H^{n_1} ⊕ … ⊕ H^{n_r}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HarmonicSignature {
    pub m_minus1: usize,
    pub m_0: usize,
    /// Orders `n_k >= 1`, non-decreasing.
    pub orders: Vec<u32>,
}

impl HarmonicSignature {
    pub fn new(m_minus1: usize, m_0: usize, mut orders: Vec<u32>) -> Result<Self> {
        if orders.contains(&0) {
            return contract("harmonic factor orders must be >= 1");
        }
        orders.sort_unstable();
        Ok(HarmonicSignature { m_minus1, m_0, orders })
    }

    /// `m₋₁ + m₀ + 2r`.
    pub fn real_dim(&self) -> usize {
        self.m_minus1 + self.m_0 + 2 * self.orders.len()
    }

    /// Direct sum; factors of equal order keep the order of the summands.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.orders.clone();
        orders.extend(&other.orders);
        orders.sort();
        HarmonicSignature { m_minus1: self.m_minus1 + other.m_minus1, m_0: self.m_0 + other.m_0, orders }
    }

    /// Under SO(2) a pseudo-scalar is an ordinary scalar.
    pub fn for_group(&self, group: Group) -> Self {
        match group {
            Group::O2 => self.clone(),
            Group::SO2 => HarmonicSignature { m_minus1: 0, m_0: self.m_0 + self.m_minus1, orders: self.orders.clone() },
        }
    }

    /// Labels `2a, 2b, 4` of the harmonic factors: a letter suffix is added
    /// when an order occurs more than once.
    pub fn factor_labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.orders.len() {
            let n = self.orders[i];
            let j = self.orders[i..].iter().take_while(|&&m| m == n).count();
            for k in 0..j {
                if j == 1 {
                    out.push(n.to_string());
                } else {
                    out.push(format!("{n}{}", suffix(k)));
                }
            }
            i += j;
        }
        out
    }

    /// Parse `H:-1*3,0*3,2*4,4` (order, optional `*multiplicity`).
    pub fn parse(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix("H:")
            .ok_or_else(|| Error::Parse(format!("signature must start with H:, got {s:?}")))?;
        let (mut m_minus1, mut m_0, mut orders) = (0usize, 0usize, Vec::new());
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (o, m) = match tok.split_once('*') {
                Some((o, m)) => (o.trim(), m.trim()),
                None => (tok, "1"),
            };
            let order: i64 = o.parse().map_err(|_| Error::Parse(format!("bad order in {tok:?}")))?;
            let mult: usize = m.parse().map_err(|_| Error::Parse(format!("bad multiplicity in {tok:?}")))?;
            match order {
                -1 => m_minus1 += mult,
                0 => m_0 += mult,
                n if (1..=255).contains(&n) => orders.extend(std::iter::repeat_n(n as u32, mult)),
                _ => return Err(Error::Parse(format!("order {order} out of range"))),
            }
        }
        Ok(HarmonicSignature::new(m_minus1, m_0, orders).expect("orders checked"))
    }

    /// Display form in `H:` grammar, inverse of [`HarmonicSignature::parse`].
    pub fn to_grammar(&self) -> String {
        let mut parts = Vec::new();
        if self.m_minus1 > 0 {
            parts.push(mult_token(-1, self.m_minus1));
        }
        if self.m_0 > 0 {
            parts.push(mult_token(0, self.m_0));
        }
        let mut i = 0;
        while i < self.orders.len() {
            let n = self.orders[i];
            let j = self.orders[i..].iter().take_while(|&&m| m == n).count();
            parts.push(mult_token(n as i64, j));
            i += j;
        }
        format!("H:{}", parts.join(","))
    }

    /// `3H₋₁ ⊕ 3H⁰ ⊕ 4H² ⊕ H⁴` (ASCII: `3H[-1] + 3H[0] + …`).
    pub fn pretty(&self, ascii: bool) -> String {
        let mut parts = Vec::new();
        let mut push = |n: i64, m: usize| {
            let coef = if m == 1 { String::new() } else { m.to_string() };
            if ascii {
                parts.push(format!("{coef}H[{n}]"));
            } else {
                parts.push(format!("{coef}H{}", superscript(n)));
            }
        };
        if self.m_minus1 > 0 {
            push(-1, self.m_minus1);
        }
        if self.m_0 > 0 {
            push(0, self.m_0);
        }
        let mut i = 0;
        while i < self.orders.len() {
            let n = self.orders[i];
            let j = self.orders[i..].iter().take_while(|&&m| m == n).count();
            push(n as i64, j);
            i += j;
        }
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(if ascii { " + " } else { " ⊕ " })
    }
}

fn mult_token(n: i64, m: usize) -> String {
    if m == 1 {
        n.to_string()
    } else {
        format!("{n}*{m}")
    }
}

pub(crate) fn suffix(k: usize) -> String {
    let letters = b"abcdefghijklmnopqrstuvwxyz";
    if k < 26 {
        (letters[k] as char).to_string()
    } else {
        format!("{}{}", letters[k / 26 - 1] as char, letters[k % 26] as char)
    }
}

fn superscript(n: i64) -> String {
    if n < 0 {
        return "₋₁".into();
    }
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

/// One `H^n` factor: `ρ'(u)p = n q`, `ρ'(u)q = -n p`, `|p|² = |q|² = norm2`.
#[derive(Clone, Debug)]
pub struct PlanePair {
    pub order: u32,
    pub p: Tensor,
    pub q: Tensor,
    pub norm2: Rational,
    p_coords: Vec<Rational>,
    q_coords: Vec<Rational>,
}

/// Explicit real bases for every irreducible factor of a tensor space.
#[derive(Clone, Debug)]
pub struct ExplicitDecomposition {
    pub group: Group,
    pub signature: HarmonicSignature,
    /// `H⁰` basis tensors (`ρ(σ)U = U`; under SO(2) this also holds the
    /// pseudo-scalar directions).
    pub u: Vec<Tensor>,
    pub u_norm2: Vec<Rational>,
    /// `H₋₁` basis tensors (`ρ(σ)V = -V`), empty under SO(2).
    pub v: Vec<Tensor>,
    pub v_norm2: Vec<Rational>,
    pub planes: Vec<PlanePair>,
    basis: SubspaceBasis,
    u_coords: Vec<Vec<Rational>>,
    v_coords: Vec<Vec<Rational>>,
}

/// Components of a tensor in an [`ExplicitDecomposition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentVector {
    pub lambdas: Vec<Rational>,
    pub xis: Vec<Rational>,
    /// `z_l = a_l + i b_l` for `T = … + a_l p_l + b_l q_l`.
    pub zs: Vec<Gaussian>,
}

fn stack(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().chain(b.iter()).cloned().collect()
}

fn gram_schmidt(basis: &SubspaceBasis, vecs: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for v in vecs {
        let mut w = v;
        for u in &out {
            let c = basis.inner(&w, u) / basis.inner(u, u);
            for (x, y) in w.iter_mut().zip(u) {
                *x -= &c * y;
            }
        }
        if !linalg::is_zero_vec(&w) {
            out.push(integerize(&w));
        }
    }
    out
}

fn integerize(v: &[Rational]) -> Vec<Rational> {
    linalg::primitive_integer(v).into_iter().map(Rational::from_integer).collect()
}

/// Compute the harmonic decomposition of the fixed subspace of `spec`.
pub fn decompose(spec: &SymmetrySpec, group: Group) -> Result<ExplicitDecomposition> {
    let basis = SubspaceBasis::new(spec);
    let d = basis.dim();
    let m = basis.lie_generator_matrix()?;
    let s = basis.sigma_matrix()?;
    let id = linalg::identity(d);
    let s_minus = linalg::mat_add(&s, &linalg::mat_scale(&id, &qi(-1)));
    let s_plus = linalg::mat_add(&s, &id);

    let u_coords = gram_schmidt(&basis, linalg::kernel(&stack(&m, &s_minus), d));
    let v_coords = gram_schmidt(&basis, linalg::kernel(&stack(&m, &s_plus), d));
    if u_coords.len() + v_coords.len() != linalg::kernel(&m, d).len() {
        return internal("kernel of the rotation generator does not split under the reflection");
    }

    let m2 = linalg::mat_mul(&m, &m);
    let mut planes = Vec::new();
    let mut total = u_coords.len() + v_coords.len();
    for n in 1..=spec.order() {
        let n2 = qi((n * n) as i64);
        let a = linalg::mat_add(&m2, &linalg::mat_scale(&id, &n2));
        let eig = linalg::kernel(&a, d);
        if eig.is_empty() {
            continue;
        }
        let plus = gram_schmidt(&basis, linalg::kernel(&stack(&a, &s_minus), d));
        if !eig.len().is_multiple_of(2) || plus.len() * 2 != eig.len() {
            return internal(format!("eigenspace for weight {n} has dimension {} with {} reflection-even vectors", eig.len(), plus.len()));
        }
        total += eig.len();
        let inv_n = qi(1) / qi(n as i64);
        for p in plus {
            let mut q = linalg::mat_vec(&m, &p);
            for x in q.iter_mut() {
                *x *= &inv_n;
            }
            // rescale so that both vectors are integral
            let scale = q.iter().fold(num_bigint::BigInt::one(), |l, x| num_integer::Integer::lcm(&l, x.denom()));
            let scale = Rational::from_integer(scale);
            let p: Vec<Rational> = p.iter().map(|x| x * &scale).collect();
            let q: Vec<Rational> = q.iter().map(|x| x * &scale).collect();
            check_plane(&basis, &m, &s, &p, &q, n)?;
            let norm2 = basis.inner(&p, &p);
            planes.push(PlanePair {
                order: n as u32,
                p: basis.tensor_from_coords(&p),
                q: basis.tensor_from_coords(&q),
                norm2,
                p_coords: p,
                q_coords: q,
            });
        }
    }
    if total != d {
        return internal(format!("eigenvalues account for {total} of {d} dimensions"));
    }

    let (u_coords, v_coords) = match group {
        Group::O2 => (u_coords, v_coords),
        Group::SO2 => (u_coords.into_iter().chain(v_coords).collect(), Vec::new()),
    };
    let all: Vec<&Vec<Rational>> = u_coords
        .iter()
        .chain(&v_coords)
        .chain(planes.iter().flat_map(|p| [&p.p_coords, &p.q_coords]))
        .collect();
    for i in 0..all.len() {
        for j in 0..i {
            if !basis.inner(all[i], all[j]).is_zero() {
                return internal("decomposition vectors are not orthogonal");
            }
        }
    }
    let signature = HarmonicSignature {
        m_minus1: v_coords.len(),
        m_0: u_coords.len(),
        orders: planes.iter().map(|p| p.order).collect(),
    };
    Ok(ExplicitDecomposition {
        group,
        signature,
        u: u_coords.iter().map(|c| basis.tensor_from_coords(c)).collect(),
        u_norm2: u_coords.iter().map(|c| basis.inner(c, c)).collect(),
        v: v_coords.iter().map(|c| basis.tensor_from_coords(c)).collect(),
        v_norm2: v_coords.iter().map(|c| basis.inner(c, c)).collect(),
        planes,
        basis,
        u_coords,
        v_coords,
    })
}

fn check_plane(basis: &SubspaceBasis, m: &Matrix, s: &Matrix, p: &[Rational], q: &[Rational], n: usize) -> Result<()> {
    let nq: Vec<Rational> = q.iter().map(|x| x * qi(n as i64)).collect();
    let np: Vec<Rational> = p.iter().map(|x| x * qi(-(n as i64))).collect();
    let ok = linalg::mat_vec(m, p) == nq
        && linalg::mat_vec(m, q) == np
        && linalg::mat_vec(s, p) == p
        && linalg::mat_vec(s, q) == q.iter().map(|x| -x).collect::<Vec<_>>()
        && basis.inner(p, p) == basis.inner(q, q);
    if ok {
        Ok(())
    } else {
        internal(format!("plane of weight {n} fails the adapted-basis relations"))
    }
}

impl ExplicitDecomposition {
    pub fn subspace(&self) -> &SubspaceBasis {
        &self.basis
    }

    /// Components of `t`; errors with [`Error::OutsideSubspace`] when `t`
    /// does not satisfy the index symmetries.
    pub fn extract_components(&self, t: &Tensor) -> Result<ComponentVector> {
        let c = self.basis.coordinates(t)?;
        let proj = |v: &Vec<Rational>, n2: &Rational| self.basis.inner(&c, v) / n2;
        let lambdas = self.u_coords.iter().zip(&self.u_norm2).map(|(v, n)| proj(v, n)).collect();
        let xis = self.v_coords.iter().zip(&self.v_norm2).map(|(v, n)| proj(v, n)).collect();
        let zs = self
            .planes
            .iter()
            .map(|pl| gauss(proj(&pl.p_coords, &pl.norm2), proj(&pl.q_coords, &pl.norm2)))
            .collect();
        let out = ComponentVector { lambdas, xis, zs };
        if &self.reconstruct(&out) != t {
            return internal("component extraction does not reconstruct its input");
        }
        Ok(out)
    }

    /// `Σ λ_k U_k + Σ ξ_i V_i + Σ (a_l p_l + b_l q_l)`.
    pub fn reconstruct(&self, c: &ComponentVector) -> Tensor {
        let mut t = Tensor::zeros(self.basis.order());
        for (x, u) in c.lambdas.iter().zip(&self.u) {
            t = t.add(&u.scale(x));
        }
        for (x, v) in c.xis.iter().zip(&self.v) {
            t = t.add(&v.scale(x));
        }
        for (z, pl) in c.zs.iter().zip(&self.planes) {
            t = t.add(&pl.p.scale(&z.re)).add(&pl.q.scale(&z.im));
        }
        t
    }
}

/// `S = H_0 + id ⊙ H_1 + … + id^{⊙r} ⊙ H_r` with each `H_k` harmonic of
/// order `n - 2k`. Returns `[H_0, …, H_r]`.
pub fn sym_decompose(s: &Tensor) -> Result<Vec<Tensor>> {
    if !s.is_symmetric() {
        return contract("harmonic expansion needs a totally symmetric tensor");
    }
    Ok(s.to_poly().harmonic_parts().iter().map(|h| h.polarize()).collect())
}

/// Leading harmonic part `S'`.
pub fn leading_part(s: &Tensor) -> Result<Tensor> {
    Ok(sym_decompose(s)?.swap_remove(0))
}

/// `id^{⊙k}`.
pub fn identity_power(k: usize) -> Tensor {
    (0..k).fold(Tensor::scalar(Rational::one()), |acc, _| acc.sym_product(&Tensor::identity()))
}
