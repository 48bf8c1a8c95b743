//! Dense exact tensors on R², homogeneous polynomials in (x, y), index
//! symmetry subspaces and the matrices of the rotation generator and of the
//! reflection on them.
//!
//! A tensor of order `n` stores `2^n` rationals. Multi-indices use `0` for
//! the first axis and `1` for the second; the first index is the most
//! significant bit of the flat position.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

use crate::error::{contract, internal};
use crate::linalg::Matrix;
use crate::{qi, Error, Rational, Result};

/// Tensors above this order are refused, as `2^n` dense entries stop being
/// small.
pub const MAX_ORDER: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    order: usize,
    comps: Vec<Rational>,
}

fn bit(flat: usize, order: usize, k: usize) -> usize {
    (flat >> (order - 1 - k)) & 1
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn falling(n: usize, k: usize) -> BigInt {
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub(crate) fn rat_factorial(n: usize) -> Rational {
    Rational::from_integer(factorial(n))
}

pub(crate) fn rat_binomial(n: usize, k: usize) -> Rational {
    Rational::from_integer(binomial(n, k))
}

impl Tensor {
    pub fn zeros(order: usize) -> Tensor {
        assert!(order <= MAX_ORDER, "tensor order {order} exceeds {MAX_ORDER}");
        Tensor { order, comps: vec![Rational::zero(); 1 << order] }
    }

    pub fn scalar(v: Rational) -> Tensor {
        Tensor { order: 0, comps: vec![v] }
    }

    /// The metric `δ_ij`.
    pub fn identity() -> Tensor {
        let mut t = Tensor::zeros(2);
        t.comps[0] = Rational::one();
        t.comps[3] = Rational::one();
        t
    }

    pub fn vector(a: Rational, b: Rational) -> Tensor {
        Tensor { order: 1, comps: vec![a, b] }
    }

    pub fn from_components(order: usize, comps: Vec<Rational>) -> Result<Tensor> {
        if order > MAX_ORDER || comps.len() != 1 << order {
            return contract(format!("order {order} needs {} components, got {}", 1usize << order.min(MAX_ORDER), comps.len()));
        }
        Ok(Tensor { order, comps })
    }

    /// Build from a function of the multi-index.
    pub fn from_fn(order: usize, f: impl Fn(&[u8]) -> Rational) -> Tensor {
        let mut t = Tensor::zeros(order);
        let mut idx = vec![0u8; order];
        for flat in 0..t.comps.len() {
            for (k, slot) in idx.iter_mut().enumerate() {
                *slot = bit(flat, order, k) as u8;
            }
            t.comps[flat] = f(&idx);
        }
        t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn components(&self) -> &[Rational] {
        &self.comps
    }

    fn flat(&self, idx: &[u8]) -> usize {
        assert_eq!(idx.len(), self.order, "multi-index length");
        idx.iter().fold(0, |acc, &i| {
            assert!(i < 2, "index out of range");
            (acc << 1) | i as usize
        })
    }

    pub fn get(&self, idx: &[u8]) -> &Rational {
        &self.comps[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[u8], v: Rational) {
        let f = self.flat(idx);
        self.comps[f] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.order, other.order, "adding tensors of different orders");
        Tensor { order: self.order, comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.order, other.order, "subtracting tensors of different orders");
        Tensor { order: self.order, comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Tensor {
        Tensor { order: self.order, comps: self.comps.iter().map(|a| a * c).collect() }
    }

    /// Full contraction `T_{i…} S_{i…}`.
    pub fn inner(&self, other: &Tensor) -> Rational {
        assert_eq!(self.order, other.order, "inner product of different orders");
        self.comps
            .iter()
            .zip(&other.comps)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn tensor_product(&self, other: &Tensor) -> Tensor {
        let order = self.order + other.order;
        let mut t = Tensor::zeros(order);
        for (i, a) in self.comps.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.comps.iter().enumerate() {
                if !b.is_zero() {
                    t.comps[(i << other.order) | j] = a * b;
                }
            }
        }
        t
    }

    /// `T^π` with `(T^π)_{i_1…i_n} = T_{i_{π(1)}…i_{π(n)}}`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.order);
        let n = self.order;
        let mut t = Tensor::zeros(n);
        for flat in 0..self.comps.len() {
            t.comps[flat] = self.comps[permuted_flat(flat, n, perm)].clone();
        }
        t
    }

    /// Total symmetrization `T^s`.
    ///
    /// Orders up to 6 average over all `n!` index permutations. Above that the
    /// average is taken over each class of multi-indices with the same number
    /// of `1`s, which is the same projector without enumerating permutations.
    pub fn symmetrize(&self) -> Tensor {
        let n = self.order;
        if n <= 1 {
            return self.clone();
        }
        if n <= 6 {
            let perms = permutations(n);
            let count = Rational::from_integer(BigInt::from(perms.len()));
            let mut t = Tensor::zeros(n);
            for flat in 0..self.comps.len() {
                let s = perms
                    .iter()
                    .fold(Rational::zero(), |acc, p| acc + &self.comps[permuted_flat(flat, n, p)]);
                t.comps[flat] = s / &count;
            }
            t
        } else {
            self.symmetrize_by_class()
        }
    }

    pub(crate) fn symmetrize_by_class(&self) -> Tensor {
        let n = self.order;
        let mut sums = vec![Rational::zero(); n + 1];
        for (flat, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                sums[flat.count_ones() as usize] += c;
            }
        }
        let avg: Vec<Rational> = sums
            .into_iter()
            .enumerate()
            .map(|(k, s)| s / rat_binomial(n, k))
            .collect();
        Tensor { order: n, comps: (0..1usize << n).map(|f| avg[f.count_ones() as usize].clone()).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.order;
        let mut first: Vec<Option<&Rational>> = vec![None; n + 1];
        for (flat, c) in self.comps.iter().enumerate() {
            let k = flat.count_ones() as usize;
            match first[k] {
                None => first[k] = Some(c),
                Some(v) if v != c => return false,
                _ => {}
            }
        }
        true
    }

    /// `S1 ⊙ S2 = (S1 ⊗ S2)^s`.
    pub fn sym_product(&self, other: &Tensor) -> Tensor {
        self.tensor_product(other).symmetrize()
    }

    /// Contract the last `r` indices of `self` with the first `r` of `other`.
    pub fn r_contract(&self, other: &Tensor, r: usize) -> Result<Tensor> {
        if r > self.order || r > other.order {
            return contract(format!("{r}-contraction of orders {} and {}", self.order, other.order));
        }
        let (n1, n2) = (self.order, other.order);
        let left = n1 - r;
        let right = n2 - r;
        let mut t = Tensor::zeros(left + right);
        for i in 0..1usize << left {
            for j in 0..1usize << right {
                let mut s = Rational::zero();
                for k in 0..1usize << r {
                    let a = &self.comps[(i << r) | k];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &other.comps[(k << right) | j];
                    if !b.is_zero() {
                        s += a * b;
                    }
                }
                t.comps[(i << right) | j] = s;
            }
        }
        Ok(t)
    }

    /// `S1 × S2 = -(ε_jk S1_{j…} S2_{k…})^s` with `ε_12 = 1`.
    pub fn skew_contract(&self, other: &Tensor) -> Result<Tensor> {
        let (n1, n2) = (self.order, other.order);
        if n1 == 0 || n2 == 0 {
            return contract("skew contraction needs orders >= 1");
        }
        if !self.is_symmetric() || !other.is_symmetric() {
            return contract("skew contraction needs totally symmetric operands");
        }
        let (l, r) = (n1 - 1, n2 - 1);
        let mut t = Tensor::zeros(l + r);
        for i in 0..1usize << l {
            for j in 0..1usize << r {
                let a0 = &self.comps[i];
                let a1 = &self.comps[(1 << l) | i];
                let b0 = &other.comps[j];
                let b1 = &other.comps[(1 << r) | j];
                t.comps[(i << r) | j] = -(a0 * b1 - a1 * b0);
            }
        }
        Ok(t.symmetrize())
    }

    /// Contraction of the first two indices.
    pub fn trace(&self) -> Result<Tensor> {
        if self.order < 2 {
            return contract("trace needs order >= 2");
        }
        let rest = self.order - 2;
        let mut t = Tensor::zeros(rest);
        for i in 0..1usize << rest {
            t.comps[i] = &self.comps[i] + &self.comps[(3 << rest) | i];
        }
        Ok(t)
    }

    /// `ρ(g)T`: apply the 2x2 matrix `g` to every index.
    pub fn transform(&self, g: &[[Rational; 2]; 2]) -> Tensor {
        let n = self.order;
        let mut cur = self.comps.clone();
        for k in 0..n {
            let shift = n - 1 - k;
            let mut next = vec![Rational::zero(); cur.len()];
            for (flat, slot) in next.iter_mut().enumerate() {
                let i = (flat >> shift) & 1;
                let base = flat & !(1 << shift);
                let v0 = &cur[base];
                let v1 = &cur[base | (1 << shift)];
                *slot = &g[i][0] * v0 + &g[i][1] * v1;
            }
            cur = next;
        }
        Tensor { order: n, comps: cur }
    }

    /// Infinitesimal rotation `ρ'(u)T = Σ_k u_{i_k j} T_{…j…}` with
    /// `u = [[0,-1],[1,0]]`.
    pub fn lie_action(&self) -> Tensor {
        let n = self.order;
        let mut t = Tensor::zeros(n);
        for (flat, slot) in t.comps.iter_mut().enumerate() {
            let mut s = Rational::zero();
            for k in 0..n {
                let shift = n - 1 - k;
                let other = flat ^ (1 << shift);
                if (flat >> shift) & 1 == 0 {
                    s -= &self.comps[other];
                } else {
                    s += &self.comps[other];
                }
            }
            *slot = s;
        }
        t
    }

    /// `ρ(σ)T` for the reflection `σ = diag(1, -1)`.
    pub fn sigma_action(&self) -> Tensor {
        Tensor {
            order: self.order,
            comps: self
                .comps
                .iter()
                .enumerate()
                .map(|(f, c)| if f.count_ones() % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// `φ(T)(x) = T(x, …, x)`.
    pub fn to_poly(&self) -> HomogeneousPoly {
        let n = self.order;
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (flat, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                // number of x-indices (zeros) is the power of x
                coeffs[n - flat.count_ones() as usize] += c;
            }
        }
        HomogeneousPoly { degree: n, coeffs }
    }
}

fn permuted_flat(flat: usize, n: usize, perm: &[usize]) -> usize {
    let mut g = 0;
    for &pk in perm.iter() {
        g = (g << 1) | bit(flat, n, pk);
    }
    g
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Homogeneous polynomial `Σ c_a x^a y^(n-a)` of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPoly {
    degree: usize,
    coeffs: Vec<Rational>,
}

impl HomogeneousPoly {
    pub fn zero(degree: usize) -> Self {
        HomogeneousPoly { degree, coeffs: vec![Rational::zero(); degree + 1] }
    }

    pub fn constant(c: Rational) -> Self {
        HomogeneousPoly { degree: 0, coeffs: vec![c] }
    }

    /// Coefficients indexed by the power of `x`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return contract("a homogeneous polynomial needs at least one coefficient");
        }
        Ok(HomogeneousPoly { degree: coeffs.len() - 1, coeffs })
    }

    pub fn x() -> Self {
        HomogeneousPoly { degree: 1, coeffs: vec![Rational::zero(), Rational::one()] }
    }

    pub fn y() -> Self {
        HomogeneousPoly { degree: 1, coeffs: vec![Rational::one(), Rational::zero()] }
    }

    /// `q = x² + y²`.
    pub fn q() -> Self {
        HomogeneousPoly { degree: 2, coeffs: vec![qi(1), qi(0), qi(1)] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^a y^(n-a)`.
    pub fn coeff(&self, a: usize) -> &Rational {
        &self.coeffs[a]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "adding polynomials of different degrees");
        HomogeneousPoly { degree: self.degree, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "subtracting polynomials of different degrees");
        HomogeneousPoly { degree: self.degree, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HomogeneousPoly { degree: self.degree, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut coeffs = vec![Rational::zero(); self.degree + o.degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        HomogeneousPoly { degree: self.degree + o.degree, coeffs }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(HomogeneousPoly::constant(qi(1)), |acc, _| acc.mul(self))
    }

    pub fn dx(&self) -> Self {
        if self.degree == 0 {
            return HomogeneousPoly::zero(0);
        }
        let coeffs = (1..=self.degree).map(|a| &self.coeffs[a] * qi(a as i64)).collect();
        HomogeneousPoly { degree: self.degree - 1, coeffs }
    }

    pub fn dy(&self) -> Self {
        if self.degree == 0 {
            return HomogeneousPoly::zero(0);
        }
        let n = self.degree;
        let coeffs = (0..n).map(|a| &self.coeffs[a] * qi((n - a) as i64)).collect();
        HomogeneousPoly { degree: n - 1, coeffs }
    }

    /// `∂^r p / ∂x^k ∂y^(r-k)`.
    pub fn partial(&self, k: usize, r: usize) -> Self {
        let n = self.degree;
        if r > n {
            return HomogeneousPoly::zero(0);
        }
        // x^a y^(n-a) maps to a!/(a-k)! (n-a)!/(n-a-r+k)! x^(a-k) y^(n-r-a+k).
        let coeffs = (0..=n - r)
            .map(|b| {
                let a = b + k;
                if self.coeffs[a].is_zero() {
                    return Rational::zero();
                }
                let f = falling(a, k) * falling(n - a, r - k);
                &self.coeffs[a] * Rational::from_integer(f)
            })
            .collect();
        HomogeneousPoly { degree: n - r, coeffs }
    }

    pub fn laplacian(&self) -> Self {
        if self.degree < 2 {
            return HomogeneousPoly::zero(0);
        }
        self.dx().dx().add(&self.dy().dy())
    }

    pub fn laplacian_pow(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.laplacian())
    }

    pub fn is_harmonic(&self) -> bool {
        self.laplacian().is_zero()
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let n = self.degree;
        self.coeffs.iter().enumerate().fold(Rational::zero(), |acc, (a, c)| {
            acc + c * num_traits::pow(x.clone(), a) * num_traits::pow(y.clone(), n - a)
        })
    }

    /// Polarization: the unique totally symmetric tensor with `φ(S) = p`.
    pub fn polarize(&self) -> Tensor {
        let n = self.degree;
        let per_class: Vec<Rational> = (0..=n).map(|ones| &self.coeffs[n - ones] / rat_binomial(n, ones)).collect();
        Tensor { order: n, comps: (0..1usize << n).map(|f| per_class[f.count_ones() as usize].clone()).collect() }
    }

    /// Harmonic parts `h_0, …, h_r` with `p = Σ q^k h_k`, `h_k` harmonic of
    /// degree `n - 2k`.
    pub fn harmonic_parts(&self) -> Vec<HomogeneousPoly> {
        let n = self.degree;
        let r = n / 2;
        let mut hs: Vec<Option<HomogeneousPoly>> = vec![None; r + 1];
        let q = HomogeneousPoly::q();
        for k in (0..=r).rev() {
            let mut rest = self.clone();
            for (j, h) in hs.iter().enumerate().skip(k + 1) {
                let h = h.as_ref().unwrap();
                rest = rest.sub(&q.pow(j).mul(h));
            }
            let c = rat_factorial(n - 2 * k)
                / (num_traits::pow(qi(4), k) * rat_factorial(k) * rat_factorial(n - k));
            hs[k] = Some(rest.laplacian_pow(k).scale(&c));
        }
        hs.into_iter().map(Option::unwrap).collect()
    }

    /// Leading harmonic part `p^0`: the `ζ^n` and `ζ̄^n` components of `p`
    /// written in `ζ = x + iy`. With `c = Σ_a p_a i^{a-n}` (the coefficient
    /// of `ζ^n` up to `2^{-n}`), `p^0 = 2^{1-n} Re(c ζ^n)`.
    pub fn leading_harmonic(&self) -> HomogeneousPoly {
        let n = self.degree;
        if n < 2 {
            return self.clone();
        }
        let (mut cr, mut ci) = (Rational::zero(), Rational::zero());
        for (a, p) in self.coeffs.iter().enumerate() {
            match (a + 3 * n) % 4 {
                0 => cr += p,
                1 => ci += p,
                2 => cr -= p,
                _ => ci -= p,
            }
        }
        let (re, im) = harmonic_basis_polys(n);
        let scale = Rational::new(BigInt::one(), BigInt::one() << (n - 1));
        re.scale(&cr).sub(&im.scale(&ci)).scale(&scale)
    }
}

/// `{p1, p2}_r`, the polynomial image of `(S1 ⋮r S2)^s`.
pub fn poly_transvectant(p1: &HomogeneousPoly, p2: &HomogeneousPoly, r: usize) -> Result<HomogeneousPoly> {
    let (n1, n2) = (p1.degree, p2.degree);
    if r > n1 || r > n2 {
        return contract(format!("transvectant of order {r} for degrees {n1} and {n2}"));
    }
    let mut acc = HomogeneousPoly::zero(n1 + n2 - 2 * r);
    for k in 0..=r {
        let t = p1.partial(k, r).mul(&p2.partial(k, r)).scale(&rat_binomial(r, k));
        acc = acc.add(&t);
    }
    let c = rat_factorial(n1 - r) * rat_factorial(n2 - r) / (rat_factorial(n1) * rat_factorial(n2));
    Ok(acc.scale(&c))
}

/// `[p1, p2] = -det(∇p1, ∇p2) / (n1 n2)`, the polynomial image of `S1 × S2`.
pub fn poly_bracket(p1: &HomogeneousPoly, p2: &HomogeneousPoly) -> Result<HomogeneousPoly> {
    let (n1, n2) = (p1.degree, p2.degree);
    if n1 == 0 || n2 == 0 {
        return contract("bracket needs degrees >= 1");
    }
    let det = p1.dx().mul(&p2.dy()).sub(&p1.dy().mul(&p2.dx()));
    Ok(det.scale(&-(qi(1) / qi((n1 * n2) as i64))))
}

/// Index symmetries `T_{i_1…i_n} = T_{i_π(1)…i_π(n)}` for each listed `π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrySpec {
    order: usize,
    generators: Vec<Vec<usize>>,
}

impl SymmetrySpec {
    /// Validated constructor; permutations are 0-based one-line images.
    pub fn new(order: usize, generators: Vec<Vec<usize>>) -> Result<Self> {
        if order > 12 {
            return contract(format!("tensor order {order} is above the supported 12"));
        }
        for g in &generators {
            let set: BTreeSet<usize> = g.iter().copied().collect();
            if g.len() != order || set.len() != order || set.iter().any(|&i| i >= order) {
                return contract(format!("{g:?} is not a permutation of {order} positions"));
            }
        }
        Ok(SymmetrySpec { order, generators })
    }

    /// No index symmetry, the whole `T^n(R²)`.
    pub fn full(order: usize) -> Self {
        SymmetrySpec { order, generators: Vec::new() }
    }

    /// Totally symmetric tensors `Sym^n(R²)`.
    pub fn totally_symmetric(order: usize) -> Self {
        let gens = (0..order.saturating_sub(1)).map(|i| transposition(order, i, i + 1)).collect();
        SymmetrySpec { order, generators: gens }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    /// Parse `T<n> sym=<tok>,<tok>,…` where a token is `(abc)` (total symmetry
    /// in the listed 1-based positions), `major` (swap of the two index halves)
    /// `all` (total symmetry) or `p:<one-line image>` such as `p:2143`.
    /// Positions above 9 are written with separators: `(1.2.10)`.
    /// `T<n>` alone means no symmetry.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = match s.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (s, ""),
        };
        let order: usize = head
            .strip_prefix('T')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected T<order>, got {head:?}")))?;
        if order > 12 {
            return Err(Error::Parse(format!("order {order} is above the supported 12")));
        }
        if rest.is_empty() {
            return Ok(SymmetrySpec::full(order));
        }
        let body = rest
            .strip_prefix("sym=")
            .ok_or_else(|| Error::Parse(format!("expected sym=…, got {rest:?}")))?;
        let mut gens = Vec::new();
        for tok in split_tokens(body)? {
            if tok == "major" {
                if !order.is_multiple_of(2) {
                    return Err(Error::Parse("major symmetry needs an even order".into()));
                }
                let h = order / 2;
                gens.push((0..order).map(|i| (i + h) % order).collect());
            } else if tok == "all" {
                for i in 1..order {
                    gens.push(transposition(order, i - 1, i));
                }
            } else if let Some(img) = tok.strip_prefix("p:") {
                let perm = positions(img).ok_or_else(|| Error::Parse(format!("bad permutation {tok:?}")))?;
                if perm.contains(&0) {
                    return Err(Error::Parse(format!("positions are 1-based in {tok:?}")));
                }
                gens.push(perm.into_iter().map(|d| d - 1).collect());
            } else if let Some(inner) = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
                let pos = positions(inner).ok_or_else(|| Error::Parse(format!("bad position list {tok:?}")))?;
                if pos.len() < 2 || pos.iter().any(|&p| p == 0 || p > order) {
                    return Err(Error::Parse(format!("bad position list {tok:?} for order {order}")));
                }
                for w in pos.windows(2) {
                    gens.push(transposition(order, w[0] - 1, w[1] - 1));
                }
            } else {
                return Err(Error::Parse(format!("unknown symmetry token {tok:?}")));
            }
        }
        SymmetrySpec::new(order, gens).map_err(|e| Error::Parse(e.to_string()))
    }
}

// `2143`, or `2.1.4.3` / `2 1 4 3` when positions above 9 occur
fn positions(s: &str) -> Option<Vec<usize>> {
    if s.contains(|c: char| c == '.' || c.is_whitespace()) {
        s.split(|c: char| c == '.' || c.is_whitespace()).filter(|t| !t.is_empty()).map(|t| t.parse().ok()).collect()
    } else {
        s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
    }
}

fn split_tokens(body: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in body.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth -= 1;
                cur.push(c);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
            }
            _ => cur.push(c),
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in {body:?}")));
    }
    out.push(cur.trim().to_string());
    Ok(out.into_iter().filter(|t| !t.is_empty()).collect())
}

fn transposition(n: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(a, b);
    p
}

/// Orthogonal integer basis of the fixed subspace of a [`SymmetrySpec`].
///
/// Basis tensors are indicators of orbits of multi-indices, so they are
/// pairwise orthogonal and the Gram matrix is diagonal with the orbit sizes.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    order: usize,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl SubspaceBasis {
    pub fn new(spec: &SymmetrySpec) -> SubspaceBasis {
        let n = spec.order;
        let size = 1usize << n;
        let mut orbit_of = vec![usize::MAX; size];
        let mut orbits = Vec::new();
        for start in 0..size {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut members = vec![start];
            orbit_of[start] = id;
            let mut i = 0;
            while i < members.len() {
                let f = members[i];
                for g in &spec.generators {
                    let h = permuted_flat(f, n, g);
                    if orbit_of[h] == usize::MAX {
                        orbit_of[h] = id;
                        members.push(h);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            orbits.push(members);
        }
        SubspaceBasis { order: n, orbits, orbit_of }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.orbits.len()
    }

    pub fn basis_tensor(&self, a: usize) -> Tensor {
        let mut t = Tensor::zeros(self.order);
        for &f in &self.orbits[a] {
            t.comps[f] = Rational::one();
        }
        t
    }

    pub fn basis(&self) -> Vec<Tensor> {
        (0..self.dim()).map(|a| self.basis_tensor(a)).collect()
    }

    /// Diagonal of the Gram matrix (orbit sizes).
    pub fn gram_diag(&self) -> Vec<Rational> {
        self.orbits.iter().map(|o| qi(o.len() as i64)).collect()
    }

    pub fn gram_matrix(&self) -> Matrix {
        let d = self.gram_diag();
        let mut m = crate::linalg::zeros(d.len(), d.len());
        for (i, v) in d.into_iter().enumerate() {
            m[i][i] = v;
        }
        m
    }

    /// `⟨v, w⟩` for coordinate vectors in this basis.
    pub fn inner(&self, v: &[Rational], w: &[Rational]) -> Rational {
        self.orbits
            .iter()
            .zip(v.iter().zip(w))
            .filter(|(_, (a, b))| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (o, (a, b))| acc + a * b * qi(o.len() as i64))
    }

    pub fn tensor_from_coords(&self, c: &[Rational]) -> Tensor {
        let mut t = Tensor::zeros(self.order);
        for (f, slot) in t.comps.iter_mut().enumerate() {
            *slot = c[self.orbit_of[f]].clone();
        }
        t
    }

    /// Coordinates of a tensor of the subspace; errors when `t` is not fixed
    /// by the index symmetries.
    pub fn coordinates(&self, t: &Tensor) -> Result<Vec<Rational>> {
        if t.order != self.order {
            return contract(format!("tensor of order {} in a space of order {}", t.order, self.order));
        }
        let mut c = Vec::with_capacity(self.dim());
        for o in &self.orbits {
            let v = &t.comps[o[0]];
            if o.iter().any(|&f| &t.comps[f] != v) {
                return Err(Error::OutsideSubspace);
            }
            c.push(v.clone());
        }
        Ok(c)
    }

    fn action_matrix(&self, act: impl Fn(&Tensor) -> Tensor) -> Result<Matrix> {
        let d = self.dim();
        let mut m = crate::linalg::zeros(d, d);
        for b in 0..d {
            let img = act(&self.basis_tensor(b));
            let col = match self.coordinates(&img) {
                Ok(c) => c,
                Err(_) => return internal("index-symmetry subspace is not stable under the group action"),
            };
            for (a, v) in col.into_iter().enumerate() {
                m[a][b] = v;
            }
        }
        Ok(m)
    }

    /// Matrix of `ρ'(u)` in this basis (column `b` holds the image of `E_b`).
    pub fn lie_generator_matrix(&self) -> Result<Matrix> {
        self.action_matrix(Tensor::lie_action)
    }

    /// Matrix of `ρ(σ)` in this basis.
    pub fn sigma_matrix(&self) -> Result<Matrix> {
        self.action_matrix(Tensor::sigma_action)
    }
}

/// Rotation matrix with the given cosine and sine.
pub fn rotation(c: Rational, s: Rational) -> [[Rational; 2]; 2] {
    [[c.clone(), -s.clone()], [s, c]]
}

/// `Re (x+iy)^n` and `Im (x+iy)^n`, the images of the basis tensors
/// `K_1^(n)`, `K_2^(n)` of a harmonic factor.
pub fn harmonic_basis_polys(n: usize) -> (HomogeneousPoly, HomogeneousPoly) {
    let mut re = HomogeneousPoly::zero(n);
    let mut im = HomogeneousPoly::zero(n);
    // (x+iy)^n = Σ C(n,j) x^(n-j) (iy)^j
    for j in 0..=n {
        let c = rat_binomial(n, j);
        let slot = n - j;
        match j % 4 {
            0 => re.coeffs[slot] += c,
            1 => im.coeffs[slot] += c,
            2 => re.coeffs[slot] -= c,
            _ => im.coeffs[slot] -= c,
        }
    }
    (re, im)
}

/// Harmonic tensor `a K_1^(n) + b K_2^(n)`, whose polynomial is
/// `Re(z̄_H (x+iy)^n)` with `z_H = a + ib`.
pub fn harmonic_tensor(n: usize, a: &Rational, b: &Rational) -> Tensor {
    let (re, im) = harmonic_basis_polys(n);
    re.scale(a).add(&im.scale(b)).polarize()
}
