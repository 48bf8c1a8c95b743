//! Integer side of the problem: irreducible solutions of
//! `Σ n_i (α_i - β_i) = 0`, graded dimension counts, and bounded
//! decompositions of a multidegree into generator degrees.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Group;

/// Exponents of `z_i` (`alpha`) and `z̄_i` (`beta`) of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialSolution {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl MonomialSolution {
    pub fn new(alpha: Vec<u32>, beta: Vec<u32>) -> Self {
        assert_eq!(alpha.len(), beta.len(), "exponent vectors of different length");
        MonomialSolution { alpha, beta }
    }

    /// `(e_i, e_i)`, the monomial `z_i z̄_i`.
    pub fn mod_sq(r: usize, i: usize) -> Self {
        let mut a = vec![0; r];
        a[i] = 1;
        MonomialSolution { alpha: a.clone(), beta: a }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.alpha.iter().chain(&self.beta).sum()
    }

    /// `α + β`.
    pub fn multidegree(&self) -> MultiDegree {
        MultiDegree(self.alpha.iter().zip(&self.beta).map(|(a, b)| a + b).collect())
    }

    /// `(β, α)`, the exponents of `m̄`.
    pub fn conjugate(&self) -> Self {
        MonomialSolution { alpha: self.beta.clone(), beta: self.alpha.clone() }
    }

    pub fn is_self_conjugate(&self) -> bool {
        self.alpha == self.beta
    }

    /// `Σ n_i (α_i - β_i)`.
    pub fn weight(&self, orders: &[u32]) -> i64 {
        self.alpha
            .iter()
            .zip(&self.beta)
            .zip(orders)
            .map(|((&a, &b), &n)| n as i64 * (a as i64 - b as i64))
            .sum()
    }

    /// Product of monomials (exponent sum).
    pub fn mul(&self, o: &Self) -> Self {
        MonomialSolution {
            alpha: self.alpha.iter().zip(&o.alpha).map(|(a, b)| a + b).collect(),
            beta: self.beta.iter().zip(&o.beta).map(|(a, b)| a + b).collect(),
        }
    }

    /// Whether the monomial is divisible by some `z_s z̄_s`.
    pub fn has_mod_sq_factor(&self) -> bool {
        self.alpha.iter().zip(&self.beta).any(|(a, b)| *a >= 1 && *b >= 1)
    }

    fn concat(&self) -> Vec<u32> {
        self.alpha.iter().chain(&self.beta).copied().collect()
    }
}

/// Graded order: total degree ascending, then the concatenation `(α, β)`
/// in descending lexicographic order.
pub fn graded_cmp(a: &MonomialSolution, b: &MonomialSolution) -> Ordering {
    a.total_degree().cmp(&b.total_degree()).then_with(|| b.concat().cmp(&a.concat()))
}

/// Multidegree `K = (k_0; k_1, …)`. In covariant mode the covariant factor
/// sits at index 0, so the derived lexicographic order puts the covariant
/// order first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiDegree(pub Vec<u32>);

impl MultiDegree {
    pub fn zero(r: usize) -> Self {
        MultiDegree(vec![0; r])
    }

    pub fn unit(r: usize, i: usize, k: u32) -> Self {
        let mut v = vec![0; r];
        v[i] = k;
        MultiDegree(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Self) -> Self {
        MultiDegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, `None` unless `other <= self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(MultiDegree)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Irreducible solutions of `Σ n_i (α_i - β_i) = 0`, sorted by
/// [`graded_cmp`].
///
/// Besides the pairs `(e_i, e_i)`, an irreducible solution has disjoint
/// supports, and `|α|, |β| <= max n_i`. For fixed `α` the `β` side is
/// enumerated on the remaining factors; irreducibility is then equivalent to
/// no weight `0 < w < W` being a sub-sum of both sides.
pub fn hilbert_basis(orders: &[u32]) -> Vec<MonomialSolution> {
    let r = orders.len();
    if r == 0 {
        return Vec::new();
    }
    assert!(orders.iter().all(|&n| n >= 1), "orders must be positive");
    let nmax = *orders.iter().max().unwrap();
    let mut out: Vec<MonomialSolution> = (0..r).map(|i| MonomialSolution::mod_sq(r, i)).collect();
    let mut alpha = vec![0u32; r];
    let mut alphas = Vec::new();
    compositions(r, nmax, 0, &mut alpha, &mut alphas);
    for a in alphas {
        let w: u32 = a.iter().zip(orders).map(|(x, n)| x * n).sum();
        let free: Vec<usize> = (0..r).filter(|&i| a[i] == 0).collect();
        let mut beta = vec![0u32; r];
        let mut betas = Vec::new();
        weighted(&free, orders, 0, w, nmax, &mut beta, &mut betas);
        let sa = subset_sums(&a, orders, w);
        for b in betas {
            let sb = subset_sums(&b, orders, w);
            if !(1..w as usize).any(|x| sa[x] && sb[x]) {
                out.push(MonomialSolution::new(a.clone(), b));
            }
        }
    }
    out.sort_by(graded_cmp);
    out
}

// all nonzero α with |α| <= bound
fn compositions(r: usize, bound: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == r {
        if cur.iter().any(|&x| x > 0) {
            out.push(cur.clone());
        }
        return;
    }
    let used: u32 = cur[..i].iter().sum();
    for k in 0..=bound - used {
        cur[i] = k;
        compositions(r, bound, i + 1, cur, out);
    }
    cur[i] = 0;
}

// β supported on `free`, weight exactly `w`, |β| <= bound
fn weighted(free: &[usize], orders: &[u32], j: usize, w: u32, bound: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if w == 0 {
        out.push(cur.clone());
        return;
    }
    if j == free.len() || bound == 0 {
        return;
    }
    let i = free[j];
    let n = orders[i];
    let mut k = 0;
    while k * n <= w && k <= bound {
        cur[i] = k;
        weighted(free, orders, j + 1, w - k * n, bound - k, cur, out);
        k += 1;
    }
    cur[i] = 0;
}

// which weights in 0..=w are reachable as Σ n_i c_i with 0 <= c_i <= a_i
fn subset_sums(a: &[u32], orders: &[u32], w: u32) -> Vec<bool> {
    let w = w as usize;
    let mut reach = vec![false; w + 1];
    reach[0] = true;
    for (&k, &n) in a.iter().zip(orders) {
        for _ in 0..k {
            for x in (n as usize..=w).rev() {
                if reach[x - n as usize] {
                    reach[x] = true;
                }
            }
        }
    }
    reach
}

/// `b_K = #{α : 0 <= α_i <= k_i, Σ 2 α_i n_i = Σ k_i n_i}`, the number of
/// monomials of multidegree `K` invariant under rotations.
pub fn count_bounded(k: &MultiDegree, orders: &[u32]) -> u128 {
    assert_eq!(k.len(), orders.len(), "multidegree and orders differ in length");
    let total: u64 = k.0.iter().zip(orders).map(|(&k, &n)| k as u64 * n as u64).sum();
    if total % 2 == 1 {
        return 0;
    }
    let half = (total / 2) as usize;
    let mut ways = vec![0u128; half + 1];
    ways[0] = 1;
    for (&ki, &n) in k.0.iter().zip(orders) {
        let n = n as usize;
        let mut next = vec![0u128; half + 1];
        for (s, &c) in ways.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for a in 0..=ki as usize {
                let t = s + a * n;
                if t > half {
                    break;
                }
                next[t] += c;
            }
        }
        ways = next;
    }
    ways[half]
}

/// `a_K`: the dimension of the space of invariants of multidegree `K`.
/// Under O(2) this is `(b_K + β_K) / 2`, with `β_K = 1` exactly when every
/// `k_i` is even (the self-conjugate monomial `Π |z_i|^{k_i}`).
pub fn dim_invariant_space(k: &MultiDegree, orders: &[u32], group: Group) -> u128 {
    let b = count_bounded(k, orders);
    match group {
        Group::SO2 => b,
        Group::O2 => {
            let beta = u128::from(k.0.iter().all(|&x| x % 2 == 0));
            (b + beta) / 2
        }
    }
}

/// All `c ∈ ℕ^s` with `Σ c_j K(g_j) = target`, in lexicographic order.
/// Generators of degree zero are given multiplicity zero.
pub fn solve_bounded_system(degrees: &[MultiDegree], target: &MultiDegree) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; degrees.len()];
    solve_rec(degrees, 0, target.clone(), &mut cur, &mut out);
    out
}

fn solve_rec(degrees: &[MultiDegree], j: usize, rest: MultiDegree, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if rest.is_zero() {
        out.push(cur.clone());
        return;
    }
    if j == degrees.len() {
        return;
    }
    if degrees[j].is_zero() {
        solve_rec(degrees, j + 1, rest, cur, out);
        return;
    }
    // multiplicities of generator j from 0 upward
    let mut steps = Vec::new();
    let mut r = rest;
    loop {
        steps.push(r.clone());
        match r.checked_sub(&degrees[j]) {
            Some(next) => r = next,
            None => break,
        }
    }
    for (c, r) in steps.into_iter().enumerate() {
        cur[j] = c as u32;
        solve_rec(degrees, j + 1, r, cur, out);
    }
    cur[j] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(a: &[u32], b: &[u32]) -> MonomialSolution {
        MonomialSolution::new(a.to_vec(), b.to_vec())
    }

    #[test]
    fn single_factor_has_only_modulus() {
        assert_eq!(hilbert_basis(&[2]), vec![sol(&[1], &[1])]);
    }

    #[test]
    fn orders_two_four() {
        assert_eq!(
            hilbert_basis(&[2, 4]),
            vec![sol(&[1, 0], &[1, 0]), sol(&[0, 1], &[0, 1]), sol(&[2, 0], &[0, 1]), sol(&[0, 1], &[2, 0])]
        );
    }

    #[test]
    fn counts_for_orders_two_four() {
        assert_eq!(count_bounded(&MultiDegree(vec![2, 1]), &[2, 4]), 2);
        assert_eq!(count_bounded(&MultiDegree(vec![0, 0]), &[2, 4]), 1);
        assert_eq!(dim_invariant_space(&MultiDegree(vec![2, 1]), &[2, 4], Group::O2), 1);
        assert_eq!(dim_invariant_space(&MultiDegree(vec![4, 2]), &[2, 4], Group::SO2), 3);
        assert_eq!(dim_invariant_space(&MultiDegree(vec![24, 10]), &[2, 4], Group::SO2), 11);
    }

    #[test]
    fn bounded_system() {
        let d = |v: &[u32]| MultiDegree(v.to_vec());
        assert_eq!(solve_bounded_system(&[d(&[2, 0]), d(&[0, 2])], &d(&[4, 2])), vec![vec![2, 1]]);
        assert_eq!(solve_bounded_system(&[d(&[1, 1])], &d(&[0, 0])), vec![vec![0]]);
        assert_eq!(solve_bounded_system(&[d(&[1, 1]), d(&[2, 0])], &d(&[2, 2])), vec![vec![2, 0]]);
    }
}
