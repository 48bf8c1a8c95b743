//! Extraction of a minimal O(2) integrity basis from the candidate set.
//!
//! Multidegrees are swept in lexicographic order. At each `K` the products
//! of already selected generators are rank-tested against the graded
//! dimension `a_K`, and candidates of degree `K` are added one by one until
//! the rank is reached.
//!
//! The default [`Strategy::Quotient`] works modulo the subspace `N_K`
//! spanned by invariants divisible by some `|z_s|²`. Since every `|z_s|²` is
//! a generator, `N_K` is always covered by products, and the quotient has a
//! basis indexed by the conjugate pairs of *reduced* monomials (no variable
//! appears both plain and conjugated). The reducible part of the quotient is
//! spanned by `g · Re(μ)` with `g` a selected generator of degree strictly
//! below `K` and `μ` a reduced monomial of degree `K - K(g)`.
//! [`Strategy::Full`] forms every product literally in the full space of
//! invariants of degree `K`; it is exponential and kept as a cross-check.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis_builder::{append_scalars, o2_candidate_set, so2_minimal_basis, GeneratorSet};
use crate::diophantine::{count_bounded, dim_invariant_space, solve_bounded_system, MonomialSolution, MultiDegree};
use crate::error::{contract, internal};
use crate::harmonic::HarmonicSignature;
use crate::linalg::Echelon;
use crate::poly_algebra::{expand, Generator, GeneratorKind, GradedPolynomial, Layout};
use crate::{gauss, q, Group, Mode, Rational, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    #[default]
    #[serde(rename = "quotient")]
    Quotient,
    #[serde(rename = "full")]
    Full,
}

/// One processed multidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningStep {
    pub k: MultiDegree,
    pub a_k: u64,
    /// Rank the step has to reach: `a_K` for the full strategy, the number
    /// of reduced conjugate pairs for the quotient strategy.
    pub target: u64,
    /// Number of reducible rows formed (rows are generated lazily and stop
    /// once the target is reached).
    pub reducible: usize,
    pub reducible_rank: usize,
    /// Formulas of the generators selected at this step.
    pub selected: Vec<String>,
    /// False for multidegrees only visited as sums of selected degrees.
    pub has_candidates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningTrace {
    pub strategy: Strategy,
    pub steps: Vec<CleaningStep>,
}

/// Harmonic-variable layout (no scalar variables) used for all expansions.
fn harmonic_layout(l: &Layout) -> Layout {
    Layout { n_lambda: 0, n_xi: 0, ..l.clone() }
}

fn exponent_key(m: &MonomialSolution) -> Vec<u8> {
    m.alpha.iter().chain(&m.beta).map(|&x| x as u8).collect()
}

/// Representatives of the conjugate pairs of reduced invariant monomials of
/// degree `k` (first support index unconjugated). For `k = 0` this is the
/// constant monomial.
pub fn reduced_orbits(k: &MultiDegree, orders: &[u32]) -> Vec<MonomialSolution> {
    let r = k.len();
    let supp = k.support();
    if supp.is_empty() {
        return vec![MonomialSolution::new(vec![0; r], vec![0; r])];
    }
    let rest = &supp[1..];
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << rest.len()) {
        let mut w = (k.0[supp[0]] * orders[supp[0]]) as i64;
        for (b, &s) in rest.iter().enumerate() {
            let t = (k.0[s] * orders[s]) as i64;
            w += if mask >> b & 1 == 0 { t } else { -t };
        }
        if w != 0 {
            continue;
        }
        let mut a = vec![0; r];
        let mut be = vec![0; r];
        a[supp[0]] = k.0[supp[0]];
        for (b, &s) in rest.iter().enumerate() {
            if mask >> b & 1 == 0 {
                a[s] = k.0[s];
            } else {
                be[s] = k.0[s];
            }
        }
        out.push(MonomialSolution::new(a, be));
    }
    out
}

/// Coordinates of polynomials on the reduced pairs of one multidegree.
struct QuotientSpace {
    keys: Vec<Vec<u8>>,
}

impl QuotientSpace {
    fn new(k: &MultiDegree, orders: &[u32]) -> Self {
        QuotientSpace { keys: reduced_orbits(k, orders).iter().map(exponent_key).collect() }
    }

    fn dim(&self) -> usize {
        self.keys.len()
    }

    fn coords(&self, p: &GradedPolynomial) -> Vec<Rational> {
        let mut v = Vec::with_capacity(2 * self.keys.len());
        for key in &self.keys {
            let c = p.coeff(key);
            v.push(c.re);
            v.push(c.im);
        }
        v
    }
}

/// `Re(μ)` for every reduced pair of degree `k`, cached per degree.
struct ReMuCache {
    orders: Vec<u32>,
    map: HashMap<MultiDegree, Vec<GradedPolynomial>>,
}

impl ReMuCache {
    fn new(orders: &[u32]) -> Self {
        ReMuCache { orders: orders.to_vec(), map: HashMap::new() }
    }

    fn get(&mut self, k: &MultiDegree) -> &[GradedPolynomial] {
        let orders = &self.orders;
        self.map.entry(k.clone()).or_insert_with(|| {
            let half = gauss(q(1, 2), Rational::zero());
            reduced_orbits(k, orders)
                .iter()
                .map(|mu| {
                    if mu.total_degree() == 0 {
                        GradedPolynomial::monomial(mu, 0, gauss(q(1, 1), Rational::zero()))
                    } else {
                        GradedPolynomial::monomial(mu, 0, half.clone())
                            .add(&GradedPolynomial::monomial(&mu.conjugate(), 0, half.clone()))
                    }
                })
                .collect()
        })
    }
}

/// Rank of the quotient rows `g · Re(μ)` over `gens` (all of degree `<= k`,
/// different from `k`), stopping at `target`. Returns the echelon and the
/// number of rows formed.
fn quotient_rows(
    gens: &[(MultiDegree, GradedPolynomial)],
    k: &MultiDegree,
    space: &QuotientSpace,
    cache: &mut ReMuCache,
) -> (Echelon, usize) {
    let mut ech = Echelon::new(2 * space.dim());
    let mut count = 0;
    if space.dim() == 0 {
        return (ech, 0);
    }
    for (kg, pg) in gens {
        if kg == k || !kg.le(k) {
            continue;
        }
        let rest = k.checked_sub(kg).expect("checked le");
        let mus: Vec<GradedPolynomial> = cache.get(&rest).to_vec();
        let rows: Vec<Vec<Rational>> = mus.par_iter().map(|mu| space.coords(&pg.mul(mu))).collect();
        for row in rows {
            count += 1;
            ech.insert(row);
            if ech.rank() == space.dim() {
                return (ech, count);
            }
        }
    }
    (ech, count)
}

fn to_u64(x: u128) -> u64 {
    u64::try_from(x).expect("dimension above u64")
}

/// Clean an O(2) candidate set with the default strategy.
pub fn clean(candidates: &GeneratorSet) -> Result<(GeneratorSet, CleaningTrace)> {
    clean_with(candidates, Strategy::Quotient)
}

/// Clean an O(2) candidate set. The result contains the harmonic part only;
/// see [`crate::basis_builder::append_scalars`].
pub fn clean_with(candidates: &GeneratorSet, strategy: Strategy) -> Result<(GeneratorSet, CleaningTrace)> {
    if candidates.group != Group::O2 {
        return contract("cleaning applies to O(2) candidate sets");
    }
    if candidates.generators.iter().any(|g| g.scalar_degree() > 0) {
        return contract("candidate set must contain harmonic generators only");
    }
    let hl = harmonic_layout(&candidates.layout);
    let orders = hl.orders.clone();

    let mut cands: Vec<(usize, &Generator)> = candidates.generators.iter().enumerate().collect();
    cands.sort_by(|a, b| {
        a.1.multidegree
            .cmp(&b.1.multidegree)
            .then(crate::basis_builder::kind_rank(a.1).cmp(&crate::basis_builder::kind_rank(b.1)))
            .then(a.0.cmp(&b.0))
    });
    let max_total = cands.iter().map(|(_, g)| g.multidegree.total()).max().unwrap_or(0);
    let mut queue: BTreeSet<MultiDegree> = cands.iter().map(|(_, g)| g.multidegree.clone()).collect();

    let mut selected: Vec<Generator> = Vec::new();
    let mut selected_polys: Vec<(MultiDegree, GradedPolynomial)> = Vec::new();
    let mut steps = Vec::new();
    let mut cache = ReMuCache::new(&orders);
    let mut next = 0;

    while let Some(k) = queue.pop_first() {
        let here_start = next;
        while next < cands.len() && cands[next].1.multidegree == k {
            next += 1;
        }
        let here: Vec<&Generator> = cands[here_start..next].iter().map(|(_, g)| *g).collect();
        let a_k = dim_invariant_space(&k, &orders, Group::O2);
        let mut picked: Vec<Generator> = Vec::new();

        let (target, reducible, reducible_rank) = match strategy {
            Strategy::Quotient => {
                let space = QuotientSpace::new(&k, &orders);
                let c_k = space.dim();
                if (2 * c_k) as u128 > count_bounded(&k, &orders) {
                    return internal(format!("reduced monomials exceed invariant monomials at {k}"));
                }
                let (mut ech, nrows) = quotient_rows(&selected_polys, &k, &space, &mut cache);
                let base = ech.rank();
                for g in &here {
                    if matches!(g.kind, GeneratorKind::ModSq(_)) {
                        picked.push((*g).clone());
                        continue;
                    }
                    if ech.rank() == c_k {
                        break;
                    }
                    if ech.insert(space.coords(&expand(g, &hl))) {
                        picked.push((*g).clone());
                    }
                }
                if ech.rank() != c_k {
                    return internal(format!("rank {} differs from {} reduced pairs at {k}", ech.rank(), c_k));
                }
                (c_k as u64, nrows, base)
            }
            Strategy::Full => {
                let (mut ech, index, nrows) = full_rows(&selected, &selected_polys, &k, &orders, &hl)?;
                let base = ech.rank();
                for g in &here {
                    if ech.rank() as u128 == a_k {
                        break;
                    }
                    if ech.insert(full_coords(&expand(g, &hl), &index, ech.cols())?) {
                        picked.push((*g).clone());
                    }
                }
                if ech.rank() as u128 != a_k {
                    return internal(format!("rank {} differs from a_K = {a_k} at {k}", ech.rank()));
                }
                (to_u64(a_k), nrows, base)
            }
        };

        for g in &picked {
            selected.push(g.clone());
            selected_polys.push((g.multidegree.clone(), expand(g, &hl)));
            for h in &selected {
                let s = k.add(&h.multidegree);
                if s.total() <= max_total {
                    queue.insert(s);
                }
            }
        }
        steps.push(CleaningStep {
            k: k.clone(),
            a_k: to_u64(a_k),
            target,
            reducible,
            reducible_rank,
            selected: picked.iter().map(|g| g.formula(&candidates.layout, false)).collect(),
            has_candidates: !here.is_empty(),
        });
    }

    let out = GeneratorSet {
        signature: candidates.signature.clone(),
        group: Group::O2,
        mode: candidates.mode,
        layout: candidates.layout.clone(),
        generators: selected,
        minimal: true,
    };
    Ok((out, CleaningTrace { strategy, steps }))
}

/// Column index of the invariant monomials of degree `k` (rotation weight
/// zero), two rational columns each.
fn invariant_monomials(k: &MultiDegree, orders: &[u32]) -> HashMap<Vec<u8>, usize> {
    fn rec(k: &MultiDegree, orders: &[u32], i: usize, w: i64, alpha: &mut Vec<u32>, out: &mut Vec<MonomialSolution>) {
        if i == k.len() {
            if w == 0 {
                let beta = k.0.iter().zip(alpha.iter()).map(|(a, b)| a - b).collect();
                out.push(MonomialSolution::new(alpha.clone(), beta));
            }
            return;
        }
        for a in 0..=k.0[i] {
            alpha[i] = a;
            let dw = orders[i] as i64 * (2 * a as i64 - k.0[i] as i64);
            rec(k, orders, i + 1, w + dw, alpha, out);
        }
        alpha[i] = 0;
    }
    let mut monos = Vec::new();
    rec(k, orders, 0, 0, &mut vec![0; k.len()], &mut monos);
    monos.iter().enumerate().map(|(i, m)| (exponent_key(m), i)).collect()
}

fn full_coords(p: &GradedPolynomial, index: &HashMap<Vec<u8>, usize>, cols: usize) -> Result<Vec<Rational>> {
    let mut v = vec![Rational::zero(); cols];
    for (e, c) in p.terms() {
        let Some(&j) = index.get(e) else {
            return internal("product has a term outside the invariant monomials");
        };
        v[2 * j] = c.re.clone();
        v[2 * j + 1] = c.im.clone();
    }
    Ok(v)
}

fn full_rows(
    selected: &[Generator],
    polys: &[(MultiDegree, GradedPolynomial)],
    k: &MultiDegree,
    orders: &[u32],
    hl: &Layout,
) -> Result<(Echelon, HashMap<Vec<u8>, usize>, usize)> {
    let index = invariant_monomials(k, orders);
    let cols = 2 * index.len();
    let mut ech = Echelon::new(cols);
    let degrees: Vec<MultiDegree> = selected.iter().map(|g| g.multidegree.clone()).collect();
    let sols = solve_bounded_system(&degrees, k);
    let mut n = 0;
    for c in sols {
        if c.iter().sum::<u32>() < 2 {
            continue;
        }
        let mut p = GradedPolynomial::one(hl.r(), 0);
        for (j, &e) in c.iter().enumerate() {
            for _ in 0..e {
                p = p.mul(&polys[j].1);
            }
        }
        n += 1;
        ech.insert(full_coords(&p, &index, cols)?);
    }
    Ok((ech, index, n))
}

/// Minimal integrity basis of the given group: the SO(2) basis directly, or
/// the cleaned O(2) basis with the scalar family appended.
pub fn minimal_basis(sig: &HarmonicSignature, group: Group, mode: Mode) -> Result<(GeneratorSet, Option<CleaningTrace>)> {
    minimal_basis_with(sig, group, mode, Strategy::Quotient)
}

pub fn minimal_basis_with(
    sig: &HarmonicSignature,
    group: Group,
    mode: Mode,
    strategy: Strategy,
) -> Result<(GeneratorSet, Option<CleaningTrace>)> {
    match group {
        Group::SO2 => Ok((so2_minimal_basis(sig, mode), None)),
        Group::O2 => {
            let cands = o2_candidate_set(sig, mode);
            let (core, trace) = clean_with(&cands, strategy)?;
            Ok((append_scalars(&core), Some(trace)))
        }
    }
}

/// Result of testing one generator for redundancy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub generator: String,
    pub k: MultiDegree,
    /// Dimension of the graded piece the generator lives in (restricted to
    /// its parity and scalar content).
    pub a_k: u64,
    /// Rank spanned at that degree by products of the other generators and
    /// the other generators of the same degree.
    pub rank_without: u64,
}

impl AuditEntry {
    pub fn redundant(&self) -> bool {
        self.rank_without >= self.a_k
    }
}

/// For every generator of an O(2) basis, the rank spanned without it at its
/// own multidegree. The basis is minimal iff no entry is redundant.
pub fn audit_minimality(basis: &GeneratorSet) -> Result<Vec<AuditEntry>> {
    if basis.group != Group::O2 {
        return contract("the minimality audit applies to O(2) bases");
    }
    let hl = harmonic_layout(&basis.layout);
    let orders = hl.orders.clone();
    let mut cache = ReMuCache::new(&orders);

    let harmonic: Vec<(usize, MultiDegree, GradedPolynomial)> = basis
        .generators
        .iter()
        .enumerate()
        .filter(|(_, g)| g.scalar_degree() == 0 && !matches!(g.kind, GeneratorKind::ModSq(_)))
        .map(|(i, g)| (i, g.multidegree.clone(), expand(g, &hl)))
        .collect();
    // ξ_i Im(m) generators, grouped by i
    let xi_im: Vec<(usize, usize, MultiDegree, GradedPolynomial)> = basis
        .generators
        .iter()
        .enumerate()
        .filter_map(|(idx, g)| match &g.kind {
            GeneratorKind::Product(fs) if g.is_xi_im() => {
                let GeneratorKind::Xi(i) = fs[0].kind else { unreachable!() };
                Some((idx, i, g.multidegree.clone(), expand(&fs[1], &hl)))
            }
            _ => None,
        })
        .collect();

    let mut out = Vec::new();
    for (idx, g) in basis.generators.iter().enumerate() {
        let name = g.formula(&basis.layout, false);
        let k = g.multidegree.clone();
        let trivial = |out: &mut Vec<AuditEntry>| out.push(AuditEntry { generator: name.clone(), k: k.clone(), a_k: 1, rank_without: 0 });
        match &g.kind {
            GeneratorKind::Lambda(_) | GeneratorKind::ModSq(_) => trivial(&mut out),
            GeneratorKind::Product(fs) if fs.iter().all(|f| matches!(f.kind, GeneratorKind::Xi(_))) => trivial(&mut out),
            _ if g.is_xi_im() => {
                let i = xi_im.iter().find(|e| e.0 == idx).map(|e| e.1).expect("indexed above");
                let others: Vec<(MultiDegree, GradedPolynomial)> =
                    xi_im.iter().filter(|e| e.1 == i && e.0 != idx).map(|e| (e.2.clone(), e.3.clone())).collect();
                let own = &xi_im.iter().find(|e| e.0 == idx).expect("indexed above").3;
                let b = count_bounded(&k, &orders);
                let beta = u128::from(k.0.iter().all(|x| x % 2 == 0));
                let a_odd = to_u64((b - beta) / 2);
                out.push(quotient_audit(name, &k, &orders, &others, own, a_odd, &mut cache)?);
            }
            _ => {
                let others: Vec<(MultiDegree, GradedPolynomial)> =
                    harmonic.iter().filter(|e| e.0 != idx).map(|e| (e.1.clone(), e.2.clone())).collect();
                let own = &harmonic.iter().find(|e| e.0 == idx).expect("harmonic generator").2;
                let a_k = to_u64(dim_invariant_space(&k, &orders, Group::O2));
                out.push(quotient_audit(name, &k, &orders, &others, own, a_k, &mut cache)?);
            }
        }
    }
    Ok(out)
}

fn quotient_audit(
    name: String,
    k: &MultiDegree,
    orders: &[u32],
    others: &[(MultiDegree, GradedPolynomial)],
    own: &GradedPolynomial,
    a_k: u64,
    cache: &mut ReMuCache,
) -> Result<AuditEntry> {
    let space = QuotientSpace::new(k, orders);
    let c_k = space.dim() as u64;
    let (mut ech, _) = quotient_rows(others, k, &space, cache);
    for (kg, pg) in others {
        if kg == k {
            ech.insert(space.coords(pg));
        }
    }
    let without = ech.rank() as u64;
    ech.insert(space.coords(own));
    if ech.rank() as u64 != c_k {
        return internal(format!("basis does not span the quotient at {k} ({} of {c_k})", ech.rank()));
    }
    Ok(AuditEntry { generator: name, k: k.clone(), a_k, rank_without: without + (a_k - c_k) })
}
