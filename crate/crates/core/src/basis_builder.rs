//! Generator sets: the SO(2) minimal basis read off the Hilbert basis, the
//! O(2) candidate set to be cleaned, the scalar/pseudo-scalar families, and
//! restriction to stable subspaces.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diophantine::{graded_cmp, hilbert_basis, MonomialSolution};
use crate::error::contract;
use crate::harmonic::HarmonicSignature;
use crate::poly_algebra::{Generator, GeneratorKind, Layout, Parity};
use crate::{Group, Mode, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    /// Signature as given (before SO(2) reclassification of `H₋₁`).
    pub signature: HarmonicSignature,
    pub group: Group,
    pub mode: Mode,
    pub layout: Layout,
    pub generators: Vec<Generator>,
    pub minimal: bool,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generators of covariant order 0.
    pub fn invariant_count(&self) -> usize {
        self.generators.iter().filter(|g| g.order == 0).count()
    }

    pub fn count_by_parity(&self, p: Parity) -> usize {
        self.generators.iter().filter(|g| g.parity == p).count()
    }

    /// Multiset of `(order, degree)` pairs.
    pub fn histogram(&self) -> BTreeMap<(u32, u32), usize> {
        let mut h = BTreeMap::new();
        for g in &self.generators {
            *h.entry((g.order, g.degree)).or_insert(0) += 1;
        }
        h
    }

    /// The invariant-mode basis contained in a covariant basis: generators
    /// free of the covariant variable, re-expressed without it.
    pub fn invariants_part(&self) -> GeneratorSet {
        if self.mode == Mode::Invariants {
            return self.clone();
        }
        let layout = Layout::new(&self.signature, self.group, Mode::Invariants);
        let map: Vec<Option<usize>> = (0..self.layout.r()).map(|i| i.checked_sub(1)).collect();
        let generators = self
            .generators
            .iter()
            .filter(|g| g.order == 0)
            .map(|g| remap(g, &map, &identity_map(self.layout.n_scalars()), self.layout.n_lambda, &layout).expect("order-0 generator"))
            .collect();
        GeneratorSet { signature: self.signature.clone(), group: self.group, mode: Mode::Invariants, layout, generators, minimal: self.minimal }
    }

    /// Stable sort by order, degree, kind, then descending multidegree.
    pub fn sort_for_display(&mut self) {
        self.generators.sort_by_key(|g| (g.order, g.degree, kind_rank(g), std::cmp::Reverse(g.multidegree.clone())));
    }
}

/// Rank used for candidate ordering and display: `λ < ξ < |z|² < Re < Im <
/// Im·Im < ξξ < ξ·Im`.
pub fn kind_rank(g: &Generator) -> u8 {
    match &g.kind {
        GeneratorKind::Lambda(_) => 0,
        GeneratorKind::Xi(_) => 1,
        GeneratorKind::ModSq(_) => 2,
        GeneratorKind::Re(_) => 3,
        GeneratorKind::Im(_) => 4,
        GeneratorKind::Product(_) if g.is_im_im() => 5,
        GeneratorKind::Product(_) if g.is_xi_im() => 7,
        GeneratorKind::Product(_) => 6,
    }
}

fn identity_map(n: usize) -> Vec<Option<usize>> {
    (0..n).map(Some).collect()
}

/// One representative per conjugate pair `{m, m̄}` of the non-self-conjugate
/// Hilbert basis elements.
///
/// With the covariant variable present the representative has it
/// unconjugated; otherwise the highest-index factor of the support is the
/// conjugated one.
pub fn monomial_representatives(layout: &Layout) -> Vec<MonomialSolution> {
    let mut reps: Vec<MonomialSolution> = hilbert_basis(&layout.orders)
        .into_iter()
        .filter(|m| !m.is_self_conjugate())
        .filter(|m| {
            if layout.covariant && m.alpha[0] + m.beta[0] > 0 {
                m.alpha[0] > 0
            } else {
                let top = (0..m.len()).rev().find(|&i| m.alpha[i] + m.beta[i] > 0).unwrap();
                m.beta[top] > 0
            }
        })
        .collect();
    reps.sort_by(graded_cmp);
    reps
}

/// SO(2) minimal integrity basis: `λ_k`, `|z_l|²`, and `Re(m)`, `Im(m)` for
/// each pair of the Hilbert basis.
pub fn so2_minimal_basis(sig: &HarmonicSignature, mode: Mode) -> GeneratorSet {
    let layout = Layout::new(sig, Group::SO2, mode);
    let mut gens: Vec<Generator> = (0..layout.n_lambda).map(|k| Generator::lambda(k, &layout)).collect();
    gens.extend((0..layout.r()).map(|l| Generator::mod_sq(l, &layout)));
    for m in monomial_representatives(&layout) {
        gens.push(Generator::re(m.clone(), &layout));
        gens.push(Generator::im(m, &layout));
    }
    let mut set = GeneratorSet { signature: sig.clone(), group: Group::SO2, mode, layout, generators: gens, minimal: true };
    set.sort_for_display();
    set
}

/// O(2) candidates for the harmonic part: `|z_l|²`, `Re(m)`, and the
/// products `Im(m_p) Im(m_q)` (`p <= q`) that survive the `z_s z̄_s` filter.
pub fn o2_candidate_set(sig: &HarmonicSignature, mode: Mode) -> GeneratorSet {
    let layout = Layout::new(sig, Group::O2, mode);
    let reps = monomial_representatives(&layout);
    let mut gens: Vec<Generator> = (0..layout.r()).map(|l| Generator::mod_sq(l, &layout)).collect();
    gens.extend(reps.iter().map(|m| Generator::re(m.clone(), &layout)));
    for p in 0..reps.len() {
        for q in p..reps.len() {
            let (mp, mq) = (&reps[p], &reps[q]);
            if mp.mul(mq).has_mod_sq_factor() || mp.mul(&mq.conjugate()).has_mod_sq_factor() {
                continue;
            }
            gens.push(Generator::product(
                vec![Generator::im(mp.clone(), &layout), Generator::im(mq.clone(), &layout)],
                &layout,
            ));
        }
    }
    GeneratorSet { signature: sig.clone(), group: Group::O2, mode, layout, generators: gens, minimal: false }
}

/// `λ_k`, `ξ_i ξ_j` (`i <= j`) and `ξ_i Im(m_l)` for every monomial pair.
pub fn scalar_family(layout: &Layout) -> Vec<Generator> {
    let mut gens: Vec<Generator> = (0..layout.n_lambda).map(|k| Generator::lambda(k, layout)).collect();
    for i in 0..layout.n_xi {
        for j in i..layout.n_xi {
            gens.push(Generator::product(vec![Generator::xi(i, layout), Generator::xi(j, layout)], layout));
        }
    }
    let reps = monomial_representatives(layout);
    for i in 0..layout.n_xi {
        for m in &reps {
            gens.push(Generator::product(vec![Generator::xi(i, layout), Generator::im(m.clone(), layout)], layout));
        }
    }
    gens
}

/// Union of a minimal O(2) basis of the harmonic part with the scalar family.
pub fn append_scalars(core: &GeneratorSet) -> GeneratorSet {
    let mut out = core.clone();
    out.generators.extend(scalar_family(&core.layout));
    out.sort_for_display();
    out
}

/// Which factors of a signature to keep, by position: `lambdas` index the
/// `H⁰` factors, `xis` the `H₋₁` factors and `planes` the harmonic factors
/// in signature order. Under SO(2) the pseudo-scalars count as `H⁰` factors
/// placed after the genuine ones.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSubset {
    pub lambdas: Vec<usize>,
    pub xis: Vec<usize>,
    pub planes: Vec<usize>,
}

/// Keep the generators depending only on the selected factors. The
/// covariant variable is always kept.
pub fn restrict_to_subspace(basis: &GeneratorSet, kept: &FactorSubset) -> Result<GeneratorSet> {
    let l = &basis.layout;
    let sig = basis.signature.for_group(basis.group);
    let check = |idx: &[usize], n: usize, what: &str| -> Result<()> {
        let mut v = idx.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.len() != idx.len() || idx.iter().any(|&i| i >= n) || v != idx {
            return contract(format!("invalid {what} selection {idx:?}"));
        }
        Ok(())
    };
    check(&kept.lambdas, l.n_lambda, "H0")?;
    check(&kept.xis, l.n_xi, "H-1")?;
    check(&kept.planes, sig.orders.len(), "harmonic factor")?;

    let off = l.first_factor();
    let mut hmap: Vec<Option<usize>> = vec![None; l.r()];
    if l.covariant {
        hmap[0] = Some(0);
    }
    for (new, &old) in kept.planes.iter().enumerate() {
        hmap[old + off] = Some(new + off);
    }
    let mut smap: Vec<Option<usize>> = vec![None; l.n_scalars()];
    for (new, &old) in kept.lambdas.iter().enumerate() {
        smap[old] = Some(new);
    }
    for (new, &old) in kept.xis.iter().enumerate() {
        smap[l.n_lambda + old] = Some(kept.lambdas.len() + new);
    }

    // signature of the subspace, expressed before any SO(2) reclassification
    let (m_minus1, m_0) = match basis.group {
        Group::O2 => (kept.xis.len(), kept.lambdas.len()),
        Group::SO2 => (0, kept.lambdas.len()),
    };
    let signature = HarmonicSignature::new(m_minus1, m_0, kept.planes.iter().map(|&i| sig.orders[i]).collect())?;
    let layout = Layout::new(&signature, basis.group, basis.mode);
    let generators = basis.generators.iter().filter_map(|g| remap(g, &hmap, &smap, l.n_lambda, &layout)).collect();
    Ok(GeneratorSet { signature, group: basis.group, mode: basis.mode, layout, generators, minimal: basis.minimal })
}

fn remap_mono(m: &MonomialSolution, hmap: &[Option<usize>], r: usize) -> Option<MonomialSolution> {
    let mut a = vec![0; r];
    let mut b = vec![0; r];
    for i in 0..m.len() {
        if m.alpha[i] + m.beta[i] == 0 {
            continue;
        }
        let j = hmap[i]?;
        a[j] = m.alpha[i];
        b[j] = m.beta[i];
    }
    Some(MonomialSolution::new(a, b))
}

fn remap(g: &Generator, hmap: &[Option<usize>], smap: &[Option<usize>], old_n_lambda: usize, layout: &Layout) -> Option<Generator> {
    let r = layout.r();
    Some(match &g.kind {
        GeneratorKind::Lambda(k) => {
            let j = smap[*k]?;
            if j < layout.n_lambda {
                Generator::lambda(j, layout)
            } else {
                Generator::xi(j - layout.n_lambda, layout)
            }
        }
        GeneratorKind::Xi(i) => Generator::xi(smap[old_n_lambda + *i]? - layout.n_lambda, layout),
        GeneratorKind::ModSq(l) => Generator::mod_sq(hmap[*l]?, layout),
        GeneratorKind::Re(m) => Generator::re(remap_mono(m, hmap, r)?, layout),
        GeneratorKind::Im(m) => Generator::im(remap_mono(m, hmap, r)?, layout),
        GeneratorKind::Product(fs) => {
            Generator::product(fs.iter().map(|f| remap(f, hmap, smap, old_n_lambda, layout)).collect::<Option<Vec<_>>>()?, layout)
        }
    })
}
