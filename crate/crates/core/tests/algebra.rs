//! Structural properties of the computed bases.

mod common;

use std::collections::HashMap;

use o2basis::basis_builder::{restrict_to_subspace, FactorSubset, GeneratorSet};
use o2basis::cleaner::{clean_with, minimal_basis, minimal_basis_with, Strategy};
use o2basis::diophantine::{dim_invariant_space, solve_bounded_system, MultiDegree};
use o2basis::harmonic::HarmonicSignature;
use o2basis::poly_algebra::{expand, rank_of_set, GradedPolynomial};
use o2basis::{Group, Mode};

use common::basis;

/// All nonzero multidegrees of length `r` and total at most `max`.
fn multidegrees(r: usize, max: u32) -> Vec<MultiDegree> {
    fn rec(r: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiDegree>) {
        if cur.len() == r {
            if cur.iter().any(|&x| x > 0) {
                out.push(MultiDegree(cur.clone()));
            }
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(r, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, max, &mut Vec::new(), &mut out);
    out
}

/// Products of basis generators span every graded piece of total degree
/// at most `max`.
fn assert_generates(set: &GeneratorSet, max: u32) {
    let layout = &set.layout;
    assert_eq!(layout.n_scalars(), 0, "helper covers harmonic signatures only");
    let polys: Vec<GradedPolynomial> = set.generators.iter().map(|g| expand(g, layout)).collect();
    let degrees: Vec<MultiDegree> = set.generators.iter().map(|g| g.multidegree.clone()).collect();
    let mut cache: HashMap<Vec<u32>, GradedPolynomial> = HashMap::new();
    for k in multidegrees(layout.r(), max) {
        let mut products = Vec::new();
        for c in solve_bounded_system(&degrees, &k) {
            let p = cache.entry(c.clone()).or_insert_with(|| {
                c.iter().zip(&polys).fold(GradedPolynomial::one(layout.r(), 0), |acc, (&e, p)| (0..e).fold(acc, |a, _| a.mul(p)))
            });
            products.push(p.clone());
        }
        let rank = rank_of_set(&products, &k).unwrap() as u128;
        assert_eq!(rank, dim_invariant_space(&k, &layout.orders, set.group), "{} {} at {k}", set.signature.to_grammar(), set.group);
    }
}

#[test]
fn so2_bases_generate_up_to_degree_six() {
    for s in ["H:1,2", "H:2,4", "H:1,1,3", "H:3", "H:2,3"] {
        let sig = HarmonicSignature::parse(s).unwrap();
        for mode in [Mode::Invariants, Mode::Covariants] {
            assert_generates(&minimal_basis(&sig, Group::SO2, mode).unwrap().0, 6);
        }
    }
}

#[test]
fn o2_bases_generate_up_to_degree_six() {
    for s in ["H:1,2", "H:2,4", "H:1,1,3", "H:3", "H:2,3"] {
        let sig = HarmonicSignature::parse(s).unwrap();
        for mode in [Mode::Invariants, Mode::Covariants] {
            assert_generates(&minimal_basis(&sig, Group::O2, mode).unwrap().0, 6);
        }
    }
}

fn sorted_formulas(set: &GeneratorSet) -> Vec<String> {
    let mut v: Vec<String> = set.generators.iter().map(|g| g.formula(&set.layout, true)).collect();
    v.sort();
    v
}

fn restriction_matches(from: &str, kept: FactorSubset, to: &str, group: Group, mode: Mode) {
    let big = basis(from, group, mode);
    let small = basis(to, group, mode);
    let r = restrict_to_subspace(&big, &kept).unwrap();
    assert_eq!(r.signature, small.signature, "{from} -> {to}");
    assert_eq!(r.histogram(), small.histogram(), "{from} -> {to} {group}");
    if group == Group::SO2 {
        assert_eq!(sorted_formulas(&r), sorted_formulas(&small), "{from} -> {to}");
    }
}

#[test]
fn restriction_t3_to_piez_to_sym3() {
    // T3 = H1a + H1b + H1c + H3, Piez drops H1c, Sym3 keeps one H1
    for group in [Group::SO2, Group::O2] {
        for mode in [Mode::Invariants, Mode::Covariants] {
            let piez = FactorSubset { planes: vec![0, 1, 3], ..Default::default() };
            restriction_matches("t3", piez, "piez", group, mode);
            let sym3 = FactorSubset { planes: vec![0, 2], ..Default::default() };
            restriction_matches("piez", sym3, "sym3", group, mode);
        }
    }
}

#[test]
fn restriction_sym12_to_sym6() {
    // H0 + H2 + H4 + … + H12 keeps H0, H2, H4, H6
    for group in [Group::SO2, Group::O2] {
        let kept = FactorSubset { lambdas: vec![0], planes: vec![0, 1, 2], ..Default::default() };
        restriction_matches("sym12", kept, "sym6", group, Mode::Invariants);
    }
}

#[test]
fn cleaning_strategies_agree() {
    for preset in ["t3", "photoela", "ela2"] {
        let sig = common::preset_signature(preset);
        let (a, _) = minimal_basis_with(&sig, Group::O2, Mode::Covariants, Strategy::Quotient).unwrap();
        let (b, _) = minimal_basis_with(&sig, Group::O2, Mode::Covariants, Strategy::Full).unwrap();
        assert_eq!(sorted_formulas(&a), sorted_formulas(&b), "{preset}");
    }
}

#[test]
fn results_are_deterministic_across_thread_counts() {
    let sig = common::preset_signature("t4");
    let reference = minimal_basis(&sig, Group::O2, Mode::Covariants).unwrap();
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let again = pool.install(|| minimal_basis(&sig, Group::O2, Mode::Covariants).unwrap());
        assert_eq!(again.0.generators, reference.0.generators);
        assert_eq!(serde_json::to_string(&again.1).unwrap(), serde_json::to_string(&reference.1).unwrap());
    }
}

#[test]
fn cleaning_is_idempotent() {
    let set = basis("t3", Group::O2, Mode::Covariants);
    let (again, _) = clean_with(&set, Strategy::Quotient).unwrap();
    assert_eq!(sorted_formulas(&again), sorted_formulas(&set));
}

#[test]
fn im_translation_forms_agree() {
    use o2basis::translator::{check_translation, eval_poly, translate_with, Assignment, ImForm};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for preset in ["t3", "piez", "sym3", "t4", "photoela", "ela", "ela2", "piezo-law"] {
        for group in [Group::SO2, Group::O2] {
            let set = basis(preset, group, Mode::Covariants);
            for g in set.generators.iter().filter(|g| g.order <= 4 && g.degree <= 5) {
                let Ok(trace) = translate_with(g, &set.layout, ImForm::Trace) else { continue };
                let canonical = translate_with(g, &set.layout, ImForm::Canonical).unwrap();
                let minus = translate_with(g, &set.layout, ImForm::Minus).unwrap();
                check_translation(g, &trace, &set.layout, 3, 11).unwrap();
                for _ in 0..3 {
                    let a = Assignment::random(&set.layout, &mut rng);
                    let v = eval_poly(&canonical, &a).unwrap();
                    assert_eq!(eval_poly(&minus, &a).unwrap(), v);
                    assert_eq!(eval_poly(&trace, &a).unwrap(), v);
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 100, "{checked}");
}
