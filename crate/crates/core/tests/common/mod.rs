//! Shared helpers for the integration suites.
#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use serde::Deserialize;

use o2basis::basis_builder::GeneratorSet;
use o2basis::cleaner::minimal_basis;
use o2basis::cli::presets::find_preset;
use o2basis::harmonic::HarmonicSignature;
use o2basis::tensor_core::{HomogeneousPoly, Tensor};
use o2basis::{Group, Mode, Rational};

/// Expected `(order, degree) -> count` histograms, one per preset.
#[derive(Debug, Deserialize)]
pub struct TableFixture {
    pub mode: String,
    pub so2: Vec<[u32; 3]>,
    pub o2: Vec<[u32; 3]>,
}

impl TableFixture {
    pub fn mode(&self) -> Mode {
        match self.mode.as_str() {
            "invariants" => Mode::Invariants,
            _ => Mode::Covariants,
        }
    }

    pub fn histogram(&self, group: Group) -> BTreeMap<(u32, u32), usize> {
        let rows = match group {
            Group::SO2 => &self.so2,
            Group::O2 => &self.o2,
        };
        rows.iter().map(|[o, d, c]| ((*o, *d), *c as usize)).collect()
    }
}

pub fn tables() -> &'static BTreeMap<String, TableFixture> {
    static T: OnceLock<BTreeMap<String, TableFixture>> = OnceLock::new();
    T.get_or_init(|| serde_json::from_str(include_str!("../fixtures/tables.json")).expect("fixture parses"))
}

pub fn preset_signature(name: &str) -> HarmonicSignature {
    find_preset(name).expect("known preset").resolve().expect("preset resolves").0
}

type BasisCache = std::sync::Mutex<BTreeMap<(String, u8, u8), GeneratorSet>>;

/// Bases are memoised per process since several suites share them.
pub fn basis(preset: &str, group: Group, mode: Mode) -> GeneratorSet {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    let key = (preset.to_string(), group as u8, mode as u8);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap().get(&key) {
        return b.clone();
    }
    let (b, _) = minimal_basis(&preset_signature(preset), group, mode).expect("basis computes");
    cache.lock().unwrap().insert(key, b.clone());
    b
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Small nonzero-denominator rationals.
pub fn arb_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

pub fn arb_poly(max_degree: usize) -> impl Strategy<Value = HomogeneousPoly> {
    (0..=max_degree)
        .prop_flat_map(|n| prop::collection::vec(arb_rational(), n + 1))
        .prop_map(|c| HomogeneousPoly::from_coeffs(c).expect("nonempty coefficients"))
}

/// Totally symmetric tensor together with its polynomial.
pub fn arb_sym_tensor(max_order: usize) -> impl Strategy<Value = (Tensor, HomogeneousPoly)> {
    arb_poly(max_order).prop_map(|p| (p.polarize(), p))
}

/// Arbitrary (non-symmetric) tensor of the given order.
pub fn arb_tensor(order: usize) -> impl Strategy<Value = Tensor> {
    prop::collection::vec(arb_rational(), 1 << order).prop_map(move |c| Tensor::from_components(order, c).expect("2^n components"))
}
