//! Per-order, per-degree histograms of the application bases against the
//! published tables (degrees as implied by each row's own formula).

mod common;

use common::{basis, tables};
use o2basis::poly_algebra::GeneratorKind;
use o2basis::Group;

/// Photoelasticity under O(2): the table lists 24 covariants; the computed
/// basis also contains the indecomposable `ξ²` at order 0, degree 2.
const PHOTOELA_EXTRA: ((u32, u32), usize) = ((0, 2), 1);

fn check(preset: &str, group: Group) {
    let fx = &tables()[preset];
    let got = basis(preset, group, fx.mode()).histogram();
    let mut want = fx.histogram(group);
    if preset == "photoela" && group == Group::O2 {
        *want.entry(PHOTOELA_EXTRA.0).or_insert(0) += PHOTOELA_EXTRA.1;
    }
    assert_eq!(got, want, "{preset} {group}");
}

macro_rules! table_tests {
    ($($name:ident: $preset:literal,)*) => {
        mod so2 {
            use super::*;
            $(#[test] fn $name() { check($preset, Group::SO2); })*
        }
        mod o2 {
            use super::*;
            $(#[test] fn $name() { check($preset, Group::O2); })*
        }
    };
}

table_tests! {
    t3: "t3",
    piez: "piez",
    sym3: "sym3",
    t4: "t4",
    photoela: "photoela",
    ela: "ela",
    ela2: "ela2",
    piezo_law: "piezo-law",
    sym12: "sym12",
}

#[test]
fn photoela_o2_differs_from_table_only_by_xi_squared() {
    let fx = &tables()["photoela"];
    let set = basis("photoela", Group::O2, fx.mode());
    let table_total: usize = fx.histogram(Group::O2).values().sum();
    assert_eq!(table_total, 24);
    assert_eq!(set.len(), 25);
    let xi2 = set
        .generators
        .iter()
        .filter(|g| matches!(&g.kind, GeneratorKind::Product(fs) if fs.len() == 2 && fs.iter().all(|f| f.kind == GeneratorKind::Xi(0))))
        .count();
    assert_eq!(xi2, 1);
}

#[test]
fn so2_total_is_isotropic_plus_hemitropic() {
    use o2basis::poly_algebra::Parity;
    for preset in ["t3", "piez", "sym3", "t4", "photoela", "ela", "ela2"] {
        let set = basis(preset, Group::SO2, tables()[preset].mode());
        let iso = set.count_by_parity(Parity::Isotropic);
        let hemi = set.count_by_parity(Parity::Hemitropic);
        assert_eq!(iso + hemi, set.len(), "{preset}");
        assert!(hemi > 0, "{preset}");
    }
}
