//! Named tensor spaces of common constitutive laws.

use num_traits::Zero;

use crate::error::contract;
use crate::harmonic::{decompose, HarmonicSignature};
use crate::tensor_core::SymmetrySpec;
use crate::{Group, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preset {
    pub name: String,
    pub description: String,
    /// Symmetry specs of the direct summands.
    pub summands: Vec<String>,
}

const FIXED: &[(&str, &str, &[&str])] = &[
    ("t3", "third-order tensor, no index symmetry", &["T3"]),
    ("piez", "piezoelectricity tensor", &["T3 sym=(23)"]),
    ("sym3", "totally symmetric third-order tensor", &["T3 sym=(123)"]),
    ("t4", "fourth-order tensor, no index symmetry", &["T4"]),
    ("photoela", "photoelasticity (also Eshelby) tensor", &["T4 sym=(12),(34)"]),
    ("ela", "elasticity tensor", &["T4 sym=(12),(34),major"]),
    ("ela2", "pair of elasticity tensors (viscoelasticity)", &["T4 sym=(12),(34),major", "T4 sym=(12),(34),major"]),
    (
        "piezo-law",
        "piezoelectric constitutive triplet: elasticity, piezoelectricity, permittivity",
        &["T4 sym=(12),(34),major", "T3 sym=(23)", "T2 sym=(12)"],
    ),
];

/// Largest `N` accepted by the `symN` family.
pub const MAX_SYM_ORDER: usize = 12;

/// All presets, including the `symN` family.
pub fn preset_catalogue() -> Vec<Preset> {
    let mut out: Vec<Preset> = FIXED
        .iter()
        .map(|(n, d, s)| Preset { name: n.to_string(), description: d.to_string(), summands: s.iter().map(|x| x.to_string()).collect() })
        .collect();
    for n in 1..=MAX_SYM_ORDER {
        if n == 3 {
            continue;
        }
        out.push(sym_preset(n));
    }
    out
}

fn sym_preset(n: usize) -> Preset {
    Preset {
        name: format!("sym{n}"),
        description: format!("totally symmetric tensor of order {n}"),
        summands: vec![format!("T{n} sym=all")],
    }
}

pub fn find_preset(name: &str) -> Result<Preset> {
    let lower = name.to_ascii_lowercase();
    let alias = match lower.as_str() {
        "triplet" => "piezo-law",
        "eshelby" => "photoela",
        "viscoela" => "ela2",
        other => other,
    };
    if let Some(p) = preset_catalogue().into_iter().find(|p| p.name == alias) {
        return Ok(p);
    }
    Err(crate::Error::Parse(format!("unknown preset `{name}` (see --list-presets)")))
}

/// One harmonic factor of a decomposed space with its basis norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorNorm {
    pub order: i32,
    /// Squared norm of the basis tensors of this factor.
    pub norm2: Rational,
}

/// Signature of the direct sum of the given symmetry specs, with the norms of
/// the explicit basis tensors in signature order (`H₋₁`, `H⁰`, then
/// harmonic factors by increasing order).
pub fn resolve_summands(summands: &[String]) -> Result<(HarmonicSignature, Vec<FactorNorm>)> {
    if summands.is_empty() {
        return contract("empty list of summands");
    }
    let mut sig = HarmonicSignature::new(0, 0, vec![])?;
    let (mut minus, mut zero, mut planes) = (Vec::new(), Vec::new(), Vec::new());
    for s in summands {
        let spec = SymmetrySpec::parse(s)?;
        let d = decompose(&spec, Group::O2)?;
        sig = sig.direct_sum(&d.signature);
        minus.extend(d.v_norm2.iter().map(|n| FactorNorm { order: -1, norm2: n.clone() }));
        zero.extend(d.u_norm2.iter().map(|n| FactorNorm { order: 0, norm2: n.clone() }));
        planes.extend(d.planes.iter().map(|p| FactorNorm { order: p.order as i32, norm2: p.norm2.clone() }));
    }
    planes.sort_by_key(|f| f.order);
    let mut norms = minus;
    norms.extend(zero);
    norms.extend(planes);
    if norms.iter().any(|f| f.norm2.is_zero()) {
        return crate::error::internal("zero basis norm in decomposition");
    }
    Ok((sig, norms))
}

impl Preset {
    pub fn resolve(&self) -> Result<(HarmonicSignature, Vec<FactorNorm>)> {
        resolve_summands(&self.summands)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(name: &str) -> String {
        find_preset(name).unwrap().resolve().unwrap().0.to_grammar()
    }

    #[test]
    fn preset_signatures() {
        assert_eq!(sig("photoela"), "H:-1,0*2,2*2,4");
        assert_eq!(sig("piezo-law"), "H:0*3,1*2,2*2,3,4");
        assert_eq!(sig("sym12"), "H:0,2,4,6,8,10,12");
        assert_eq!(sig("t4"), "H:-1*3,0*3,2*4,4");
        assert_eq!(sig("ela2"), "H:0*4,2*2,4*2");
        assert_eq!(sig("sym5"), "H:1,3,5");
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(find_preset("nope"), Err(crate::Error::Parse(_))));
        assert_eq!(find_preset("Triplet").unwrap().name, "piezo-law");
    }
}
