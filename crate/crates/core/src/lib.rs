//! Minimal integrity bases for the SO(2) and O(2) invariant and covariant
//! algebras of plane tensors.
//!
//! Everything is computed in exact arithmetic: rationals for tensors and
//! matrices, Gaussian rationals for polynomials in the complex harmonic
//! coordinates `z_k`, and plain integers for the Diophantine side.
//!
//! The pipeline is
//! tensor space -> [`harmonic`] decomposition -> [`diophantine`] Hilbert basis
//! -> [`basis_builder`] generators -> [`cleaner`] (O(2) only) ->
//! [`translator`] tensor formulas.

pub mod basis_builder;
pub mod cleaner;
pub mod cli;
pub mod diophantine;
pub mod error;
pub mod harmonic;
pub mod linalg;
pub mod poly_algebra;
pub mod tensor_core;
pub mod translator;

pub use error::{Error, Result};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;

/// Exact rational number.
pub type Rational = BigRational;
/// Exact Gaussian rational `a + ib`.
pub type Gaussian = Complex<BigRational>;

/// Rational from a pair of machine integers.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Gaussian rational from two rationals.
pub fn gauss(re: Rational, im: Rational) -> Gaussian {
    Complex::new(re, im)
}

/// Symmetry group acting on the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Group {
    #[serde(rename = "so2")]
    SO2,
    #[serde(rename = "o2")]
    O2,
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Group::SO2 => write!(f, "SO(2)"),
            Group::O2 => write!(f, "O(2)"),
        }
    }
}

/// Invariants of `V`, or covariants (invariants of `V ⊕ R²`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Mode {
    #[serde(rename = "invariants")]
    Invariants,
    #[serde(rename = "covariants")]
    Covariants,
}
