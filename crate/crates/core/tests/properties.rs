//! Randomised properties over exact rationals.

mod common;

use common::props::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn tensor_operations_match_polynomial_operations(case in binary_case()) {
        check_operations(case)?;
    }

    #[test]
    fn polarization_round_trips((sym, raw) in polarization_case()) {
        check_polarization(sym, raw)?;
    }

    #[test]
    fn tensor_operations_are_equivariant(case in equivariance_case()) {
        check_tensor_equivariance(case)?;
    }

    #[test]
    fn generators_are_equivariant(case in generator_case()) {
        check_generator_equivariance(case)?;
    }

    #[test]
    fn harmonic_polynomial_identities(case in identity_case()) {
        check_identities(case)?;
    }

    #[test]
    fn im_im_product_identity(case in im_im_case()) {
        check_im_im(case)?;
    }

    #[test]
    fn harmonic_projection(case in projection_case()) {
        check_projection(case)?;
    }

    #[test]
    fn hilbert_basis_is_complete(orders in hilbert_case()) {
        check_hilbert_basis(orders)?;
    }
}
