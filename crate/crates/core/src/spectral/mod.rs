//! Exact eigenvalue and coefficient algebra for the generalized Poincare
//! quadratic forms, and their evaluation in spectral space.
//!
//! Coefficient algebra is carried out over `BigRational`; floating point only
//! enters through the per-degree squared norms of a spectrum.

mod eigen;
mod form;
mod poly;
mod spectrum;

pub use eigen::{eigenvalue, EigenKind, EigenSystem};
pub use form::{poincare_form, poincare_form_via_coeffs, FormValue};
pub use poly::{
    closed_form_coeff1, closed_form_coeff2, coeff1_factorial, coeff1_product, coeff2_factorial,
    coeff2_product, elementary_symmetric, expand_c, expand_p_general_m, general_m_c_closed_form,
    general_m_coefficients,
    BPolynomial, CoefficientPolynomial, GeneralMCoefficients,
};
pub use spectrum::{
    checked_harmonic_space_dim, coefficient_count, harmonic_space_dim, HarmonicSpectrum, SpectrumDim, VANISHING_TOL,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

pub(crate) fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidParameter(format!("non-finite value {x}")))
}

pub(crate) fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}
