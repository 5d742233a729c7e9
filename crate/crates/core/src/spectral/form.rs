use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{expand_c, rational_from_f64, rational_to_f64, EigenSystem, HarmonicSpectrum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormValue {
    pub value: f64,
    /// Every block above degree `m` vanishes, i.e. `F = sum_{n=l}^{m} F_n`.
    pub equality: bool,
}

fn admissible(spectrum: &HarmonicSpectrum, eigs: &EigenSystem, l: i64, m: i64) -> Result<(usize, usize)> {
    if l < 1 || m < l {
        return Err(Error::InvalidRange { l, m });
    }
    let (l, m) = (l as usize, m as usize);
    if let (Some(a), Some(b)) = (spectrum.dim().d(), eigs.dim()) {
        if a != b {
            return Err(Error::DimensionMismatch(format!("spectrum d = {a}"), format!("eigenvalues d = {b}")));
        }
    }
    let needed = spectrum.band_limit().max(m);
    if needed > eigs.max_degree() {
        return Err(Error::EigenvaluesExhausted { degree: needed, max: eigs.max_degree() });
    }
    let total = spectrum.norm2();
    for n in 0..l.min(spectrum.band_limit() + 1) {
        if !spectrum.is_vanishing(n, total) {
            return Err(Error::NonVanishingBlock { degree: n, norm2: spectrum.block_norm2(n), min_degree: l });
        }
    }
    Ok((l, m))
}

/// `< prod_{j=l}^{m} (-Delta - lambda_j) F, F > = sum_{n>m} prod_j (lambda_n - lambda_j) |F_n|^2`.
///
/// The spectrum must vanish below degree `l`; this is checked, not clamped.
pub fn poincare_form(spectrum: &HarmonicSpectrum, eigs: &EigenSystem, l: i64, m: i64) -> Result<FormValue> {
    let (l, m) = admissible(spectrum, eigs, l, m)?;
    let total = spectrum.norm2();
    let mut value = 0.0;
    let mut equality = true;
    for n in (m + 1)..=spectrum.band_limit() {
        let lambda_n = eigs.lambda(n)?;
        let weight = (l..=m).try_fold(BigRational::one(), |acc, j| {
            eigs.lambda(j).map(|lj| acc * (lambda_n - lj))
        })?;
        value += rational_to_f64(&weight) * spectrum.block_norm2(n);
        equality &= spectrum.is_vanishing(n, total);
    }
    Ok(FormValue { value, equality })
}

/// The same quadratic form through the expanded coefficients:
/// `sum_k c_{l,m,k} <F, (-Delta)^k F>`, with `<F, (-Delta)^k F> = sum_n lambda_n^k |F_n|^2`.
///
/// The spectral moments are accumulated exactly from the (exactly representable)
/// floating-point block norms, so the cancellation between terms is exact.
pub fn poincare_form_via_coeffs(spectrum: &HarmonicSpectrum, eigs: &EigenSystem, l: i64, m: i64) -> Result<f64> {
    let (l, m) = admissible(spectrum, eigs, l, m)?;
    let poly = expand_c(l as i64, m as i64, eigs)?;
    let norms = spectrum
        .block_norms2()
        .into_iter()
        .map(rational_from_f64)
        .collect::<Result<Vec<_>>>()?;
    let mut total = BigRational::zero();
    for (k, c) in poly.coeffs.iter().enumerate() {
        let mut moment = BigRational::zero();
        for (n, norm2) in norms.iter().enumerate() {
            if norm2.is_zero() {
                continue;
            }
            let lambda = eigs.lambda(n)?;
            let mut power = BigRational::one();
            for _ in 0..k {
                power *= lambda;
            }
            moment += power * norm2;
        }
        total += c * moment;
    }
    Ok(rational_to_f64(&total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectrumDim;

    fn single_block(d: usize, degree: usize, norm2: f64, band: usize) -> HarmonicSpectrum {
        let mut f = HarmonicSpectrum::zeros(SpectrumDim::Sphere(d), band).unwrap();
        f.block_mut(degree).unwrap()[0] = norm2.sqrt();
        f
    }

    #[test]
    fn equality_case_in_range() {
        let eigs = EigenSystem::sphere(3, 10).unwrap();
        let f = single_block(3, 2, 1.0, 5);
        assert_eq!(poincare_form(&f, &eigs, 2, 3).unwrap(), FormValue { value: 0.0, equality: true });
    }

    #[test]
    fn product_of_gaps() {
        let eigs = EigenSystem::sphere(3, 10).unwrap();
        let f = single_block(3, 3, 1.0, 4);
        let v = poincare_form(&f, &eigs, 1, 2).unwrap();
        assert_eq!(v.value, 60.0);
        assert!(!v.equality);
        assert_eq!(poincare_form_via_coeffs(&f, &eigs, 1, 2).unwrap(), 60.0);
    }

    #[test]
    fn first_eigenspace_on_circle() {
        let eigs = EigenSystem::sphere(2, 10).unwrap();
        let f = single_block(2, 1, 1.0, 3);
        assert_eq!(poincare_form(&f, &eigs, 1, 1).unwrap(), FormValue { value: 0.0, equality: true });
    }

    #[test]
    fn via_coeffs_examples() {
        let eigs = EigenSystem::sphere(3, 10).unwrap();
        let zero = HarmonicSpectrum::zeros(SpectrumDim::Sphere(3), 6).unwrap();
        assert_eq!(poincare_form_via_coeffs(&zero, &eigs, 1, 3).unwrap(), 0.0);
        let f = single_block(3, 2, 1.0, 4);
        assert_eq!(poincare_form_via_coeffs(&f, &eigs, 1, 1).unwrap(), 4.0);
    }

    #[test]
    fn rejects_low_degree_mass() {
        let eigs = EigenSystem::sphere(3, 10).unwrap();
        let f = single_block(3, 1, 1.0, 4);
        assert!(matches!(
            poincare_form(&f, &eigs, 2, 3),
            Err(Error::NonVanishingBlock { degree: 1, .. })
        ));
        assert!(poincare_form_via_coeffs(&f, &eigs, 2, 3).is_err());
        assert!(matches!(poincare_form(&f, &eigs, 0, 3), Err(Error::InvalidRange { .. })));
    }

    #[test]
    fn numerical_dust_below_l_is_tolerated() {
        let eigs = EigenSystem::sphere(3, 10).unwrap();
        let mut f = single_block(3, 3, 1.0, 4);
        f.block_mut(0).unwrap()[0] = 1e-8;
        assert!(poincare_form(&f, &eigs, 1, 2).is_ok());
    }

    #[test]
    fn abstract_manifold_mode() {
        let eigs = EigenSystem::from_eigenvalues(
            [0, 3, 5, 11].iter().map(|&x| crate::spectral::int(x)).collect(),
        )
        .unwrap();
        let f = HarmonicSpectrum::from_block_norms(&[0.0, 1.0, 2.0, 0.5]).unwrap();
        let v = poincare_form(&f, &eigs, 1, 2).unwrap();
        assert!((v.value - (11.0 - 3.0) * (11.0 - 5.0) * 0.5).abs() < 1e-12);
        assert!(!v.equality);
        let w = poincare_form_via_coeffs(&f, &eigs, 1, 2).unwrap();
        assert!((v.value - w).abs() <= 1e-12 * v.value);
    }

    #[test]
    fn eigenvalue_table_must_cover_band_limit() {
        let eigs = EigenSystem::sphere(3, 3).unwrap();
        let f = single_block(3, 2, 1.0, 6);
        assert!(matches!(poincare_form(&f, &eigs, 1, 2), Err(Error::EigenvaluesExhausted { .. })));
    }
}
