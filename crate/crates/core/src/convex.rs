//! Convex bodies represented by the spectrum of their support function, and the
//! geometric functionals computed from it.
//!
//! Every functional here is spectral: curvature integrals reduce to sums over
//! degrees of `(d-1) - lambda_n` or `1 - lambda_n / (d-1)` weights, so no
//! pointwise curvature is ever divided by.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{ball_volume, sphere_area};
use crate::spectral::{HarmonicSpectrum, SpectrumDim};
use crate::transform::{surface_gradient_hessian, QuadratureGrid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Smallest eigenvalue of `A = h I + nabla^2 h` over the grid.
    pub min_eigenvalue: f64,
    pub resolution: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Convexity {
    Uncertified,
    Certified(Certificate),
    Failed(Certificate),
}

impl Convexity {
    pub fn flag(&self) -> &'static str {
        match self {
            Convexity::Uncertified => "uncertified",
            Convexity::Certified(_) => "certified",
            Convexity::Failed(_) => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportBody {
    spectrum: HarmonicSpectrum,
    convexity: Convexity,
}

#[inline]
pub(crate) fn sphere_eigenvalue(n: usize, d: usize) -> f64 {
    (n * (n + d - 2)) as f64
}

impl SupportBody {
    pub fn new(spectrum: HarmonicSpectrum) -> Result<Self> {
        if spectrum.dim().d().is_none() {
            return Err(Error::UnsupportedDimension("support functions live on spheres, not abstract spectra".into()));
        }
        Ok(Self { spectrum, convexity: Convexity::Uncertified })
    }

    /// The ball of radius `r` centered at the origin.
    pub fn ball(d: usize, r: f64, band_limit: usize) -> Result<Self> {
        let mut s = HarmonicSpectrum::zeros(SpectrumDim::Sphere(d), band_limit)?;
        s.block_mut(0).unwrap()[0] = r * sphere_area(d).sqrt();
        Self::new(s)
    }

    pub fn d(&self) -> usize {
        self.spectrum.dim().d().expect("checked at construction")
    }

    pub fn spectrum(&self) -> &HarmonicSpectrum {
        &self.spectrum
    }

    pub fn convexity(&self) -> &Convexity {
        &self.convexity
    }

    /// Runs [`certify_convex`] and records the outcome.
    pub fn certified(mut self, grid: &QuadratureGrid) -> Result<Self> {
        let cert = certify_convex(&self, grid)?;
        self.convexity = if cert.min_eigenvalue > 0.0 {
            Convexity::Certified(cert)
        } else {
            Convexity::Failed(cert)
        };
        Ok(self)
    }

    /// Certifies on the default grid for the body's band limit (at least 8).
    pub fn certified_default(self) -> Result<Self> {
        let grid = QuadratureGrid::for_band_limit(self.d(), self.spectrum.band_limit().max(8))?;
        self.certified(&grid)
    }

    /// `t K`. Certificates scale with `t > 0`.
    pub fn scaled(&self, t: f64) -> Self {
        let convexity = match &self.convexity {
            Convexity::Certified(c) if t > 0.0 => {
                Convexity::Certified(Certificate { min_eigenvalue: t * c.min_eigenvalue, resolution: c.resolution.clone() })
            }
            _ => Convexity::Uncertified,
        };
        Self { spectrum: self.spectrum.scaled(t), convexity }
    }

    /// `K + v`: adds `v . theta` to the support function. Convexity is unchanged.
    pub fn translated(&self, v: &[f64]) -> Result<Self> {
        let d = self.d();
        if v.len() != d {
            return Err(Error::DimensionMismatch(format!("d = {d}"), format!("vector of length {}", v.len())));
        }
        let mut spectrum = self.spectrum.with_band_limit(self.spectrum.band_limit().max(1));
        let block = spectrum.block_mut(1).unwrap();
        let add = degree_one_coefficients(d, v);
        for (b, a) in block.iter_mut().zip(add) {
            *b += a;
        }
        Ok(Self { spectrum, convexity: self.convexity.clone() })
    }

    /// Minkowski sum: support functions add.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        Self::new(self.spectrum.sum(&other.spectrum)?)
    }
}

/// Coefficients of `v . theta` in the degree-1 block basis.
pub(crate) fn degree_one_coefficients(d: usize, v: &[f64]) -> Vec<f64> {
    let k = ball_volume(d).sqrt();
    match d {
        3 => vec![v[1] * k, v[2] * k, v[0] * k],
        _ => v.iter().map(|x| x * k).collect(),
    }
}

/// Smallest eigenvalue of `A = h I + nabla^2 h` over the nodes of `grid`.
pub fn certify_convex(body: &SupportBody, grid: &QuadratureGrid) -> Result<Certificate> {
    let d = body.d();
    if d > 3 {
        return Err(Error::UnsupportedDimension(format!("convexity certification needs d in {{2, 3}}, got {d}")));
    }
    let min_eigenvalue = surface_gradient_hessian(&body.spectrum, grid)?
        .iter()
        .map(|a| a.min_eigenvalue())
        .fold(f64::INFINITY, f64::min);
    Ok(Certificate { min_eigenvalue, resolution: grid.describe() })
}

pub fn mean_width(body: &SupportBody) -> f64 {
    2.0 * body.spectrum.blocks()[0][0] / sphere_area(body.d()).sqrt()
}

/// `z(K) = |B^d|^{-1} int h theta dtheta`, read off the degree-1 block.
pub fn steiner_point(body: &SupportBody) -> Vec<f64> {
    let d = body.d();
    let Some(b) = body.spectrum.block(1) else {
        return vec![0.0; d];
    };
    let k = ball_volume(d).sqrt();
    match d {
        3 => vec![b[2] / k, b[0] / k, b[1] / k],
        _ => b.iter().map(|x| x / k).collect(),
    }
}

/// Support function of the Steiner ball: degrees 0 and 1 of `h`.
pub fn steiner_ball_support(body: &SupportBody) -> HarmonicSpectrum {
    body.spectrum.restricted(|n| n <= 1)
}

/// L^2 distance between support functions.
pub fn delta2(k: &SupportBody, l: &SupportBody) -> Result<f64> {
    Ok(k.spectrum.difference(&l.spectrum)?.norm2().sqrt())
}

/// `delta_2(K, B(K))^2 = sum_{n >= 2} |h_n|^2`.
pub fn delta2_to_steiner_ball_sq(body: &SupportBody) -> f64 {
    body.spectrum.block_norms2().iter().skip(2).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureIntegrals {
    /// `int_Sigma H_{d-2} dS = int h dtheta`.
    pub int_h_dm2: f64,
    /// `int_Sigma H_{d-3} dS = (d-1)^{-1} <h, Delta h + (d-1) h>`.
    pub int_h_dm3: f64,
    /// `int_Sigma H_{d-2}^2 / H_{d-1} dS = int (h + Delta h / (d-1))^2 dtheta`.
    pub ros_term: f64,
}

pub fn curvature_integrals(body: &SupportBody) -> CurvatureIntegrals {
    let d = body.d();
    let dm1 = (d - 1) as f64;
    let norms = body.spectrum.block_norms2();
    let mut int_h_dm3 = 0.0;
    let mut ros_term = 0.0;
    for (n, b) in norms.iter().enumerate() {
        let lambda = sphere_eigenvalue(n, d);
        int_h_dm3 += (dm1 - lambda) * b;
        let rho = 1.0 - lambda / dm1;
        ros_term += rho * rho * b;
    }
    CurvatureIntegrals {
        int_h_dm2: sphere_area(d).sqrt() * body.spectrum.blocks()[0][0],
        int_h_dm3: int_h_dm3 / dm1,
        ros_term,
    }
}

/// `V(K, L) = V(K, L, B, ..., B) = (d(d-1))^{-1} <h_K, Delta h_L + (d-1) h_L>`.
pub fn mixed_volume(k: &SupportBody, l: &SupportBody) -> Result<f64> {
    k.spectrum.check_same_dim(&l.spectrum)?;
    let d = k.d();
    let dm1 = (d - 1) as f64;
    let sum: f64 = k
        .spectrum
        .blocks()
        .iter()
        .zip(l.spectrum.blocks())
        .enumerate()
        .map(|(n, (a, b))| (dm1 - sphere_eigenvalue(n, d)) * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
        .sum();
    Ok(sum / (d as f64 * dm1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quermassintegrals {
    pub w_dm1: f64,
    pub w_dm2: f64,
}

pub fn quermassintegrals(body: &SupportBody) -> Quermassintegrals {
    let c = curvature_integrals(body);
    let d = body.d() as f64;
    Quermassintegrals { w_dm1: c.int_h_dm2 / d, w_dm2: c.int_h_dm3 / d }
}

/// Spectrum of `rho = H_{d-2} / H_{d-1} = h + Delta h / (d-1)`.
pub fn rho_spectrum(body: &SupportBody) -> HarmonicSpectrum {
    let d = body.d();
    let dm1 = (d - 1) as f64;
    body.spectrum.scale_blocks(|n| 1.0 - sphere_eigenvalue(n, d) / dm1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricSummary {
    pub mean_width: f64,
    pub steiner_point: Vec<f64>,
    pub int_h_dm2: f64,
    pub int_h_dm3: f64,
    pub ros_term: f64,
    pub delta2_to_steiner_ball: f64,
    pub w_dm1: f64,
    pub w_dm2: f64,
}

pub fn summary(body: &SupportBody) -> GeometricSummary {
    let c = curvature_integrals(body);
    let q = quermassintegrals(body);
    GeometricSummary {
        mean_width: mean_width(body),
        steiner_point: steiner_point(body),
        int_h_dm2: c.int_h_dm2,
        int_h_dm3: c.int_h_dm3,
        ros_term: c.ros_term,
        delta2_to_steiner_ball: delta2_to_steiner_ball_sq(body).sqrt(),
        w_dm1: q.w_dm1,
        w_dm2: q.w_dm2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn perturbed(d: usize, degree: usize, eps: f64, band: usize) -> SupportBody {
        let mut b = SupportBody::ball(d, 1.0, band).unwrap();
        b.spectrum.block_mut(degree).unwrap()[0] = eps;
        b
    }

    #[test]
    fn ball_functionals_d3() {
        let r = 1.7;
        let b = SupportBody::ball(3, r, 4).unwrap();
        let c = curvature_integrals(&b);
        assert!((c.int_h_dm2 - 4.0 * PI * r).abs() < 1e-12);
        assert!((c.int_h_dm3 - 4.0 * PI * r * r).abs() < 1e-12);
        assert!((c.ros_term - 4.0 * PI * r * r).abs() < 1e-12);
        assert!((mean_width(&b) - 2.0 * r).abs() < 1e-14);
        assert_eq!(steiner_point(&b), vec![0.0; 3]);
        assert_eq!(delta2_to_steiner_ball_sq(&b), 0.0);
    }

    #[test]
    fn perturbed_functionals_d3() {
        let eps = 0.05;
        let b = perturbed(3, 2, eps, 4);
        let c = curvature_integrals(&b);
        assert!((c.int_h_dm2 - 4.0 * PI).abs() < 1e-12);
        assert!((c.int_h_dm3 - (4.0 * PI - 2.0 * eps * eps)).abs() < 1e-12);
        assert!((c.ros_term - (4.0 * PI + 4.0 * eps * eps)).abs() < 1e-12);
    }

    #[test]
    fn circle_functionals() {
        let r = 2.0;
        let b = SupportBody::ball(2, r, 4).unwrap();
        let c = curvature_integrals(&b);
        assert!((c.int_h_dm2 - 2.0 * PI * r).abs() < 1e-12);
        assert!((c.int_h_dm3 - 2.0 * PI * r * r).abs() < 1e-12);
        assert!((c.ros_term - 2.0 * PI * r * r).abs() < 1e-12);
    }

    #[test]
    fn steiner_point_of_translated_ball() {
        for d in [2usize, 3, 5] {
            let v: Vec<f64> = (0..d).map(|i| 0.1 * (i as f64 + 1.0) - 0.25).collect();
            let b = SupportBody::ball(d, 1.0, 3).unwrap().translated(&v).unwrap();
            let z = steiner_point(&b);
            for (a, e) in z.iter().zip(&v) {
                assert!((a - e).abs() < 1e-14);
            }
            // Steiner ball of a ball is the ball itself
            assert_eq!(steiner_ball_support(&b), *b.spectrum());
        }
    }

    #[test]
    fn steiner_ball_truncates() {
        let b = perturbed(3, 3, 0.1, 4).translated(&[0.1, 0.2, 0.3]).unwrap();
        let sb = steiner_ball_support(&b);
        let expected = SupportBody::ball(3, 1.0, 4).unwrap().translated(&[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(sb, *expected.spectrum());
    }

    #[test]
    fn delta2_examples() {
        let b = perturbed(3, 2, 0.05, 4);
        assert_eq!(delta2(&b, &b).unwrap(), 0.0);
        let sb = SupportBody::new(steiner_ball_support(&b)).unwrap();
        assert!((delta2(&b, &sb).unwrap() - 0.05).abs() < 1e-15);
        let r1 = SupportBody::ball(3, 2.0, 2).unwrap();
        let r2 = SupportBody::ball(3, 0.5, 5).unwrap();
        assert!((delta2(&r1, &r2).unwrap() - 1.5 * (4.0 * PI).sqrt()).abs() < 1e-13);
        let c = SupportBody::ball(2, 1.0, 2).unwrap();
        assert!(delta2(&r1, &c).is_err());
    }

    #[test]
    fn mixed_volume_examples() {
        let k = SupportBody::ball(3, 2.0, 3).unwrap();
        let l = SupportBody::ball(3, 0.5, 3).unwrap();
        assert!((mixed_volume(&k, &l).unwrap() - 4.0 * PI / 3.0).abs() < 1e-13);
        let p = perturbed(3, 3, 0.04, 4);
        let q = quermassintegrals(&p);
        assert!((mixed_volume(&p, &p).unwrap() - q.w_dm2).abs() < 1e-12 * q.w_dm2);
    }

    #[test]
    fn quermassintegral_examples() {
        let b = SupportBody::ball(3, 1.0, 2).unwrap();
        let q = quermassintegrals(&b);
        assert!((q.w_dm1 - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((q.w_dm2 - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((crate::measure::kappa(3) - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((crate::measure::kappa(2) - PI).abs() < 1e-15);
        let p = perturbed(3, 2, 0.05, 4);
        let t = 2.5;
        assert!((quermassintegrals(&p.scaled(t)).w_dm1 - t * quermassintegrals(&p).w_dm1).abs() < 1e-12);
    }

    #[test]
    fn certification_examples() {
        let grid = QuadratureGrid::for_band_limit(3, 8).unwrap();
        let ball = SupportBody::ball(3, 1.0, 4).unwrap();
        assert!((certify_convex(&ball, &grid).unwrap().min_eigenvalue - 1.0).abs() < 1e-12);
        let p = perturbed(3, 2, 0.05, 4).certified(&grid).unwrap();
        assert!(matches!(p.convexity(), Convexity::Certified(c) if c.min_eigenvalue > 0.0));

        let mut c = SupportBody::ball(2, 1.0, 4).unwrap();
        c.spectrum.block_mut(2).unwrap()[0] = 0.5 * PI.sqrt();
        let grid2 = QuadratureGrid::for_band_limit(2, 8).unwrap();
        let cert = certify_convex(&c, &grid2).unwrap();
        assert!((cert.min_eigenvalue + 0.5).abs() < 1e-12);
        assert_eq!(c.certified(&grid2).unwrap().convexity().flag(), "failed");

        let high = SupportBody::ball(4, 1.0, 2).unwrap();
        assert!(certify_convex(&high, &grid).is_err());
    }

    #[test]
    fn abstract_spectra_are_not_bodies() {
        assert!(SupportBody::new(HarmonicSpectrum::from_block_norms(&[1.0]).unwrap()).is_err());
    }
}
