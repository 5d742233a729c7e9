use super::grid::QuadratureGrid;
use super::sht::{evaluate_jet, synthesize_grid, SurfaceJet};
use crate::error::{Error, Result};
use crate::spectral::{HarmonicSpectrum, SpectrumDim};

/// `A = h I + nabla^2 h` at one point, in an orthonormal tangent frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapeMatrix {
    /// `h + h''` on `S^1`.
    Scalar(f64),
    /// Symmetric 2x2 matrix in the frame `(e_theta, e_phi / sin theta)` on `S^2`.
    Sym2 { a11: f64, a12: f64, a22: f64 },
}

impl ShapeMatrix {
    pub fn min_eigenvalue(&self) -> f64 {
        match *self {
            ShapeMatrix::Scalar(a) => a,
            ShapeMatrix::Sym2 { a11, a12, a22 } => {
                let mean = 0.5 * (a11 + a22);
                let half = 0.5 * (a11 - a22);
                mean - half.hypot(a12)
            }
        }
    }

    pub fn trace(&self) -> f64 {
        match *self {
            ShapeMatrix::Scalar(a) => a,
            ShapeMatrix::Sym2 { a11, a22, .. } => a11 + a22,
        }
    }

    fn from_jet(d: usize, theta: f64, jet: &SurfaceJet) -> Self {
        if d == 2 {
            return ShapeMatrix::Scalar(jet.h + jet.h_tt);
        }
        let (s, c) = theta.sin_cos();
        let cot = c / s;
        ShapeMatrix::Sym2 {
            a11: jet.h + jet.h_tt,
            a12: (jet.h_tp - cot * jet.h_p) / s,
            a22: jet.h + jet.h_pp / (s * s) + cot * jet.h_t,
        }
    }
}

fn dim_of(spectrum: &HarmonicSpectrum) -> Result<usize> {
    match spectrum.dim() {
        SpectrumDim::Sphere(d @ (2 | 3)) => Ok(d),
        other => Err(Error::UnsupportedDimension(other.to_string())),
    }
}

/// `A = h delta + nabla^2 h` at every node of `grid`, derivatives taken spectrally.
pub fn surface_gradient_hessian(spectrum: &HarmonicSpectrum, grid: &QuadratureGrid) -> Result<Vec<ShapeMatrix>> {
    let d = dim_of(spectrum)?;
    if grid.d() != d {
        return Err(Error::DimensionMismatch(spectrum.dim().to_string(), grid.describe()));
    }
    let jets = synthesize_grid(spectrum, grid, true)?;
    let angles = grid.angles();
    Ok(jets
        .iter()
        .zip(angles)
        .map(|(jet, (theta, _))| ShapeMatrix::from_jet(d, theta, jet))
        .collect())
}

/// `A` at a single point; `theta` must avoid the poles on `S^2`.
pub fn hessian_at(spectrum: &HarmonicSpectrum, theta: f64, phi: f64) -> Result<ShapeMatrix> {
    let d = dim_of(spectrum)?;
    let jet = evaluate_jet(spectrum, theta, phi)?;
    Ok(ShapeMatrix::from_jet(d, theta, &jet))
}
