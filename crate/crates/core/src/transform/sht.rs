use std::f64::consts::PI;

use super::grid::QuadratureGrid;
use super::legendre::{index, LegendreTable};
use crate::error::{Error, Result};
use crate::spectral::{HarmonicSpectrum, SpectrumDim};

/// Samples of a function on the nodes of a quadrature grid.
#[derive(Debug, Clone)]
pub struct GridFunction<'g> {
    pub grid: &'g QuadratureGrid,
    pub values: Vec<f64>,
}

impl<'g> GridFunction<'g> {
    pub fn new(grid: &'g QuadratureGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "{} samples for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node direction.
    pub fn from_fn(grid: &'g QuadratureGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = grid.directions().iter().map(|u| f(u)).collect();
        Self { grid, values }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&x| f(x)).collect() }
    }
}

/// Value and angular derivatives of a function at one point. On `S^1` only
/// `h`, `h_t` and `h_tt` are meaningful.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SurfaceJet {
    pub h: f64,
    pub h_t: f64,
    pub h_tt: f64,
    pub h_p: f64,
    pub h_pp: f64,
    pub h_tp: f64,
}

fn expect_dim(spectrum: &HarmonicSpectrum, d: usize) -> Result<()> {
    if spectrum.dim() != SpectrumDim::Sphere(d) {
        return Err(Error::DimensionMismatch(spectrum.dim().to_string(), format!("S^{}", d - 1)));
    }
    Ok(())
}

fn order_norm(m: usize) -> f64 {
    if m == 0 {
        1.0 / (2.0 * PI).sqrt()
    } else {
        1.0 / PI.sqrt()
    }
}

/// Synthesis on `S^1` at the given angles.
pub(crate) fn synthesize_circle(spectrum: &HarmonicSpectrum, angles: &[f64], derivatives: bool) -> Result<Vec<SurfaceJet>> {
    expect_dim(spectrum, 2)?;
    let n_max = spectrum.band_limit();
    let a0 = spectrum.blocks()[0][0] * order_norm(0);
    Ok(angles
        .iter()
        .map(|&t| {
            let mut jet = SurfaceJet { h: a0, ..Default::default() };
            for n in 1..=n_max {
                let b = &spectrum.blocks()[n];
                let (a, s) = (b[0] * order_norm(n), b[1] * order_norm(n));
                if a == 0.0 && s == 0.0 {
                    continue;
                }
                let nf = n as f64;
                let (sn, cn) = (nf * t).sin_cos();
                jet.h += a * cn + s * sn;
                if derivatives {
                    jet.h_t += nf * (s * cn - a * sn);
                    jet.h_tt -= nf * nf * (a * cn + s * sn);
                }
            }
            jet
        })
        .collect())
}

/// Synthesis on `S^2` on the product of `thetas` and `phis`, ring by ring.
pub(crate) fn synthesize_sphere(
    spectrum: &HarmonicSpectrum,
    thetas: &[f64],
    phis: &[f64],
    derivatives: bool,
) -> Result<Vec<SurfaceJet>> {
    expect_dim(spectrum, 3)?;
    let n_max = spectrum.band_limit();
    let blocks = spectrum.blocks();
    let trig: Vec<Vec<(f64, f64)>> = phis
        .iter()
        .map(|&p| (0..=n_max).map(|m| (m as f64 * p).sin_cos()).collect())
        .collect();

    let mut out = Vec::with_capacity(thetas.len() * phis.len());
    // per-order coefficient sums: (cos, sin) for value, d/dt, d2/dt2
    let mut acc = vec![[0.0f64; 6]; n_max + 1];
    for &t in thetas {
        let tab = LegendreTable::new(n_max, t, derivatives);
        for (m, a) in acc.iter_mut().enumerate() {
            *a = [0.0; 6];
            let w = order_norm(m);
            for (n, block) in blocks.iter().enumerate().skip(m) {
                let k = index(n, m);
                let c = block[n + m] * w;
                let s = if m > 0 { block[n - m] * w } else { 0.0 };
                if c == 0.0 && s == 0.0 {
                    continue;
                }
                a[0] += c * tab.p[k];
                a[1] += s * tab.p[k];
                if derivatives {
                    a[2] += c * tab.dp[k];
                    a[3] += s * tab.dp[k];
                    a[4] += c * tab.d2p[k];
                    a[5] += s * tab.d2p[k];
                }
            }
        }
        for row in &trig {
            let mut jet = SurfaceJet::default();
            for (m, (a, &(sn, cn))) in acc.iter().zip(row).enumerate() {
                jet.h += a[0] * cn + a[1] * sn;
                if derivatives {
                    let mf = m as f64;
                    jet.h_t += a[2] * cn + a[3] * sn;
                    jet.h_tt += a[4] * cn + a[5] * sn;
                    jet.h_p += mf * (a[1] * cn - a[0] * sn);
                    jet.h_pp -= mf * mf * (a[0] * cn + a[1] * sn);
                    jet.h_tp += mf * (a[3] * cn - a[2] * sn);
                }
            }
            out.push(jet);
        }
    }
    Ok(out)
}

/// Synthesis on every node of `grid`.
pub(crate) fn synthesize_grid(spectrum: &HarmonicSpectrum, grid: &QuadratureGrid, derivatives: bool) -> Result<Vec<SurfaceJet>> {
    match grid.d() {
        2 => synthesize_circle(spectrum, &grid.thetas(), derivatives),
        _ => synthesize_sphere(spectrum, &grid.thetas(), &grid.phis(), derivatives),
    }
}

/// Value and derivatives at one point `(theta, phi)`; `phi` is ignored on `S^1`.
pub fn evaluate_jet(spectrum: &HarmonicSpectrum, theta: f64, phi: f64) -> Result<SurfaceJet> {
    let jets = match spectrum.dim() {
        SpectrumDim::Sphere(2) => synthesize_circle(spectrum, &[theta], true)?,
        SpectrumDim::Sphere(3) => synthesize_sphere(spectrum, &[theta], &[phi], true)?,
        other => return Err(Error::UnsupportedDimension(other.to_string())),
    };
    Ok(jets[0])
}

/// Pointwise value at a unit direction `u` (length 2 or 3).
pub fn evaluate(spectrum: &HarmonicSpectrum, u: &[f64]) -> Result<f64> {
    let jets = match (spectrum.dim(), u.len()) {
        (SpectrumDim::Sphere(2), 2) => synthesize_circle(spectrum, &[u[1].atan2(u[0])], false)?,
        (SpectrumDim::Sphere(3), 3) => {
            let theta = u[2].clamp(-1.0, 1.0).acos();
            let phi = u[1].atan2(u[0]);
            synthesize_sphere(spectrum, &[theta], &[phi], false)?
        }
        (dim, len) => return Err(Error::DimensionMismatch(dim.to_string(), format!("direction of length {len}"))),
    };
    Ok(jets[0].h)
}

/// Projection onto the orthonormal real harmonic basis up to band limit `n`.
pub fn forward(f: &GridFunction<'_>, n: usize) -> Result<HarmonicSpectrum> {
    let grid = f.grid;
    grid.check_band_limit(n)?;
    let d = grid.d();
    let mut out = HarmonicSpectrum::zeros(SpectrumDim::Sphere(d), n)?;
    let weights = grid.ring_weights();
    if d == 2 {
        let angles = grid.thetas();
        for (k, (&t, &w)) in angles.iter().zip(&weights).enumerate() {
            let v = f.values[k] * w;
            out.block_mut(0).unwrap()[0] += v * order_norm(0);
            for deg in 1..=n {
                let (sn, cn) = (deg as f64 * t).sin_cos();
                let b = out.block_mut(deg).unwrap();
                b[0] += v * cn * order_norm(deg);
                b[1] += v * sn * order_norm(deg);
            }
        }
        return Ok(out);
    }

    let thetas = grid.thetas();
    let phis = grid.phis();
    let n_phi = phis.len();
    let trig: Vec<Vec<(f64, f64)>> = phis
        .iter()
        .map(|&p| (0..=n).map(|m| (m as f64 * p).sin_cos()).collect())
        .collect();
    let mut fourier = vec![(0.0f64, 0.0f64); n + 1];
    for (j, (&t, &w)) in thetas.iter().zip(&weights).enumerate() {
        let ring = &f.values[j * n_phi..(j + 1) * n_phi];
        for (m, slot) in fourier.iter_mut().enumerate() {
            let (mut c, mut s) = (0.0, 0.0);
            for (v, row) in ring.iter().zip(&trig) {
                let (sn, cn) = row[m];
                c += v * cn;
                s += v * sn;
            }
            *slot = (c * w * order_norm(m), s * w * order_norm(m));
        }
        let tab = LegendreTable::new(n, t, false);
        for deg in 0..=n {
            let b = out.block_mut(deg).unwrap();
            for (m, &(c, s)) in fourier.iter().enumerate().take(deg + 1) {
                let p = tab.p[index(deg, m)];
                b[deg + m] += c * p;
                if m > 0 {
                    b[deg - m] += s * p;
                }
            }
        }
    }
    Ok(out)
}

/// Pointwise synthesis of `spectrum` on `grid`.
pub fn inverse<'g>(spectrum: &HarmonicSpectrum, grid: &'g QuadratureGrid) -> Result<GridFunction<'g>> {
    expect_dim(spectrum, grid.d())?;
    let values = synthesize_grid(spectrum, grid, false)?.into_iter().map(|j| j.h).collect();
    Ok(GridFunction { grid, values })
}

/// `Delta^k F`: block `n` multiplied by `(-lambda_n)^k`.
pub fn apply_laplacian(spectrum: &HarmonicSpectrum, k: u32) -> Result<HarmonicSpectrum> {
    let d = spectrum
        .dim()
        .d()
        .ok_or_else(|| Error::UnsupportedDimension("Laplacian of an abstract spectrum".into()))?;
    Ok(spectrum.scale_blocks(|n| {
        let lambda = (n * (n + d - 2)) as f64;
        (-lambda).powi(k as i32)
    }))
}

/// Quadrature inner product `sum_i w_i f_i g_i`.
pub fn inner_product(f: &GridFunction<'_>, g: &GridFunction<'_>) -> Result<f64> {
    if !(std::ptr::eq(f.grid, g.grid) || f.grid == g.grid) {
        return Err(Error::DimensionMismatch(f.grid.describe(), g.grid.describe()));
    }
    Ok(f.grid
        .weights()
        .iter()
        .zip(f.values.iter().zip(&g.values))
        .map(|(w, (a, b))| w * a * b)
        .sum())
}
