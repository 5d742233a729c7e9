use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold below which a block counts as vanishing: `|F_n|^2 < VANISHING_TOL * |F|^2`.
pub const VANISHING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumDim {
    /// Functions on `S^{d-1}`; blocks hold coefficients in an orthonormal basis of `H_n`.
    Sphere(usize),
    /// Functions on an abstract closed manifold; only per-degree norms are meaningful.
    Abstract,
}

impl SpectrumDim {
    pub fn d(self) -> Option<usize> {
        match self {
            SpectrumDim::Sphere(d) => Some(d),
            SpectrumDim::Abstract => None,
        }
    }
}

impl std::fmt::Display for SpectrumDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpectrumDim::Sphere(d) => write!(f, "S^{}", d - 1),
            SpectrumDim::Abstract => write!(f, "abstract"),
        }
    }
}

/// Dimension of the space of degree-`n` spherical harmonics on `S^{d-1}`.
///
/// Panics if the dimension overflows `usize`; see [`checked_harmonic_space_dim`].
pub fn harmonic_space_dim(n: usize, d: usize) -> usize {
    checked_harmonic_space_dim(n, d).expect("harmonic space dimension overflows usize")
}

pub fn checked_harmonic_space_dim(n: usize, d: usize) -> Option<usize> {
    fn binom(n: usize, k: usize) -> Option<usize> {
        if k > n {
            return Some(0);
        }
        let k = k.min(n - k);
        (0..k).try_fold(1usize, |acc, i| Some(acc.checked_mul(n - i)? / (i + 1)))
    }
    let top = binom(n.checked_add(d)? - 1, d.checked_sub(1)?)?;
    let below = if n >= 2 { binom(n + d - 3, d - 1)? } else { 0 };
    Some(top - below)
}

/// Total number of coefficients in degrees `0..=band_limit` on `S^{d-1}`.
pub fn coefficient_count(d: usize, band_limit: usize) -> Option<usize> {
    (0..=band_limit).try_fold(0usize, |acc, n| acc.checked_add(checked_harmonic_space_dim(n, d)?))
}

/// Coefficients of a function grouped by eigenspace degree, `F ~ sum_n F_n`.
///
/// On `S^1` the basis is `1/sqrt(2 pi)`, then `(cos n t, sin n t)/sqrt(pi)`; on `S^2`
/// block `n` holds `2n + 1` real spherical harmonic coefficients ordered by order
/// `-n..=n` (negative orders are the sine harmonics). Higher spheres take any
/// orthonormal basis of `H_n` of the right dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSpectrum {
    dim: SpectrumDim,
    blocks: Vec<Vec<f64>>,
}

impl HarmonicSpectrum {
    pub fn new(dim: SpectrumDim, blocks: Vec<Vec<f64>>) -> Result<Self> {
        if let SpectrumDim::Sphere(d) = dim {
            if d < 2 {
                return Err(Error::InvalidDimension(d as i64));
            }
            for (n, block) in blocks.iter().enumerate() {
                let expected = checked_harmonic_space_dim(n, d).unwrap_or(usize::MAX);
                if block.len() != expected {
                    return Err(Error::BlockLength { degree: n, expected, found: block.len() });
                }
            }
        }
        if blocks.is_empty() {
            return Err(Error::InvalidParameter("spectrum needs at least the degree-0 block".into()));
        }
        if let Some(x) = blocks.iter().flatten().find(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite coefficient {x}")));
        }
        Ok(Self { dim, blocks })
    }

    pub fn zeros(dim: SpectrumDim, band_limit: usize) -> Result<Self> {
        let blocks = (0..=band_limit)
            .map(|n| match dim {
                SpectrumDim::Sphere(d) => checked_harmonic_space_dim(n, d.max(2))
                    .map(|len| vec![0.0; len])
                    .ok_or_else(|| Error::InvalidParameter(format!("degree-{n} block on {dim} is too large"))),
                SpectrumDim::Abstract => Ok(vec![0.0]),
            })
            .collect::<Result<_>>()?;
        Self::new(dim, blocks)
    }

    /// Abstract-manifold spectrum given only the squared block norms `|F_n|^2`.
    pub fn from_block_norms(norms2: &[f64]) -> Result<Self> {
        if let Some(x) = norms2.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidParameter(format!("squared norm must be finite and >= 0, got {x}")));
        }
        Self::new(SpectrumDim::Abstract, norms2.iter().map(|x| vec![x.sqrt()]).collect())
    }

    pub fn dim(&self) -> SpectrumDim {
        self.dim
    }

    pub fn band_limit(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn blocks(&self) -> &[Vec<f64>] {
        &self.blocks
    }

    pub fn block(&self, n: usize) -> Option<&[f64]> {
        self.blocks.get(n).map(Vec::as_slice)
    }

    pub fn block_mut(&mut self, n: usize) -> Option<&mut [f64]> {
        self.blocks.get_mut(n).map(Vec::as_mut_slice)
    }

    /// `|F_n|^2`, zero past the band limit.
    pub fn block_norm2(&self, n: usize) -> f64 {
        self.blocks.get(n).map_or(0.0, |b| b.iter().map(|x| x * x).sum())
    }

    pub fn block_norms2(&self) -> Vec<f64> {
        (0..self.blocks.len()).map(|n| self.block_norm2(n)).collect()
    }

    /// `|F|^2 = sum_n |F_n|^2`.
    pub fn norm2(&self) -> f64 {
        self.block_norms2().iter().sum()
    }

    /// Whether block `n` is negligible relative to `total` (usually `self.norm2()`).
    pub fn is_vanishing(&self, n: usize, total: f64) -> bool {
        let b = self.block_norm2(n);
        b == 0.0 || b < VANISHING_TOL * total
    }

    /// Spectral inner product `sum_n <F_n, G_n>`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            .sum())
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim.to_string(), other.dim.to_string()));
        }
        if self.dim == SpectrumDim::Abstract
            && self.blocks.iter().zip(&other.blocks).any(|(a, b)| a.len() != b.len())
        {
            return Err(Error::DimensionMismatch("abstract".into(), "abstract (block sizes differ)".into()));
        }
        Ok(())
    }

    /// Zero-padded copy with the given band limit (truncating if smaller).
    pub fn with_band_limit(&self, band_limit: usize) -> Self {
        let mut out = Self::zeros(self.dim, band_limit).expect("dimension already validated");
        for (dst, src) in out.blocks.iter_mut().zip(&self.blocks) {
            if dst.len() == src.len() {
                dst.copy_from_slice(src);
            } else {
                *dst = src.clone();
            }
        }
        out
    }

    /// Multiply block `n` by `factor(n)`.
    pub fn scale_blocks(&self, factor: impl Fn(usize) -> f64) -> Self {
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(n, b)| {
                let f = factor(n);
                b.iter().map(|x| x * f).collect()
            })
            .collect();
        Self { dim: self.dim, blocks }
    }

    pub fn scaled(&self, t: f64) -> Self {
        self.scale_blocks(|_| t)
    }

    /// Linear combination `a * self + b * other`, padded to the larger band limit.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.band_limit().max(other.band_limit());
        let mut out = self.with_band_limit(n).scaled(a);
        let other = other.with_band_limit(n);
        for (dst, src) in out.blocks.iter_mut().zip(&other.blocks) {
            for (x, y) in dst.iter_mut().zip(src) {
                *x += b * y;
            }
        }
        Ok(out)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.combine(1.0, other, 1.0)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    /// Copy keeping only the degrees `n` with `keep(n)`.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool) -> Self {
        self.scale_blocks(|n| if keep(n) { 1.0 } else { 0.0 })
    }
}
