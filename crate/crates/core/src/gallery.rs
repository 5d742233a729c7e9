//! Canonical test bodies described by a small JSON schema:
//!
//! ```json
//! {"kind": "harmonic_perturbation", "d": 3,
//!  "params": {"base_radius": 1.0, "terms": [{"degree": 2, "slot": 0, "amplitude": 0.05}]}}
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::convex::{degree_one_coefficients, Convexity, SupportBody};
use crate::error::{Error, Result};
use crate::measure::sphere_area;
use crate::spectral::{checked_harmonic_space_dim, HarmonicSpectrum, SpectrumDim};
use crate::transform::{evaluate, forward, GridFunction, QuadratureGrid};

/// Largest admissible `tail / |h|^2` for sampled bodies.
pub const MAX_TAIL_RATIO: f64 = 1e-9;
/// Limits on untrusted specs: ambient dimension and total coefficient count.
pub const MAX_DIMENSION: usize = 64;
pub const MAX_COEFFICIENTS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationTerm {
    pub degree: usize,
    /// Index into the degree block: on `S^1` 0 = cos, 1 = sin; on `S^2` the
    /// order is `slot - degree`.
    pub slot: usize,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Shape {
    Ball { radius: f64 },
    TranslatedBall { radius: f64, center: Vec<f64> },
    /// `base_radius + sum amplitude * Y_{degree, slot}` with unit-norm harmonics.
    HarmonicPerturbation { base_radius: f64, terms: Vec<PerturbationTerm> },
    /// `h(u) = sqrt(sum a_i^2 u_i^2)`, sampled and transformed.
    Ellipsoid { semi_axes: Vec<f64> },
    MinkowskiSum { first: Box<BodySpec>, second: Box<BodySpec> },
    CustomSpectrum { blocks: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodySpec {
    #[serde(flatten)]
    pub shape: Shape,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub require_convex: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct BuiltBody {
    pub body: SupportBody,
    /// `|h|^2 - sum_n |h_n|^2` for sampled bodies, zero otherwise.
    pub tail_energy: f64,
}

fn finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {x}")))
    }
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if finite(name, x)? > 0.0 {
        Ok(x)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")))
    }
}

impl BodySpec {
    pub fn new(shape: Shape, d: usize) -> Self {
        Self { shape, d, require_convex: None }
    }

    pub fn ball(d: usize, radius: f64) -> Self {
        Self::new(Shape::Ball { radius }, d)
    }

    pub fn perturbation(d: usize, base_radius: f64, terms: &[(usize, usize, f64)]) -> Self {
        let terms = terms
            .iter()
            .map(|&(degree, slot, amplitude)| PerturbationTerm { degree, slot, amplitude })
            .collect();
        Self::new(Shape::HarmonicPerturbation { base_radius, terms }, d)
    }

    pub fn ellipsoid(semi_axes: &[f64]) -> Self {
        Self::new(Shape::Ellipsoid { semi_axes: semi_axes.to_vec() }, semi_axes.len())
    }

    pub fn requiring_convexity(mut self) -> Self {
        self.require_convex = Some(true);
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parameter checks that need no spectrum.
    pub fn validate(&self) -> Result<()> {
        let d = self.d;
        if !(2..=MAX_DIMENSION).contains(&d) {
            return Err(Error::InvalidDimension(d as i64));
        }
        match &self.shape {
            Shape::Ball { radius } => {
                positive("radius", *radius)?;
            }
            Shape::TranslatedBall { radius, center } => {
                positive("radius", *radius)?;
                if center.len() != d {
                    return Err(Error::InvalidParameter(format!("center has {} entries, d = {d}", center.len())));
                }
                for c in center {
                    finite("center", *c)?;
                }
            }
            Shape::HarmonicPerturbation { base_radius, terms } => {
                finite("base_radius", *base_radius)?;
                for t in terms {
                    finite("amplitude", t.amplitude)?;
                    let len = checked_harmonic_space_dim(t.degree, d).unwrap_or(usize::MAX);
                    if t.slot >= len {
                        return Err(Error::InvalidParameter(format!(
                            "slot {} out of range for degree {} (block has {len} entries)",
                            t.slot, t.degree
                        )));
                    }
                }
            }
            Shape::Ellipsoid { semi_axes } => {
                if semi_axes.len() != d {
                    return Err(Error::InvalidParameter(format!("{} semi-axes, d = {d}", semi_axes.len())));
                }
                if d > 3 {
                    return Err(Error::UnsupportedDimension(format!("ellipsoids are sampled on grids; d = {d}")));
                }
                for a in semi_axes {
                    positive("semi-axis", *a)?;
                }
            }
            Shape::MinkowskiSum { first, second } => {
                for s in [first, second] {
                    if s.d != d {
                        return Err(Error::DimensionMismatch(format!("d = {d}"), format!("summand d = {}", s.d)));
                    }
                    s.validate()?;
                }
            }
            Shape::CustomSpectrum { blocks } => {
                HarmonicSpectrum::new(SpectrumDim::Sphere(d), blocks.clone())?;
            }
        }
        if self.require_convex == Some(true) && d > 3 {
            return Err(Error::UnsupportedDimension(format!("convexity can only be certified for d <= 3, got {d}")));
        }
        Ok(())
    }

    /// Closed-form support function value at unit direction `u`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.d {
            return Err(Error::DimensionMismatch(format!("d = {}", self.d), format!("direction of length {}", u.len())));
        }
        match &self.shape {
            Shape::Ball { radius } => Ok(*radius),
            Shape::TranslatedBall { radius, center } => Ok(radius + dot(center, u)),
            Shape::Ellipsoid { semi_axes } => {
                Ok(semi_axes.iter().zip(u).map(|(a, x)| a * a * x * x).sum::<f64>().sqrt())
            }
            Shape::MinkowskiSum { first, second } => Ok(first.support(u)? + second.support(u)?),
            Shape::HarmonicPerturbation { .. } | Shape::CustomSpectrum { .. } => {
                evaluate(&self.exact_spectrum()?.expect("sparse shapes have exact spectra"), u)
            }
        }
    }

    /// `(h, h', h'')` at angle `t` on `S^1`, from closed forms only.
    pub fn circle_jet(&self, t: f64) -> Result<(f64, f64, f64)> {
        if self.d != 2 {
            return Err(Error::UnsupportedDimension(format!("circle jets need d = 2, got {}", self.d)));
        }
        let (s, c) = t.sin_cos();
        Ok(match &self.shape {
            Shape::Ball { radius } => (*radius, 0.0, 0.0),
            Shape::TranslatedBall { radius, center } => {
                let along = center[0] * c + center[1] * s;
                (radius + along, center[1] * c - center[0] * s, -along)
            }
            Shape::Ellipsoid { semi_axes } => {
                let (a2, b2) = (semi_axes[0].powi(2), semi_axes[1].powi(2));
                let q = a2 * c * c + b2 * s * s;
                let dq = (b2 - a2) * (2.0 * t).sin();
                let d2q = 2.0 * (b2 - a2) * (2.0 * t).cos();
                let h = q.sqrt();
                (h, dq / (2.0 * h), d2q / (2.0 * h) - dq * dq / (4.0 * h * h * h))
            }
            Shape::MinkowskiSum { first, second } => {
                let (a, b) = (first.circle_jet(t)?, second.circle_jet(t)?);
                (a.0 + b.0, a.1 + b.1, a.2 + b.2)
            }
            Shape::HarmonicPerturbation { .. } | Shape::CustomSpectrum { .. } => {
                let spectrum = self.exact_spectrum()?.expect("sparse shapes have exact spectra");
                let mut jet = (spectrum.blocks()[0][0] / (2.0 * PI).sqrt(), 0.0, 0.0);
                for (n, b) in spectrum.blocks().iter().enumerate().skip(1) {
                    let nf = n as f64;
                    let (sn, cn) = (nf * t).sin_cos();
                    let (a, bs) = (b[0] / PI.sqrt(), b[1] / PI.sqrt());
                    jet.0 += a * cn + bs * sn;
                    jet.1 += nf * (bs * cn - a * sn);
                    jet.2 -= nf * nf * (a * cn + bs * sn);
                }
                jet
            }
        })
    }

    /// Spectrum for shapes that have one without sampling.
    fn exact_spectrum(&self) -> Result<Option<HarmonicSpectrum>> {
        let d = self.d;
        let dim = SpectrumDim::Sphere(d);
        Ok(match &self.shape {
            Shape::Ball { radius } => {
                let mut s = HarmonicSpectrum::zeros(dim, 0)?;
                s.block_mut(0).unwrap()[0] = radius * sphere_area(d).sqrt();
                Some(s)
            }
            Shape::TranslatedBall { radius, center } => {
                let mut s = HarmonicSpectrum::zeros(dim, 1)?;
                s.block_mut(0).unwrap()[0] = radius * sphere_area(d).sqrt();
                s.block_mut(1).unwrap().copy_from_slice(&degree_one_coefficients(d, center));
                Some(s)
            }
            Shape::HarmonicPerturbation { base_radius, terms } => {
                let top = terms.iter().map(|t| t.degree).max().unwrap_or(0);
                within_budget(d, top)?;
                let mut s = HarmonicSpectrum::zeros(dim, top)?;
                s.block_mut(0).unwrap()[0] = base_radius * sphere_area(d).sqrt();
                for t in terms {
                    s.block_mut(t.degree).unwrap()[t.slot] += t.amplitude;
                }
                Some(s)
            }
            Shape::CustomSpectrum { blocks } => Some(HarmonicSpectrum::new(dim, blocks.clone())?),
            Shape::Ellipsoid { .. } | Shape::MinkowskiSum { .. } => None,
        })
    }

    fn spectrum(&self, band_limit: usize) -> Result<(HarmonicSpectrum, f64)> {
        if let Some(s) = self.exact_spectrum()? {
            if s.band_limit() > band_limit {
                return Err(Error::InvalidParameter(format!(
                    "spectrum reaches degree {} beyond band limit {band_limit}",
                    s.band_limit()
                )));
            }
            return Ok((s.with_band_limit(band_limit), 0.0));
        }
        match &self.shape {
            Shape::MinkowskiSum { first, second } => {
                let (a, ta) = first.spectrum(band_limit)?;
                let (b, tb) = second.spectrum(band_limit)?;
                Ok((a.sum(&b)?, ta + tb))
            }
            Shape::Ellipsoid { .. } => {
                let grid = QuadratureGrid::for_band_limit(self.d, band_limit)?;
                let samples = GridFunction::from_fn(&grid, |u| self.support(u).unwrap_or(f64::NAN));
                let s = forward(&samples, band_limit)?;
                let total: f64 = grid.weights().iter().zip(&samples.values).map(|(w, v)| w * v * v).sum();
                Ok((s.clone(), (total - s.norm2()).max(0.0)))
            }
            _ => unreachable!("exact spectra handled above"),
        }
    }
}

/// Input to the checkers: one body, or a pair `{"k": ..., "l": ...}` for the
/// mixed-volume inequalities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckInput {
    Pair(BodyPair),
    Single(BodySpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyPair {
    pub k: BodySpec,
    pub l: BodySpec,
}

impl CheckInput {
    pub fn from_json(text: &str) -> Result<Self> {
        let input: Self = serde_json::from_str(text)?;
        match &input {
            CheckInput::Single(s) => s.validate()?,
            CheckInput::Pair(p) => {
                p.k.validate()?;
                p.l.validate()?;
                if p.k.d != p.l.d {
                    return Err(Error::DimensionMismatch(format!("k has d = {}", p.k.d), format!("l has d = {}", p.l.d)));
                }
            }
        }
        Ok(input)
    }
}

fn within_budget(d: usize, band_limit: usize) -> Result<()> {
    let mut total = 0usize;
    let fits = (0..=band_limit).all(|n| {
        total = total.saturating_add(checked_harmonic_space_dim(n, d).unwrap_or(usize::MAX));
        total <= MAX_COEFFICIENTS
    });
    if fits {
        return Ok(());
    }
    Err(Error::InvalidParameter(format!(
        "degree {band_limit} on S^{} needs more than {MAX_COEFFICIENTS} coefficients",
        d - 1
    )))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Builds the body at the given band limit. Bodies with `d <= 3` are always
/// certified; `require_convex` turns a failed certificate into an error.
pub fn build(spec: &BodySpec, band_limit: usize) -> Result<BuiltBody> {
    spec.validate()?;
    within_budget(spec.d, band_limit)?;
    let (spectrum, tail_energy) = spec.spectrum(band_limit)?;
    let norm2 = spectrum.norm2() + tail_energy;
    if tail_energy > MAX_TAIL_RATIO * norm2 {
        return Err(Error::InvalidParameter(format!(
            "truncated tail energy {tail_energy:e} exceeds {MAX_TAIL_RATIO:e} of |h|^2 = {norm2:e}; raise the band limit"
        )));
    }
    let mut body = SupportBody::new(spectrum)?;
    if spec.d <= 3 {
        body = body.certified_default()?;
    }
    if spec.require_convex == Some(true) {
        if let Convexity::Failed(c) = body.convexity() {
            return Err(Error::NotConvex(format!(
                "min eigenvalue of h I + Hess h is {:e} on {}",
                c.min_eigenvalue, c.resolution
            )));
        }
    }
    Ok(BuiltBody { body, tail_energy })
}

/// Named bodies with analytically known functionals, all certified convex.
pub fn canonical_gallery() -> Vec<(String, BodySpec)> {
    let mut out = Vec::new();
    for d in [2usize, 3] {
        for r in [0.5, 1.0, 3.0] {
            out.push((format!("ball_d{d}_r{r}"), BodySpec::ball(d, r)));
        }
        let center: Vec<f64> = (0..d).map(|i| 0.2 - 0.15 * i as f64).collect();
        out.push((format!("translated_ball_d{d}"), BodySpec::new(Shape::TranslatedBall { radius: 1.2, center }, d)));
        out.push((format!("y2_d{d}"), BodySpec::perturbation(d, 1.0, &[(2, 0, 0.05)])));
        out.push((format!("y3_d{d}"), BodySpec::perturbation(d, 1.0, &[(3, 1, 0.05)])));
        out.push((format!("y2_y3_d{d}"), BodySpec::perturbation(d, 1.0, &[(2, 1, 0.05), (3, 0, 0.05)])));
        out.push((format!("y4_d{d}"), BodySpec::perturbation(d, 1.0, &[(4, 0, 0.05)])));
    }
    out.push(("ellipse_1_0.8".into(), BodySpec::ellipsoid(&[1.0, 0.8])));
    out.push(("ellipsoid_1_0.9_0.8".into(), BodySpec::ellipsoid(&[1.0, 0.9, 0.8])));
    out.push((
        "ellipse_plus_y3".into(),
        BodySpec::new(
            Shape::MinkowskiSum {
                first: Box::new(BodySpec::ellipsoid(&[1.0, 0.8])),
                second: Box::new(BodySpec::perturbation(2, 0.5, &[(3, 0, 0.02)])),
            },
            2,
        ),
    ));
    out.into_iter().map(|(n, s)| (n, s.requiring_convexity())).collect()
}
