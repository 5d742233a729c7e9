//! Brute-force verifiers sharing nothing with the transform stack except the
//! coefficient convention: a boundary-curve oracle for planar bodies and a
//! dense pointwise quadrature (Clenshaw-Curtis in `cos theta`, unnormalized
//! Legendre recurrences) for spectra on `S^1` and `S^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::convex::GeometricSummary;
use crate::error::{Error, Result};
use crate::gallery::BodySpec;
use crate::measure::{ball_volume, sphere_area};
use crate::spectral::{HarmonicSpectrum, SpectrumDim};

/// Unnormalized Legendre values overflow past this degree.
pub const MAX_ORACLE_DEGREE: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveIntegrals {
    pub length: f64,
    pub area: f64,
    /// `int_C 1/kappa ds`
    pub int_inv_kappa: f64,
    /// `int_C 1/kappa^2 ds`
    pub int_inv_kappa2: f64,
}

impl CurveIntegrals {
    /// Both sides of `L^2 - 4 pi A <= (2 pi / 3)(int 1/kappa ds - L^2 / (2 pi))`.
    pub fn lin_tsai(&self) -> (f64, f64) {
        let l2 = self.length * self.length;
        (l2 - 4.0 * PI * self.area, 2.0 * PI / 3.0 * (self.int_inv_kappa - l2 / (2.0 * PI)))
    }
}

/// Integrates along `X(t) = h(t)(cos t, sin t) + h'(t)(-sin t, cos t)` with the
/// periodic trapezoid rule; the radius of curvature is `h + h''`.
pub fn curve_oracle(spec: &BodySpec, n_samples: usize) -> Result<CurveIntegrals> {
    if spec.d != 2 {
        return Err(Error::UnsupportedDimension(format!("the curve oracle needs d = 2, got {}", spec.d)));
    }
    if n_samples < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 samples, got {n_samples}")));
    }
    let dt = 2.0 * PI / n_samples as f64;
    let mut out = CurveIntegrals { length: 0.0, area: 0.0, int_inv_kappa: 0.0, int_inv_kappa2: 0.0 };
    for i in 0..n_samples {
        let t = i as f64 * dt;
        let (h, dh, d2h) = spec.circle_jet(t)?;
        let (s, c) = t.sin_cos();
        let x = [h * c - dh * s, h * s + dh * c];
        // X' = (h + h'')(-sin t, cos t)
        let radius = h + d2h;
        if !(radius > 0.0) {
            return Err(Error::NotConvex(format!("radius of curvature {radius:e} at t = {t}")));
        }
        let dx = [-radius * s, radius * c];
        let speed = dx[0].hypot(dx[1]);
        out.length += speed;
        out.area += 0.5 * (x[0] * dx[1] - x[1] * dx[0]);
        out.int_inv_kappa += radius * speed;
        out.int_inv_kappa2 += radius * radius * speed;
    }
    out.length *= dt;
    out.area *= dt;
    out.int_inv_kappa *= dt;
    out.int_inv_kappa2 *= dt;
    Ok(out)
}

/// Clenshaw-Curtis nodes and weights on `[-1, 1]` with `n + 1` points.
fn clenshaw_curtis(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nodes = (0..=n).map(|k| (PI * k as f64 / n as f64).cos()).collect();
    let weights = (0..=n)
        .map(|k| {
            let theta = PI * k as f64 / n as f64;
            let mut s = 0.0;
            for j in 1..=n / 2 {
                let b = if 2 * j == n { 1.0 } else { 2.0 };
                s += b / (4.0 * (j * j) as f64 - 1.0) * (2.0 * j as f64 * theta).cos();
            }
            let c = if k == 0 || k == n { 1.0 } else { 2.0 };
            c / n as f64 * (1.0 - s)
        })
        .collect();
    (nodes, weights)
}

fn log_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `pbar_n^m(x)` for `0 <= m <= n <= n_max`, as `table[m][n - m]`: the
/// unnormalized recurrence, then `sqrt((2n+1)/2 (n-m)!/(n+m)!)`.
fn normalized_legendre(n_max: usize, x: f64, log_fact: &[f64]) -> Vec<Vec<f64>> {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut table = Vec::with_capacity(n_max + 1);
    let mut pmm = 1.0;
    for m in 0..=n_max {
        if m > 0 {
            pmm *= (2 * m - 1) as f64 * s;
        }
        let mut col = vec![pmm];
        if m < n_max {
            col.push(x * (2 * m + 1) as f64 * pmm);
        }
        for n in (m + 2)..=n_max {
            let k = col.len();
            let next = ((2 * n - 1) as f64 * x * col[k - 1] - (n + m - 1) as f64 * col[k - 2]) / (n - m) as f64;
            col.push(next);
        }
        for (i, v) in col.iter_mut().enumerate() {
            let n = m + i;
            let log_norm = 0.5 * (((2 * n + 1) as f64 / 2.0).ln() + log_fact[n - m] - log_fact[n + m]);
            *v *= log_norm.exp();
        }
        table.push(col);
    }
    table
}

/// A pointwise quadrature rule exact for products of two spectra of the given band limit.
struct DenseRule {
    points: Vec<(Vec<f64>, f64)>,
    values_of: Box<dyn Fn(&HarmonicSpectrum) -> Vec<f64>>,
}

impl DenseRule {
    fn new(d: usize, band_limit: usize, grid_scale: f64) -> Result<Self> {
        if !(grid_scale >= 1.0) {
            return Err(Error::InvalidParameter(format!("grid_scale must be >= 1, got {grid_scale}")));
        }
        if band_limit > MAX_ORACLE_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "band limit {band_limit} exceeds oracle limit {MAX_ORACLE_DEGREE}"
            )));
        }
        let base = 2 * band_limit + 2;
        let n = (grid_scale * base as f64).ceil() as usize;
        match d {
            2 => {
                let ts: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
                let w = 2.0 * PI / n as f64;
                let points = ts.iter().map(|t| (vec![t.cos(), t.sin()], w)).collect();
                let values_of = Box::new(move |s: &HarmonicSpectrum| {
                    ts.iter()
                        .map(|&t| {
                            let mut v = s.blocks()[0][0] / (2.0 * PI).sqrt();
                            for (k, b) in s.blocks().iter().enumerate().skip(1) {
                                let (sn, cn) = (k as f64 * t).sin_cos();
                                v += (b[0] * cn + b[1] * sn) / PI.sqrt();
                            }
                            v
                        })
                        .collect()
                });
                Ok(Self { points, values_of })
            }
            3 => {
                let (xs, xw) = clenshaw_curtis(n);
                let n_phi = n;
                let phis: Vec<f64> = (0..n_phi).map(|j| 2.0 * PI * j as f64 / n_phi as f64).collect();
                let wphi = 2.0 * PI / n_phi as f64;
                let mut points = Vec::with_capacity(xs.len() * n_phi);
                for (x, w) in xs.iter().zip(&xw) {
                    let s = (1.0 - x * x).max(0.0).sqrt();
                    for p in &phis {
                        points.push((vec![s * p.cos(), s * p.sin(), *x], w * wphi));
                    }
                }
                let log_fact: Vec<f64> = (0..=2 * band_limit + 1).map(log_factorial).collect();
                let values_of = Box::new(move |spec: &HarmonicSpectrum| {
                    let top = spec.band_limit();
                    let mut out = Vec::with_capacity(xs.len() * phis.len());
                    for &x in &xs {
                        let p = normalized_legendre(top, x, &log_fact);
                        // Per-order ring coefficients: cos part a[m], sin part b[m].
                        let mut a = vec![0.0; top + 1];
                        let mut b = vec![0.0; top + 1];
                        for (n, block) in spec.blocks().iter().enumerate() {
                            a[0] += block[n] * p[0][n];
                            for m in 1..=n {
                                a[m] += block[n + m] * p[m][n - m];
                                b[m] += block[n - m] * p[m][n - m];
                            }
                        }
                        for &phi in &phis {
                            let mut v = a[0] / (2.0 * PI).sqrt();
                            for m in 1..=top {
                                let (sm, cm) = (m as f64 * phi).sin_cos();
                                v += (a[m] * cm + b[m] * sm) / PI.sqrt();
                            }
                            out.push(v);
                        }
                    }
                    out
                });
                Ok(Self { points, values_of })
            }
            _ => Err(Error::UnsupportedDimension(format!("the dense oracle needs d in {{2, 3}}, got {d}"))),
        }
    }

    fn integrate(&self, f: impl Fn(usize, &[f64]) -> f64) -> f64 {
        self.points.iter().enumerate().map(|(i, (u, w))| w * f(i, u)).sum()
    }
}

fn sphere_d(s: &HarmonicSpectrum) -> Result<usize> {
    match s.dim() {
        SpectrumDim::Sphere(d) => Ok(d),
        SpectrumDim::Abstract => Err(Error::UnsupportedDimension("abstract spectra have no grid".into())),
    }
}

/// `int f g` over the sphere, with both spectra synthesized pointwise on a grid
/// oversampled by `grid_scale` relative to the smallest exact rule.
pub fn dense_inner_product_oracle(f: &HarmonicSpectrum, g: &HarmonicSpectrum, grid_scale: f64) -> Result<f64> {
    f.check_same_dim(g)?;
    let d = sphere_d(f)?;
    let rule = DenseRule::new(d, f.band_limit().max(g.band_limit()), grid_scale)?;
    let (fv, gv) = ((rule.values_of)(f), (rule.values_of)(g));
    Ok(rule.integrate(|i, _| fv[i] * gv[i]))
}

/// Recomputes every [`GeometricSummary`] field by pointwise integration:
/// `int h`, `int h theta`, `<h, Delta h + (d-1) h>`, `|rho|^2` and the distance to
/// the Steiner ball built from the pointwise mean width and Steiner point.
pub fn summary_oracle(h: &HarmonicSpectrum, grid_scale: f64) -> Result<GeometricSummary> {
    let d = sphere_d(h)?;
    let rule = DenseRule::new(d, h.band_limit(), grid_scale)?;
    let df = d as f64;
    let lap = h.scale_blocks(|n| -((n * (n + d - 2)) as f64));
    let hv = (rule.values_of)(h);
    let lv = (rule.values_of)(&lap);

    let int_h = rule.integrate(|i, _| hv[i]);
    let mean_width = 2.0 * int_h / sphere_area(d);
    let steiner_point: Vec<f64> =
        (0..d).map(|k| rule.integrate(|i, u| hv[i] * u[k]) / ball_volume(d)).collect();
    let int_h_dm3 = rule.integrate(|i, _| hv[i] * (lv[i] + (df - 1.0) * hv[i])) / (df - 1.0);
    let ros_term = rule.integrate(|i, _| (hv[i] + lv[i] / (df - 1.0)).powi(2));
    let delta2 = rule
        .integrate(|i, u| {
            let ball = 0.5 * mean_width + steiner_point.iter().zip(u).map(|(z, x)| z * x).sum::<f64>();
            (hv[i] - ball).powi(2)
        })
        .max(0.0)
        .sqrt();
    Ok(GeometricSummary {
        mean_width,
        steiner_point,
        int_h_dm2: int_h,
        int_h_dm3,
        ros_term,
        delta2_to_steiner_ball: delta2,
        w_dm1: int_h / df,
        w_dm2: int_h_dm3 / df,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::build;

    #[test]
    fn circle() {
        let r = 1.7;
        let c = curve_oracle(&BodySpec::ball(2, r), 64).unwrap();
        assert!((c.length - 2.0 * PI * r).abs() < 1e-12);
        assert!((c.area - PI * r * r).abs() < 1e-12);
        assert!((c.int_inv_kappa - 2.0 * PI * r * r).abs() < 1e-12);
        assert!((c.int_inv_kappa2 - 2.0 * PI * r.powi(3)).abs() < 1e-11);
        let (lhs, rhs) = c.lin_tsai();
        assert!(lhs.abs() < 1e-10 && rhs.abs() < 1e-10);
    }

    #[test]
    fn translated_circle_has_same_integrals() {
        let spec = BodySpec::new(crate::gallery::Shape::TranslatedBall { radius: 1.0, center: vec![0.3, -0.2] }, 2);
        let c = curve_oracle(&spec, 64).unwrap();
        assert!((c.area - PI).abs() < 1e-12);
    }

    #[test]
    fn cos2_perturbation() {
        // h = 1 + eps cos 2t: L = 2 pi, A = pi - 3 pi eps^2 / 2.
        let eps = 0.05;
        let spec = BodySpec::perturbation(2, 1.0, &[(2, 0, eps * PI.sqrt())]);
        let c = curve_oracle(&spec, 256).unwrap();
        assert!((c.length - 2.0 * PI).abs() < 1e-12);
        assert!((c.area - (PI - 1.5 * PI * eps * eps)).abs() < 1e-12);
    }

    #[test]
    fn non_convex_curve_is_rejected() {
        let spec = BodySpec::perturbation(2, 1.0, &[(2, 0, 0.5 * PI.sqrt())]);
        assert!(matches!(curve_oracle(&spec, 128), Err(Error::NotConvex(_))));
        assert!(curve_oracle(&BodySpec::ball(3, 1.0), 128).is_err());
    }

    #[test]
    fn clenshaw_curtis_is_exact() {
        let (x, w) = clenshaw_curtis(16);
        for k in 0..=15 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let want = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((got - want).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn legendre_is_orthonormal() {
        let n_max = 10;
        let (x, w) = clenshaw_curtis(40);
        let lf: Vec<f64> = (0..=2 * n_max + 1).map(log_factorial).collect();
        let tables: Vec<_> = x.iter().map(|&x| normalized_legendre(n_max, x, &lf)).collect();
        for m in 0..=n_max {
            for a in m..=n_max {
                for b in m..=n_max {
                    let ip: f64 = tables.iter().zip(&w).map(|(t, w)| w * t[m][a - m] * t[m][b - m]).sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-12, "m={m} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn dense_matches_spectral_inner_product() {
        for d in [2, 3] {
            let dim = SpectrumDim::Sphere(d);
            let blocks = |seed: f64| -> Vec<Vec<f64>> {
                (0..=6)
                    .map(|n| {
                        let len = crate::spectral::harmonic_space_dim(n, d);
                        (0..len).map(|i| ((seed + (n * 7 + i * 3) as f64) * 1.3).sin()).collect()
                    })
                    .collect()
            };
            let f = HarmonicSpectrum::new(dim, blocks(0.1)).unwrap();
            let g = HarmonicSpectrum::new(dim, blocks(2.0)).unwrap();
            let dense = dense_inner_product_oracle(&f, &g, 1.5).unwrap();
            let spectral = f.inner(&g).unwrap();
            assert!((dense - spectral).abs() < 1e-12 * spectral.abs().max(1.0), "d={d}");
            let zero = HarmonicSpectrum::zeros(dim, 3).unwrap();
            assert_eq!(dense_inner_product_oracle(&zero, &zero, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn summary_matches_spectral_summary() {
        for (name, spec) in crate::gallery::canonical_gallery() {
            let b = build(&spec, 24).unwrap();
            let want = crate::convex::summary(&b.body);
            let got = summary_oracle(b.body.spectrum(), 1.0).unwrap();
            let pairs = [
                (got.mean_width, want.mean_width),
                (got.int_h_dm2, want.int_h_dm2),
                (got.int_h_dm3, want.int_h_dm3),
                (got.ros_term, want.ros_term),
                (got.delta2_to_steiner_ball, want.delta2_to_steiner_ball),
            ];
            for (a, b) in pairs {
                assert!((a - b).abs() < 1e-10 * b.abs().max(1.0), "{name}: {a} vs {b}");
            }
            for (a, b) in got.steiner_point.iter().zip(&want.steiner_point) {
                assert!((a - b).abs() < 1e-10, "{name}");
            }
        }
    }
}
