use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes in decreasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pnm1 = if n == 0 { 0.0 } else { p0 };
            dp = nf * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[derive(Debug, Clone, PartialEq)]
enum Layout {
    /// `m` equally spaced angles on `S^1`.
    Circle { m: usize },
    /// Gauss-Legendre colatitude rings times `n_phi` equally spaced longitudes.
    Sphere { theta: Vec<f64>, ring_weight: Vec<f64>, n_phi: usize },
}

/// Product quadrature on `S^1` or `S^2`. Sphere nodes are ordered ring by ring
/// (colatitude outer, longitude inner) and never sit on a pole.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    layout: Layout,
}

/// Default band limit for bodies and transforms.
pub const DEFAULT_BAND_LIMIT: usize = 64;

impl QuadratureGrid {
    pub fn circle(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("circle grid needs at least one node".into()));
        }
        Ok(Self { layout: Layout::Circle { m } })
    }

    pub fn sphere(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::InvalidParameter("sphere grid needs at least one ring and one longitude".into()));
        }
        let (x, w) = gauss_legendre(n_theta);
        let theta = x.iter().map(|x| x.acos()).collect();
        let dphi = 2.0 * PI / n_phi as f64;
        let ring_weight = w.iter().map(|w| w * dphi).collect();
        Ok(Self { layout: Layout::Sphere { theta, ring_weight, n_phi } })
    }

    /// The default grid for band limit `n`: `M = 8N` on `S^1`; `2N+2` rings by
    /// `4N+4` longitudes on `S^2`.
    pub fn for_band_limit(d: usize, n: usize) -> Result<Self> {
        match d {
            2 => Self::circle((8 * n).max(2 * n + 1).max(8)),
            3 => Self::sphere(2 * n + 2, 4 * n + 4),
            _ => Err(Error::UnsupportedDimension(format!("quadrature grids exist for d = 2, 3; got {d}"))),
        }
    }

    /// Ambient dimension `d` (the grid lives on `S^{d-1}`).
    pub fn d(&self) -> usize {
        match self.layout {
            Layout::Circle { .. } => 2,
            Layout::Sphere { .. } => 3,
        }
    }

    pub fn len(&self) -> usize {
        match &self.layout {
            Layout::Circle { m } => *m,
            Layout::Sphere { theta, n_phi, .. } => theta.len() * n_phi,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest band limit the grid transforms exactly.
    pub fn max_band_limit(&self) -> usize {
        match &self.layout {
            Layout::Circle { m } => (m - 1) / 2,
            Layout::Sphere { theta, n_phi, .. } => (theta.len() - 1).min((n_phi - 1) / 2),
        }
    }

    pub fn check_band_limit(&self, n: usize) -> Result<()> {
        if n <= self.max_band_limit() {
            return Ok(());
        }
        let detail = match &self.layout {
            Layout::Circle { m } => format!("need M >= {}, have M = {m}", 2 * n + 1),
            Layout::Sphere { theta, n_phi, .. } => format!(
                "need n_theta >= {} and n_phi >= {}, have {} x {n_phi}",
                n + 1,
                2 * n + 1,
                theta.len()
            ),
        };
        Err(Error::InsufficientResolution { band_limit: n, detail })
    }

    /// Colatitudes of the rings (S^2) or the node angles (S^1).
    pub fn thetas(&self) -> Vec<f64> {
        match &self.layout {
            Layout::Circle { m } => (0..*m).map(|k| 2.0 * PI * k as f64 / *m as f64).collect(),
            Layout::Sphere { theta, .. } => theta.clone(),
        }
    }

    /// Longitudes of one ring; empty on `S^1`.
    pub fn phis(&self) -> Vec<f64> {
        match &self.layout {
            Layout::Circle { .. } => Vec::new(),
            Layout::Sphere { n_phi, .. } => (0..*n_phi).map(|k| 2.0 * PI * k as f64 / *n_phi as f64).collect(),
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        match &self.layout {
            Layout::Circle { m } => vec![2.0 * PI / *m as f64; *m],
            Layout::Sphere { ring_weight, n_phi, .. } => {
                ring_weight.iter().flat_map(|w| std::iter::repeat_n(*w, *n_phi)).collect()
            }
        }
    }

    /// Per-ring weights (Gauss-Legendre weight times longitude spacing); on `S^1`
    /// one entry per node.
    pub(crate) fn ring_weights(&self) -> Vec<f64> {
        match &self.layout {
            Layout::Circle { .. } => self.weights(),
            Layout::Sphere { ring_weight, .. } => ring_weight.clone(),
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.weights().iter().sum()
    }

    /// Angular coordinates `(theta, phi)` of every node; `phi = 0` on `S^1`.
    pub fn angles(&self) -> Vec<(f64, f64)> {
        match &self.layout {
            Layout::Circle { .. } => self.thetas().into_iter().map(|t| (t, 0.0)).collect(),
            Layout::Sphere { theta, .. } => {
                let phis = self.phis();
                theta.iter().flat_map(|&t| phis.iter().map(move |&p| (t, p))).collect()
            }
        }
    }

    /// Unit vectors of every node.
    pub fn directions(&self) -> Vec<Vec<f64>> {
        let d = self.d();
        self.angles()
            .into_iter()
            .map(|(t, p)| {
                if d == 2 {
                    vec![t.cos(), t.sin()]
                } else {
                    vec![t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
                }
            })
            .collect()
    }

    /// Short description, e.g. `S^2 GL 130x260`.
    pub fn describe(&self) -> String {
        match &self.layout {
            Layout::Circle { m } => format!("S^1 uniform {m}"),
            Layout::Sphere { theta, n_phi, .. } => format!("S^2 GL {}x{n_phi}", theta.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1usize, 2, 5, 17, 130] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for k in 0..(2 * n).min(40) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n = {n}, k = {k}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn total_weights() {
        let c = QuadratureGrid::for_band_limit(2, 64).unwrap();
        assert!((c.total_weight() - 2.0 * PI).abs() < 1e-12 * 2.0 * PI);
        let s = QuadratureGrid::for_band_limit(3, 64).unwrap();
        assert!((s.total_weight() - 4.0 * PI).abs() < 1e-12 * 4.0 * PI);
        assert_eq!(s.len(), 130 * 260);
        assert!(s.thetas().iter().all(|&t| t > 0.0 && t < PI));
    }

    #[test]
    fn resolution_checks() {
        let s = QuadratureGrid::sphere(5, 9).unwrap();
        assert_eq!(s.max_band_limit(), 4);
        assert!(s.check_band_limit(4).is_ok());
        assert!(matches!(s.check_band_limit(5), Err(Error::InsufficientResolution { .. })));
        let c = QuadratureGrid::circle(9).unwrap();
        assert_eq!(c.max_band_limit(), 4);
        assert!(QuadratureGrid::for_band_limit(4, 8).is_err());
    }
}
