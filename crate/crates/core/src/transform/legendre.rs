//! Normalized associated Legendre functions `pbar_n^m(cos t)` with
//! `int_{-1}^{1} pbar_n^m(x)^2 dx = 1` (no Condon-Shortley phase), and their
//! first two derivatives with respect to the colatitude `t`.

#[inline]
pub(crate) fn index(n: usize, m: usize) -> usize {
    n * (n + 1) / 2 + m
}

#[derive(Debug, Clone)]
pub(crate) struct LegendreTable {
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
    pub d2p: Vec<f64>,
}

impl LegendreTable {
    /// Values at colatitude `theta`, which must lie strictly inside `(0, pi)` when
    /// derivatives are requested.
    pub fn new(n_max: usize, theta: f64, with_derivatives: bool) -> Self {
        let (s, x) = theta.sin_cos();
        let size = index(n_max, n_max) + 1;
        let mut p = vec![0.0; size];

        // diagonal: pbar_m^m = sqrt((2m+1)/(2m)) s pbar_{m-1}^{m-1}
        p[0] = std::f64::consts::FRAC_1_SQRT_2;
        for m in 1..=n_max {
            let mf = m as f64;
            p[index(m, m)] = ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * p[index(m - 1, m - 1)];
        }
        for m in 0..n_max {
            let mf = m as f64;
            p[index(m + 1, m)] = (2.0 * mf + 3.0).sqrt() * x * p[index(m, m)];
            for n in (m + 2)..=n_max {
                let nf = n as f64;
                let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
                let b = (((nf - 1.0) * (nf - 1.0) - mf * mf) / (4.0 * (nf - 1.0) * (nf - 1.0) - 1.0)).sqrt();
                p[index(n, m)] = a * (x * p[index(n - 1, m)] - b * p[index(n - 2, m)]);
            }
        }

        let (mut dp, mut d2p) = (Vec::new(), Vec::new());
        if with_derivatives {
            dp = vec![0.0; size];
            d2p = vec![0.0; size];
            let cot = x / s;
            for n in 0..=n_max {
                let nf = n as f64;
                for m in 0..=n {
                    let mf = m as f64;
                    let k = index(n, m);
                    // sin t d/dt pbar_n^m = n cos t pbar_n^m - sqrt((2n+1)(n^2-m^2)/(2n-1)) pbar_{n-1}^m
                    let lower = if m < n {
                        ((2.0 * nf + 1.0) * (nf * nf - mf * mf) / (2.0 * nf - 1.0)).sqrt() * p[index(n - 1, m)]
                    } else {
                        0.0
                    };
                    dp[k] = (nf * x * p[k] - lower) / s;
                    // associated Legendre equation in t
                    d2p[k] = -cot * dp[k] - (nf * (nf + 1.0) - mf * mf / (s * s)) * p[k];
                }
            }
        }
        Self { p, dp, d2p }
    }
}
