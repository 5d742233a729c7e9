use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{int, rational_to_f64};
use crate::error::{Error, Result};

/// `lambda_n = n (n + d - 2)`, the n-th distinct eigenvalue of `-Delta` on `S^{d-1}`.
pub fn eigenvalue(n: i64, d: i64) -> Result<i64> {
    if n < 0 {
        return Err(Error::NegativeDegree(n));
    }
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    n.checked_mul(n + d - 2)
        .ok_or_else(|| Error::InvalidParameter(format!("eigenvalue overflow at n = {n}, d = {d}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenKind {
    /// Standard unit sphere `S^{d-1}`.
    Sphere { d: usize },
    /// A closed manifold described only by its distinct eigenvalues.
    Abstract,
}

/// Distinct eigenvalues `0 = lambda_0 < lambda_1 < ...` of `-Delta`, stored
/// exactly up to `max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    kind: EigenKind,
    eigenvalues: Vec<BigRational>,
}

impl EigenSystem {
    pub fn sphere(d: usize, max_degree: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d as i64));
        }
        let eigenvalues = (0..=max_degree as i64)
            .map(|n| eigenvalue(n, d as i64).map(int))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { kind: EigenKind::Sphere { d }, eigenvalues })
    }

    /// User-supplied spectrum of an arbitrary closed manifold.
    pub fn from_eigenvalues(eigenvalues: Vec<BigRational>) -> Result<Self> {
        match eigenvalues.first() {
            None => return Err(Error::InvalidEigenvalues("empty sequence".into())),
            Some(first) if !first.is_zero() => {
                return Err(Error::InvalidEigenvalues(format!("lambda_0 = {first}, expected 0")))
            }
            _ => {}
        }
        if let Some(k) = eigenvalues.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidEigenvalues(format!(
                "lambda_{} = {} is not greater than lambda_{} = {}",
                k + 1,
                eigenvalues[k + 1],
                k,
                eigenvalues[k]
            )));
        }
        debug_assert!(eigenvalues.iter().all(|x| !x.is_negative()));
        Ok(Self { kind: EigenKind::Abstract, eigenvalues })
    }

    pub fn kind(&self) -> EigenKind {
        self.kind
    }

    pub fn dim(&self) -> Option<usize> {
        match self.kind {
            EigenKind::Sphere { d } => Some(d),
            EigenKind::Abstract => None,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.eigenvalues.len() - 1
    }

    pub fn eigenvalues(&self) -> &[BigRational] {
        &self.eigenvalues
    }

    pub fn lambda(&self, n: usize) -> Result<&BigRational> {
        self.eigenvalues
            .get(n)
            .ok_or(Error::EigenvaluesExhausted { degree: n, max: self.max_degree() })
    }

    pub fn lambda_f64(&self, n: usize) -> Result<f64> {
        self.lambda(n).map(rational_to_f64)
    }

    /// Shifted eigenvalue `gamma_n = lambda_n - lambda_1`.
    pub fn gamma(&self, n: usize) -> Result<BigRational> {
        Ok(self.lambda(n)? - self.lambda(1)?)
    }
}
