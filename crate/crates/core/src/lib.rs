//! Higher-order Poincare quadratic forms on closed manifolds and the sharp
//! Minkowski- and Aleksandrov-Fenchel-type inequalities they imply for convex
//! bodies given by their support functions.
//!
//! * [`spectral`]: exact eigenvalue/coefficient algebra and the quadratic forms.
//! * [`transform`]: quadrature grids and real harmonic transforms on `S^1`, `S^2`.
//! * [`convex`]: support-function bodies and their geometric functionals.
//! * [`gallery`]: JSON-describable canonical bodies.
//! * [`inequality`]: the inequality checkers and their reports.
//! * [`oracle`]: independent brute-force verifiers.

pub mod convex;
pub mod error;
pub mod gallery;
pub mod inequality;
pub mod measure;
pub mod oracle;
pub mod spectral;
pub mod transform;

pub use error::{Error, Result};
