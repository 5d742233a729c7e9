//! Quadrature grids and real harmonic transforms on `S^1` and `S^2`, plus the
//! spectral differential operators built on them.

mod grid;
mod hessian;
mod legendre;
mod sht;

pub use grid::{gauss_legendre, QuadratureGrid, DEFAULT_BAND_LIMIT};
pub use hessian::{hessian_at, surface_gradient_hessian, ShapeMatrix};
pub use sht::{apply_laplacian, evaluate, evaluate_jet, forward, inner_product, inverse, GridFunction, SurfaceJet};
