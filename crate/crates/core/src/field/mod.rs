//! Grids, complex fields, stencils, quadrature and differentiable profiles.

mod bivariate;
#[allow(clippy::module_inception)]
mod field;
mod grid;
pub mod jet;
pub mod linalg;
mod profile;
pub mod quadrature;
mod spline;
pub mod stencil;

pub use bivariate::Bivariate;
pub use field::{ComplexField, C64};
pub use grid::{Grid1D, TimeGrid};
pub use jet::{CJet, Jet, JET_ORDER};
pub use profile::{Profile, SampledJets};
pub use quadrature::{inner_product, CumulativeIntegral};
pub use spline::CubicSpline;
pub use stencil::{differentiate, differentiate_real, BOUNDARY_BAND};

/// Builds a grid; alias kept for callers that think in operations.
pub fn make_grid(x_min: f64, x_max: f64, n: usize) -> crate::Result<Grid1D> {
    Grid1D::new(x_min, x_max, n)
}
