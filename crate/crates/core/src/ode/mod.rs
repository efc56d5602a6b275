//! Riccati integration for Painlevé-type profiles, ODE residuals, and the
//! stationary eigenproblem.

mod eigen;
mod residual;
mod riccati;

pub use eigen::{refine_fourth_order, stationary_eigensolve, EigenResult, Eigenfunction, MAX_STATES};
pub use residual::{ode_residual, OdeEquation, OdeInput, OdeResidual};
pub use riccati::{integrate_riccati, OdeSolution, RiccatiKind, Truncation, STORED_ORDER};
