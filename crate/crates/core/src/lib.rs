//! Intertwined partner potentials for the non-stationary Schrödinger, diffusion and
//! Fokker-Planck equations, with every operator identity measured as a grid residual.
//!
//! Units: ħ = 2m = 1, so `S[V] = i∂t + ∂x² − V` and `D[V] = −∂t + ∂x² − V`.

pub mod error;
pub mod families;
pub mod field;
pub mod par;

pub use error::{Error, Result};
pub mod ode;
pub mod operators;
pub mod propagate;
pub mod verify;
