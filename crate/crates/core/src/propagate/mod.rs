//! Crank-Nicolson time stepping, separated analytic solutions and the gauge maps
//! between equivalent descriptions.

mod crank_nicolson;
mod fp;
mod r_separation;
mod separated;
mod snapshots;

pub use crank_nicolson::{
    propagate, propagate_with, PropagateOptions, SpatialOrder, LEAK_BAND, LEAK_THRESHOLD, STABILITY_LIMIT,
};
pub use fp::{fp_transform, propagate_fokker_planck, FpDirection};
pub use r_separation::{r_separation, MapDirection};
pub use separated::{separated_solution, SeparatedSolutionSpec};
pub use snapshots::{Diagnostics, EquationKind, Snapshots};
