//! Operator identities turned into measured residuals with pass/fail verdicts.

mod convergence;
mod intertwining;
mod norm;
mod report;
mod symmetry;
pub mod tolerances;
mod zero_mode;

pub use convergence::{convergence_study, GridLevel};
pub use intertwining::{check_intertwining, check_reflectionless, reflection_ratio, IntertwiningOutcome, KERNEL_THRESHOLD};
pub use norm::{check_norm_identity, NormIdentity, NORMALIZATION_SLACK};
pub use report::{ConvergenceEntry, ResidualEntry, VerificationReport};
pub use symmetry::{boundary_band, check_symmetry};
pub use tolerances::Tolerances;
pub use zero_mode::{normalization_integral, zero_mode_check, zero_mode_check_with, NormalizationIntegral};
