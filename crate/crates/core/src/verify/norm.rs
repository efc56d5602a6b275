use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::families::PotentialPair;
use crate::field::ComplexField;
use crate::operators::{apply_hamiltonian, FieldOperator};

/// Allowed `|‖ψ‖² − 1|` for an input to count as normalized.
pub const NORMALIZATION_SLACK: f64 = 1e-6;

/// Inputs of the norm identity `‖q⁺ψ‖² = ‖H₂ψ‖² + λ₀²/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormIdentity {
    pub lambda0: f64,
    pub t: f64,
    /// Energy of `ψ` when it is an eigenstate of `H₂`.
    pub energy: Option<f64>,
    pub tol: f64,
}

/// Compares `‖q⁺ψ‖²` with `‖H₂ψ‖² + λ₀²‖ψ‖²/4` and, for eigenstates, with
/// `E² + λ₀²/4`. The zero field passes trivially with both sides zero.
pub fn check_norm_identity(
    scenario: &str,
    pair: &PotentialPair,
    psi: &ComplexField,
    spec: NormIdentity,
) -> Result<VerificationReport> {
    let norm_sq = psi.norm().powi(2);
    if norm_sq != 0.0 && (norm_sq - 1.0).abs() > NORMALIZATION_SLACK {
        return Err(Error::UnnormalizedInput(norm_sq));
    }
    let lhs = pair.charge.apply_raw(psi, spec.t)?.norm().powi(2);
    let h_sq = apply_hamiltonian(&pair.v2, psi, spec.t)?.norm().powi(2);
    let quarter = spec.lambda0 * spec.lambda0 / 4.0;
    let rhs = h_sq + quarter * norm_sq;

    let mut report = VerificationReport::new(scenario).with_provenance(pair.provenance.clone());
    report.metric("charge-image-norm-sq", lhs);
    report.metric("hamiltonian-image-norm-sq", h_sq);
    report.residual("operator-form", (lhs - rhs).abs(), spec.tol, None);
    if let Some(e) = spec.energy {
        report.residual("eigenvalue-form", (lhs - (e * e + quarter)).abs(), spec.tol, None);
    }
    Ok(report)
}
