use serde::{Deserialize, Serialize};

use super::{propagate_with, EquationKind, PropagateOptions, Snapshots};
use crate::error::{Error, Result};
use crate::families::DriftPotential;
use crate::field::{Bivariate, ComplexField, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FpDirection {
    /// `ψ = e^{U/2} P`
    FpToDiffusion,
    /// `P = e^{−U/2} ψ`
    DiffusionToFp,
}

fn weight(f: &ComplexField, u: &Bivariate, t: f64, sign: f64) -> ComplexField {
    f.map_x(|x, z| z * (sign * u.eval(x, t) / 2.0).exp())
}

/// Pointwise gauge between a Fokker-Planck density and its diffusion-equation form.
pub fn fp_transform(snaps: &Snapshots, u: &Bivariate, direction: FpDirection) -> Result<Snapshots> {
    let sign = match direction {
        FpDirection::FpToDiffusion => {
            if snaps.fields().iter().any(|f| f.values().iter().any(|z| z.im != 0.0)) {
                return Err(Error::ComplexInputForFp);
            }
            1.0
        }
        FpDirection::DiffusionToFp => -1.0,
    };
    let out = snaps.map_fields(|f, t| Ok(weight(f, u, t, sign)))?;
    Snapshots::new(*out.time_grid(), out.fields().to_vec(), EquationKind::Diffusion)
}

/// Evolves a real density under the drift `U` through the diffusion form with
/// `V = U'²/4 − U''/2 − U̇/2`.
pub fn propagate_fokker_planck(
    u: &DriftPotential,
    p0: &ComplexField,
    tg: &TimeGrid,
    opts: PropagateOptions,
) -> Result<Snapshots> {
    if p0.values().iter().any(|z| z.im != 0.0) {
        return Err(Error::ComplexInputForFp);
    }
    let ub = u.as_bivariate();
    let psi0 = weight(p0, &ub, tg.t0(), 1.0);
    let psi = propagate_with(&u.diffusion_potential(), &psi0, tg, EquationKind::Diffusion, opts)?;
    let diagnostics = psi.diagnostics().cloned();
    let p = fp_transform(&psi, &ub, FpDirection::DiffusionToFp)?;
    Ok(match diagnostics {
        Some(d) => p.with_diagnostics(d),
        None => p,
    })
}
