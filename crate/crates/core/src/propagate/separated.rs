use super::{EquationKind, Snapshots};
use crate::error::{Error, Result};
use crate::families::{Branch, FirstOrderFamily};
use crate::field::{CumulativeIntegral, Grid1D, Profile, TimeGrid, C64};
use crate::ode::{stationary_eigensolve, EigenResult};

/// One level of the separated spectrum of a first-order family.
#[derive(Debug, Clone)]
pub struct SeparatedSolutionSpec {
    pub family: FirstOrderFamily,
    pub branch: Branch,
    pub level: usize,
    /// Spectrum of the branch potential `K'² ± K''` on a `y`-grid.
    pub eigen: EigenResult,
}

impl SeparatedSolutionSpec {
    /// Solves the branch eigenproblem on `y_grid` for the lowest `level + 1` states.
    pub fn solve(family: FirstOrderFamily, branch: Branch, level: usize, y_grid: Grid1D) -> Result<Self> {
        let v = family.branch_potential(branch);
        let eigen = stationary_eigensolve(&v, &y_grid, level + 1)?;
        Ok(Self { family, branch, level, eigen })
    }
}

/// `τ(t) = ∫₀ᵗ dt'/ρ²` on a span containing the origin.
fn tau_integral(rho: &Profile, lo: f64, hi: f64) -> Result<CumulativeIntegral> {
    let (lo, hi) = (lo.min(0.0), hi.max(0.0));
    if let Err(e) = rho.require_positive("rho", lo, hi) {
        return Err(Error::WindowViolation(e.to_string()));
    }
    let rho = rho.clone();
    let step = ((hi - lo) / 4096.0).clamp(1e-6, 1e-3);
    CumulativeIntegral::new(move |t| rho.value(t).powi(-2), 0.0, lo, hi, step)
}

/// `ψ = ρ^{−1/2} e^{−ig} φₙ(y) e^{−iEₙτ}` sampled on `grid` at every time level.
pub fn separated_solution(spec: &SeparatedSolutionSpec, grid: &Grid1D, tg: &TimeGrid) -> Result<Snapshots> {
    if spec.level >= spec.eigen.len() {
        return Err(Error::InvalidParameter(format!(
            "level {} needs at least {} eigenpairs, have {}",
            spec.level,
            spec.level + 1,
            spec.eigen.len()
        )));
    }
    let fam = &spec.family;
    let tau = tau_integral(&fam.rho, tg.t0(), tg.t_end())?;
    let phi = spec.eigen.refined_eigenfunction(spec.level)?;
    let energy = phi.energy();
    Snapshots::from_fn(*grid, *tg, EquationKind::Schrodinger, |x, t| {
        let amp = fam.rho.value(t).powf(-0.5) * phi.eval(fam.y(x, t));
        C64::from_polar(amp, -fam.phase(x, t) - energy * tau.eval(t))
    })
}
