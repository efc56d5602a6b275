use serde::{Deserialize, Serialize};

use super::{Diagnostics, EquationKind, Snapshots};
use crate::error::{Error, Result};
use crate::field::linalg::{thomas, BandedLu};
use crate::field::{Bivariate, ComplexField, TimeGrid, C64};

/// Discretization of `−∂x²` inside the time stepper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpatialOrder {
    /// Three-point stencil, tridiagonal solve.
    Second,
    /// Five-point stencil with odd reflection at the walls, banded LU.
    #[default]
    Fourth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagateOptions {
    /// Keep every `record_every`-th step; must divide the step count.
    pub record_every: usize,
    pub spatial_order: SpatialOrder,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        Self { record_every: 1, spatial_order: SpatialOrder::Fourth }
    }
}

/// Points at each wall watched for leakage.
pub const LEAK_BAND: usize = 10;
/// Band amplitude, relative to the norm, above which a run is flagged.
pub const LEAK_THRESHOLD: f64 = 1e-6;
/// Largest accepted `|V|·dt`.
pub const STABILITY_LIMIT: f64 = 1.0;

/// Crank-Nicolson propagation recording every step.
pub fn propagate(v: &Bivariate, psi0: &ComplexField, tg: &TimeGrid, kind: EquationKind) -> Result<Snapshots> {
    propagate_with(v, psi0, tg, kind, PropagateOptions::default())
}

/// Interior operator `−∂x² + V` on the unknowns `1..n−1` (Dirichlet walls).
struct Stepper {
    order: SpatialOrder,
    h2: f64,
    m: usize,
}

impl Stepper {
    /// Off-diagonal entry of `−∂x²` at distance `d`.
    fn off(&self, d: usize) -> f64 {
        match (self.order, d) {
            (SpatialOrder::Second, 1) => -1.0 / self.h2,
            (SpatialOrder::Fourth, 1) => -16.0 / (12.0 * self.h2),
            (SpatialOrder::Fourth, 2) => 1.0 / (12.0 * self.h2),
            _ => 0.0,
        }
    }

    fn diag(&self, i: usize) -> f64 {
        match self.order {
            SpatialOrder::Second => 2.0 / self.h2,
            SpatialOrder::Fourth if i == 0 || i == self.m - 1 => 29.0 / (12.0 * self.h2),
            SpatialOrder::Fourth => 30.0 / (12.0 * self.h2),
        }
    }

    fn apply(&self, v: &[f64], u: &[C64]) -> Vec<C64> {
        let w = if self.order == SpatialOrder::Second { 1 } else { 2 };
        (0..self.m)
            .map(|i| {
                let mut acc = u[i] * (self.diag(i) + v[i]);
                for d in 1..=w {
                    if i >= d {
                        acc += u[i - d] * self.off(d);
                    }
                    if i + d < self.m {
                        acc += u[i + d] * self.off(d);
                    }
                }
                acc
            })
            .collect()
    }

    /// Factors `1 + a H`.
    fn factor(&self, a: C64, v: &[f64]) -> Result<Factored> {
        let one = C64::new(1.0, 0.0);
        match self.order {
            SpatialOrder::Second => Ok(Factored::Tridiagonal {
                off: vec![a * self.off(1); self.m],
                diag: (0..self.m).map(|i| one + a * (self.diag(i) + v[i])).collect(),
            }),
            SpatialOrder::Fourth => BandedLu::factor(self.m, 2, 2, |i, j| match i.abs_diff(j) {
                0 => one + a * (self.diag(i) + v[i]),
                d => a * self.off(d),
            })
            .map(Factored::Banded),
        }
    }
}

enum Factored {
    Tridiagonal { off: Vec<C64>, diag: Vec<C64> },
    Banded(BandedLu<C64>),
}

impl Factored {
    fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        match self {
            Factored::Tridiagonal { off, diag } => thomas(off, diag, off, rhs),
            Factored::Banded(lu) => lu.solve(rhs),
        }
    }
}

/// Discrete norm `(h Σ|ψ|²)^{1/2}`, the quantity the Schrödinger step conserves.
fn discrete_norm(values: &[C64], h: f64) -> f64 {
    (h * values.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

/// Crank-Nicolson with the potential at the step midpoint and Dirichlet walls.
pub fn propagate_with(
    v: &Bivariate,
    psi0: &ComplexField,
    tg: &TimeGrid,
    kind: EquationKind,
    opts: PropagateOptions,
) -> Result<Snapshots> {
    if psi0.values().iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite("initial field"));
    }
    if opts.record_every == 0 || tg.steps() % opts.record_every != 0 {
        return Err(Error::InvalidTimeGrid(format!(
            "record_every = {} must divide {} steps",
            opts.record_every,
            tg.steps()
        )));
    }
    let grid = *psi0.grid();
    let n = grid.len();
    let stepper = Stepper { order: opts.spatial_order, h2: grid.h() * grid.h(), m: n - 2 };
    let dt = tg.dt();
    // ∂tψ = −iHψ or −Hψ
    let rate = match kind {
        EquationKind::Schrodinger => C64::new(0.0, 1.0),
        EquationKind::Diffusion => C64::new(1.0, 0.0),
    };
    let a = rate * (dt / 2.0);

    let mut u: Vec<C64> = psi0.values()[1..n - 1].to_vec();
    let interior: Vec<f64> = grid.points().skip(1).take(n - 2).collect();
    let mut norms = vec![discrete_norm(&u, grid.h())];
    let mut boundary_amplitude: f64 = 0.0;
    let mut recorded = vec![psi0.clone()];
    let sample = |t: f64| -> Result<Vec<f64>> {
        let pot: Vec<f64> = interior.iter().map(|&x| v.eval(x, t)).collect();
        match pot.iter().enumerate().find(|(_, p)| !(p.abs() * dt <= STABILITY_LIMIT)) {
            Some((i, val)) => Err(Error::UnstablePotential { x: interior[i], t, product: val.abs() * dt }),
            None => Ok(pot),
        }
    };
    let mut fixed = None;
    if v.is_stationary() {
        let pot = sample(tg.t0())?;
        let lu = stepper.factor(a, &pot)?;
        fixed = Some((pot, lu));
    }

    for k in 0..tg.steps() {
        let step_owned;
        let (pot, lu) = match &fixed {
            Some((p, lu)) => (p, lu),
            None => {
                let p = sample(tg.t(k) + dt / 2.0)?;
                let lu = stepper.factor(a, &p)?;
                step_owned = (p, lu);
                (&step_owned.0, &step_owned.1)
            }
        };
        let hu = stepper.apply(pot, &u);
        let rhs: Vec<C64> = u.iter().zip(&hu).map(|(x, hx)| x - a * hx).collect();
        u = lu.solve(&rhs)?;
        if u.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("propagated field"));
        }
        let norm = discrete_norm(&u, grid.h());
        norms.push(norm);
        let band = u[..LEAK_BAND].iter().chain(&u[u.len() - LEAK_BAND..]).map(|z| z.norm()).fold(0.0, f64::max);
        if norm > 0.0 {
            boundary_amplitude = boundary_amplitude.max(band / norm);
        }
        if (k + 1) % opts.record_every == 0 {
            let mut full = Vec::with_capacity(n);
            full.push(C64::new(0.0, 0.0));
            full.extend_from_slice(&u);
            full.push(C64::new(0.0, 0.0));
            recorded.push(ComplexField::new(grid, full)?);
        }
    }
    let out_grid = TimeGrid::new(tg.t0(), dt * opts.record_every as f64, tg.steps() / opts.record_every)?;
    let diagnostics = Diagnostics { norms, boundary_amplitude, boundary_leak: boundary_amplitude > LEAK_THRESHOLD };
    if diagnostics.boundary_leak {
        log::warn!("boundary band amplitude {boundary_amplitude:e} exceeds {LEAK_THRESHOLD:e} of the norm");
    }
    Ok(Snapshots::new(out_grid, recorded, kind)?.with_diagnostics(diagnostics))
}
