use serde::{Deserialize, Serialize};

use super::Snapshots;
use crate::error::{Error, Result};
use crate::families::FirstOrderFamily;
use crate::field::{ComplexField, CubicSpline, Grid1D, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapDirection {
    /// `(x, t) → (y, t)` with `φ = √ρ e^{ig} ψ`.
    Forward,
    /// The exact inverse weight, resampled back onto the `x`-grid.
    Inverse,
}

/// Complex natural cubic spline over a field's grid; zero outside it.
struct Resampler {
    re: CubicSpline,
    im: CubicSpline,
    lo: f64,
    hi: f64,
}

impl Resampler {
    fn new(f: &ComplexField) -> Result<Self> {
        let g = f.grid();
        let xs: Vec<f64> = g.points().collect();
        let re = CubicSpline::new(xs.clone(), f.values().iter().map(|z| z.re).collect())?;
        let im = CubicSpline::new(xs, f.values().iter().map(|z| z.im).collect())?;
        Ok(Self { re, im, lo: g.x_min(), hi: g.x_max() })
    }

    fn eval(&self, x: f64) -> C64 {
        if x < self.lo || x > self.hi {
            return C64::new(0.0, 0.0);
        }
        C64::new(self.re.eval(x)[0], self.im.eval(x)[0])
    }
}

/// Carries snapshots between the `(x, t)` and separated `(y, t)` frames. The
/// same node positions serve as the `x`-grid and the `y`-grid.
pub fn r_separation(map: &FirstOrderFamily, psi: &Snapshots, direction: MapDirection) -> Result<Snapshots> {
    let tg = psi.time_grid();
    if let Err(e) = map.rho.require_positive("rho", tg.t0(), tg.t_end()) {
        return Err(Error::WindowViolation(e.to_string()));
    }
    psi.map_fields(|f, t| {
        let grid: Grid1D = *f.grid();
        let src = Resampler::new(f)?;
        let rho = map.rho.value(t);
        ComplexField::from_fn(grid, |s| match direction {
            MapDirection::Forward => {
                let x = map.x_of(s, t);
                src.eval(x) * C64::from_polar(rho.sqrt(), map.phase(x, t))
            }
            MapDirection::Inverse => src.eval(map.y(s, t)) * C64::from_polar(rho.powf(-0.5), -map.phase(s, t)),
        })
    })
}
