use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 9;

/// Uniform grid on `[x_min, x_max]` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n: usize,
    h: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
            return Err(Error::InvalidExtent { x_min, x_max });
        }
        if n < MIN_POINTS {
            return Err(Error::TooFewPoints(n));
        }
        let h = (x_max - x_min) / (n - 1) as f64;
        Ok(Self { x_min, x_max, n, h })
    }

    /// Grid with spacing `h` starting at `x_min`; `x_max` is rounded to a whole number of steps.
    pub fn with_spacing(x_min: f64, x_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidParameter(format!("spacing {h} must be positive")));
        }
        let steps = ((x_max - x_min) / h).round() as usize;
        Self::new(x_min, x_min + steps as f64 * h, steps + 1)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.h
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }

    /// Index of the grid point nearest to `x`, if `x` lies on the grid within `tol·h`.
    pub fn index_of(&self, x: f64, tol: f64) -> Option<usize> {
        let s = (x - self.x_min) / self.h;
        let i = s.round();
        if i < 0.0 || i > (self.n - 1) as f64 || (s - i).abs() > tol {
            return None;
        }
        Some(i as usize)
    }

    /// Halved spacing on the same extent.
    pub fn refined(&self) -> Self {
        Self { n: 2 * self.n - 1, h: self.h / 2.0, ..*self }
    }

    /// Sub-grid covering indices `lo..=hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<Self> {
        if hi >= self.n || hi < lo + MIN_POINTS - 1 {
            return Err(Error::TooFewPoints(hi.saturating_sub(lo) + 1));
        }
        Ok(Self { x_min: self.x(lo), x_max: self.x(hi), n: hi - lo + 1, h: self.h })
    }
}

/// Uniform time axis `t0 + k·dt`, `k = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    t0: f64,
    dt: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, steps: usize) -> Result<Self> {
        if !t0.is_finite() || !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidTimeGrid(format!("t0 = {t0}, dt = {dt}")));
        }
        if steps == 0 {
            return Err(Error::InvalidTimeGrid("steps must be at least 1".into()));
        }
        Ok(Self { t0, dt, steps })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.t(self.steps)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(move |k| self.t(k))
    }

    pub fn halved(&self) -> Self {
        Self { dt: self.dt / 2.0, steps: self.steps * 2, ..*self }
    }
}
