use std::fmt;
use std::sync::Arc;

use super::grid::Grid1D;

type RealFn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Real function of `(x, t)`, e.g. a potential or a drift potential.
#[derive(Clone)]
pub struct Bivariate {
    f: RealFn2,
    stationary: bool,
}

impl fmt::Debug for Bivariate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bivariate").field("stationary", &self.stationary).finish()
    }
}

impl Bivariate {
    pub fn new(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), stationary: false }
    }

    /// Function of `x` only.
    pub fn stationary(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(move |x, _| f(x)), stationary: true }
    }

    pub fn zero() -> Self {
        Self::stationary(|_| 0.0)
    }

    pub fn is_stationary(&self) -> bool {
        self.stationary
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        (self.f)(x, t)
    }

    pub fn sample(&self, grid: &Grid1D, t: f64) -> Vec<f64> {
        grid.points().map(|x| self.eval(x, t)).collect()
    }

    /// `(x, t) ↦ self(x, −t)`.
    pub fn time_reversed(&self) -> Self {
        let f = self.f.clone();
        Self { f: Arc::new(move |x, t| f(x, -t)), stationary: self.stationary }
    }
}
