//! Partner-potential families and the charges intertwining them.

mod first_order;
mod fokker_planck;
mod fourth_order;
mod nonstat;
mod painleve;
mod symmetry;
mod td_oscillator;

use std::collections::BTreeMap;

use serde::Serialize;

pub use first_order::{Branch, FirstOrderFamily};
pub use fokker_planck::{Chi, ChiTerm, DriftPotential, FokkerPlanckFamily, FokkerPlanckPair};
pub use fourth_order::{FourthOrderBuild, FourthOrderFamily};
pub use nonstat::{NonStatConstraints, NonStatFamily};
pub use painleve::{PainleveIIFamily, PainleveIVFamily, R2Ordering};
pub use symmetry::{SymmetryBuild, SymmetryFamily, ZMap};
pub use td_oscillator::TdOscFamily;

use crate::error::{Error, Result};
use crate::field::{Bivariate, Grid1D};
use crate::operators::ChargeSpec;
use crate::propagate::EquationKind;

/// Space-time region a family is built for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub grid: Grid1D,
    pub t_min: f64,
    pub t_max: f64,
}

/// Minimum distance, in grid spacings, between a singular point and the grid.
pub const SINGULAR_OFFSET: f64 = 10.0;

impl Window {
    pub fn new(grid: Grid1D, t_min: f64, t_max: f64) -> Result<Self> {
        if !(t_min <= t_max) || !t_min.is_finite() || !t_max.is_finite() {
            return Err(Error::InvalidTimeGrid(format!("time window [{t_min}, {t_max}]")));
        }
        Ok(Self { grid, t_min, t_max })
    }

    /// `count` evenly spaced times covering the window.
    pub fn sample_times(&self, count: usize) -> Vec<f64> {
        if count <= 1 || self.t_max == self.t_min {
            return vec![self.t_min];
        }
        (0..count).map(|k| self.t_min + (self.t_max - self.t_min) * k as f64 / (count - 1) as f64).collect()
    }

    /// Rejects singular points on or within ten spacings of the grid.
    pub fn exclude_singular(&self, points: &[f64]) -> Result<()> {
        let margin = SINGULAR_OFFSET * self.grid.h();
        match points
            .iter()
            .find(|&&s| s > self.grid.x_min() - margin && s < self.grid.x_max() + margin)
        {
            Some(&x) => Err(Error::SingularOnGrid { x }),
            None => Ok(()),
        }
    }

    /// Time window containing `t = 0`, as needed by quadratures anchored there.
    pub(crate) fn time_span_with_origin(&self) -> (f64, f64) {
        (self.t_min.min(0.0), self.t_max.max(0.0))
    }
}

/// Family tag, parameters, fixed gauges and measured construction checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub gauges: Vec<String>,
    pub notes: Vec<String>,
    pub reduced_accuracy: bool,
    pub checks: BTreeMap<String, f64>,
}

impl Provenance {
    pub(crate) fn new(family: &str) -> Self {
        Self { family: family.to_string(), ..Self::default() }
    }

    pub(crate) fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub(crate) fn gauge(mut self, g: &str) -> Self {
        self.gauges.push(g.to_string());
        self
    }

    pub(crate) fn note(mut self, n: &str) -> Self {
        self.notes.push(n.to_string());
        self
    }

    pub(crate) fn check(mut self, name: &str, value: f64) -> Self {
        self.checks.insert(name.to_string(), value);
        self
    }
}

/// Two partner potentials with the charge intertwining them: `L[V1] q = q L[V2]`.
#[derive(Debug, Clone)]
pub struct PotentialPair {
    pub v1: Bivariate,
    pub v2: Bivariate,
    pub charge: ChargeSpec,
    pub kind: EquationKind,
    pub provenance: Provenance,
}

impl PotentialPair {
    /// `q⁻`, the formal adjoint of the charge.
    pub fn adjoint_charge(&self) -> ChargeSpec {
        self.charge.adjoint()
    }

    /// Both potentials finite on the window grid at nine sample times.
    pub(crate) fn ensure_finite(self, window: &Window) -> Result<Self> {
        for t in window.sample_times(9) {
            for x in window.grid.points() {
                if !self.v1.eval(x, t).is_finite() || !self.v2.eval(x, t).is_finite() {
                    return Err(Error::NonFinite("partner potential on the window"));
                }
            }
        }
        Ok(self)
    }
}

/// Tagged union of the eight constructions.
#[derive(Debug, Clone)]
pub enum PotentialFamily {
    FirstOrder(FirstOrderFamily),
    Symmetry(SymmetryFamily),
    FokkerPlanck(FokkerPlanckFamily),
    PainleveIV(PainleveIVFamily),
    PainleveII(PainleveIIFamily),
    FourthOrder(FourthOrderFamily),
    NonStat(NonStatFamily),
    TdOscillator(TdOscFamily),
}

impl PotentialFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::FirstOrder(_) => "first-order",
            Self::Symmetry(_) => "symmetry",
            Self::FokkerPlanck(_) => "fokker-planck",
            Self::PainleveIV(_) => "painleve-iv",
            Self::PainleveII(_) => "painleve-ii",
            Self::FourthOrder(_) => "fourth-order",
            Self::NonStat(_) => "nonstat",
            Self::TdOscillator(_) => "td-oscillator",
        }
    }

    /// The intertwined pair. The symmetry family has a symmetry operator instead
    /// and is rejected here; use [`SymmetryFamily::build`].
    pub fn pair(&self, window: &Window) -> Result<PotentialPair> {
        match self {
            Self::FirstOrder(f) => f.pair(window),
            Self::Symmetry(_) => Err(Error::InvalidKind("symmetry family has no partner pair".into())),
            Self::FokkerPlanck(f) => Ok(f.build(window)?.pair),
            Self::PainleveIV(f) => f.pair(window),
            Self::PainleveII(f) => f.pair(window),
            Self::FourthOrder(f) => Ok(f.build(window)?.pair),
            Self::NonStat(f) => f.pair(window),
            Self::TdOscillator(f) => f.pair(window),
        }
    }
}
