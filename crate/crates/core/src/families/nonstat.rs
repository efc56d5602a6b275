use std::sync::Arc;

use serde::Serialize;

use super::{PotentialPair, Provenance, Window};
use crate::error::{Error, Result};
use crate::field::{Bivariate, Jet, Profile};
use crate::operators::{ChargeSpec, OpFactor, RealCoefFn, SymTerm, SymmetryOpSpec};
use crate::propagate::EquationKind;

/// Pair with stationary `V₂` intertwined by a time-dependent canonical charge,
/// built from `f₁(x)` and `f₀(t) = σe^{λ₀t} + δe^{−λ₀t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonStatFamily {
    pub f1: Profile,
    pub sigma: f64,
    pub delta: f64,
    pub lambda0: f64,
}

/// Max residuals of the four compatibility conditions of a canonical charge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonStatConstraints {
    /// `ḟ − c'`
    pub drift: f64,
    /// `ḃ + c'' + 4cf'`
    pub b_evolution: f64,
    /// `f'' − b' − V₂' + 4ff'`
    pub stationary: f64,
    /// `ċ + 2fV₂' − b'' − 4bf' − V₂''`
    pub closure: f64,
    /// Sample points skipped because `V₂` came from its limit at a critical point of `f₁`.
    pub skipped: usize,
}

impl NonStatConstraints {
    pub fn max(&self) -> f64 {
        self.drift.max(self.b_evolution).max(self.stationary).max(self.closure)
    }
}

/// Relative size of `f₁'` below which `V₂` is taken from its limit.
const CRITICAL: f64 = 1e-6;

impl NonStatFamily {
    /// `f₀` and its first two time derivatives.
    pub fn f0(&self, t: f64) -> [f64; 3] {
        let (e, l) = ((self.lambda0 * t).exp(), self.lambda0);
        let (p, m) = (self.sigma * e, self.delta / e);
        [p + m, l * (p - m), l * l * (p + m)]
    }

    fn denominator(&self, x: f64, t: f64) -> Jet {
        self.f1.jet(x) + self.f0(t)[0]
    }

    /// `f = f₁'/(2(f₁ + f₀))` as a jet in `x`.
    pub fn f(&self, x: f64, t: f64) -> Jet {
        self.f1.jet(x).deriv().div(&self.denominator(x, t)).scale(0.5)
    }

    /// `c = ḟ₀/(2(f₁ + f₀))`.
    pub fn c(&self, x: f64, t: f64) -> Jet {
        self.denominator(x, t).recip().scale(0.5 * self.f0(t)[1])
    }

    /// `2f₁'''f₁' − f₁''² − λ₀²f₁²`, constant when `f₁'''' = λ₀²f₁`.
    pub fn first_integral(&self, x: f64) -> f64 {
        let j = self.f1.jet(x);
        2.0 * j.d(3) * j.d(1) - j.d(2) * j.d(2) - self.lambda0.powi(2) * j.value().powi(2)
    }

    /// `V₂ = (λ₀²σδ + I/4)/f₁'²` with `I` the first integral; at critical points of
    /// `f₁` the limit `(f₁'''' − λ₀²f₁)/(4f₁'')` is used and only the value is valid.
    pub fn v2(&self, x: f64) -> Jet {
        let j = self.f1.jet(x);
        let l2 = self.lambda0 * self.lambda0;
        if j.d(1).abs() < CRITICAL * (j.d(2).abs() + 1.0) {
            return Jet::constant((j.d(4) - l2 * j.value()) / (4.0 * j.d(2))).with_valid(0);
        }
        let p = j.deriv();
        let (p2, p3) = (p.deriv(), p.deriv().deriv());
        let num = (p.clone() * p3).scale(0.5) - p2.square().scale(0.25) - j.square().scale(l2 / 4.0)
            + l2 * self.sigma * self.delta;
        num.div(&p.square())
    }

    /// `b = f' + 2f² − V₂`.
    pub fn b(&self, x: f64, t: f64) -> Jet {
        let f = self.f(x, t);
        f.deriv() + f.square().scale(2.0) - self.v2(x)
    }

    fn check_denominator(&self, window: &Window) -> Result<()> {
        for t in window.sample_times(33) {
            let f0 = self.f0(t)[0];
            // cancellation is judged against the size of the two terms at each point
            let terms: Vec<(f64, f64)> = window.grid.points().map(|x| self.f1.value(x)).map(|f1| (f1 + f0, f1.abs() + f0.abs())).collect();
            for (i, w) in terms.windows(2).enumerate() {
                if w[0].0.abs() <= 1e-12 * w[0].1 || w[0].0.signum() != w[1].0.signum() {
                    return Err(Error::VanishingDenominator { x: window.grid.x(i), t });
                }
            }
        }
        Ok(())
    }

    /// Max of `|V₂|` on the grid, rejected above `tol`.
    pub fn require_free(&self, window: &Window, tol: f64) -> Result<f64> {
        let residual = window.grid.points().map(|x| self.v2(x).value().abs()).fold(0.0, f64::max);
        if residual > tol {
            return Err(Error::V2NotFree { residual });
        }
        Ok(residual)
    }

    /// `∂_t f` as a jet in `x`: `−f₁' ḟ₀ / (2D²)`.
    fn f_dot(&self, x: f64, t: f64) -> Jet {
        let d = self.denominator(x, t);
        self.f1.jet(x).deriv().div(&d.square()).scale(-0.5 * self.f0(t)[1])
    }

    /// The four compatibility residuals on the grid at `times`.
    pub fn constraints(&self, window: &Window, times: &[f64]) -> NonStatConstraints {
        let mut out = NonStatConstraints { drift: 0.0, b_evolution: 0.0, stationary: 0.0, closure: 0.0, skipped: 0 };
        for &t in times {
            let [_, f0d, f0dd] = self.f0(t);
            for x in window.grid.points() {
                let v2 = self.v2(x);
                if v2.valid() < 3 {
                    out.skipped += 1;
                    continue;
                }
                let (f, c, b) = (self.f(x, t), self.c(x, t), self.b(x, t));
                let fd = self.f_dot(x, t);
                let d = self.denominator(x, t).value();
                let cd = f0dd / (2.0 * d) - f0d * f0d / (2.0 * d * d);
                let bd = fd.d(1) + 4.0 * f.value() * fd.value();
                let r1 = fd.value() - c.d(1);
                let r2 = bd + c.d(2) + 4.0 * c.value() * f.d(1);
                let r3 = f.d(2) - b.d(1) - v2.d(1) + 4.0 * f.value() * f.d(1);
                let r4 = cd + 2.0 * f.value() * v2.d(1) - b.d(2) - 4.0 * b.value() * f.d(1) - v2.d(2);
                out.drift = out.drift.max(r1.abs());
                out.b_evolution = out.b_evolution.max(r2.abs());
                out.stationary = out.stationary.max(r3.abs());
                out.closure = out.closure.max(r4.abs());
            }
        }
        out
    }

    /// Canonical charge `∂² − 2f∂ + b + ic`.
    pub fn charge(&self) -> ChargeSpec {
        let (a, b, c) = (self.clone(), self.clone(), self.clone());
        let f: RealCoefFn = Arc::new(move |x, t| a.f(x, t));
        let bf: RealCoefFn = Arc::new(move |x, t| b.b(x, t));
        let cf: RealCoefFn = Arc::new(move |x, t| c.c(x, t));
        ChargeSpec::canonical(Profile::constant(1.0), f, bf, cf)
    }

    /// `R₁ = q⁺q⁻`, a symmetry of the first partner.
    pub fn r1(&self) -> Result<SymmetryOpSpec> {
        let q = self.charge();
        SymmetryOpSpec::product(q.clone(), q.adjoint())
    }

    /// `R₂ = q⁻q⁺`.
    pub fn r2(&self) -> Result<SymmetryOpSpec> {
        let q = self.charge();
        SymmetryOpSpec::product(q.adjoint(), q)
    }

    /// `H₂² + λ₀²/4`, equal to `R₂`.
    pub fn r2_closed_form(&self) -> Result<SymmetryOpSpec> {
        let h = self.v2_bivariate();
        let shift = self.lambda0 * self.lambda0 / 4.0;
        SymmetryOpSpec::new(vec![
            SymTerm::unit(vec![OpFactor::Hamiltonian(h.clone()), OpFactor::Hamiltonian(h)]),
            SymTerm::new(move |_| shift.into(), Vec::new()),
        ])
    }

    fn v2_bivariate(&self) -> Bivariate {
        let fam = self.clone();
        Bivariate::stationary(move |x| fam.v2(x).value())
    }

    pub fn pair(&self, window: &Window) -> Result<PotentialPair> {
        self.check_denominator(window)?;
        window.exclude_singular(&self.f1.singular_points())?;
        let fam = self.clone();
        let v1 = Bivariate::new(move |x, t| fam.v2(x).value() - 4.0 * fam.f(x, t).d(1));
        let provenance = Provenance {
            reduced_accuracy: self.f1.reduced_accuracy(),
            ..Provenance::new("nonstat")
                .param("sigma", self.sigma)
                .param("delta", self.delta)
                .param("lambda0", self.lambda0)
                .note(&format!("f1 = {:?}", self.f1))
        };
        PotentialPair {
            v1,
            v2: self.v2_bivariate(),
            charge: self.charge().with_t_range(window.t_min, window.t_max),
            kind: EquationKind::Schrodinger,
            provenance,
        }
        .ensure_finite(window)
    }
}
