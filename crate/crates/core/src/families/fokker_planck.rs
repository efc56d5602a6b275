use std::fmt;
use std::sync::Arc;

use super::{PotentialPair, Provenance, Window};
use crate::error::{Error, Result};
use crate::field::{Bivariate, CJet, Jet, Profile, C64};
use crate::operators::{ChargeSpec, CoefFn};
use crate::propagate::EquationKind;

/// One separable term `coeff · X(x) · T(t)` of `χ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiTerm {
    pub x: Profile,
    pub t: Profile,
    pub coeff: C64,
}

/// Real superpotential `χ(x, t)` as a sum of separable terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Chi {
    terms: Vec<(Profile, Profile, f64)>,
}

impl Chi {
    /// Rejects any term with a non-zero imaginary coefficient.
    pub fn new(terms: Vec<ChiTerm>) -> Result<Self> {
        if terms.iter().any(|t| t.coeff.im != 0.0) {
            return Err(Error::ComplexChiRejected);
        }
        Ok(Self { terms: terms.into_iter().map(|t| (t.x, t.t, t.coeff.re)).collect() })
    }

    /// `χ(x, t) = X(x)`.
    pub fn stationary(x: Profile) -> Self {
        Self { terms: vec![(x, Profile::constant(1.0), 1.0)] }
    }

    /// Jet in `x` and the time derivative at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> (Jet, f64) {
        self.terms.iter().fold((Jet::constant(0.0), 0.0), |(j, dt), (px, pt, c)| {
            let tj = pt.jet(t);
            let xj = px.jet(x);
            (j + xj.scale(c * tj.value()), dt + c * xj.value() * tj.d(1))
        })
    }

    fn reduced_accuracy(&self) -> bool {
        self.terms.iter().any(|(a, b, _)| a.reduced_accuracy() || b.reduced_accuracy())
    }
}

type DriftFn = Arc<dyn Fn(f64, f64) -> (Jet, f64) + Send + Sync>;

/// Drift potential `U(x, t)` with its `x`-jet and time derivative.
#[derive(Clone)]
pub struct DriftPotential(DriftFn);

impl fmt::Debug for DriftPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DriftPotential")
    }
}

impl DriftPotential {
    pub fn new(f: impl Fn(f64, f64) -> (Jet, f64) + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        (self.0)(x, t).0.value()
    }

    pub fn as_bivariate(&self) -> Bivariate {
        let f = self.0.clone();
        Bivariate::new(move |x, t| f(x, t).0.value())
    }

    /// Diffusion potential `V = U'²/4 − U''/2 − U̇/2`.
    pub fn diffusion_potential(&self) -> Bivariate {
        let f = self.0.clone();
        Bivariate::new(move |x, t| {
            let (j, dt) = f(x, t);
            j.d(1) * j.d(1) / 4.0 - j.d(2) / 2.0 - dt / 2.0
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FokkerPlanckFamily {
    pub chi: Chi,
    pub rho: Profile,
}

#[derive(Debug, Clone)]
pub struct FokkerPlanckPair {
    /// Diffusion-equation partners with the charge `ρ(∂x + χ')`.
    pub pair: PotentialPair,
    pub u1: DriftPotential,
    pub u2: DriftPotential,
    /// Max over the window of `|V[U₂](x, t) − V₂(x, −t)|`.
    pub round_trip: f64,
}

impl FokkerPlanckFamily {
    pub fn build(&self, window: &Window) -> Result<FokkerPlanckPair> {
        self.rho.require_positive("rho", window.t_min, window.t_max)?;
        let (chi, rho) = (self.chi.clone(), self.rho.clone());
        let v1 = Bivariate::new(move |x, t| {
            let (j, dt) = chi.eval(x, t);
            let r = rho.jet(t);
            j.d(1) * j.d(1) + j.d(2) + dt - r.d(1) / r.value()
        });
        let chi = self.chi.clone();
        let v2 = Bivariate::new(move |x, t| {
            let (j, dt) = chi.eval(x, t);
            j.d(1) * j.d(1) - j.d(2) + dt
        });
        let (chi, rho) = (self.chi.clone(), self.rho.clone());
        let u1 = DriftPotential::new(move |x, t| {
            let (j, dt) = chi.eval(x, t);
            let r = rho.jet(t);
            (j.scale(-2.0) + 2.0 * r.value().ln(), 2.0 * r.d(1) / r.value() - 2.0 * dt)
        });
        let chi = self.chi.clone();
        let u2 = DriftPotential::new(move |x, t| {
            let (j, dt) = chi.eval(x, -t);
            (j.scale(2.0), -2.0 * dt)
        });

        let from_u2 = u2.diffusion_potential();
        let mut round_trip: f64 = 0.0;
        for t in window.sample_times(9) {
            for x in window.grid.points() {
                round_trip = round_trip.max((from_u2.eval(x, t) - v2.eval(x, -t)).abs());
            }
        }

        let rho = self.rho.clone();
        let c1: CoefFn = Arc::new(move |_, t| CJet::real(Jet::constant(rho.value(t))));
        let (chi, rho) = (self.chi.clone(), self.rho.clone());
        let c0: CoefFn = Arc::new(move |x, t| CJet::real(chi.eval(x, t).0.deriv().scale(rho.value(t))));
        let charge = ChargeSpec::first_order(c1, c0).with_t_range(window.t_min, window.t_max);

        let provenance = Provenance {
            reduced_accuracy: self.chi.reduced_accuracy(),
            ..Provenance::new("fokker-planck")
                .note(&format!("rho = {:?}", self.rho))
                .note("U2 = 2 chi(x, -t) generates V2 evaluated at -t")
                .check("drift-round-trip", round_trip)
        };
        let pair = PotentialPair { v1, v2, charge, kind: EquationKind::Diffusion, provenance }.ensure_finite(window)?;
        Ok(FokkerPlanckPair { pair, u1, u2, round_trip })
    }
}
