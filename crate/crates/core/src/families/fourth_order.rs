use std::sync::Arc;

use super::{PotentialPair, Provenance, Window};
use crate::error::{Error, Result};
use crate::field::{Bivariate, CJet, CumulativeIntegral, Jet, Profile, C64, JET_ORDER};
use crate::ode::{ode_residual, OdeEquation, OdeInput};
use crate::operators::{ChargeSpec, CoefFn};
use crate::propagate::EquationKind;

/// Stationary pair intertwined by `θ(t)M⁺ + iλ(t)x a⁺`, fourth-order as a symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct FourthOrderFamily {
    pub f: Profile,
    pub beta: f64,
    pub c: f64,
    pub a0: f64,
    /// Lower limit of the quadrature inside the potentials.
    pub x0: f64,
    pub theta0: f64,
    pub lambda0: f64,
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub struct FourthOrderBuild {
    pub pair: PotentialPair,
    pub theta: Profile,
    pub lambda: Profile,
}

/// Jets of the `x`-dependent coefficients, shared by the potentials and the charge.
#[derive(Clone)]
struct Coefficients {
    f: Profile,
    beta: f64,
    c: f64,
    a0: f64,
    integral: Arc<CumulativeIntegral>,
}

impl Coefficients {
    fn integrand(f: &Jet, x: f64, c: f64) -> Jet {
        f.scale(1.0 - 2.0 * c) + (Jet::variable(x) * f.square()).scale(2.0)
    }

    /// `J = ∫_{x0}^{x} [(1 − 2c) f + 2 z f²] dz` as a jet.
    fn j(&self, x: f64, fj: &Jet) -> Jet {
        let g = Self::integrand(fj, x, self.c);
        let mut d = [0.0; JET_ORDER + 1];
        d[0] = self.integral.eval(x);
        d[1..].copy_from_slice(&g.derivs()[..JET_ORDER]);
        Jet::from_derivs(d, (g.valid() + 1).min(JET_ORDER))
    }

    /// `V₂ = 2f' + 4f² + (2 − 4c) f/x + βx²/8 + a₀ − 2J/x²`.
    fn v2(&self, x: f64) -> Jet {
        let fj = self.f.jet(x);
        let xj = Jet::variable(x);
        let inv = xj.recip();
        fj.deriv().scale(2.0) + fj.square().scale(4.0) + (fj.clone() * inv.clone()).scale(2.0 - 4.0 * self.c)
            + xj.square().scale(self.beta / 8.0)
            + self.a0
            - (self.j(x, &fj) * inv.square()).scale(2.0)
    }

    /// `b = f' + 2f² − V₂ + βx²/4 + a₀`.
    fn b(&self, x: f64) -> Jet {
        let fj = self.f.jet(x);
        fj.deriv() + fj.square().scale(2.0) - self.v2(x) + Jet::variable(x).square().scale(self.beta / 4.0) + self.a0
    }

    /// `W = −2f + c/x`.
    fn w(&self, x: f64) -> Jet {
        self.f.jet(x).scale(-2.0) + Jet::variable(x).recip().scale(self.c)
    }
}

impl FourthOrderFamily {
    pub fn new(f: Profile, beta: f64, c: f64, a0: f64, x0: f64) -> Self {
        Self { f, beta, c, a0, x0, theta0: 1.0, lambda0: 0.0, tol: 1e-6 }
    }

    pub fn with_initial(mut self, theta0: f64, lambda0: f64) -> Self {
        self.theta0 = theta0;
        self.lambda0 = lambda0;
        self
    }

    /// `θ` and `λ` solving `θ̇ = −2λ`, `λ̇ = βθ`.
    pub fn theta_lambda(&self) -> Result<(Profile, Profile)> {
        if !(self.beta > 0.0) {
            return Err(Error::NonPositiveBeta(self.beta));
        }
        let w = (2.0 * self.beta).sqrt();
        let theta = Profile::Sum(vec![Profile::cos(self.theta0, w), Profile::sin(-2.0 * self.lambda0 / w, w)]);
        let lambda = Profile::Sum(vec![Profile::sin(self.theta0 * w / 2.0, w), Profile::cos(self.lambda0, w)]);
        Ok((theta, lambda))
    }

    pub fn build(&self, window: &Window) -> Result<FourthOrderBuild> {
        let (theta, lambda) = self.theta_lambda()?;
        let mut singular = self.f.singular_points();
        singular.push(0.0);
        window.exclude_singular(&singular)?;
        let residual = ode_residual(
            OdeEquation::FourthOrderConstraint { beta: self.beta, c: self.c, x0: self.x0 },
            OdeInput::Profile(&self.f, &window.grid),
        )?
        .max;
        if !(residual <= self.tol) {
            return Err(Error::ConstraintResidualTooLarge { residual, tol: self.tol });
        }

        let (f, c) = (self.f.clone(), self.c);
        let integral = CumulativeIntegral::new(
            move |z| Coefficients::integrand(&f.jet(z), z, c).value(),
            self.x0,
            self.x0.min(window.grid.x_min()),
            self.x0.max(window.grid.x_max()),
            window.grid.h().min(1e-3),
        )?;
        let co = Coefficients { f: self.f.clone(), beta: self.beta, c: self.c, a0: self.a0, integral: Arc::new(integral) };

        let k = co.clone();
        let v2 = Bivariate::stationary(move |x| k.v2(x).value());
        let k = co.clone();
        let v1 = Bivariate::stationary(move |x| k.v2(x).value() - 4.0 * k.f.derivative(x, 1));

        let th = theta.clone();
        let c2: CoefFn = Arc::new(move |_, t| CJet::constant(C64::new(th.value(t), 0.0)));
        let (th, la, k) = (theta.clone(), lambda.clone(), co.clone());
        let c1: CoefFn = Arc::new(move |x, t| {
            CJet::new(k.f.jet(x).scale(-2.0 * th.value(t)), Jet::variable(x).scale(la.value(t)))
        });
        let (th, la, k) = (theta.clone(), lambda.clone(), co);
        let c0: CoefFn =
            Arc::new(move |x, t| CJet::new(k.b(x).scale(th.value(t)), (Jet::variable(x) * k.w(x)).scale(la.value(t))));
        let charge = ChargeSpec::second_order(c2, c1, c0).with_t_range(window.t_min, window.t_max);

        let provenance = Provenance {
            reduced_accuracy: self.f.reduced_accuracy(),
            ..Provenance::new("fourth-order")
                .param("beta", self.beta)
                .param("c", self.c)
                .param("a0", self.a0)
                .param("x0", self.x0)
                .param("theta0", self.theta0)
                .param("lambda0", self.lambda0)
                .note(&format!("f = {:?}", self.f))
                .check("constraint-residual", residual)
        };
        let pair = PotentialPair { v1, v2, charge, kind: EquationKind::Schrodinger, provenance }.ensure_finite(window)?;
        Ok(FourthOrderBuild { pair, theta, lambda })
    }
}
