use std::sync::Arc;

use super::{NonStatFamily, PotentialPair, Provenance, Window};
use crate::error::{Error, Result};
use crate::field::{Bivariate, CJet, CumulativeIntegral, Jet, Profile, C64};
use crate::operators::{ChargeSpec, CoefFn};
use crate::propagate::EquationKind;

/// A nonstationary pair carried to a time-dependent oscillator frame by
/// `y = x/ρ(t)`, `τ = ∫₀ᵗ dt'/ρ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct TdOscFamily {
    pub rho: Profile,
    pub nested: NonStatFamily,
}

impl TdOscFamily {
    fn tau(&self, window: &Window) -> Result<Arc<CumulativeIntegral>> {
        let (lo, hi) = window.time_span_with_origin();
        self.rho.require_positive("rho", lo, hi)?;
        let rho = self.rho.clone();
        let step = ((hi - lo) / 4096.0).clamp(1e-6, 1e-3);
        Ok(Arc::new(CumulativeIntegral::new(move |t| rho.value(t).powi(-2), 0.0, lo, hi, step)?))
    }

    /// `τ(t)` on the window.
    pub fn tau_map(&self, window: &Window) -> Result<impl Fn(f64) -> f64 + Send + Sync> {
        let tau = self.tau(window)?;
        Ok(move |t| tau.eval(t))
    }

    pub fn pair(&self, window: &Window) -> Result<PotentialPair> {
        let tau = self.tau(window)?;
        for t in window.sample_times(33) {
            let (rho, s) = (self.rho.value(t), tau.eval(t));
            let f0 = self.nested.f0(s)[0];
            let values: Vec<f64> = window.grid.points().map(|x| self.nested.f1.value(x / rho) + f0).collect();
            let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            for (i, w) in values.windows(2).enumerate() {
                if w[0].abs() <= 1e-12 * scale || w[0].signum() != w[1].signum() {
                    return Err(Error::VanishingDenominator { x: window.grid.x(i), t });
                }
            }
            let xs: Vec<f64> = self.nested.f1.singular_points().iter().map(|y| y * rho).collect();
            window.exclude_singular(&xs)?;
        }

        let frame = |first: bool| {
            let (rho, nested, tau) = (self.rho.clone(), self.nested.clone(), tau.clone());
            Bivariate::new(move |x, t| {
                let r = rho.jet(t);
                let y = x / r.value();
                let mut u = nested.v2(y).value();
                if first {
                    u -= 4.0 * nested.f(y, tau.eval(t)).d(1);
                }
                -r.d(2) * x * x / (4.0 * r.value()) + u / (r.value() * r.value())
            })
        };
        let (v1, v2) = (frame(true), frame(false));

        let (rho, nested, tau_c) = (self.rho.clone(), self.nested.clone(), tau.clone());
        let coeffs = move |x: f64, t: f64| {
            let r = rho.jet(t);
            let (p, pd) = (r.value(), r.d(1));
            let (y, s) = (x / p, tau_c.eval(t));
            let f = nested.f(y, s).chain_affine(1.0 / p);
            let b = nested.b(y, s).chain_affine(1.0 / p);
            let c = nested.c(y, s).chain_affine(1.0 / p);
            (p, pd, f, b, c)
        };
        let c2: CoefFn = {
            let rho = self.rho.clone();
            Arc::new(move |_, t| CJet::constant(C64::new(rho.value(t).powi(2), 0.0)))
        };
        let k = coeffs.clone();
        let c1: CoefFn = Arc::new(move |x, t| {
            let (p, pd, f, _, _) = k(x, t);
            CJet::new(f.scale(-2.0 * p), Jet::variable(x).scale(-p * pd))
        });
        let k = coeffs;
        let c0: CoefFn = Arc::new(move |x, t| {
            let (p, pd, f, b, c) = k(x, t);
            let xj = Jet::variable(x);
            let re = b - xj.square().scale(pd * pd / 4.0);
            let im = (xj * f).scale(pd) + c + (-p * pd / 2.0);
            CJet::new(re, im)
        });
        let charge = ChargeSpec::second_order(c2, c1, c0).with_t_range(window.t_min, window.t_max);

        let provenance = Provenance {
            reduced_accuracy: self.rho.reduced_accuracy() || self.nested.f1.reduced_accuracy(),
            ..Provenance::new("td-oscillator")
                .param("sigma", self.nested.sigma)
                .param("delta", self.nested.delta)
                .param("lambda0", self.nested.lambda0)
                .gauge("g1(t) = 0")
                .note(&format!("rho = {:?}", self.rho))
                .note(&format!("f1 = {:?}", self.nested.f1))
        };
        PotentialPair { v1, v2, charge, kind: EquationKind::Schrodinger, provenance }.ensure_finite(window)
    }
}
