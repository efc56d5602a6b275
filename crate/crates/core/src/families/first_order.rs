use std::sync::Arc;

use super::{PotentialPair, Provenance, Window};
use crate::error::Result;
use crate::field::{Bivariate, CJet, Jet, Profile, C64};
use crate::operators::{ChargeSpec, CoefFn};
use crate::propagate::EquationKind;

/// First-order intertwining with a time-dependent scale `ρ`, shift `μ`, phase
/// `γ` and superpotential shape `K(y)`, `y = x/ρ + μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderFamily {
    pub rho: Profile,
    pub mu: Profile,
    pub gamma: Profile,
    pub k: Profile,
}

/// Which partner of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    One,
    Two,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::One => 1.0,
            Branch::Two => -1.0,
        }
    }
}

impl FirstOrderFamily {
    /// Stationary family: `ρ = 1`, `μ = γ = 0`.
    pub fn stationary(k: Profile) -> Self {
        Self { rho: Profile::constant(1.0), mu: Profile::zero(), gamma: Profile::zero(), k }
    }

    pub fn y(&self, x: f64, t: f64) -> f64 {
        x / self.rho.value(t) + self.mu.value(t)
    }

    /// Inverse of [`Self::y`] at fixed `t`.
    pub fn x_of(&self, y: f64, t: f64) -> f64 {
        (y - self.mu.value(t)) * self.rho.value(t)
    }

    /// Gauge phase `g = −(ρ̇/4ρ)x² + ½ρμ̇x + γ`.
    pub fn phase(&self, x: f64, t: f64) -> f64 {
        let r = self.rho.jet(t);
        -(r.d(1) / (4.0 * r.value())) * x * x + 0.5 * r.value() * self.mu.derivative(t, 1) * x + self.gamma.value(t)
    }

    /// `h = ½ ln ρ + K(y)`.
    pub fn amplitude_exponent(&self, x: f64, t: f64) -> f64 {
        0.5 * self.rho.value(t).ln() + self.k.value(self.y(x, t))
    }

    /// Candidate zero mode `exp(−h − ig)` of the charge.
    pub fn zero_mode(&self, x: f64, t: f64) -> C64 {
        C64::from_polar((-self.amplitude_exponent(x, t)).exp(), -self.phase(x, t))
    }

    /// Separated spatial potential `K'² ± K''` in `y`.
    pub fn branch_potential(&self, branch: Branch) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
        let k = self.k.clone();
        let s = branch.sign();
        move |y| {
            let j = k.jet(y);
            j.d(1) * j.d(1) + s * j.d(2)
        }
    }

    fn potential(&self, branch: Branch) -> Bivariate {
        let fam = self.clone();
        let s = branch.sign();
        Bivariate::new(move |x, t| {
            let r = fam.rho.jet(t);
            let m = fam.mu.jet(t);
            let (rho, rd, rdd) = (r.value(), r.d(1), r.d(2));
            let (md, mdd) = (m.d(1), m.d(2));
            let kj = fam.k.jet(x / rho + m.value());
            (kj.d(1) * kj.d(1) + s * kj.d(2)) / (rho * rho) - rdd * x * x / (4.0 * rho)
                + (rd * md + rho * mdd / 2.0) * x
                - rho * rho * md * md / 4.0
                + fam.gamma.derivative(t, 1)
        })
    }

    /// `ρ∂x + K'(y) − (i/2)(ρ̇x − ρ²μ̇)`.
    pub fn charge(&self) -> ChargeSpec {
        let rho = self.rho.clone();
        let c1: CoefFn = Arc::new(move |_, t| CJet::real(Jet::constant(rho.value(t))));
        let fam = self.clone();
        let c0: CoefFn = Arc::new(move |x, t| {
            let r = fam.rho.jet(t);
            let rho = r.value();
            let md = fam.mu.derivative(t, 1);
            let kp = fam.k.jet(x / rho + fam.mu.value(t)).deriv().chain_affine(1.0 / rho);
            let im = Jet::variable(x).scale(-r.d(1) / 2.0) + rho * rho * md / 2.0;
            CJet::new(kp, im)
        });
        ChargeSpec::first_order(c1, c0)
    }

    pub fn pair(&self, window: &Window) -> Result<PotentialPair> {
        self.rho.require_positive("rho", window.t_min, window.t_max)?;
        for t in window.sample_times(9) {
            let xs: Vec<f64> = self.k.singular_points().iter().map(|&y| self.x_of(y, t)).collect();
            window.exclude_singular(&xs)?;
        }
        let provenance = Provenance::new("first-order")
            .gauge("beta(t) = 0")
            .gauge("alpha(t) = 0")
            .gauge("xi0 = 0")
            .note(&format!("rho = {:?}", self.rho))
            .note(&format!("mu = {:?}", self.mu))
            .note(&format!("gamma = {:?}", self.gamma))
            .note(&format!("K = {:?}", self.k))
            .note("xi1, xi2 fixed by the gauge reduction to rho, mu");
        let provenance = Provenance {
            reduced_accuracy: self.k.reduced_accuracy() || self.rho.reduced_accuracy(),
            ..provenance
        };
        PotentialPair {
            v1: self.potential(Branch::One),
            v2: self.potential(Branch::Two),
            charge: self.charge().with_t_range(window.t_min, window.t_max),
            kind: EquationKind::Schrodinger,
            provenance,
        }
        .ensure_finite(window)
    }
}
