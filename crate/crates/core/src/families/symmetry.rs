use std::sync::Arc;

use super::{Provenance, Window};
use crate::error::Result;
use crate::field::{Bivariate, CJet, CumulativeIntegral, Jet, Profile};
use crate::operators::{ChargeSpec, CoefFn, OpFactor, SymTerm, SymmetryOpSpec};

/// Potentials admitting a self-adjoint second-order symmetry
/// `R = −ω∂² + i{δ, ∂} + ζ`, parametrized by `ω(t) > 0`, `ν(t)` and `Φ(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryFamily {
    pub omega: Profile,
    pub nu: Profile,
    pub phi: Profile,
}

/// `z = x/√ω − ∫₀ᵗ ν ω^(−3/2)`, tabulated over the window.
#[derive(Debug, Clone)]
pub struct ZMap {
    omega: Profile,
    drift: CumulativeIntegral,
}

impl ZMap {
    pub fn z(&self, x: f64, t: f64) -> f64 {
        x / self.omega.value(t).sqrt() - self.drift.eval(t)
    }

    /// `∫₀ᵗ ν ω^(−3/2)`
    pub fn drift(&self, t: f64) -> f64 {
        self.drift.eval(t)
    }
}

#[derive(Debug, Clone)]
pub struct SymmetryBuild {
    pub v: Bivariate,
    /// `R` written as a second-order operator.
    pub r_charge: ChargeSpec,
    pub r: SymmetryOpSpec,
    pub z: Arc<ZMap>,
    pub provenance: Provenance,
}

impl SymmetryFamily {
    pub fn build(&self, window: &Window) -> Result<SymmetryBuild> {
        let (lo, hi) = window.time_span_with_origin();
        self.omega.require_positive("omega", lo, hi)?;
        let (om, nu) = (self.omega.clone(), self.nu.clone());
        let drift = CumulativeIntegral::new(
            move |t| nu.value(t) * om.value(t).powf(-1.5),
            0.0,
            lo,
            hi,
            ((hi - lo) / 64.0).clamp(1e-6, 1e-3),
        )?;
        let z = Arc::new(ZMap { omega: self.omega.clone(), drift });

        let fam = self.clone();
        let zv = z.clone();
        let v = Bivariate::new(move |x, t| {
            let o = fam.omega.jet(t);
            let n = fam.nu.jet(t);
            let (w, wd, wdd) = (o.value(), o.d(1), o.d(2));
            -(wdd - wd * wd / (2.0 * w)) * x * x / (8.0 * w) - (n.d(1) - n.value() * wd / (2.0 * w)) * x / (2.0 * w)
                + fam.phi.value(zv.z(x, t)) / w
        });

        let om = self.omega.clone();
        let c2: CoefFn = Arc::new(move |_, t| CJet::real(Jet::constant(-om.value(t))));
        let fam = self.clone();
        let c1: CoefFn = Arc::new(move |x, t| CJet::imag(fam.delta_jet(x, t).scale(2.0)));
        let fam = self.clone();
        let zc = z.clone();
        let c0: CoefFn = Arc::new(move |x, t| {
            let wd = fam.omega.derivative(t, 1);
            CJet::new(fam.zeta_jet(&zc, x, t), Jet::constant(wd / 4.0))
        });
        let r_charge = ChargeSpec::second_order(c2, c1, c0);
        let r = SymmetryOpSpec::new(vec![SymTerm::unit(vec![OpFactor::Charge(r_charge.clone())])])?;
        let provenance = Provenance::new("symmetry")
            .note(&format!("omega = {:?}", self.omega))
            .note(&format!("nu = {:?}", self.nu))
            .note(&format!("Phi = {:?}", self.phi))
            .note("zeta carries the time-only term nu^2/(4 omega) required by [S, R] = 0");
        Ok(SymmetryBuild { v, r_charge, r, z, provenance })
    }

    /// `δ = ω̇x/4 + ν/2` as a jet in `x`.
    pub fn delta_jet(&self, x: f64, t: f64) -> Jet {
        Jet::variable(x).scale(self.omega.derivative(t, 1) / 4.0) + self.nu.value(t) / 2.0
    }

    /// `ζ = Φ(z) + ω̇²x²/(16ω) + νω̇x/(4ω) + ν²/(4ω)` as a jet in `x`.
    fn zeta_jet(&self, z: &ZMap, x: f64, t: f64) -> Jet {
        let o = self.omega.jet(t);
        let (w, wd) = (o.value(), o.d(1));
        let n = self.nu.value(t);
        let xj = Jet::variable(x);
        self.phi.jet(z.z(x, t)).chain_affine(1.0 / w.sqrt())
            + xj.square().scale(wd * wd / (16.0 * w))
            + xj.scale(n * wd / (4.0 * w))
            + n * n / (4.0 * w)
    }

    /// Value of `ζ` at `(x, t)`.
    pub fn zeta(&self, build: &SymmetryBuild, x: f64, t: f64) -> f64 {
        self.zeta_jet(&build.z, x, t).value()
    }
}
