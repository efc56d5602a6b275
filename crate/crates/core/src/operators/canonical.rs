use std::fmt;
use std::sync::Arc;

use super::charge::{ChargeSpec, CoefFn};
use crate::error::{Error, Result};
use crate::field::{Bivariate, CJet, CumulativeIntegral, Jet, Profile, C64};

/// The non-local change of variables `(x, t) ↦ (y, τ)` with
/// `τ = ∫₀ᵗ dt'/g` and `y = x/√g − 2∫₀ᵗ g₁ g^(−3/2) dt'`.
#[derive(Clone)]
pub struct VariableMap {
    g: Profile,
    g1: Profile,
    tau: CumulativeIntegral,
    drift: CumulativeIntegral,
    phase: CumulativeIntegral,
    window: (f64, f64),
}

impl fmt::Debug for VariableMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VariableMap").field("window", &self.window).finish()
    }
}

impl VariableMap {
    /// Tables are built eagerly over `window`, which must contain `t = 0`.
    pub fn new(g: Profile, g1: Profile, window: (f64, f64)) -> Result<Self> {
        let (lo, hi) = window;
        if !(lo <= 0.0 && 0.0 <= hi && lo < hi) {
            return Err(Error::InvalidTimeGrid(format!("window [{lo}, {hi}] must contain t = 0")));
        }
        g.require_positive("g", lo, hi)?;
        let step = ((hi - lo) / 64.0).min(1e-3);
        let (ga, gb, gc) = (g.clone(), g.clone(), g.clone());
        let (g1b, g1c) = (g1.clone(), g1.clone());
        let tau = CumulativeIntegral::new(move |t| 1.0 / ga.value(t), 0.0, lo, hi, step)?;
        let drift = CumulativeIntegral::new(move |t| g1b.value(t) * gb.value(t).powf(-1.5), 0.0, lo, hi, step)?;
        let phase = CumulativeIntegral::new(
            move |t| {
                let r = g1c.value(t) / gc.value(t);
                r * r
            },
            0.0,
            lo,
            hi,
            step,
        )?;
        Ok(Self { g, g1, tau, drift, phase, window })
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn tau(&self, t: f64) -> f64 {
        self.tau.eval(t)
    }

    pub fn forward(&self, x: f64, t: f64) -> (f64, f64) {
        (x / self.g.value(t).sqrt() - 2.0 * self.drift.eval(t), self.tau(t))
    }

    /// Inverse of `τ(t)` by bisection; `τ` is increasing because `g > 0`.
    pub fn time_of(&self, tau: f64) -> f64 {
        let (mut lo, mut hi) = self.window;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.tau(mid) < tau {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 * (1.0 + mid.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn inverse(&self, y: f64, tau: f64) -> (f64, f64) {
        let t = self.time_of(tau);
        ((y + 2.0 * self.drift.eval(t)) * self.g.value(t).sqrt(), t)
    }

    /// `g^(−1/4) exp[i(ġx²/(8g) + g₁x/g − ∫₀ᵗ g₁²/g²)]`.
    pub fn multiplier(&self, x: f64, t: f64) -> C64 {
        let gj = self.g.jet(t);
        let (g, gd) = (gj.value(), gj.d(1));
        let g1 = self.g1.value(t);
        let arg = gd * x * x / (8.0 * g) + g1 * x / g - self.phase.eval(t);
        C64::from_polar(g.powf(-0.25), arg)
    }

    /// Term added to both potentials by the multiplier.
    pub fn potential_shift(&self, x: f64, t: f64) -> f64 {
        let gj = self.g.jet(t);
        let (g, gd, gdd) = (gj.value(), gj.d(1), gj.d(2));
        let g1j = self.g1.jet(t);
        let (g1, g1d) = (g1j.value(), g1j.d(1));
        (gdd / g - gd * gd / (2.0 * g * g)) * x * x / 8.0 - 0.5 * (g1 * gd / (g * g) - 2.0 * g1d / g) * x
    }
}

/// Output of [`canonicalize_second_order`].
#[derive(Clone, Debug)]
pub struct Canonicalized {
    /// `∂y² − 2f ∂y + b + ic` with coefficients as jets in `y`, evaluated at `(y, τ)`.
    pub charge: ChargeSpec,
    pub map: VariableMap,
    /// `Ṽ − V` as a function of `(x, t)`.
    pub potential_shift: Bivariate,
}

impl Canonicalized {
    pub fn multiplier(&self, x: f64, t: f64) -> C64 {
        self.map.multiplier(x, t)
    }
}

/// Brings `g(t)∂x² − 2F∂x + B` into the real canonical form.
///
/// The imaginary part of `F` must equal `ġx/4 + g₁`; this is checked on a
/// 65 × 17 sample of `x_range × t_window`.
pub fn canonicalize_second_order(
    g: Profile,
    f: CoefFn,
    b: CoefFn,
    g1: Profile,
    x_range: (f64, f64),
    t_window: (f64, f64),
) -> Result<Canonicalized> {
    let map = VariableMap::new(g.clone(), g1.clone(), t_window)?;
    let mut worst: f64 = 0.0;
    for i in 0..=16 {
        let t = t_window.0 + (t_window.1 - t_window.0) * i as f64 / 16.0;
        let gd = g.derivative(t, 1);
        let g1v = g1.value(t);
        for j in 0..=64 {
            let x = x_range.0 + (x_range.1 - x_range.0) * j as f64 / 64.0;
            let im = f(x, t).value().im;
            let want = gd * x / 4.0 + g1v;
            worst = worst.max((im - want).abs() / (1.0 + want.abs()));
        }
    }
    if worst > 1e-10 {
        return Err(Error::ImFConstraintViolated { residual: worst });
    }

    let shared = Arc::new(map.clone());
    let m1 = shared.clone();
    let (g_a, f_a) = (g.clone(), f.clone());
    let c1: CoefFn = Arc::new(move |y, tau| {
        let (x, t) = m1.inverse(y, tau);
        let sg = g_a.value(t).sqrt();
        // ∂x = g^(−1/2) ∂y, so a jet in x becomes a jet in y via x = √g·y + const
        CJet::real(f_a(x, t).re.scale(-2.0 / sg).chain_affine(sg))
    });
    let m0 = shared.clone();
    let (g_b, g1_b, f_b) = (g.clone(), g1.clone(), f.clone());
    let c0: CoefFn = Arc::new(move |y, tau| {
        let (x, t) = m0.inverse(y, tau);
        let gj = g_b.jet(t);
        let (gv, gd) = (gj.value(), gj.d(1));
        let s = Jet::variable(x).scale(gd / 4.0) + g1_b.value(t);
        let fj = f_b(x, t);
        let i = C64::new(0.0, 1.0);
        let bt = b(x, t) + CJet::constant(i * gd / 4.0)
            - CJet::real((s * s).scale(1.0 / gv))
            - (fj * CJet::real(s)).scale(2.0 * i / gv);
        bt.chain_affine(gv.sqrt())
    });
    let one: CoefFn = Arc::new(|_, _| CJet::constant(C64::new(1.0, 0.0)));
    let (lo, hi) = t_window;
    let charge = ChargeSpec::second_order(one, c1, c0).with_t_range(map.tau(lo), map.tau(hi));
    let ms = shared;
    let potential_shift = Bivariate::new(move |x, t| ms.potential_shift(x, t));
    Ok(Canonicalized { charge, map, potential_shift })
}
