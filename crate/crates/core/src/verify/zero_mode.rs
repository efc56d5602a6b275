use serde::Serialize;

use super::report::VerificationReport;
use super::tolerances::IDENTITY;
use crate::error::Result;
use crate::families::FirstOrderFamily;
use crate::field::quadrature::integrate;
use crate::field::{ComplexField, Grid1D, Profile};
use crate::operators::FieldOperator;

/// Outcome of `∫ e^{−2K(y)} dy` over the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "class")]
pub enum NormalizationIntegral {
    Finite { value: f64, half_width: f64 },
    DivergentLeft,
    DivergentRight,
    DivergentBoth,
}

const START_HALF_WIDTH: f64 = 8.0;
const MAX_HALF_WIDTH: f64 = 1024.0;
const STEP: f64 = 1e-3;
/// Tail integrand, relative to the integral, below which the tail is dropped.
const TAIL: f64 = 1e-20;

/// Doubles the half-width `Y` until the integrand at `±Y` is negligible, or
/// gives up at `Y = 1024` and reports the side that did not decay.
pub fn normalization_integral(k: &Profile) -> NormalizationIntegral {
    let weight = |y: f64| (-2.0 * k.value(y)).exp();
    // one half-line at a time, so an overflow on one side cannot mask the other
    let half = |y: f64, sign: f64| {
        let n = (y / STEP).round() as usize + 1;
        let h = y / (n - 1) as f64;
        let vals: Vec<f64> = (0..n).map(|i| weight(sign * i as f64 * h)).collect();
        let total = integrate(&vals, h);
        let tail = vals[n - 1];
        let settled = total.is_finite() && tail.is_finite() && tail <= TAIL * total.max(f64::MIN_POSITIVE);
        (total, settled)
    };
    let mut y = START_HALF_WIDTH;
    loop {
        let (left, left_ok) = half(y, -1.0);
        let (right, right_ok) = half(y, 1.0);
        if left_ok && right_ok {
            return NormalizationIntegral::Finite { value: left + right, half_width: y };
        }
        if y >= MAX_HALF_WIDTH || !left.is_finite() || !right.is_finite() {
            return match (left_ok, right_ok) {
                (false, false) => NormalizationIntegral::DivergentBoth,
                (false, true) => NormalizationIntegral::DivergentLeft,
                _ => NormalizationIntegral::DivergentRight,
            };
        }
        y *= 2.0;
    }
}

/// Builds `exp(−h − ig)` at time `t`, measures `‖q⁺ψ‖/‖ψ‖` against `1e−8`
/// and classifies the zero mode as normalizable or not.
pub fn zero_mode_check(scenario: &str, fam: &FirstOrderFamily, grid: &Grid1D, t: f64) -> Result<VerificationReport> {
    zero_mode_check_with(scenario, fam, grid, t, IDENTITY)
}

/// [`zero_mode_check`] with an explicit annihilation tolerance.
pub fn zero_mode_check_with(
    scenario: &str,
    fam: &FirstOrderFamily,
    grid: &Grid1D,
    t: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let psi = ComplexField::from_fn(*grid, |x| fam.zero_mode(x, t))?;
    let image = fam.charge().apply_raw(&psi, t)?;
    let source = psi.norm_on(image.reliable());
    let ratio = if source > 0.0 { image.reliable_norm() / source } else { f64::NAN };

    let mut report = VerificationReport::new(scenario);
    report.residual("annihilation", ratio, tol, Some(image.reliable_extent()));
    match normalization_integral(&fam.k) {
        NormalizationIntegral::Finite { value, half_width } => {
            report.metric("normalization-integral", value);
            report.metric("normalization-half-width", half_width);
            report.flag("normalizable");
        }
        other => {
            let side = match other {
                NormalizationIntegral::DivergentLeft => "left",
                NormalizationIntegral::DivergentRight => "right",
                _ => "both",
            };
            report.flag(format!("not-normalizable: divergent {side}"));
        }
    }
    Ok(report)
}
