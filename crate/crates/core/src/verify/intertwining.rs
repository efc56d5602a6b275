use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::families::PotentialPair;
use crate::field::{ComplexField, C64};
use crate::operators::{residual_norms, FieldOperator};
use crate::par;
use crate::propagate::Snapshots;

/// Images smaller than this fraction of the source are kernel elements.
pub const KERNEL_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct IntertwiningOutcome {
    pub report: VerificationReport,
    /// `q⁺ψ₂` at every source time.
    pub image: Snapshots,
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// Maps `source` through `op` and measures the image under `v_out`.
fn transport(
    report: &mut VerificationReport,
    label: &str,
    op: &dyn FieldOperator,
    v_in: &crate::field::Bivariate,
    v_out: &crate::field::Bivariate,
    source: &Snapshots,
    tol: f64,
) -> Result<Snapshots> {
    let kind = source.kind();
    let source_res = max_of(&residual_norms(v_in, source, kind)?);
    let limit = tol / 10.0;
    if !(source_res <= limit) {
        return Err(Error::SourceNotASolution { residual: source_res, limit });
    }
    report.metric(format!("{label}/source-residual"), source_res);

    let image = source.map_fields(|f, t| op.apply_raw(f, t))?;
    let ratios = par::map(source.len(), |k| {
        let s = source.field(k);
        let q = image.field(k);
        let sn = s.norm_on(q.reliable());
        if sn == 0.0 {
            0.0
        } else {
            q.reliable_norm() / sn
        }
    });
    let ratio = max_of(&ratios);
    report.metric(format!("{label}/image-to-source"), ratio);
    let interior = Some(image.field(0).reliable_extent());
    if ratio < KERNEL_THRESHOLD {
        report.flag(format!("{label}: kernel-element (trivial image)"));
        report.residual(format!("{label}/mapped-residual"), 0.0, tol, interior);
    } else {
        let mapped = max_of(&residual_norms(v_out, &image, kind)?);
        report.residual(format!("{label}/mapped-residual"), mapped, tol, interior);
    }
    Ok(image)
}

/// Checks that `q⁺` carries solutions of `L[V₂]` to solutions of `L[V₁]`, and
/// optionally that `q⁻` carries an `L[V₁]` solution back to `L[V₂]`.
///
/// Sources whose own residual exceeds `tol / 10` are rejected: the mapped
/// residual would then say nothing about the identity.
pub fn check_intertwining(
    scenario: &str,
    pair: &PotentialPair,
    source: &Snapshots,
    tol: f64,
    adjoint_source: Option<&Snapshots>,
) -> Result<IntertwiningOutcome> {
    let mut report = VerificationReport::new(scenario).with_provenance(pair.provenance.clone());
    let image = transport(&mut report, "forward", &pair.charge, &pair.v2, &pair.v1, source, tol)?;
    if let Some(src) = adjoint_source {
        let adj = pair.adjoint_charge();
        transport(&mut report, "adjoint", &adj, &pair.v1, &pair.v2, src, tol)?;
    }
    Ok(IntertwiningOutcome { report, image })
}

/// Smooth bump vanishing with all derivatives at both ends of `[a, b]`.
fn bump(x: f64, a: f64, b: f64) -> f64 {
    if x <= a || x >= b {
        return 0.0;
    }
    let s = 2.0 * (x - a) / (b - a) - 1.0;
    (-1.0 / (1.0 - s * s)).exp()
}

/// Windowed projections of `field` onto `e^{ikx}` and `e^{−ikx}` over `[a, b]`.
fn projections(field: &ComplexField, k: f64, a: f64, b: f64) -> (f64, f64) {
    let g = field.grid();
    let (mut fwd, mut back) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for i in field.reliable() {
        let x = g.x(i);
        let w = bump(x, a, b);
        if w == 0.0 {
            continue;
        }
        let v = field.values()[i] * w;
        fwd += v * C64::from_polar(1.0, -k * x);
        back += v * C64::from_polar(1.0, k * x);
    }
    (fwd.norm(), back.norm())
}

/// Amplitude of the counter-propagating component relative to the traveling
/// one, outside the core `[core_lo, core_hi]`, on both sides; the larger wins.
///
/// A wave `e^{ikx}` (k > 0) travels right, so `e^{−ikx}` is the counter part.
pub fn reflection_ratio(field: &ComplexField, k: f64, core: (f64, f64)) -> Result<f64> {
    let (lo, hi) = field.reliable_extent();
    if !(lo < core.0 && core.1 < hi) {
        return Err(Error::WindowViolation(format!(
            "core [{}, {}] is not inside the reliable interior [{lo}, {hi}]",
            core.0, core.1
        )));
    }
    let mut worst: f64 = 0.0;
    for (a, b) in [(lo, core.0), (core.1, hi)] {
        let (fwd, back) = projections(field, k, a, b);
        if fwd == 0.0 {
            return Err(Error::InvalidParameter("no traveling component outside the core".into()));
        }
        worst = worst.max(back / fwd);
    }
    Ok(worst)
}

/// Reflection ratio of every `stride`-th image snapshot against `tol`.
pub fn check_reflectionless(
    scenario: &str,
    image: &Snapshots,
    k: f64,
    core: (f64, f64),
    tol: f64,
    stride: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(scenario);
    let idx: Vec<usize> = (0..image.len()).step_by(stride.max(1)).collect();
    let ratios = par::try_map(idx.len(), |j| reflection_ratio(image.field(idx[j]), k, core))?;
    report.residual("counter-propagating-ratio", max_of(&ratios), tol, Some(core));
    Ok(report)
}
