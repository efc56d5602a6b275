use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::field::{Bivariate, ComplexField, BOUNDARY_BAND};
use crate::operators::{operator_defect, FieldOperator, SymmetryOpSpec};
use crate::par;
use crate::propagate::EquationKind;

/// Points at each edge a test field must avoid: the symmetry operator and the
/// Hamiltonian each consume a stencil band per derivative pair.
pub fn boundary_band(order: usize) -> usize {
    BOUNDARY_BAND * (order + 2)
}

/// Test-field amplitude in the band allowed relative to its peak.
const BAND_TOLERANCE: f64 = 1e-8;

/// `‖[S[V], R] f‖` for each test field at each time, judged against `tol`.
pub fn check_symmetry(
    scenario: &str,
    v: &Bivariate,
    r: &SymmetryOpSpec,
    tests: &[ComplexField],
    times: &[f64],
    tol: f64,
) -> Result<VerificationReport> {
    let band = boundary_band(r.order());
    for (i, f) in tests.iter().enumerate() {
        let n = f.grid().len();
        if 2 * band >= n {
            return Err(Error::TestTouchesBoundary(i));
        }
        let edge = f.max_abs_on(0..band).max(f.max_abs_on(n - band..n));
        if edge > BAND_TOLERANCE * f.max_abs() {
            return Err(Error::TestTouchesBoundary(i));
        }
    }
    let jobs: Vec<(usize, f64)> = (0..tests.len()).flat_map(|i| times.iter().map(move |&t| (i, t))).collect();
    let measured = par::try_map(jobs.len(), |j| {
        let (i, t) = jobs[j];
        let f = &tests[i];
        let d = operator_defect(r, v, v, f, t, EquationKind::Schrodinger)?;
        let rf = r.apply_raw(f, t)?;
        Ok::<_, Error>((d.reliable_norm(), rf.norm_on(d.reliable()), d.reliable_extent()))
    })?;

    let mut report = VerificationReport::new(scenario);
    for i in 0..tests.len() {
        let rows: Vec<_> = jobs.iter().zip(&measured).filter(|((ti, _), _)| *ti == i).map(|(_, m)| *m).collect();
        let abs = rows.iter().map(|m| m.0).fold(0.0, f64::max);
        let rel = rows.iter().map(|m| if m.1 > 0.0 { m.0 / m.1 } else { 0.0 }).fold(0.0, f64::max);
        let interior = rows.first().map(|m| m.2);
        report.residual(format!("commutator/test-{i}"), abs, tol, interior);
        report.metric(format!("relative-commutator/test-{i}"), rel);
    }
    Ok(report)
}
