use super::report::{ConvergenceEntry, VerificationReport};
use crate::error::{Error, Result};
use crate::field::{Grid1D, TimeGrid};
use crate::par;

pub type GridLevel = (Grid1D, TimeGrid);

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Whether `fine` halves the spacing, the step, or both, of `coarse` on the same extents.
fn nested(coarse: &GridLevel, fine: &GridLevel) -> Result<()> {
    let (gc, tc) = coarse;
    let (gf, tf) = fine;
    let same_space = gc == gf;
    let refined_space = close(gf.x_min(), gc.x_min()) && close(gf.x_max(), gc.x_max()) && gf.len() == 2 * gc.len() - 1;
    let same_time = tc == tf;
    let refined_time = close(tf.t0(), tc.t0()) && tf.steps() == 2 * tc.steps() && close(tf.t_end(), tc.t_end());
    let ok = (refined_space || same_space) && (refined_time || same_time) && !(same_space && same_time);
    if ok {
        Ok(())
    } else {
        Err(Error::NonNestedGrids(format!(
            "h {} -> {}, dt {} -> {}",
            gc.h(),
            gf.h(),
            tc.dt(),
            tf.dt()
        )))
    }
}

/// Runs `error` on each level (in parallel) and records `log2(e_coarse / e_fine)`
/// for every consecutive pair; a pair passes when the order is at least
/// `declared_order − 0.5`.
pub fn convergence_study<F>(scenario: &str, levels: &[GridLevel], declared_order: f64, error: F) -> Result<VerificationReport>
where
    F: Fn(&Grid1D, &TimeGrid) -> Result<f64> + Sync + Send,
{
    if levels.len() < 2 {
        return Err(Error::NonNestedGrids(format!("{} level(s); at least 2 are needed", levels.len())));
    }
    for w in levels.windows(2) {
        nested(&w[0], &w[1])?;
    }
    let errors = par::try_map(levels.len(), |i| error(&levels[i].0, &levels[i].1))?;
    let mut report = VerificationReport::new(scenario);
    for (i, w) in errors.windows(2).enumerate() {
        let p = (w[0] / w[1]).log2();
        report.convergence(ConvergenceEntry {
            levels: format!("{}->{}", i, i + 1),
            coarse_error: w[0],
            fine_error: w[1],
            observed_order: p,
            declared_order,
            pass: p >= declared_order - 0.5,
        });
    }
    for (i, e) in errors.iter().enumerate() {
        report.metric(format!("error/level-{i}"), *e);
    }
    Ok(report)
}
