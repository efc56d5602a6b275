use super::charge::FieldOperator;
use crate::error::{Error, Result};
use crate::field::{differentiate, Bivariate, ComplexField, C64};
use crate::par;
use crate::propagate::{EquationKind, Snapshots};

/// Residual fields `S[V]ψ` (or `D[V]ψ`) at every interior time index.
pub fn residual_fields(v: &Bivariate, snaps: &Snapshots, kind: EquationKind) -> Result<Vec<ComplexField>> {
    let k = snaps.len();
    if k < 3 {
        return Err(Error::TooFewSnapshots(k));
    }
    let dt = snaps.time_grid().dt();
    par::try_map(k - 2, |j| {
        let idx = j + 1;
        let (prev, cur, next) = (snaps.field(idx - 1), snaps.field(idx), snaps.field(idx + 1));
        let t = snaps.t(idx);
        let d2 = differentiate(cur, 2)?;
        let g = *cur.grid();
        let time_factor = match kind {
            EquationKind::Schrodinger => C64::new(0.0, 1.0),
            EquationKind::Diffusion => C64::new(-1.0, 0.0),
        };
        let values = (0..g.len())
            .map(|i| {
                let dtpsi = (next.values()[i] - prev.values()[i]) / (2.0 * dt);
                time_factor * dtpsi + d2.values()[i] - v.eval(g.x(i), t) * cur.values()[i]
            })
            .collect();
        Ok(d2.derived_from(values))
    })
}

/// Interior L2 residual norms for either equation kind.
pub fn residual_norms(v: &Bivariate, snaps: &Snapshots, kind: EquationKind) -> Result<Vec<f64>> {
    Ok(residual_fields(v, snaps, kind)?.iter().map(ComplexField::reliable_norm).collect())
}

/// Interior L2 norms of `i∂tψ + ∂x²ψ − Vψ`, one per interior snapshot.
pub fn schrodinger_residual(v: &Bivariate, snaps: &Snapshots) -> Result<Vec<f64>> {
    residual_norms(v, snaps, EquationKind::Schrodinger)
}

/// Interior L2 norms of `−∂tψ + ∂x²ψ − Vψ`, one per interior snapshot.
pub fn diffusion_residual(v: &Bivariate, snaps: &Snapshots) -> Result<Vec<f64>> {
    residual_norms(v, snaps, EquationKind::Diffusion)
}

/// `(∂x² − V) ψ`.
fn laplace_minus(v: &Bivariate, psi: &ComplexField, t: f64) -> Result<ComplexField> {
    let d2 = differentiate(psi, 2)?;
    let g = *psi.grid();
    let values = (0..g.len()).map(|i| d2.values()[i] - v.eval(g.x(i), t) * psi.values()[i]).collect();
    Ok(d2.derived_from(values))
}

const DT_STEP: f64 = 1e-3;

/// `∂t(op) f` by a fourth-order central difference in the coefficient time.
fn time_derivative(op: &dyn FieldOperator, f: &ComplexField, t: f64) -> Result<ComplexField> {
    let e = DT_STEP;
    let weights = [(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];
    let mut acc: Option<ComplexField> = None;
    for (s, w) in weights {
        let term = op.apply_raw(f, t + s * e)?.scale(C64::new(w / e, 0.0));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("four stencil terms"))
}

/// Defect of `L[V_out] ∘ op = op ∘ L[V_in]` on a time-independent test field `f`,
/// where `L = c ∂t + ∂x² − V` and `c` is `i` or `−1`.
///
/// With `∂t f = 0` the time part reduces to `c (∂t op) f`, so no propagation is
/// needed. Equal potentials give the commutator `[L[V], op] f`.
pub fn operator_defect(
    op: &dyn FieldOperator,
    v_out: &Bivariate,
    v_in: &Bivariate,
    f: &ComplexField,
    t: f64,
    kind: EquationKind,
) -> Result<ComplexField> {
    let c = match kind {
        EquationKind::Schrodinger => C64::new(0.0, 1.0),
        EquationKind::Diffusion => C64::new(-1.0, 0.0),
    };
    let dt_part = time_derivative(op, f, t)?.scale(c);
    let left = laplace_minus(v_out, &op.apply_raw(f, t)?, t)?;
    let right = op.apply_raw(&laplace_minus(v_in, f, t)?, t)?;
    dt_part.add(&left)?.sub(&right)
}
