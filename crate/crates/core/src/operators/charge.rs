use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{differentiate, Bivariate, CJet, ComplexField, Jet, Profile, C64};

/// Coefficient of `(x, t)` returned as a jet in `x`.
pub type CoefFn = Arc<dyn Fn(f64, f64) -> CJet + Send + Sync>;
/// Real coefficient of `(x, t)` as a jet in `x`.
pub type RealCoefFn = Arc<dyn Fn(f64, f64) -> Jet + Send + Sync>;

/// Something that maps a field to a field at a given time.
pub trait FieldOperator: Send + Sync {
    /// Highest power of `∂x`.
    fn order(&self) -> usize;

    /// Application without any window check.
    fn apply_raw(&self, psi: &ComplexField, t: f64) -> Result<ComplexField>;
}

#[derive(Clone)]
pub enum ChargeForm {
    /// `c1 ∂x + c0`
    First { c1: CoefFn, c0: CoefFn },
    /// `c2 ∂x² + c1 ∂x + c0`
    Second { c2: CoefFn, c1: CoefFn, c0: CoefFn },
}

/// Intertwining operator of first or second order with `(x, t)` coefficients.
#[derive(Clone)]
pub struct ChargeSpec {
    form: ChargeForm,
    canonical: bool,
    t_range: (f64, f64),
}

impl fmt::Debug for ChargeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChargeSpec")
            .field("order", &self.order())
            .field("canonical", &self.canonical)
            .field("t_range", &self.t_range)
            .finish()
    }
}

fn lift(f: RealCoefFn) -> CoefFn {
    Arc::new(move |x, t| CJet::real(f(x, t)))
}

impl ChargeSpec {
    pub fn first_order(c1: CoefFn, c0: CoefFn) -> Self {
        Self { form: ChargeForm::First { c1, c0 }, canonical: false, t_range: (f64::NEG_INFINITY, f64::INFINITY) }
    }

    pub fn second_order(c2: CoefFn, c1: CoefFn, c0: CoefFn) -> Self {
        Self {
            form: ChargeForm::Second { c2, c1, c0 },
            canonical: false,
            t_range: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// `g(t) ∂x² − 2f ∂x + b + i c` with real `f`, `b`, `c`.
    pub fn canonical(g: Profile, f: RealCoefFn, b: RealCoefFn, c: RealCoefFn) -> Self {
        let c2: CoefFn = Arc::new(move |_, t| CJet::real(Jet::constant(g.value(t))));
        let c1: CoefFn = Arc::new(move |x, t| CJet::real(f(x, t).scale(-2.0)));
        let c0: CoefFn = Arc::new(move |x, t| CJet::new(b(x, t), c(x, t)));
        Self { canonical: true, ..Self::second_order(c2, c1, c0) }
    }

    /// `∂x + w(x, t)` with real `w`.
    pub fn darboux(w: RealCoefFn) -> Self {
        Self::first_order(Arc::new(|_, _| CJet::constant(C64::new(1.0, 0.0))), lift(w))
    }

    pub fn with_t_range(mut self, lo: f64, hi: f64) -> Self {
        self.t_range = (lo, hi);
        self
    }

    pub fn t_range(&self) -> (f64, f64) {
        self.t_range
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn form(&self) -> &ChargeForm {
        &self.form
    }

    /// Coefficient jets, highest derivative first.
    pub fn coefficients(&self, x: f64, t: f64) -> Vec<CJet> {
        match &self.form {
            ChargeForm::First { c1, c0 } => vec![c1(x, t), c0(x, t)],
            ChargeForm::Second { c2, c1, c0 } => vec![c2(x, t), c1(x, t), c0(x, t)],
        }
    }

    /// Formal adjoint with respect to `∫ conj(f) g dx`.
    pub fn adjoint(&self) -> ChargeSpec {
        let form = match &self.form {
            ChargeForm::First { c1, c0 } => {
                // (c1 ∂ + c0)† = −c̄1 ∂ − c̄1' + c̄0
                let (a1, a0) = (c1.clone(), c1.clone());
                let b0 = c0.clone();
                ChargeForm::First {
                    c1: Arc::new(move |x, t| -a1(x, t).conj()),
                    c0: Arc::new(move |x, t| b0(x, t).conj() - a0(x, t).conj().deriv()),
                }
            }
            ChargeForm::Second { c2, c1, c0 } => {
                // (c2 ∂² + c1 ∂ + c0)† = c̄2 ∂² + (2c̄2' − c̄1) ∂ + c̄2'' − c̄1' + c̄0
                let (p2, q2, r2) = (c2.clone(), c2.clone(), c2.clone());
                let (q1, r1) = (c1.clone(), c1.clone());
                let r0 = c0.clone();
                ChargeForm::Second {
                    c2: Arc::new(move |x, t| p2(x, t).conj()),
                    c1: Arc::new(move |x, t| {
                        let a = q2(x, t).conj().deriv();
                        a + a - q1(x, t).conj()
                    }),
                    c0: Arc::new(move |x, t| {
                        r2(x, t).conj().deriv().deriv() - r1(x, t).conj().deriv() + r0(x, t).conj()
                    }),
                }
            }
        };
        ChargeSpec { form, canonical: false, t_range: self.t_range }
    }

    fn check_window(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.t_range;
        if t < lo || t > hi {
            return Err(Error::WindowViolation(format!("t = {t} outside [{lo}, {hi}]")));
        }
        Ok(())
    }
}

impl FieldOperator for ChargeSpec {
    fn order(&self) -> usize {
        match self.form {
            ChargeForm::First { .. } => 1,
            ChargeForm::Second { .. } => 2,
        }
    }

    fn apply_raw(&self, psi: &ComplexField, t: f64) -> Result<ComplexField> {
        let g = *psi.grid();
        let d1 = differentiate(psi, 1)?;
        let d2 = if self.order() == 2 { Some(differentiate(psi, 2)?) } else { None };
        let values = (0..g.len())
            .map(|i| {
                let x = g.x(i);
                let c = self.coefficients(x, t);
                let k = c.len();
                let mut v = c[k - 1].value() * psi.values()[i] + c[k - 2].value() * d1.values()[i];
                if let Some(d2) = &d2 {
                    v += c[0].value() * d2.values()[i];
                }
                v
            })
            .collect::<Vec<_>>();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("charge application"));
        }
        Ok(d1.derived_from(values))
    }
}

/// `q ψ` at time `t`; the boundary band of the result is marked unreliable.
pub fn apply_charge(q: &ChargeSpec, psi: &ComplexField, t: f64) -> Result<ComplexField> {
    q.check_window(t)?;
    q.apply_raw(psi, t)
}

/// `(−∂x² + V(·, t)) ψ`.
pub fn apply_hamiltonian(v: &Bivariate, psi: &ComplexField, t: f64) -> Result<ComplexField> {
    let d2 = differentiate(psi, 2)?;
    let g = *psi.grid();
    let values = (0..g.len()).map(|i| v.eval(g.x(i), t) * psi.values()[i] - d2.values()[i]).collect();
    Ok(d2.derived_from(values))
}

/// Hamiltonian `−∂x² + V` as an operator.
#[derive(Clone, Debug)]
pub struct Hamiltonian(pub Bivariate);

impl FieldOperator for Hamiltonian {
    fn order(&self) -> usize {
        2
    }

    fn apply_raw(&self, psi: &ComplexField, t: f64) -> Result<ComplexField> {
        apply_hamiltonian(&self.0, psi, t)
    }
}
