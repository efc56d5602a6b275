use std::fmt;
use std::sync::Arc;

use super::charge::{ChargeSpec, FieldOperator, Hamiltonian};
use crate::error::{Error, Result};
use crate::field::{Bivariate, ComplexField, C64};

pub type TimeCoef = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// One factor of an operator product.
#[derive(Clone, Debug)]
pub enum OpFactor {
    Charge(ChargeSpec),
    Hamiltonian(Bivariate),
}

impl OpFactor {
    fn order(&self) -> usize {
        match self {
            OpFactor::Charge(q) => q.order(),
            OpFactor::Hamiltonian(_) => 2,
        }
    }

    fn apply(&self, psi: &ComplexField, t: f64) -> Result<ComplexField> {
        match self {
            OpFactor::Charge(q) => q.apply_raw(psi, t),
            OpFactor::Hamiltonian(v) => Hamiltonian(v.clone()).apply_raw(psi, t),
        }
    }
}

/// `coeff(t) · factors[0] ∘ factors[1] ∘ …`; the last factor acts first.
#[derive(Clone)]
pub struct SymTerm {
    pub coeff: TimeCoef,
    pub factors: Vec<OpFactor>,
}

impl fmt::Debug for SymTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymTerm").field("factors", &self.factors).finish()
    }
}

impl SymTerm {
    pub fn new(coeff: impl Fn(f64) -> C64 + Send + Sync + 'static, factors: Vec<OpFactor>) -> Self {
        Self { coeff: Arc::new(coeff), factors }
    }

    /// Term with constant unit coefficient.
    pub fn unit(factors: Vec<OpFactor>) -> Self {
        Self::new(|_| C64::new(1.0, 0.0), factors)
    }

    fn order(&self) -> usize {
        self.factors.iter().map(OpFactor::order).sum()
    }
}

/// Sum of time-weighted operator products, at most fourth order.
#[derive(Clone, Debug)]
pub struct SymmetryOpSpec {
    terms: Vec<SymTerm>,
}

const MAX_ORDER: usize = 4;

impl SymmetryOpSpec {
    pub fn new(terms: Vec<SymTerm>) -> Result<Self> {
        for term in &terms {
            let charges = term.factors.iter().filter(|f| matches!(f, OpFactor::Charge(_))).count();
            let hams = term.factors.len() - charges;
            let order = term.order();
            if order > MAX_ORDER || charges > 2 || hams > 2 {
                return Err(Error::ExcessiveOrder(order));
            }
        }
        Ok(Self { terms })
    }

    /// The operator with no terms.
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// `q_left ∘ q_right` with unit coefficient.
    pub fn product(left: ChargeSpec, right: ChargeSpec) -> Result<Self> {
        Self::new(vec![SymTerm::unit(vec![OpFactor::Charge(left), OpFactor::Charge(right)])])
    }

    pub fn terms(&self) -> &[SymTerm] {
        &self.terms
    }
}

impl FieldOperator for SymmetryOpSpec {
    fn order(&self) -> usize {
        self.terms.iter().map(SymTerm::order).max().unwrap_or(0)
    }

    fn apply_raw(&self, psi: &ComplexField, t: f64) -> Result<ComplexField> {
        let mut acc: Option<ComplexField> = None;
        for term in &self.terms {
            let mut cur = psi.clone();
            for factor in term.factors.iter().rev() {
                cur = factor.apply(&cur, t)?;
            }
            let cur = cur.scale((term.coeff)(t));
            acc = Some(match acc {
                None => cur,
                Some(a) => a.add(&cur)?,
            });
        }
        Ok(acc.unwrap_or_else(|| ComplexField::zeros(*psi.grid())))
    }
}

/// `R ψ` at time `t`, summed term by term.
pub fn apply_symmetry(r: &SymmetryOpSpec, psi: &ComplexField, t: f64) -> Result<ComplexField> {
    r.apply_raw(psi, t)
}
