//! Schrödinger and diffusion residuals, intertwining charges, symmetry operators
//! and the canonical form of second-order charges.

mod canonical;
mod charge;
mod residual;
mod symmetry;

pub use canonical::{canonicalize_second_order, Canonicalized, VariableMap};
pub use charge::{
    apply_charge, apply_hamiltonian, ChargeForm, ChargeSpec, CoefFn, FieldOperator, Hamiltonian, RealCoefFn,
};
pub use residual::{diffusion_residual, operator_defect, residual_fields, residual_norms, schrodinger_residual};
pub use symmetry::{apply_symmetry, OpFactor, SymTerm, SymmetryOpSpec, TimeCoef};
