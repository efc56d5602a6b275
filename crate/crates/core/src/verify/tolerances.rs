use serde::{Deserialize, Serialize};

/// Analytic and single-stencil identities.
pub const IDENTITY: f64 = 1e-8;
/// One operator applied to a field.
pub const SINGLE: f64 = 1e-6;
/// Compositions of operators.
pub const COMPOSED: f64 = 1e-5;
/// Propagated fields, or fields mapped by a charge.
pub const PROPAGATED: f64 = 1e-4;

/// Tolerance ladder; scenarios may override any rung explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub identity: f64,
    pub single: f64,
    pub composed: f64,
    pub propagated: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { identity: IDENTITY, single: SINGLE, composed: COMPOSED, propagated: PROPAGATED }
    }
}
