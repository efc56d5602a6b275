use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{ComplexField, Grid1D, TimeGrid, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationKind {
    Schrodinger,
    Diffusion,
}

/// Per-step bookkeeping from a propagation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// L2 norm after every step, starting with the initial state.
    pub norms: Vec<f64>,
    /// Largest boundary-band amplitude relative to the norm.
    pub boundary_amplitude: f64,
    pub boundary_leak: bool,
}

/// Time-indexed fields on one grid.
#[derive(Debug, Clone)]
pub struct Snapshots {
    time_grid: TimeGrid,
    fields: Vec<ComplexField>,
    kind: EquationKind,
    diagnostics: Option<Diagnostics>,
}

impl Snapshots {
    pub fn new(time_grid: TimeGrid, fields: Vec<ComplexField>, kind: EquationKind) -> Result<Self> {
        if fields.len() != time_grid.steps() + 1 {
            return Err(Error::LengthMismatch { expected: time_grid.steps() + 1, got: fields.len() });
        }
        let grid = fields[0].grid();
        if fields.iter().any(|f| f.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { time_grid, fields, kind, diagnostics: None })
    }

    /// Samples `f(x, t)` at every grid point and time level.
    pub fn from_fn(
        grid: Grid1D,
        time_grid: TimeGrid,
        kind: EquationKind,
        f: impl Fn(f64, f64) -> C64 + Sync,
    ) -> Result<Self> {
        let fields = crate::par::try_map(time_grid.steps() + 1, |k| {
            let t = time_grid.t(k);
            ComplexField::from_fn(grid, |x| f(x, t))
        })?;
        Self::new(time_grid, fields, kind)
    }

    pub(crate) fn with_diagnostics(mut self, d: Diagnostics) -> Self {
        self.diagnostics = Some(d);
        self
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.time_grid
    }

    pub fn fields(&self) -> &[ComplexField] {
        &self.fields
    }

    pub fn field(&self, k: usize) -> &ComplexField {
        &self.fields[k]
    }

    pub fn last(&self) -> &ComplexField {
        &self.fields[self.fields.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn diagnostics(&self) -> Option<&Diagnostics> {
        self.diagnostics.as_ref()
    }

    pub fn t(&self, k: usize) -> f64 {
        self.time_grid.t(k)
    }

    /// Applies `f` to every snapshot (in parallel) keeping the time axis.
    pub fn map_fields<F>(&self, f: F) -> Result<Snapshots>
    where
        F: Fn(&ComplexField, f64) -> Result<ComplexField> + Sync + Send,
    {
        let fields = crate::par::try_map(self.fields.len(), |k| f(&self.fields[k], self.t(k)))?;
        Snapshots::new(self.time_grid, fields, self.kind)
    }
}
