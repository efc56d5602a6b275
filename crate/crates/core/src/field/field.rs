use std::ops::Range;

use num_complex::Complex64;

use super::grid::Grid1D;
use super::quadrature;
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Complex samples on a grid, with the index range still considered reliable
/// after stencil applications.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid1D,
    values: Vec<C64>,
    reliable: Range<usize>,
}

impl ComplexField {
    pub fn new(grid: Grid1D, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field values"));
        }
        let n = grid.len();
        Ok(Self { grid, values, reliable: 0..n })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> C64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect())
    }

    pub fn from_real_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |x| C64::new(f(x), 0.0))
    }

    pub fn zeros(grid: Grid1D) -> Self {
        let n = grid.len();
        Self { grid, values: vec![C64::new(0.0, 0.0); n], reliable: 0..n }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn reliable(&self) -> Range<usize> {
        self.reliable.clone()
    }

    /// Reliable interior as an x-interval.
    pub fn reliable_extent(&self) -> (f64, f64) {
        (self.grid.x(self.reliable.start), self.grid.x(self.reliable.end.saturating_sub(1)))
    }

    pub fn with_reliable(mut self, r: Range<usize>) -> Self {
        self.reliable = r.start.max(self.reliable.start)..r.end.min(self.reliable.end);
        self
    }

    /// Field computed from this one by a stencil reaching `shrink` points into the boundary.
    pub(crate) fn derived(&self, values: Vec<C64>, shrink: usize) -> Self {
        let n = self.grid.len();
        let start = (self.reliable.start + shrink).min(n);
        let end = self.reliable.end.saturating_sub(shrink).max(start);
        Self { grid: self.grid, values, reliable: start..end }
    }

    /// Combines two fields pointwise; the reliable range is the intersection.
    pub fn zip_with(&self, other: &ComplexField, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        let r = self.reliable.start.max(other.reliable.start)..self.reliable.end.min(other.reliable.end);
        Ok(Self { grid: self.grid, values, reliable: r })
    }

    /// Pointwise map with access to the coordinate.
    pub fn map_x(&self, f: impl Fn(f64, C64) -> C64) -> Self {
        let values = self.values.iter().enumerate().map(|(i, v)| f(self.grid.x(i), *v)).collect();
        Self { grid: self.grid, values, reliable: self.reliable.clone() }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map_x(|_, v| v * s)
    }

    pub fn add(&self, other: &ComplexField) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexField) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `⟨self, other⟩` by composite Simpson over the whole grid.
    pub fn inner(&self, other: &ComplexField) -> Result<C64> {
        quadrature::inner_product(self, other)
    }

    pub fn norm(&self) -> f64 {
        quadrature::norm_sq_on(self, 0..self.grid.len()).sqrt()
    }

    /// L2 norm restricted to the reliable interior.
    pub fn reliable_norm(&self) -> f64 {
        quadrature::norm_sq_on(self, self.reliable.clone()).sqrt()
    }

    /// L2 norm over an index range.
    pub fn norm_on(&self, r: Range<usize>) -> f64 {
        quadrature::norm_sq_on(self, r).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_on(&self, r: Range<usize>) -> f64 {
        self.values[r].iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl ComplexField {
    /// New values on this field's grid with this field's reliable range.
    pub(crate) fn derived_from(&self, values: Vec<C64>) -> Self {
        Self { grid: self.grid, values, reliable: self.reliable.clone() }
    }
}
