//! Fourth-order finite-difference stencils (Fornberg weights).

use std::ops::{Add, Mul, Sub};

use super::field::ComplexField;
use crate::error::{Error, Result};

/// Points on each side that use one-sided stencils.
pub const BOUNDARY_BAND: usize = 4;

/// Fornberg's algorithm: weights for derivative `order` at `z` on nodes `xs`.
pub fn fornberg(z: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Weights on unit spacing for one derivative order.
#[derive(Debug, Clone)]
pub struct Stencil {
    order: usize,
    radius: usize,
    central: Vec<f64>,
    /// `left[i]`: weights on nodes `0..width` for the derivative at node `i`.
    left: Vec<Vec<f64>>,
}

impl Stencil {
    pub fn new(order: usize) -> Result<Self> {
        if !(1..=4).contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        let radius = if order <= 2 { 2 } else { 3 };
        let offsets: Vec<f64> = (-(radius as i64)..=radius as i64).map(|k| k as f64).collect();
        let central = fornberg(0.0, &offsets, order);
        let width = order + 4;
        let nodes: Vec<f64> = (0..width).map(|k| k as f64).collect();
        let left = (0..BOUNDARY_BAND).map(|i| fornberg(i as f64, &nodes, order)).collect();
        Ok(Self { order, radius, central, left })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Applies the stencil on spacing `h`.
    pub fn apply<T>(&self, values: &[T], h: f64) -> Vec<T>
    where
        T: Copy + Default + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
    {
        let n = values.len();
        let scale = h.powi(-(self.order as i32));
        let width = self.left[0].len();
        let sign = if self.order % 2 == 0 { 1.0 } else { -1.0 };
        (0..n)
            .map(|i| {
                let r = values[i];
                let d = if i < BOUNDARY_BAND {
                    dot(&self.left[i], values[..width].iter(), r)
                } else if i >= n - BOUNDARY_BAND {
                    // mirror image of the left stencil
                    dot(&self.left[n - 1 - i], values[n - width..].iter().rev(), r) * sign
                } else {
                    dot(&self.central, values[i - self.radius..=i + self.radius].iter(), r)
                };
                d * scale
            })
            .collect()
    }
}

/// Weights sum to zero, so differences against the centre value keep constants exact.
fn dot<'a, T>(w: &[f64], vals: impl Iterator<Item = &'a T>, centre: T) -> T
where
    T: 'a + Copy + Default + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    w.iter().zip(vals).fold(T::default(), |acc, (wk, v)| acc + (*v - centre) * *wk)
}

/// Derivative of the given order of a sampled real function.
pub fn differentiate_real(values: &[f64], h: f64, order: usize) -> Result<Vec<f64>> {
    if values.len() < 9 {
        return Err(Error::TooFewPoints(values.len()));
    }
    Ok(Stencil::new(order)?.apply(values, h))
}

/// Derivative of a field; the reliable interior shrinks by the boundary band.
pub fn differentiate(f: &ComplexField, order: usize) -> Result<ComplexField> {
    let st = Stencil::new(order)?;
    let values = st.apply(f.values(), f.grid().h());
    Ok(f.derived(values, BOUNDARY_BAND))
}
