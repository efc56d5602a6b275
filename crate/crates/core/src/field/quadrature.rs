use std::ops::Range;
use std::sync::Arc;

use super::field::{ComplexField, C64};
use crate::error::{Error, Result};

/// Composite Simpson weights for `n` points; even `n` closes with a trapezoid panel.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    if n < 2 {
        return w;
    }
    if n == 2 {
        w[0] = h / 2.0;
        w[1] = h / 2.0;
        return w;
    }
    let odd_n = if n % 2 == 1 { n } else { n - 1 };
    for (i, wi) in w.iter_mut().enumerate().take(odd_n) {
        *wi = if i == 0 || i == odd_n - 1 {
            h / 3.0
        } else if i % 2 == 1 {
            4.0 * h / 3.0
        } else {
            2.0 * h / 3.0
        };
    }
    if odd_n != n {
        log::warn!("even point count {n}: closing the Simpson rule with a trapezoid panel");
        w[n - 2] += h / 2.0;
        w[n - 1] += h / 2.0;
    }
    w
}

pub fn integrate(values: &[f64], h: f64) -> f64 {
    simpson_weights(values.len(), h).iter().zip(values).map(|(w, v)| w * v).sum()
}

/// Simpson weights on the odd-length prefix of `r` (one trailing point dropped if needed).
fn range_weights(r: &Range<usize>, h: f64) -> (Range<usize>, Vec<f64>) {
    let len = r.end.saturating_sub(r.start);
    let len = if len % 2 == 0 { len.saturating_sub(1) } else { len };
    let r = r.start..r.start + len;
    (r, simpson_weights(len, h))
}

/// `⟨f, g⟩ = ∫ conj(f) g dx` by composite Simpson.
pub fn inner_product(f: &ComplexField, g: &ComplexField) -> Result<C64> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let w = simpson_weights(f.grid().len(), f.grid().h());
    Ok(w.iter()
        .zip(f.values().iter().zip(g.values()))
        .map(|(w, (a, b))| a.conj() * b * *w)
        .sum())
}

/// `∫ |f|² dx` over the index range `r`.
pub fn norm_sq_on(f: &ComplexField, r: Range<usize>) -> f64 {
    let (r, w) = range_weights(&r, f.grid().h());
    f.values()[r].iter().zip(w).map(|(v, w)| v.norm_sqr() * w).sum()
}

/// `⟨f, g⟩` over the index range `r`.
pub fn inner_product_on(f: &ComplexField, g: &ComplexField, r: Range<usize>) -> Result<C64> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let (r, w) = range_weights(&r, f.grid().h());
    Ok(f.values()[r.clone()]
        .iter()
        .zip(&g.values()[r])
        .zip(w)
        .map(|((a, b), w)| a.conj() * b * w)
        .sum())
}

type Integrand = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `I(x) = ∫_{anchor}^{x} f`, tabulated eagerly by panel-wise Simpson and
/// evaluated by cubic Hermite interpolation with `f` as the slope.
#[derive(Clone)]
pub struct CumulativeIntegral {
    f: Integrand,
    start: f64,
    step: f64,
    table: Vec<f64>,
    slopes: Vec<f64>,
}

impl std::fmt::Debug for CumulativeIntegral {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.debug_struct("CumulativeIntegral")
            .field("start", &self.start)
            .field("step", &self.step)
            .field("nodes", &self.table.len())
            .finish()
    }
}

impl CumulativeIntegral {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        anchor: f64,
        lo: f64,
        hi: f64,
        step: f64,
    ) -> Result<Self> {
        if !(step > 0.0) || !(lo <= anchor && anchor <= hi) {
            return Err(Error::InvalidParameter(format!(
                "cumulative integral anchor {anchor} outside [{lo}, {hi}] or step {step} invalid"
            )));
        }
        let below = ((anchor - lo) / step).ceil() as usize;
        let above = ((hi - anchor) / step).ceil() as usize;
        let start = anchor - below as f64 * step;
        let n = below + above + 1;
        let nodes: Vec<f64> = (0..n).map(|i| start + i as f64 * step).collect();
        let slopes: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        if slopes.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("cumulative integrand"));
        }
        let panel = |i: usize| {
            let m = f(nodes[i] + step / 2.0);
            step / 6.0 * (slopes[i] + 4.0 * m + slopes[i + 1])
        };
        let mut table = vec![0.0; n];
        for i in below..n - 1 {
            table[i + 1] = table[i] + panel(i);
        }
        for i in (0..below).rev() {
            table[i] = table[i + 1] - panel(i);
        }
        Ok(Self { f: Arc::new(f), start, step, table, slopes })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let last = self.table.len() - 1;
        let s = (x - self.start) / self.step;
        let i = (s.floor().max(0.0) as usize).min(last.saturating_sub(1));
        let u = s - i as f64;
        let (y0, y1) = (self.table[i], self.table[i + 1]);
        let (m0, m1) = (self.slopes[i] * self.step, self.slopes[i + 1] * self.step);
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1
    }

    pub fn integrand(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::grid::Grid1D;

    #[test]
    fn gaussian_norm() {
        let g = Grid1D::new(-10.0, 10.0, 2001).unwrap();
        let c = std::f64::consts::PI.powf(-0.25);
        let f = ComplexField::from_real_fn(g, |x| c * (-x * x / 2.0).exp()).unwrap();
        let ip = inner_product(&f, &f).unwrap();
        assert!((ip.re - 1.0).abs() < 1e-10 && ip.im == 0.0);
    }

    #[test]
    fn odd_symmetry_and_zero() {
        let g = Grid1D::new(-10.0, 10.0, 2001).unwrap();
        let a = ComplexField::from_real_fn(g, |x| (-x * x / 2.0).exp()).unwrap();
        let b = ComplexField::from_real_fn(g, |x| x * (-x * x / 2.0).exp()).unwrap();
        assert!(inner_product(&a, &b).unwrap().norm() < 1e-12);
        let z = ComplexField::zeros(g);
        assert_eq!(inner_product(&z, &z).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn even_count_falls_back() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let v: Vec<f64> = xs.iter().map(|x| x * x).collect();
        // 0.9³/3 = 0.243; trapezoid on the last panel adds an O(h³) error
        assert!((integrate(&v, 0.1) - 0.243).abs() < 2e-4);
    }

    #[test]
    fn cumulative_integral_of_cosine() {
        let ci = CumulativeIntegral::new(f64::cos, 0.3, -1.0, 2.0, 1e-3).unwrap();
        for x in [-1.0, -0.2345, 0.3, 1.111, 2.0] {
            assert!((ci.eval(x) - (x.sin() - 0.3f64.sin())).abs() < 1e-12);
        }
    }
}
