use std::sync::Arc;

use super::jet::{Jet, JET_ORDER};
use super::spline::CubicSpline;
use crate::error::{Error, Result};

/// Derivative jets stored on uniform nodes, evaluated by Taylor expansion about the nearest node.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledJets {
    x0: f64,
    h: f64,
    jets: Vec<[f64; JET_ORDER + 1]>,
    valid: usize,
}

impl SampledJets {
    pub fn new(x0: f64, h: f64, jets: Vec<[f64; JET_ORDER + 1]>, valid: usize) -> Result<Self> {
        if jets.is_empty() || !(h > 0.0) {
            return Err(Error::InvalidParameter("sampled profile needs nodes and h > 0".into()));
        }
        if jets.iter().flatten().take(usize::MAX).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sampled profile"));
        }
        Ok(Self { x0, h, jets, valid: valid.min(JET_ORDER) })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x0, self.x0 + (self.jets.len() - 1) as f64 * self.h)
    }

    fn jet(&self, x: f64) -> Jet {
        let last = self.jets.len() - 1;
        let i = ((x - self.x0) / self.h).round().clamp(0.0, last as f64) as usize;
        let s = x - (self.x0 + i as f64 * self.h);
        let node = &self.jets[i];
        let mut d = [0.0; JET_ORDER + 1];
        for (k, dk) in d.iter_mut().enumerate().take(self.valid + 1) {
            let mut term = 1.0;
            let mut acc = 0.0;
            for j in 0..=(self.valid - k) {
                if j > 0 {
                    term *= s / j as f64;
                }
                acc += node[k + j] * term;
            }
            *dk = acc;
        }
        Jet::from_derivs(d, self.valid)
    }
}

/// Real function of one variable with derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `Σ c_k x^k`
    Polynomial(Vec<f64>),
    /// `a·e^(λx)`
    Exponential { a: f64, lambda: f64 },
    /// `a·cos(ωx + φ)`
    Trig { a: f64, omega: f64, phase: f64 },
    /// `a·cosh(κx)`
    Cosh { a: f64, kappa: f64 },
    /// `a·sinh(κx)`
    Sinh { a: f64, kappa: f64 },
    /// `a·x^p`
    Power { a: f64, p: f64 },
    Sum(Vec<Profile>),
    Product(Vec<Profile>),
    /// Natural cubic spline; derivatives above 2 are reduced-accuracy, above 3 unavailable.
    Tabulated(Arc<CubicSpline>),
    Sampled(Arc<SampledJets>),
}

impl Profile {
    pub fn constant(c: f64) -> Self {
        Profile::Polynomial(vec![c])
    }

    pub fn zero() -> Self {
        Profile::constant(0.0)
    }

    pub fn tabulated(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Ok(Profile::Tabulated(Arc::new(CubicSpline::new(xs, ys)?)))
    }

    pub fn sin(a: f64, omega: f64) -> Self {
        Profile::Trig { a, omega, phase: -std::f64::consts::FRAC_PI_2 }
    }

    pub fn cos(a: f64, omega: f64) -> Self {
        Profile::Trig { a, omega, phase: 0.0 }
    }

    pub fn scaled(self, a: f64) -> Self {
        Profile::Product(vec![Profile::constant(a), self])
    }

    pub fn jet(&self, x: f64) -> Jet {
        let mut d = [0.0; JET_ORDER + 1];
        match self {
            Profile::Polynomial(c) => {
                for (k, dk) in d.iter_mut().enumerate() {
                    // k-th derivative of Σ c_j x^j, Horner on the falling-factorial coefficients
                    let mut acc = 0.0;
                    for j in (k..c.len()).rev() {
                        let fall: f64 = (0..k).map(|i| (j - i) as f64).product();
                        acc = acc * x + c[j] * fall;
                    }
                    *dk = acc;
                }
            }
            Profile::Exponential { a, lambda } => {
                let e = a * (lambda * x).exp();
                let mut p = 1.0;
                for dk in d.iter_mut() {
                    *dk = e * p;
                    p *= lambda;
                }
            }
            Profile::Trig { a, omega, phase } => {
                let arg = omega * x + phase;
                let mut p = *a;
                for (k, dk) in d.iter_mut().enumerate() {
                    *dk = p * (arg + k as f64 * std::f64::consts::FRAC_PI_2).cos();
                    p *= omega;
                }
            }
            Profile::Cosh { a, kappa } | Profile::Sinh { a, kappa } => {
                let (c, s) = ((kappa * x).cosh(), (kappa * x).sinh());
                let odd_first = matches!(self, Profile::Sinh { .. });
                let mut p = *a;
                for (k, dk) in d.iter_mut().enumerate() {
                    *dk = p * if (k % 2 == 1) != odd_first { s } else { c };
                    p *= kappa;
                }
            }
            Profile::Power { a, p } => {
                let mut coef = *a;
                for (k, dk) in d.iter_mut().enumerate() {
                    *dk = if coef == 0.0 { 0.0 } else { coef * x.powf(p - k as f64) };
                    coef *= p - k as f64;
                }
            }
            Profile::Sum(terms) => {
                return terms.iter().fold(Jet::constant(0.0), |acc, t| acc + t.jet(x));
            }
            Profile::Product(terms) => {
                return terms.iter().fold(Jet::constant(1.0), |acc, t| acc * t.jet(x));
            }
            Profile::Tabulated(s) => {
                let e = s.eval(x);
                d[..4].copy_from_slice(&e);
                return Jet::from_derivs(d, 3);
            }
            Profile::Sampled(s) => return s.jet(x),
        }
        Jet::from_derivs(d, JET_ORDER)
    }

    /// Jet in `x` of `self(a·x + b)`.
    pub fn jet_affine(&self, a: f64, b: f64, x: f64) -> Jet {
        self.jet(a * x + b).chain_affine(a)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.jet(x).value()
    }

    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        self.jet(x).d(k)
    }

    /// Highest derivative order carrying information.
    pub fn max_order(&self) -> usize {
        match self {
            Profile::Tabulated(_) => 3,
            Profile::Sampled(s) => s.valid,
            Profile::Sum(t) | Profile::Product(t) => {
                t.iter().map(Profile::max_order).min().unwrap_or(JET_ORDER)
            }
            _ => JET_ORDER,
        }
    }

    /// True when derivatives above order 2 come from spline coefficients.
    pub fn reduced_accuracy(&self) -> bool {
        match self {
            Profile::Tabulated(_) => true,
            Profile::Sum(t) | Profile::Product(t) => t.iter().any(Profile::reduced_accuracy),
            _ => false,
        }
    }

    /// Points where the closed form is singular (negative or fractional powers at 0).
    pub fn singular_points(&self) -> Vec<f64> {
        match self {
            Profile::Power { a, p } if *a != 0.0 && (*p < 0.0 || p.fract() != 0.0) => vec![0.0],
            Profile::Sum(t) | Profile::Product(t) => {
                let mut v: Vec<f64> = t.iter().flat_map(Profile::singular_points).collect();
                v.dedup();
                v
            }
            _ => Vec::new(),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Profile::Polynomial(c) => c.iter().skip(1).all(|v| *v == 0.0),
            Profile::Exponential { a, lambda } => *a == 0.0 || *lambda == 0.0,
            Profile::Trig { a, omega, .. } => *a == 0.0 || *omega == 0.0,
            Profile::Cosh { a, kappa } => *a == 0.0 || *kappa == 0.0,
            Profile::Sinh { a, .. } => *a == 0.0,
            Profile::Power { a, p } => *a == 0.0 || *p == 0.0,
            Profile::Sum(t) | Profile::Product(t) => t.iter().all(Profile::is_constant),
            Profile::Tabulated(_) | Profile::Sampled(_) => false,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Profile::Polynomial(c) => c.iter().all(|v| *v == 0.0),
            Profile::Exponential { a, .. }
            | Profile::Trig { a, .. }
            | Profile::Cosh { a, .. }
            | Profile::Sinh { a, .. }
            | Profile::Power { a, .. } => *a == 0.0,
            Profile::Sum(t) => t.iter().all(Profile::is_zero),
            Profile::Product(t) => t.iter().any(Profile::is_zero),
            _ => false,
        }
    }

    /// Rejects a profile that is not strictly positive on `[lo, hi]` (checked on 1025 points).
    pub fn require_positive(&self, what: &'static str, lo: f64, hi: f64) -> Result<()> {
        let n = 1024;
        for i in 0..=n {
            let t = if hi > lo { lo + (hi - lo) * i as f64 / n as f64 } else { lo };
            let value = self.value(t);
            if !(value > 0.0) {
                return Err(Error::NonPositive { what, at: t, value });
            }
        }
        Ok(())
    }
}
