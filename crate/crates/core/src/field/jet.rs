//! Truncated derivative jets: value plus derivatives up to `JET_ORDER` in one variable.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub const JET_ORDER: usize = 6;
const LEN: usize = JET_ORDER + 1;

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `d[k]` is the k-th derivative; entries above `valid` carry no information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    d: [f64; LEN],
    valid: usize,
}

impl Jet {
    pub fn from_derivs(d: [f64; LEN], valid: usize) -> Self {
        let mut d = d;
        for v in d.iter_mut().skip(valid.min(JET_ORDER) + 1) {
            *v = 0.0;
        }
        Self { d, valid: valid.min(JET_ORDER) }
    }

    pub fn constant(c: f64) -> Self {
        let mut d = [0.0; LEN];
        d[0] = c;
        Self { d, valid: JET_ORDER }
    }

    /// The identity function at `x`.
    pub fn variable(x: f64) -> Self {
        let mut d = [0.0; LEN];
        d[0] = x;
        d[1] = 1.0;
        Self { d, valid: JET_ORDER }
    }

    pub fn value(&self) -> f64 {
        self.d[0]
    }

    pub fn d(&self, k: usize) -> f64 {
        if k <= JET_ORDER {
            self.d[k]
        } else {
            0.0
        }
    }

    pub fn derivs(&self) -> &[f64; LEN] {
        &self.d
    }

    pub fn valid(&self) -> usize {
        self.valid
    }

    pub fn with_valid(mut self, valid: usize) -> Self {
        self.valid = self.valid.min(valid);
        self
    }

    /// Jet of the first derivative.
    pub fn deriv(&self) -> Self {
        let mut d = [0.0; LEN];
        d[..JET_ORDER].copy_from_slice(&self.d[1..]);
        Self { d, valid: self.valid.saturating_sub(1) }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { d: self.d.map(|v| v * s), valid: self.valid }
    }

    /// Derivatives of `u(a·x + b)` given the jet of `u` at `a·x + b`.
    pub fn chain_affine(&self, a: f64) -> Self {
        let mut d = self.d;
        let mut p = 1.0;
        for v in d.iter_mut() {
            *v *= p;
            p *= a;
        }
        Self { d, valid: self.valid }
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0).div(self)
    }

    pub fn div(&self, other: &Jet) -> Self {
        let g = &other.d;
        let mut h = [0.0; LEN];
        for n in 0..LEN {
            let mut acc = self.d[n];
            for k in 1..=n {
                acc -= binom(n, k) * g[k] * h[n - k];
            }
            h[n] = acc / g[0];
        }
        Self { d: h, valid: self.valid.min(other.valid) }
    }

    pub fn exp(&self) -> Self {
        let u = &self.d;
        let mut e = [0.0; LEN];
        e[0] = u[0].exp();
        for n in 1..LEN {
            e[n] = (0..n).map(|k| binom(n - 1, k) * u[k + 1] * e[n - 1 - k]).sum();
        }
        Self { d: e, valid: self.valid }
    }

    pub fn ln(&self) -> Self {
        let mut l = self.deriv().div(self).integrate();
        l.d[0] = self.d[0].ln();
        l.valid = self.valid;
        l
    }

    /// `u^p` via `u·(u^p)' = p·u'·u^p`.
    pub fn powf(&self, p: f64) -> Self {
        let u = &self.d;
        let mut w = [0.0; LEN];
        w[0] = u[0].powf(p);
        for n in 1..LEN {
            // derivative n−1 of (u w' − p u' w) = 0, solved for w^(n)
            let m = n - 1;
            let mut acc = 0.0;
            for k in 0..=m {
                let c = binom(m, k);
                acc += c * p * u[k + 1] * w[m - k];
                if k > 0 {
                    acc -= c * u[k] * w[m - k + 1];
                }
            }
            w[n] = acc / u[0];
        }
        Self { d: w, valid: self.valid }
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    /// Antiderivative with zero constant; the top derivative is lost.
    fn integrate(&self) -> Self {
        let mut d = [0.0; LEN];
        d[1..].copy_from_slice(&self.d[..JET_ORDER]);
        Self { d, valid: (self.valid + 1).min(JET_ORDER) }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut d = self.d;
        d.iter_mut().zip(o.d).for_each(|(a, b)| *a += b);
        Jet { d, valid: self.valid.min(o.valid) }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut d = [0.0; LEN];
        for (n, dn) in d.iter_mut().enumerate() {
            *dn = (0..=n).map(|k| binom(n, k) * self.d[k] * o.d[n - k]).sum();
        }
        Jet { d, valid: self.valid.min(o.valid) }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, c: f64) -> Jet {
        self.d[0] += c;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

/// Complex-valued jet built from real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CJet {
    pub re: Jet,
    pub im: Jet,
}

impl CJet {
    pub fn new(re: Jet, im: Jet) -> Self {
        Self { re, im }
    }

    pub fn real(re: Jet) -> Self {
        Self { re, im: Jet::constant(0.0) }
    }

    pub fn imag(im: Jet) -> Self {
        Self { re: Jet::constant(0.0), im }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { re: Jet::constant(c.re), im: Jet::constant(c.im) }
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn d(&self, k: usize) -> Complex64 {
        Complex64::new(self.re.d(k), self.im.d(k))
    }

    pub fn valid(&self) -> usize {
        self.re.valid().min(self.im.valid())
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    pub fn deriv(&self) -> Self {
        Self { re: self.re.deriv(), im: self.im.deriv() }
    }

    /// See [`Jet::chain_affine`].
    pub fn chain_affine(&self, a: f64) -> Self {
        Self { re: self.re.chain_affine(a), im: self.im.chain_affine(a) }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            re: self.re * c.re - self.im * c.im,
            im: self.re * c.im + self.im * c.re,
        }
    }
}

impl Add for CJet {
    type Output = CJet;
    fn add(self, o: CJet) -> CJet {
        CJet { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for CJet {
    type Output = CJet;
    fn sub(self, o: CJet) -> CJet {
        CJet { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for CJet {
    type Output = CJet;
    fn neg(self) -> CJet {
        CJet { re: -self.re, im: -self.im }
    }
}

impl Mul for CJet {
    type Output = CJet;
    fn mul(self, o: CJet) -> CJet {
        CJet {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn quotient_matches_closed_form() {
        // 1/x at x = 2: d^k = (−1)^k k! / x^(k+1)
        let r = Jet::variable(2.0).recip();
        let mut fact = 1.0;
        for k in 0..=JET_ORDER {
            if k > 0 {
                fact *= k as f64;
            }
            let expect = if k % 2 == 0 { 1.0 } else { -1.0 } * fact / 2f64.powi(k as i32 + 1);
            assert!(close(r.d(k), expect), "order {k}");
        }
    }

    #[test]
    fn exp_ln_and_powers() {
        let x = Jet::variable(0.7);
        let e = (x * 3.0).exp();
        for k in 0..=JET_ORDER {
            assert!(close(e.d(k), 3f64.powi(k as i32) * 2.1f64.exp()));
        }
        let l = x.ln();
        assert!(close(l.d(0), 0.7f64.ln()));
        assert!(close(l.d(3), 2.0 / 0.7f64.powi(3)));
        let s = x.powf(2.5);
        assert!(close(s.d(2), 2.5 * 1.5 * 0.7f64.powf(0.5)));
        let q = x.square();
        assert!(close(q.d(1), 1.4) && close(q.d(2), 2.0) && q.d(3) == 0.0);
    }

    #[test]
    fn complex_product() {
        let a = CJet::new(Jet::variable(1.0), Jet::constant(2.0));
        let b = CJet::new(Jet::constant(0.5), Jet::variable(-1.0));
        let p = a * b;
        // (1 + s + 2i)(0.5 + i(s − 1)) at s = 0
        assert!(close(p.value().re, 2.5) && close(p.value().im, 0.0));
        assert!(close(p.d(1).re, -1.5) && close(p.d(1).im, 0.0));
        assert!(close(p.d(2).im, 2.0));
    }
}
