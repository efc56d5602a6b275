//! Banded and tridiagonal solvers over real or complex scalars.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub trait Scalar:
    Copy
    + Default
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn modulus(self) -> f64;
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
}

/// Thomas algorithm for `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
pub fn thomas<T: Scalar>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let n = diag.len();
    if sub.len() != n || sup.len() != n || rhs.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: rhs.len() });
    }
    let mut c = vec![T::default(); n];
    let mut d = vec![T::default(); n];
    let mut beta = diag[0];
    if beta.modulus() == 0.0 {
        return Err(Error::InvalidParameter("zero pivot in tridiagonal solve".into()));
    }
    c[0] = sup[0] / beta;
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = diag[i] - sub[i] * c[i - 1];
        if beta.modulus() == 0.0 {
            return Err(Error::InvalidParameter("zero pivot in tridiagonal solve".into()));
        }
        c[i] = sup[i] / beta;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        d[i] = d[i] - c[i] * d[i + 1];
    }
    Ok(d)
}

/// LU factorization with partial pivoting of a banded matrix with `kl` sub- and
/// `ku` super-diagonals.
#[derive(Debug, Clone)]
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    /// Row `i` holds columns `i - kl ..= i + kl + ku` of U after factorization.
    rows: Vec<Vec<T>>,
    multipliers: Vec<Vec<T>>,
    pivots: Vec<usize>,
    width: usize,
}

impl<T: Scalar> BandedLu<T> {
    /// `entry(i, j)` supplies the matrix for `|i - j|` within the band.
    pub fn factor(n: usize, kl: usize, ku: usize, entry: impl Fn(usize, usize) -> T) -> Result<Self> {
        let width = 2 * kl + ku + 1;
        // dense storage of the band: row i, column j stored at j + kl - i
        let mut rows = vec![vec![T::default(); width]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            let lo = i.saturating_sub(kl);
            let hi = (i + ku).min(n - 1);
            for j in lo..=hi {
                row[j + kl - i] = entry(i, j);
            }
        }
        let mut multipliers = vec![vec![T::default(); kl]; n];
        let mut pivots = vec![0; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = rows[k][kl].modulus();
            for i in k + 1..=last {
                let v = rows[i][k + kl - i].modulus();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::InvalidParameter("singular banded matrix".into()));
            }
            pivots[k] = p;
            let col_hi = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=col_hi {
                    let a = rows[k][j + kl - k];
                    rows[k][j + kl - k] = rows[p][j + kl - p];
                    rows[p][j + kl - p] = a;
                }
            }
            let pivot = rows[k][kl];
            for i in k + 1..=last {
                let m = rows[i][k + kl - i] / pivot;
                multipliers[k][i - k - 1] = m;
                rows[i][k + kl - i] = T::default();
                for j in k + 1..=col_hi {
                    let u = rows[k][j + kl - k];
                    rows[i][j + kl - i] = rows[i][j + kl - i] - m * u;
                }
            }
        }
        Ok(Self { n, kl, rows, multipliers, pivots, width })
    }

    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        if rhs.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: rhs.len() });
        }
        let (n, kl) = (self.n, self.kl);
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
            let last = (k + kl).min(n - 1);
            for i in k + 1..=last {
                x[i] = x[i] - self.multipliers[k][i - k - 1] * x[k];
            }
        }
        for k in (0..n).rev() {
            let col_hi = (k + self.width - 1 - kl).min(n - 1);
            let mut acc = x[k];
            for j in k + 1..=col_hi {
                acc = acc - self.rows[k][j + kl - k] * x[j];
            }
            x[k] = acc / self.rows[k][kl];
        }
        Ok(x)
    }
}
