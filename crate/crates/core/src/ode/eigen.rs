use crate::error::{Error, Result};
use crate::field::linalg::BandedLu;
use crate::field::{differentiate_real, ComplexField, Grid1D, C64};

pub const MAX_STATES: usize = 20;

/// Lowest Dirichlet eigenpairs of `−∂² + V` on a grid.
#[derive(Debug, Clone)]
pub struct EigenResult {
    grid: Grid1D,
    potential: Vec<f64>,
    energies: Vec<f64>,
    states: Vec<ComplexField>,
}

impl EigenResult {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn states(&self) -> &[ComplexField] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Real samples of state `k`.
    pub fn real_state(&self, k: usize) -> Vec<f64> {
        self.states[k].values().iter().map(|v| v.re).collect()
    }

    /// Off-grid evaluator for state `k`.
    pub fn eigenfunction(&self, k: usize) -> Result<Eigenfunction> {
        Eigenfunction::new(self.grid, &self.potential, self.energies[k], self.real_state(k))
    }

    /// Fourth-order refinement of pair `k` as an off-grid evaluator.
    pub fn refined_eigenfunction(&self, k: usize) -> Result<Eigenfunction> {
        let (e, s) = refine_fourth_order(&self.grid, &self.potential, self.energies[k], &self.real_state(k))?;
        Eigenfunction::new(self.grid, &self.potential, e, s.values().iter().map(|v| v.re).collect())
    }

    /// Replaces every pair by its fourth-order refinement.
    pub fn refined(&self) -> Result<EigenResult> {
        let mut energies = Vec::with_capacity(self.len());
        let mut states = Vec::with_capacity(self.len());
        for k in 0..self.len() {
            let (e, s) = refine_fourth_order(&self.grid, &self.potential, self.energies[k], &self.real_state(k))?;
            energies.push(e);
            states.push(s);
        }
        Ok(EigenResult { grid: self.grid, potential: self.potential.clone(), energies, states })
    }
}

/// Quintic Hermite interpolant of an eigenfunction using `φ'' = (V − E) φ`.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    grid: Grid1D,
    energy: f64,
    value: Vec<f64>,
    slope: Vec<f64>,
    curvature: Vec<f64>,
}

impl Eigenfunction {
    fn new(grid: Grid1D, potential: &[f64], energy: f64, value: Vec<f64>) -> Result<Self> {
        let slope = differentiate_real(&value, grid.h(), 1)?;
        let curvature = value.iter().zip(potential).map(|(p, v)| (v - energy) * p).collect();
        Ok(Self { grid, energy, value, slope, curvature })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Zero outside the grid, matching the Dirichlet walls.
    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        if !(x >= g.x_min() && x <= g.x_max()) {
            return 0.0;
        }
        let h = g.h();
        let s = (x - g.x_min()) / h;
        let i = (s.floor() as usize).min(g.len() - 2);
        let t = s - i as f64;
        let (t2, t3) = (t * t, t * t * t);
        let (t4, t5) = (t3 * t, t3 * t2);
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        let h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 0.5 * (t3 - 2.0 * t4 + t5);
        h0 * self.value[i]
            + h1 * h * self.slope[i]
            + h2 * h * h * self.curvature[i]
            + h3 * self.value[i + 1]
            + h4 * h * self.slope[i + 1]
            + h5 * h * h * self.curvature[i + 1]
    }
}

/// Number of eigenvalues below `lambda` of the symmetric tridiagonal matrix.
fn sturm_count(diag: &[f64], off: f64, lambda: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, a) in diag.iter().enumerate() {
        q = if i == 0 { a - lambda } else { a - lambda - off * off / q };
        if q == 0.0 {
            q = -f64::EPSILON * (a.abs() + off.abs());
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn normalize(grid: &Grid1D, mut v: Vec<f64>) -> Result<ComplexField> {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let lead = v.iter().find(|x| x.abs() > 1e-3 * max).copied().unwrap_or(1.0);
    if lead < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let f = ComplexField::new(*grid, v.iter().map(|x| C64::new(*x, 0.0)).collect())?;
    let n = f.norm();
    Ok(f.scale(C64::new(1.0 / n, 0.0)))
}

/// Dirichlet eigenpairs of the second-order tridiagonal discretization of
/// `−∂² + V`, by Sturm bisection and inverse iteration.
pub fn stationary_eigensolve(v: impl Fn(f64) -> f64, grid: &Grid1D, count: usize) -> Result<EigenResult> {
    if count > MAX_STATES {
        return Err(Error::TooManyStates(count));
    }
    let n = grid.len();
    let h = grid.h();
    let potential: Vec<f64> = grid.points().map(&v).collect();
    if potential[1..n - 1].iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("potential"));
    }
    let m = n - 2;
    let diag: Vec<f64> = potential[1..n - 1].iter().map(|p| 2.0 / (h * h) + p).collect();
    let off = -1.0 / (h * h);
    let lo0 = diag.iter().fold(f64::INFINITY, |a, b| a.min(*b)) - 2.0 * off.abs();
    let hi0 = diag.iter().fold(f64::NEG_INFINITY, |a, b| a.max(*b)) + 2.0 * off.abs();

    let mut energies = Vec::with_capacity(count);
    let mut states = Vec::with_capacity(count);
    for k in 0..count.min(m) {
        let (mut lo, mut hi) = (lo0, hi0);
        while hi - lo > 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
            let mid = 0.5 * (lo + hi);
            if sturm_count(&diag, off, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let e = 0.5 * (lo + hi);
        let mut shift = e;
        let lu = loop {
            match BandedLu::factor(m, 1, 1, |i, j| {
                if i == j {
                    diag[i] - shift
                } else {
                    off
                }
            }) {
                Ok(lu) => break lu,
                Err(_) => shift += 1e-12 * (1.0 + e.abs()),
            }
        };
        let mut u: Vec<f64> = (0..m).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..4 {
            u = lu.solve(&u)?;
            let s = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            u.iter_mut().for_each(|x| *x /= s);
        }
        let mut full = vec![0.0; n];
        full[1..n - 1].copy_from_slice(&u);
        energies.push(e);
        states.push(normalize(grid, full)?);
    }
    Ok(EigenResult { grid: *grid, potential, energies, states })
}

/// Rayleigh-quotient refinement of an eigenpair on the fourth-order five-point
/// operator, Dirichlet walls imposed by odd reflection.
pub fn refine_fourth_order(grid: &Grid1D, potential: &[f64], energy: f64, state: &[f64]) -> Result<(f64, ComplexField)> {
    let n = grid.len();
    let m = n - 2;
    let h2 = grid.h() * grid.h();
    let entry = |i: usize, j: usize| -> f64 {
        let d = i.abs_diff(j);
        match d {
            0 => {
                let mut a = 30.0 / (12.0 * h2) + potential[i + 1];
                if i == 0 || i == m - 1 {
                    a -= 1.0 / (12.0 * h2);
                }
                a
            }
            1 => -16.0 / (12.0 * h2),
            2 => 1.0 / (12.0 * h2),
            _ => 0.0,
        }
    };
    let apply = |u: &[f64]| -> Vec<f64> {
        (0..m)
            .map(|i| {
                let lo = i.saturating_sub(2);
                let hi = (i + 2).min(m - 1);
                (lo..=hi).map(|j| entry(i, j) * u[j]).sum()
            })
            .collect()
    };
    let mut u: Vec<f64> = state[1..n - 1].to_vec();
    let s = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    u.iter_mut().for_each(|x| *x /= s);
    let mut e = energy;
    for _ in 0..20 {
        let lu = match BandedLu::factor(m, 2, 2, |i, j| entry(i, j) - if i == j { e } else { 0.0 }) {
            Ok(lu) => lu,
            Err(_) => break,
        };
        let mut w = lu.solve(&u)?;
        let s = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !s.is_finite() {
            break;
        }
        w.iter_mut().for_each(|x| *x /= s);
        // keep orientation so the iteration does not flip sign
        if w.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() < 0.0 {
            w.iter_mut().for_each(|x| *x = -*x);
        }
        let hw = apply(&w);
        let e_new: f64 = w.iter().zip(&hw).map(|(a, b)| a * b).sum();
        u = w;
        let done = (e_new - e).abs() < 1e-14 * (1.0 + e.abs());
        e = e_new;
        if done {
            break;
        }
    }
    let mut full = vec![0.0; n];
    full[1..n - 1].copy_from_slice(&u);
    Ok((e, normalize(grid, full)?))
}
