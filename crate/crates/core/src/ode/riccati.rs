use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Grid1D, Profile, SampledJets, JET_ORDER};

const BLOW_UP: f64 = 1e8;

/// Riccati equations `y' = s·y² + q(x)·y + p(x)` generating Painlevé solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RiccatiKind {
    /// `f' = −2f² − 2m x f − a`
    Painleve4 { m: f64, a: f64 },
    /// `W' = W² + k x`
    Painleve2 { k: f64 },
    /// `f' = 2f² − β x²/4 + d`
    FourthOrderRiccati { beta: f64, d: f64 },
}

impl RiccatiKind {
    /// Parses a kind name with its parameter list.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let need = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} takes {n} parameters, got {}", params.len())))
            }
        };
        match name {
            "painleve4-riccati" => need(2).map(|_| Self::Painleve4 { m: params[0], a: params[1] }),
            "painleve2-riccati" => need(1).map(|_| Self::Painleve2 { k: params[0] }),
            "eq41-riccati" => need(2).map(|_| Self::FourthOrderRiccati { beta: params[0], d: params[1] }),
            other => Err(Error::InvalidKind(other.to_string())),
        }
    }

    /// `(s, q coefficients, p coefficients)`, polynomials in ascending powers.
    fn coefficients(&self) -> (f64, [f64; 2], [f64; 3]) {
        match *self {
            Self::Painleve4 { m, a } => (-2.0, [0.0, -2.0 * m], [-a, 0.0, 0.0]),
            Self::Painleve2 { k } => (1.0, [0.0, 0.0], [0.0, k, 0.0]),
            Self::FourthOrderRiccati { beta, d } => (2.0, [0.0, 0.0], [d, 0.0, -beta / 4.0]),
        }
    }

    /// `|∂(rhs)/∂y|`
    fn stiffness(&self, x: f64, y: f64) -> f64 {
        let (s, q, _) = self.coefficients();
        (2.0 * s * y + q[0] + q[1] * x).abs()
    }

    pub fn rhs(&self, x: f64, y: f64) -> f64 {
        let (s, q, p) = self.coefficients();
        s * y * y + (q[0] + q[1] * x) * y + p[0] + p[1] * x + p[2] * x * x
    }

    /// Derivatives `y, y', …, y^(JET_ORDER)` at `x` from the Leibniz recurrence.
    pub fn jet(&self, x: f64, y: f64) -> [f64; JET_ORDER + 1] {
        let (s, q, p) = self.coefficients();
        let qd = [q[0] + q[1] * x, q[1]];
        let pd = [p[0] + p[1] * x + p[2] * x * x, p[1] + 2.0 * p[2] * x, 2.0 * p[2]];
        let mut d = [0.0; JET_ORDER + 1];
        d[0] = y;
        for n in 0..JET_ORDER {
            let mut acc = pd.get(n).copied().unwrap_or(0.0);
            let mut c = 1.0;
            for j in 0..=n {
                acc += c * (s * d[j] * d[n - j] + qd.get(j).copied().unwrap_or(0.0) * d[n - j]);
                c = c * (n - j) as f64 / (j + 1) as f64;
            }
            d[n + 1] = acc;
        }
        d
    }
}

/// Record of a solution that blew up before reaching the requested grid end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    pub requested: (f64, f64),
    pub kept: (f64, f64),
}

/// Numerically generated solution on a (possibly truncated) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    grid: Grid1D,
    values: Vec<f64>,
    /// `derivatives[k-1][i]` is the k-th derivative at node `i`, `k = 1..=3`.
    derivatives: Vec<Vec<f64>>,
    kind: RiccatiKind,
    steps: usize,
    error_estimate: f64,
    truncation: Option<Truncation>,
}

/// Highest derivative order stored with a solution.
pub const STORED_ORDER: usize = 3;

impl OdeSolution {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivative(&self, k: usize) -> Option<&[f64]> {
        match k {
            0 => Some(&self.values),
            1..=STORED_ORDER => Some(&self.derivatives[k - 1]),
            _ => None,
        }
    }

    pub fn max_order(&self) -> usize {
        STORED_ORDER
    }

    pub fn kind(&self) -> RiccatiKind {
        self.kind
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Largest node difference between the `h` and `h/2` runs, divided by 15.
    pub fn error_estimate(&self) -> f64 {
        self.error_estimate
    }

    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }

    /// Profile evaluating the solution by Taylor expansion of the ODE jets about the nearest node.
    pub fn to_profile(&self) -> Profile {
        let jets = self.grid.points().zip(&self.values).map(|(x, &y)| self.kind.jet(x, y)).collect();
        let sampled = SampledJets::new(self.grid.x_min(), self.grid.h(), jets, JET_ORDER)
            .expect("finite solution on a valid grid");
        Profile::Sampled(std::sync::Arc::new(sampled))
    }
}

fn rk4_step(kind: &RiccatiKind, x: f64, y: f64, h: f64) -> f64 {
    let k1 = kind.rhs(x, y);
    let k2 = kind.rhs(x + h / 2.0, y + h * k1 / 2.0);
    let k3 = kind.rhs(x + h / 2.0, y + h * k2 / 2.0);
    let k4 = kind.rhs(x + h, y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

fn ok(y: f64) -> bool {
    y.is_finite() && y.abs() <= BLOW_UP
}

/// One RK4 step, split recursively while `|∂f/∂y|·h` is large so that an
/// approaching pole is resolved instead of stepped over. Smooth stretches
/// never split, which keeps the fixed-step scheme on the grid.
fn advance(kind: &RiccatiKind, x: f64, y: f64, h: f64, depth: u32) -> Option<f64> {
    let stiff = kind.stiffness(x, y) * h.abs();
    if stiff > 0.2 {
        if depth >= 48 {
            return None;
        }
        let mid = advance(kind, x, y, h / 2.0, depth + 1)?;
        return advance(kind, x + h / 2.0, mid, h / 2.0, depth + 1);
    }
    let next = rk4_step(kind, x, y, h);
    ok(next).then_some(next)
}

/// Walks from node `start` in direction `dir` with `sub` RK4 substeps per grid
/// spacing; returns the values reached before blow-up.
fn march(kind: &RiccatiKind, grid: &Grid1D, start: usize, y0: f64, dir: isize, sub: usize) -> Vec<f64> {
    let h = grid.h() * dir as f64 / sub as f64;
    let mut out = Vec::new();
    let mut y = y0;
    let mut i = start as isize;
    loop {
        let next = i + dir;
        if next < 0 || next >= grid.len() as isize {
            break;
        }
        let x0 = grid.x(i as usize);
        let mut good = true;
        for s in 0..sub {
            match advance(kind, x0 + s as f64 * h, y, h, 0) {
                Some(v) => y = v,
                None => {
                    good = false;
                    break;
                }
            }
        }
        if !good {
            break;
        }
        out.push(y);
        i = next;
    }
    out
}

/// Classical RK4 at the grid spacing from `(x_start, y_start)` in both
/// directions, with one halved-step pass for an error estimate. Blow-up
/// (`|y| > 1e8`) truncates the grid.
pub fn integrate_riccati(kind: RiccatiKind, x_start: f64, y_start: f64, grid: &Grid1D) -> Result<OdeSolution> {
    let start = grid
        .index_of(x_start, 1e-9 * grid.h())
        .ok_or_else(|| Error::InvalidParameter(format!("start point {x_start} is not a grid node")))?;
    if !ok(y_start) || !ok(kind.rhs(x_start, y_start)) {
        return Err(Error::BlowUpAtStart);
    }
    let fwd = march(&kind, grid, start, y_start, 1, 1);
    let bwd = march(&kind, grid, start, y_start, -1, 1);
    let lo = start - bwd.len();
    let hi = start + fwd.len();
    if hi - lo + 1 < 9 {
        return Err(Error::BlowUpAtStart);
    }
    let mut values: Vec<f64> = bwd.into_iter().rev().collect();
    values.push(y_start);
    values.extend(fwd);

    let fine_f = march(&kind, grid, start, y_start, 1, 2);
    let fine_b = march(&kind, grid, start, y_start, -1, 2);
    let mut err: f64 = 0.0;
    for (k, y) in fine_f.iter().enumerate().take(hi - start) {
        err = err.max((values[start - lo + k + 1] - y).abs());
    }
    for (k, y) in fine_b.iter().enumerate().take(start - lo) {
        err = err.max((values[start - lo - k - 1] - y).abs());
    }

    let kept = grid.slice(lo, hi)?;
    let truncation = (lo > 0 || hi + 1 < grid.len()).then(|| Truncation {
        requested: (grid.x_min(), grid.x_max()),
        kept: (kept.x_min(), kept.x_max()),
    });
    if let Some(t) = &truncation {
        log::warn!("riccati solution blew up; domain truncated to [{}, {}]", t.kept.0, t.kept.1);
    }
    let derivatives = (1..=STORED_ORDER)
        .map(|k| kept.points().zip(&values).map(|(x, &y)| kind.jet(x, y)[k]).collect())
        .collect();
    Ok(OdeSolution {
        grid: kept,
        values,
        derivatives,
        kind,
        steps: 3 * (hi - lo),
        error_estimate: err / 15.0,
        truncation,
    })
}
