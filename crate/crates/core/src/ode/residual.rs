use std::ops::Range;

use serde::Serialize;

use super::riccati::OdeSolution;
use crate::error::{Error, Result};
use crate::field::{differentiate_real, CumulativeIntegral, Grid1D, Profile, BOUNDARY_BAND};

/// Equations whose pointwise residual can be measured on a solution candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OdeEquation {
    /// `f'' = f'²/(2f) + 6f³ + 8mxf² + 2(m²x² − m + a)f + d/(2f)`
    Painleve4 { m: f64, a: f64, d: f64 },
    /// `W'' = 2W³ + 4m̃xW + k`
    Painleve2 { mtilde: f64, k: f64 },
    /// Third-order constraint of the fourth-order family; `x0` anchors its quadrature.
    FourthOrderConstraint { beta: f64, c: f64, x0: f64 },
    /// `f'''' = λ₀² f`
    QuarticLinear { lambda0: f64 },
    /// `2f'''f' − f''² − λ₀²f² + 4λ₀²σδ = 0`
    FirstIntegral { lambda0: f64, sigma: f64, delta: f64 },
}

impl OdeEquation {
    pub fn from_name(name: &str, p: &[f64]) -> Result<Self> {
        let need = |n: usize| {
            if p.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} takes {n} parameters, got {}", p.len())))
            }
        };
        match name {
            "painleve4" => need(3).map(|_| Self::Painleve4 { m: p[0], a: p[1], d: p[2] }),
            "painleve2" => need(2).map(|_| Self::Painleve2 { mtilde: p[0], k: p[1] }),
            "eq40" => need(3).map(|_| Self::FourthOrderConstraint { beta: p[0], c: p[1], x0: p[2] }),
            "eq411" => need(1).map(|_| Self::QuarticLinear { lambda0: p[0] }),
            "first-integral" => need(3).map(|_| Self::FirstIntegral { lambda0: p[0], sigma: p[1], delta: p[2] }),
            other => Err(Error::InvalidKind(other.to_string())),
        }
    }

    /// Highest derivative of the unknown appearing in the equation.
    pub fn order(&self) -> usize {
        match self {
            Self::Painleve4 { .. } | Self::Painleve2 { .. } => 2,
            Self::FourthOrderConstraint { .. } | Self::FirstIntegral { .. } => 3,
            Self::QuarticLinear { .. } => 4,
        }
    }

    /// Residual at `x` from derivatives `d[0..=order]` and, for `FourthOrderConstraint`, the quadrature value `j`.
    fn pointwise(&self, x: f64, d: &[f64], j: f64) -> f64 {
        match *self {
            Self::Painleve4 { m, a, d: dd } => {
                let (f, f1, f2) = (d[0], d[1], d[2]);
                f2 - (f1 * f1 / (2.0 * f)
                    + 6.0 * f.powi(3)
                    + 8.0 * m * x * f * f
                    + 2.0 * (m * m * x * x - m + a) * f
                    + dd / (2.0 * f))
            }
            Self::Painleve2 { mtilde, k } => d[2] - 2.0 * d[0].powi(3) - 4.0 * mtilde * x * d[0] - k,
            Self::FourthOrderConstraint { beta, c, .. } => {
                let (f, f1, f2, f3) = (d[0], d[1], d[2], d[3]);
                let jp = (1.0 - 2.0 * c) * f + 2.0 * x * f * f;
                let v2 = 2.0 * f1 + 4.0 * f * f + (2.0 - 4.0 * c) * f / x + beta * x * x / 8.0 - 2.0 * j / (x * x);
                let v2p = 2.0 * f2 + 8.0 * f * f1 + (2.0 - 4.0 * c) * (f1 / x - f / (x * x)) + beta * x / 4.0
                    + 4.0 * j / x.powi(3)
                    - 2.0 * jp / (x * x);
                let b = f1 + 2.0 * f * f - v2 + beta * x * x / 4.0;
                -2.0 * f * v2p + 4.0 * b * f1 + f3 + 4.0 * f1 * f1 + 4.0 * f * f2 + 2.0 * beta * x * f - beta * c
                    + beta / 2.0
            }
            Self::QuarticLinear { lambda0 } => d[4] - lambda0 * lambda0 * d[0],
            Self::FirstIntegral { lambda0, sigma, delta } => {
                let l2 = lambda0 * lambda0;
                2.0 * d[3] * d[1] - d[2] * d[2] - l2 * d[0] * d[0] + 4.0 * l2 * sigma * delta
            }
        }
    }
}

/// Something a residual can be measured on.
#[derive(Debug, Clone, Copy)]
pub enum OdeInput<'a> {
    /// Derivatives by fourth-order stencils on the stored values.
    Solution(&'a OdeSolution),
    /// Exact jets sampled on the given grid.
    Profile(&'a Profile, &'a Grid1D),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeResidual {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub reliable: Range<usize>,
    /// Max of `|values|` over the reliable range, skipping points within ten
    /// spacings of `x = 0` for equations carrying `1/x` terms.
    pub max: f64,
}

/// Pointwise residual of `eq` and its maximum over the reliable interior.
pub fn ode_residual(eq: OdeEquation, input: OdeInput<'_>) -> Result<OdeResidual> {
    let need = eq.order();
    let (grid, derivs, reliable) = match input {
        OdeInput::Solution(s) => {
            if need > s.max_order() {
                return Err(Error::InsufficientDerivativeOrder { needed: need, available: s.max_order() });
            }
            let g = *s.grid();
            let mut d = vec![s.values().to_vec()];
            for k in 1..=need {
                d.push(differentiate_real(s.values(), g.h(), k)?);
            }
            (g, d, BOUNDARY_BAND..g.len() - BOUNDARY_BAND)
        }
        OdeInput::Profile(p, g) => {
            if need > p.max_order() {
                return Err(Error::InsufficientDerivativeOrder { needed: need, available: p.max_order() });
            }
            let jets: Vec<_> = g.points().map(|x| p.jet(x)).collect();
            let d = (0..=need).map(|k| jets.iter().map(|j| j.d(k)).collect()).collect();
            (*g, d, 0..g.len())
        }
    };
    let quad = match eq {
        OdeEquation::FourthOrderConstraint { c, x0, .. } => quadrature(input, &grid, &derivs, c, x0)?,
        _ => vec![0.0; grid.len()],
    };
    let values: Vec<f64> = (0..grid.len())
        .map(|i| {
            let d: Vec<f64> = derivs.iter().map(|col| col[i]).collect();
            eq.pointwise(grid.x(i), &d, quad[i])
        })
        .collect();
    let skip_origin = matches!(eq, OdeEquation::FourthOrderConstraint { .. });
    let max = reliable
        .clone()
        .filter(|&i| !skip_origin || grid.x(i).abs() >= 10.0 * grid.h())
        .map(|i| values[i].abs())
        .fold(0.0, f64::max);
    Ok(OdeResidual { grid, values, reliable, max })
}

/// `J(x) = ∫_{x0}^{x} [(1 − 2c) f + 2 z f²] dz` at every node.
fn quadrature(input: OdeInput<'_>, grid: &Grid1D, d: &[Vec<f64>], c: f64, x0: f64) -> Result<Vec<f64>> {
    match input {
        OdeInput::Profile(p, _) => {
            let p = p.clone();
            let lo = x0.min(grid.x_min());
            let hi = x0.max(grid.x_max());
            let integ = CumulativeIntegral::new(
                move |z| {
                    let f = p.value(z);
                    (1.0 - 2.0 * c) * f + 2.0 * z * f * f
                },
                x0,
                lo,
                hi,
                grid.h().min(1e-3),
            )?;
            Ok(grid.points().map(|x| integ.eval(x)).collect())
        }
        OdeInput::Solution(_) => {
            let anchor = grid
                .index_of(x0, 1e-9 * grid.h())
                .ok_or_else(|| Error::InvalidParameter(format!("x0 = {x0} is not a node of the solution grid")))?;
            let h = grid.h();
            let g: Vec<f64> = (0..grid.len())
                .map(|i| (1.0 - 2.0 * c) * d[0][i] + 2.0 * grid.x(i) * d[0][i] * d[0][i])
                .collect();
            let gp: Vec<f64> = (0..grid.len())
                .map(|i| (1.0 - 2.0 * c) * d[1][i] + 2.0 * d[0][i] * d[0][i] + 4.0 * grid.x(i) * d[0][i] * d[1][i])
                .collect();
            // trapezoid with the endpoint derivative correction, fourth order
            let panel = |i: usize| h / 2.0 * (g[i] + g[i + 1]) + h * h / 12.0 * (gp[i] - gp[i + 1]);
            let mut j = vec![0.0; grid.len()];
            for i in anchor..grid.len() - 1 {
                j[i + 1] = j[i] + panel(i);
            }
            for i in (0..anchor).rev() {
                j[i] = j[i + 1] - panel(i);
            }
            Ok(j)
        }
    }
}
