use std::sync::Arc;

use super::{PotentialPair, Provenance, Window};
use crate::error::{Error, Result};
use crate::field::{Bivariate, CJet, Jet, Profile, C64};
use crate::ode::{ode_residual, OdeEquation, OdeInput};
use crate::operators::{ChargeSpec, CoefFn, OpFactor, SymTerm, SymmetryOpSpec};
use crate::propagate::EquationKind;

const DEFAULT_TOL: f64 = 1e-6;

/// Ordering of the factors in the second symmetry operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum R2Ordering {
    /// `e^{2imt} a⁻M⁺ + e^{−2imt} M⁻a⁺`, the adjoint pattern of `R₁`.
    Corrected,
    /// `e^{2imt} M⁺a⁻ + e^{−2imt} M⁻a⁺`, kept to demonstrate that it fails.
    Printed,
}

fn real(f: impl Fn(f64, f64) -> Jet + Send + Sync + 'static) -> CoefFn {
    Arc::new(move |x, t| CJet::real(f(x, t)))
}

/// `∂² − 2f∂ + b` from jets of `f` and `b`.
fn m_plus(f: Arc<dyn Fn(f64) -> Jet + Send + Sync>, b: Arc<dyn Fn(f64) -> Jet + Send + Sync>) -> ChargeSpec {
    ChargeSpec::second_order(
        real(|_, _| Jet::constant(1.0)),
        real(move |x, _| f(x).scale(-2.0)),
        real(move |x, _| b(x)),
    )
}

/// `±∂ + W`.
fn ladder(sign: f64, w: Arc<dyn Fn(f64) -> Jet + Send + Sync>) -> ChargeSpec {
    ChargeSpec::first_order(real(move |_, _| Jet::constant(sign)), real(move |x, _| w(x)))
}

fn residual_check(eq: OdeEquation, profile: &Profile, window: &Window, tol: f64) -> Result<f64> {
    let res = ode_residual(eq, OdeInput::Profile(profile, &window.grid))?;
    if !(res.max <= tol) {
        return Err(Error::PainleveResidualTooLarge { residual: res.max, tol });
    }
    Ok(res.max)
}

type JetFn = Arc<dyn Fn(f64) -> Jet + Send + Sync>;

/// Second-order stationary charge built from a Painlevé IV transcendent `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct PainleveIVFamily {
    pub f: Profile,
    pub m: f64,
    pub a: f64,
    pub d: f64,
    /// Amplitude of the ladder admixture `A(t) = m0·e^{−2imt}`.
    pub m0: f64,
    pub tol: f64,
}

impl PainleveIVFamily {
    pub fn new(f: Profile, m: f64, a: f64, d: f64, m0: f64) -> Self {
        Self { f, m, a, d, m0, tol: DEFAULT_TOL }
    }

    fn f_jet(&self) -> JetFn {
        let f = self.f.clone();
        Arc::new(move |x| f.jet(x))
    }

    /// `W = −2f − mx`.
    pub fn w_jet(&self) -> JetFn {
        let (f, m) = (self.f.clone(), self.m);
        Arc::new(move |x| f.jet(x).scale(-2.0) + Jet::variable(x).scale(-m))
    }

    /// `b = −f' + f² − f''/(2f) + f'²/(4f²) + d/(4f²)`.
    pub fn b_jet(&self) -> JetFn {
        let (f, d) = (self.f.clone(), self.d);
        Arc::new(move |x| {
            let j = f.jet(x);
            let (p, p2) = (j.deriv(), j.deriv().deriv());
            let inv = j.recip();
            let inv2 = inv.clone() * inv.clone();
            -p.clone() + j.square() - p2 * inv.scale(0.5) + p.square() * inv2.scale(0.25) + inv2.scale(d / 4.0)
        })
    }

    /// Partner potentials from the `f` route: `∓2f' + f² + f''/(2f) − f'²/(4f²) − d/(4f²) − a`.
    fn route_f(&self, sign: f64) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
        let (f, a, d) = (self.f.clone(), self.a, self.d);
        move |x| {
            let j = f.jet(x);
            let (v, p, p2) = (j.value(), j.d(1), j.d(2));
            -sign * 2.0 * p + v * v + p2 / (2.0 * v) - p * p / (4.0 * v * v) - d / (4.0 * v * v) - a
        }
    }

    /// Partner potentials from the superpotential route: `W² ± W'`, shifted by `−2m` for `V₂`.
    fn route_w(&self, sign: f64) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
        let (w, m) = (self.w_jet(), self.m);
        move |x| {
            let j = w(x);
            j.value() * j.value() + sign * j.d(1) - if sign < 0.0 { 2.0 * m } else { 0.0 }
        }
    }

    /// `M⁺ = ∂² − 2f∂ + b`.
    pub fn m_plus(&self) -> ChargeSpec {
        m_plus(self.f_jet(), self.b_jet())
    }

    /// `M⁻`, the adjoint of `M⁺`.
    pub fn m_minus(&self) -> ChargeSpec {
        self.m_plus().adjoint()
    }

    /// `a⁺ = ∂ + W`.
    pub fn a_plus(&self) -> ChargeSpec {
        ladder(1.0, self.w_jet())
    }

    /// `a⁻ = −∂ + W`.
    pub fn a_minus(&self) -> ChargeSpec {
        ladder(-1.0, self.w_jet())
    }

    fn phase(&self, sign: f64) -> impl Fn(f64) -> C64 + Send + Sync + 'static {
        let m = self.m;
        move |t| C64::from_polar(1.0, sign * 2.0 * m * t)
    }

    /// `R₁ = e^{2imt} M⁺a⁻ + e^{−2imt} a⁺M⁻`, a symmetry of the first partner.
    pub fn r1(&self) -> Result<SymmetryOpSpec> {
        SymmetryOpSpec::new(vec![
            SymTerm::new(self.phase(1.0), vec![OpFactor::Charge(self.m_plus()), OpFactor::Charge(self.a_minus())]),
            SymTerm::new(self.phase(-1.0), vec![OpFactor::Charge(self.a_plus()), OpFactor::Charge(self.m_minus())]),
        ])
    }

    /// Symmetry of the second partner, in either factor ordering.
    pub fn r2(&self, ordering: R2Ordering) -> Result<SymmetryOpSpec> {
        let first = match ordering {
            R2Ordering::Corrected => vec![OpFactor::Charge(self.a_minus()), OpFactor::Charge(self.m_plus())],
            R2Ordering::Printed => vec![OpFactor::Charge(self.m_plus()), OpFactor::Charge(self.a_minus())],
        };
        SymmetryOpSpec::new(vec![
            SymTerm::new(self.phase(1.0), first),
            SymTerm::new(self.phase(-1.0), vec![OpFactor::Charge(self.m_minus()), OpFactor::Charge(self.a_plus())]),
        ])
    }

    fn validate(&self, window: &Window) -> Result<f64> {
        if self.m == 0.0 {
            return Err(Error::InvalidParameter("m must be non-zero".into()));
        }
        if self.f.is_constant() {
            return Err(Error::ConstantF);
        }
        window.exclude_singular(&self.f.singular_points())?;
        let values: Vec<f64> = window.grid.points().map(|x| self.f.value(x)).collect();
        let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for (i, pair) in values.windows(2).enumerate() {
            if pair[0].abs() <= 1e-12 * scale || pair[0].signum() != pair[1].signum() {
                return Err(Error::VanishingF { x: window.grid.x(i) });
            }
        }
        residual_check(OdeEquation::Painleve4 { m: self.m, a: self.a, d: self.d }, &self.f, window, self.tol)
    }

    pub fn pair(&self, window: &Window) -> Result<PotentialPair> {
        let residual = self.validate(window)?;
        let (v1f, v2f) = (self.route_f(1.0), self.route_f(-1.0));
        let (v1w, v2w) = (self.route_w(1.0), self.route_w(-1.0));
        let gap = window
            .grid
            .points()
            .map(|x| (v1f(x) - v1w(x)).abs().max((v2f(x) - v2w(x)).abs()))
            .fold(0.0, f64::max);

        let (f, w, b, m, m0) = (self.f_jet(), self.w_jet(), self.b_jet(), self.m, self.m0);
        let amp = move |t: f64| C64::from_polar(m0, -2.0 * m * t);
        let c1: CoefFn = Arc::new(move |x, t| CJet::real(f(x).scale(-2.0)) + CJet::constant(amp(t)));
        let c0: CoefFn = Arc::new(move |x, t| CJet::real(b(x)) + CJet::real(w(x)).scale(amp(t)));
        let charge = ChargeSpec::second_order(Arc::new(|_, _| CJet::constant(C64::new(1.0, 0.0))), c1, c0)
            .with_t_range(window.t_min, window.t_max);

        let provenance = Provenance {
            reduced_accuracy: self.f.reduced_accuracy(),
            ..Provenance::new("painleve-iv")
                .param("m", self.m)
                .param("a", self.a)
                .param("d", self.d)
                .param("m0", self.m0)
                .note(&format!("f = {:?}", self.f))
                .check("painleve-residual", residual)
                .check("route-gap", gap)
        };
        PotentialPair {
            v1: Bivariate::stationary(v1f),
            v2: Bivariate::stationary(v2f),
            charge,
            kind: EquationKind::Schrodinger,
            provenance,
        }
        .ensure_finite(window)
    }
}

/// Second-order charge built from a Painlevé II transcendent `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct PainleveIIFamily {
    pub w: Profile,
    pub mtilde: f64,
    pub n: f64,
    pub k: f64,
    pub tol: f64,
}

impl PainleveIIFamily {
    pub fn new(w: Profile, mtilde: f64, n: f64, k: f64) -> Self {
        Self { w, mtilde, n, k, tol: DEFAULT_TOL }
    }

    fn w_jet(&self) -> JetFn {
        let w = self.w.clone();
        Arc::new(move |x| w.jet(x))
    }

    /// `f = n − W/2`.
    fn f_jet(&self) -> JetFn {
        let (w, n) = (self.w.clone(), self.n);
        Arc::new(move |x| w.jet(x).scale(-0.5) + n)
    }

    /// `b = (W' − W²)/2 − 2nW − m̃x`.
    fn b_jet(&self) -> JetFn {
        let (w, n, mt) = (self.w.clone(), self.n, self.mtilde);
        Arc::new(move |x| {
            let j = w.jet(x);
            (j.deriv() - j.square()).scale(0.5) - j.scale(2.0 * n) - Jet::variable(x).scale(mt)
        })
    }

    fn potential(&self, sign: f64) -> Bivariate {
        let w = self.w.clone();
        Bivariate::stationary(move |x| {
            let j = w.jet(x);
            j.value() * j.value() + sign * j.d(1)
        })
    }

    pub fn m_plus(&self) -> ChargeSpec {
        m_plus(self.f_jet(), self.b_jet())
    }

    pub fn m_minus(&self) -> ChargeSpec {
        self.m_plus().adjoint()
    }

    pub fn a_plus(&self) -> ChargeSpec {
        ladder(1.0, self.w_jet())
    }

    pub fn a_minus(&self) -> ChargeSpec {
        ladder(-1.0, self.w_jet())
    }

    pub fn h1(&self) -> Bivariate {
        self.potential(1.0)
    }

    pub fn h2(&self) -> Bivariate {
        self.potential(-1.0)
    }

    /// `M⁺a⁻`, whose commutator with `H₁` is `2m̃H₁`.
    pub fn ladder_product(&self) -> Result<SymmetryOpSpec> {
        SymmetryOpSpec::product(self.m_plus(), self.a_minus())
    }

    fn ops(&self, first: bool) -> (ChargeSpec, ChargeSpec, ChargeSpec, ChargeSpec, Bivariate) {
        if first {
            (self.m_plus(), self.m_minus(), self.a_minus(), self.a_plus(), self.h1())
        } else {
            (self.m_minus(), self.m_plus(), self.a_plus(), self.a_minus(), self.h2())
        }
    }

    /// Quadratic-in-`t` symmetry of partner `1` or `2`:
    /// `M M̄ − H² + 2im̃t(M a − ā M̄) + 4m̃²t²H`, with the factors ordered so that
    /// the second partner gets the adjoint pattern.
    pub fn r_quadratic(&self, first: bool) -> Result<SymmetryOpSpec> {
        let mt = self.mtilde;
        let (mp, mm, lo, hi, h) = self.ops(first);
        let cross = if first {
            [vec![OpFactor::Charge(mp.clone()), OpFactor::Charge(lo)], vec![OpFactor::Charge(hi), OpFactor::Charge(mm.clone())]]
        } else {
            // a⁻M⁺ − M⁻a⁺
            [vec![OpFactor::Charge(hi), OpFactor::Charge(mm.clone())], vec![OpFactor::Charge(mp.clone()), OpFactor::Charge(lo)]]
        };
        let [c1, c2] = cross;
        SymmetryOpSpec::new(vec![
            SymTerm::unit(vec![OpFactor::Charge(mp), OpFactor::Charge(mm)]),
            SymTerm::new(|_| C64::new(-1.0, 0.0), vec![OpFactor::Hamiltonian(h.clone()), OpFactor::Hamiltonian(h.clone())]),
            SymTerm::new(move |t| C64::new(0.0, 2.0 * mt * t), c1),
            SymTerm::new(move |t| C64::new(0.0, -2.0 * mt * t), c2),
            SymTerm::new(move |t| C64::new(4.0 * mt * mt * t * t, 0.0), vec![OpFactor::Hamiltonian(h)]),
        ])
    }

    /// Linear-in-`t` symmetry `i(M a − ā M̄) + 4m̃tH` of partner `1` or `2`.
    pub fn r_linear(&self, first: bool) -> Result<SymmetryOpSpec> {
        let mt = self.mtilde;
        let (mp, mm, lo, hi, h) = self.ops(first);
        let (c1, c2) = if first {
            (vec![OpFactor::Charge(mp), OpFactor::Charge(lo)], vec![OpFactor::Charge(hi), OpFactor::Charge(mm)])
        } else {
            (vec![OpFactor::Charge(hi), OpFactor::Charge(mm)], vec![OpFactor::Charge(mp), OpFactor::Charge(lo)])
        };
        SymmetryOpSpec::new(vec![
            SymTerm::new(|_| C64::new(0.0, 1.0), c1),
            SymTerm::new(|_| C64::new(0.0, -1.0), c2),
            SymTerm::new(move |t| C64::new(4.0 * mt * t, 0.0), vec![OpFactor::Hamiltonian(h)]),
        ])
    }

    pub fn pair(&self, window: &Window) -> Result<PotentialPair> {
        window.exclude_singular(&self.w.singular_points())?;
        let residual =
            residual_check(OdeEquation::Painleve2 { mtilde: self.mtilde, k: self.k }, &self.w, window, self.tol)?;
        let (f, w, b, mt) = (self.f_jet(), self.w_jet(), self.b_jet(), self.mtilde);
        let amp = move |t: f64| C64::new(0.0, -2.0 * mt * t);
        let c1: CoefFn = Arc::new(move |x, t| CJet::real(f(x).scale(-2.0)) + CJet::constant(amp(t)));
        let c0: CoefFn = Arc::new(move |x, t| CJet::real(b(x)) + CJet::real(w(x)).scale(amp(t)));
        let charge = ChargeSpec::second_order(Arc::new(|_, _| CJet::constant(C64::new(1.0, 0.0))), c1, c0)
            .with_t_range(window.t_min, window.t_max);
        let provenance = Provenance {
            reduced_accuracy: self.w.reduced_accuracy(),
            ..Provenance::new("painleve-ii")
                .param("mtilde", self.mtilde)
                .param("n", self.n)
                .param("k", self.k)
                .note(&format!("W = {:?}", self.w))
                .check("painleve-residual", residual)
        };
        PotentialPair { v1: self.h1(), v2: self.h2(), charge, kind: EquationKind::Schrodinger, provenance }
            .ensure_finite(window)
    }
}
