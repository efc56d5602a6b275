//! Builds the family, source and checks a config describes, and runs them.

use log::{debug, info};

use intertwine::families::{
    Branch, Chi, ChiTerm, FirstOrderFamily, FokkerPlanckFamily, FourthOrderFamily, NonStatFamily, PainleveIIFamily,
    PainleveIVFamily, PotentialFamily, PotentialPair, Provenance, R2Ordering, SymmetryFamily, TdOscFamily, Window,
};
use intertwine::field::{make_grid, Bivariate, ComplexField, Grid1D, Profile, TimeGrid, C64};
use intertwine::ode::{ode_residual, stationary_eigensolve, OdeEquation, OdeInput};
use intertwine::operators::{OpFactor, SymTerm, SymmetryOpSpec};
use intertwine::propagate::{propagate, separated_solution, EquationKind, SeparatedSolutionSpec, Snapshots};
use intertwine::verify::{
    check_intertwining, check_norm_identity, check_reflectionless, check_symmetry, convergence_study, zero_mode_check_with,
    GridLevel, NormIdentity, Tolerances, VerificationReport,
};

use crate::config::{
    check_tol, CheckConfig, ChiTermConfig, Expect, FamilyConfig, NonStatConfig, Refinement, ScenarioConfig, SourceConfig,
};
use crate::error::{as_measured_failure, CliError};

/// Counter-propagating amplitude bound for the reflectionless check.
pub const REFLECTION_TOL: f64 = 1e-3;
/// Smallest commutator a symmetry expected to break must show.
pub const BREAK_THRESHOLD: f64 = 1e-2;

type Result<T> = std::result::Result<T, CliError>;

/// Everything a run produces.
pub struct Outcome {
    pub report: VerificationReport,
    pub source: Option<Snapshots>,
    pub image: Option<Snapshots>,
}

fn nonstat(n: &NonStatConfig) -> Result<NonStatFamily> {
    Ok(NonStatFamily { f1: n.f1.build()?, sigma: n.sigma, delta: n.delta, lambda0: n.lambda0 })
}

fn chi_term(c: &ChiTermConfig) -> Result<ChiTerm> {
    Ok(ChiTerm { x: c.x.build()?, t: c.t.build()?, coeff: C64::new(c.coeff, c.coeff_im) })
}

fn or_constant(p: &Option<crate::config::ProfileConfig>, c: f64) -> Result<Profile> {
    Ok(match p {
        Some(p) => p.build()?,
        None => Profile::constant(c),
    })
}

pub fn build_family(cfg: &FamilyConfig) -> Result<PotentialFamily> {
    Ok(match cfg {
        FamilyConfig::FirstOrder { rho, mu, gamma, k } => PotentialFamily::FirstOrder(FirstOrderFamily {
            rho: or_constant(rho, 1.0)?,
            mu: or_constant(mu, 0.0)?,
            gamma: or_constant(gamma, 0.0)?,
            k: k.build()?,
        }),
        FamilyConfig::Symmetry { omega, nu, phi } => {
            PotentialFamily::Symmetry(SymmetryFamily { omega: omega.build()?, nu: nu.build()?, phi: phi.build()? })
        }
        FamilyConfig::FokkerPlanck { chi, rho } => PotentialFamily::FokkerPlanck(FokkerPlanckFamily {
            chi: Chi::new(chi.iter().map(chi_term).collect::<Result<_>>()?)?,
            rho: or_constant(rho, 1.0)?,
        }),
        FamilyConfig::PainleveIv { f, m, a, d, m0 } => {
            PotentialFamily::PainleveIV(PainleveIVFamily::new(f.build()?, *m, *a, *d, *m0))
        }
        FamilyConfig::PainleveIi { w, mtilde, n, k } => {
            PotentialFamily::PainleveII(PainleveIIFamily::new(w.build()?, *mtilde, *n, *k))
        }
        FamilyConfig::FourthOrder { f, beta, c, a0, x0, theta0, lambda0 } => PotentialFamily::FourthOrder(
            FourthOrderFamily::new(f.build()?, *beta, *c, *a0, *x0).with_initial(*theta0, *lambda0),
        ),
        FamilyConfig::Nonstat(n) => PotentialFamily::NonStat(nonstat(n)?),
        FamilyConfig::TdOscillator { rho, nested } => {
            PotentialFamily::TdOscillator(TdOscFamily { rho: rho.build()?, nested: nonstat(nested)? })
        }
    })
}

/// Normalized Gaussian packet.
pub fn packet(grid: Grid1D, center: f64, width: f64, momentum: f64) -> Result<ComplexField> {
    let f = ComplexField::from_fn(grid, |x| {
        let u = (x - center) / width;
        C64::from_polar((-u * u / 2.0).exp(), momentum * x)
    })?;
    let n = f.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(intertwine::Error::NonFinite("packet norm on the grid").into());
    }
    Ok(f.scale(C64::new(1.0 / n, 0.0)))
}

/// Range of `y = x/ρ + μ` over the window, for the separated eigenproblem.
fn y_grid(fam: &FirstOrderFamily, grid: &Grid1D, tg: &TimeGrid) -> Result<Grid1D> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for t in [tg.t0(), 0.5 * (tg.t0() + tg.t_end()), tg.t_end()] {
        for x in [grid.x_min(), grid.x_max()] {
            let y = fam.y(x, t);
            lo = lo.min(y);
            hi = hi.max(y);
        }
    }
    Ok(make_grid(lo, hi, grid.len())?)
}

/// The source solution of the second partner on every step of `tg`.
fn build_source(src: &SourceConfig, family: &PotentialFamily, pair: &PotentialPair, grid: Grid1D, tg: &TimeGrid) -> Result<Snapshots> {
    let first_order = match family {
        PotentialFamily::FirstOrder(f) => Some(f),
        _ => None,
    };
    Ok(match src {
        SourceConfig::Separated { level } => {
            let fam = first_order.ok_or_else(|| CliError::Usage("separated source needs a first-order family".into()))?;
            let spec = SeparatedSolutionSpec::solve(fam.clone(), Branch::Two, *level as usize, y_grid(fam, &grid, tg)?)?;
            separated_solution(&spec, &grid, tg)?
        }
        SourceConfig::ZeroMode => {
            let fam = first_order.ok_or_else(|| CliError::Usage("zero-mode source needs a first-order family".into()))?;
            Snapshots::from_fn(grid, *tg, EquationKind::Schrodinger, |x, t| fam.zero_mode(x, t))?
        }
        SourceConfig::Packet { center, width, momentum } => {
            propagate(&pair.v2, &packet(grid, *center, *width, *momentum)?, tg, pair.kind)?
        }
        SourceConfig::Eigenstate { level } => {
            if !pair.v2.is_stationary() {
                return Err(CliError::Usage("source.kind: eigenstate sources need a stationary second partner".into()));
            }
            let v = pair.v2.clone();
            let t0 = tg.t0();
            let phi = stationary_eigensolve(|x| v.eval(x, t0), &grid, *level as usize + 1)?.refined_eigenfunction(*level as usize)?;
            let e = phi.energy();
            match pair.kind {
                EquationKind::Schrodinger => {
                    Snapshots::from_fn(grid, *tg, pair.kind, |x, t| C64::from_polar(phi.eval(x), -e * (t - t0)))?
                }
                EquationKind::Diffusion => {
                    Snapshots::from_fn(grid, *tg, pair.kind, |x, t| C64::new(phi.eval(x) * (-e * (t - t0)).exp(), 0.0))?
                }
            }
        }
        SourceConfig::PlaneWave { k } => {
            Snapshots::from_fn(grid, *tg, EquationKind::Schrodinger, |x, t| C64::from_polar(1.0, k * x - k * k * t))?
        }
    })
}

/// The operator a symmetry check names, paired with the potential it should commute with.
fn symmetry_targets(
    name: &str,
    family: &PotentialFamily,
    pair: Option<&PotentialPair>,
    sym_v: Option<&Bivariate>,
) -> Result<Vec<(String, Bivariate, SymmetryOpSpec)>> {
    let hamiltonian = |v: &Bivariate| SymmetryOpSpec::new(vec![SymTerm::unit(vec![OpFactor::Hamiltonian(v.clone())])]);
    let unknown = || CliError::Usage(format!("symmetry operator `{name}` is not offered by the {} family", family.tag()));
    if let (PotentialFamily::Symmetry(_), Some(v), "hamiltonian") = (family, sym_v, name) {
        return Ok(vec![(name.into(), v.clone(), hamiltonian(v)?)]);
    }
    let pair = pair.ok_or_else(unknown)?;
    let (v1, v2) = (pair.v1.clone(), pair.v2.clone());
    let q = pair.charge.clone();
    Ok(match (name, family) {
        ("hamiltonian", _) => vec![(name.into(), v2.clone(), hamiltonian(&v2)?)],
        ("charge-products", _) => vec![
            ("q+q-".into(), v1, SymmetryOpSpec::product(q.clone(), q.adjoint())?),
            ("q-q+".into(), v2, SymmetryOpSpec::product(q.adjoint(), q)?),
        ],
        ("r1", PotentialFamily::PainleveIV(f)) => vec![(name.into(), v1, f.r1()?)],
        ("r2-corrected", PotentialFamily::PainleveIV(f)) => vec![(name.into(), v2, f.r2(R2Ordering::Corrected)?)],
        ("r2-printed", PotentialFamily::PainleveIV(f)) => vec![(name.into(), v2, f.r2(R2Ordering::Printed)?)],
        ("r-quadratic-1", PotentialFamily::PainleveII(f)) => vec![(name.into(), v1, f.r_quadratic(true)?)],
        ("r-quadratic-2", PotentialFamily::PainleveII(f)) => vec![(name.into(), v2, f.r_quadratic(false)?)],
        ("r-linear-1", PotentialFamily::PainleveII(f)) => vec![(name.into(), v1, f.r_linear(true)?)],
        ("r-linear-2", PotentialFamily::PainleveII(f)) => vec![(name.into(), v2, f.r_linear(false)?)],
        ("r1", PotentialFamily::NonStat(f)) => vec![(name.into(), v1, f.r1()?)],
        ("r2", PotentialFamily::NonStat(f)) => vec![(name.into(), v2, f.r2()?)],
        ("r2-closed-form", PotentialFamily::NonStat(f)) => vec![(name.into(), v2, f.r2_closed_form()?)],
        _ => return Err(unknown()),
    })
}

/// Residuals of an RK4-generated profile: its step-doubling error estimate and
/// the family's ODE measured on the stored solution by stencils.
fn riccati_checks(cfg: &FamilyConfig) -> Result<Vec<(String, f64)>> {
    let (profile, eq) = match cfg {
        FamilyConfig::PainleveIv { f, m, a, d, .. } => (f, OdeEquation::Painleve4 { m: *m, a: *a, d: *d }),
        FamilyConfig::PainleveIi { w, mtilde, k, .. } => (w, OdeEquation::Painleve2 { mtilde: *mtilde, k: *k }),
        FamilyConfig::FourthOrder { f, beta, c, x0, .. } => (f, OdeEquation::FourthOrderConstraint { beta: *beta, c: *c, x0: *x0 }),
        _ => return Ok(Vec::new()),
    };
    let Some(solution) = profile.riccati_solution() else { return Ok(Vec::new()) };
    let solution = solution?;
    let residual = ode_residual(eq, OdeInput::Solution(&solution))?.max;
    Ok(vec![("rk4-error-estimate".into(), solution.error_estimate()), ("rk4-ode-residual".into(), residual)])
}

/// Turns a measured construction failure into a failed entry; other errors propagate.
fn measured<T>(report: &mut VerificationReport, name: &str, r: intertwine::Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) => match as_measured_failure(&e) {
            Some((value, tol)) => {
                info!("{name}: {e}");
                report.residual(name, value, tol, None);
                Ok(None)
            }
            None => Err(e.into()),
        },
    }
}

fn worst_forward(report: &VerificationReport) -> f64 {
    report
        .residuals
        .iter()
        .filter(|e| e.name.starts_with("forward"))
        .map(|e| e.value)
        .fold(0.0, f64::max)
}

/// Builds the pair on a window, or the symmetry family's potential and operator.
enum Built {
    Pair(PotentialPair),
    Symmetry { v: Bivariate, r: SymmetryOpSpec, provenance: Provenance },
}

fn build(family: &PotentialFamily, window: &Window) -> intertwine::Result<Built> {
    match family {
        PotentialFamily::Symmetry(f) => {
            let b = f.build(window)?;
            Ok(Built::Symmetry { v: b.v, r: b.r, provenance: b.provenance })
        }
        other => Ok(Built::Pair(other.pair(window)?)),
    }
}

pub fn run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let tol: &Tolerances = &cfg.tolerances;
    let grid = cfg.grid.build()?;
    let tg = cfg.time.build()?;
    let window = Window::new(grid, tg.t0(), tg.t_end())?;
    let family = build_family(&cfg.family)?;
    info!("scenario {}: {} family on [{}, {}] with {} points", cfg.scenario, family.tag(), grid.x_min(), grid.x_max(), grid.len());

    let mut head = VerificationReport::new("construction");
    let Some(built) = measured(&mut head, "family", build(&family, &window))? else {
        return Ok(Outcome { report: VerificationReport::merge(cfg.scenario.clone(), vec![head]), source: None, image: None });
    };
    let (pair, provenance) = match &built {
        Built::Pair(p) => (Some(p), p.provenance.clone()),
        Built::Symmetry { provenance, .. } => (None, provenance.clone()),
    };

    let source = match (&cfg.source, pair) {
        (Some(src), Some(pair)) => Some(build_source(src, &family, pair, grid, &tg)?),
        _ => None,
    };
    let mut reports = vec![];
    let mut image = None;
    let sym_v = match &built {
        Built::Symmetry { v, .. } => Some(v),
        Built::Pair(_) => None,
    };

    for check in &cfg.checks {
        let t = check_tol(check);
        debug!("running {} check", check.name());
        match check {
            CheckConfig::Construction { .. } => {
                let limit = t.unwrap_or(tol.single);
                for (name, value) in &provenance.checks {
                    head.residual(name.clone(), *value, limit, None);
                }
                for (name, value) in riccati_checks(&cfg.family)? {
                    head.residual(name, value, limit, None);
                }
            }
            CheckConfig::Intertwining { .. } => {
                let (Some(pair), Some(src)) = (pair, &source) else { unreachable!("validated") };
                let mut rep = VerificationReport::new("intertwining");
                if let Some(out) = measured(&mut rep, "source-residual", check_intertwining("intertwining", pair, src, t.unwrap_or(tol.propagated), None))? {
                    rep = out.report;
                    rep.provenance = None;
                    image = Some(out.image);
                }
                reports.push(rep);
            }
            CheckConfig::Reflectionless { core, stride, .. } => {
                let Some(SourceConfig::PlaneWave { k }) = cfg.source else { unreachable!("validated") };
                match &image {
                    Some(img) => reports.push(check_reflectionless(
                        "reflectionless",
                        img,
                        k,
                        (core[0], core[1]),
                        t.unwrap_or(REFLECTION_TOL),
                        *stride as usize,
                    )?),
                    None => {
                        let mut rep = VerificationReport::new("reflectionless");
                        rep.residual("counter-propagating-ratio", f64::NAN, t.unwrap_or(REFLECTION_TOL), None);
                        reports.push(rep);
                    }
                }
            }
            CheckConfig::ZeroMode { t: at, .. } => {
                let PotentialFamily::FirstOrder(fam) = &family else { unreachable!("validated") };
                reports.push(zero_mode_check_with("zero-mode", fam, &grid, at.unwrap_or(tg.t0()), t.unwrap_or(tol.identity))?);
            }
            CheckConfig::Symmetry { operator, centers, width, times, expect, .. } => {
                let tests = centers.iter().map(|&c| packet(grid, c, *width, 0.0)).collect::<Result<Vec<_>>>()?;
                let times = times.clone().unwrap_or_else(|| window.sample_times(3));
                let targets = match &built {
                    Built::Symmetry { v, r, .. } if operator == "family" => vec![(operator.clone(), v.clone(), r.clone())],
                    _ => symmetry_targets(operator, &family, pair, sym_v)?,
                };
                for (label, v, r) in targets {
                    let name = format!("symmetry-{label}");
                    match expect {
                        Expect::Commutes => {
                            reports.push(check_symmetry(&name, &v, &r, &tests, &times, t.unwrap_or(tol.composed))?);
                        }
                        Expect::Breaks => {
                            let measured = check_symmetry(&name, &v, &r, &tests, &times, f64::INFINITY)?;
                            let mut rep = VerificationReport::new(name);
                            for e in measured.residuals {
                                rep.exceeds(e.name, e.value, t.unwrap_or(BREAK_THRESHOLD));
                            }
                            rep.metrics = measured.metrics;
                            reports.push(rep);
                        }
                    }
                }
            }
            CheckConfig::NormIdentity { packets, t: at, .. } => {
                let (Some(pair), PotentialFamily::NonStat(fam)) = (pair, &family) else { unreachable!("validated") };
                let mut rep = VerificationReport::new("norm-identity");
                for (i, p) in packets.iter().enumerate() {
                    let psi = packet(grid, p.center, p.width, p.momentum)?;
                    let spec = NormIdentity { lambda0: fam.lambda0, t: *at, energy: None, tol: t.unwrap_or(tol.composed) };
                    let mut sub = check_norm_identity(&format!("packet-{i}"), pair, &psi, spec)?;
                    sub.provenance = None;
                    rep.absorb(sub);
                }
                reports.push(rep);
            }
            CheckConfig::NonstatConstraints { free, .. } => {
                let fam = match &family {
                    PotentialFamily::NonStat(f) => f,
                    PotentialFamily::TdOscillator(f) => &f.nested,
                    _ => unreachable!("validated"),
                };
                let mut rep = VerificationReport::new("nonstat");
                let c = fam.constraints(&window, &window.sample_times(9));
                let limit = t.unwrap_or(tol.single);
                rep.residual("drift", c.drift, limit, None);
                rep.residual("b-evolution", c.b_evolution, limit, None);
                rep.residual("stationary", c.stationary, limit, None);
                rep.residual("closure", c.closure, limit, None);
                if c.skipped > 0 {
                    rep.flag(format!("{} point(s) skipped for lack of derivative order", c.skipped));
                }
                if *free {
                    let free_tol = tol.identity;
                    match fam.require_free(&window, free_tol) {
                        Ok(v) => rep.residual("v2-free", v, free_tol, None),
                        Err(intertwine::Error::V2NotFree { residual }) => rep.residual("v2-free", residual, free_tol, None),
                        Err(e) => return Err(e.into()),
                    };
                }
                reports.push(rep);
            }
            CheckConfig::Convergence { refine, levels, declared_order } => {
                let src = cfg.source.as_ref().expect("validated");
                let mut level: GridLevel = (grid, tg);
                let mut all = vec![level];
                for _ in 1..*levels {
                    level = match refine {
                        Refinement::Space => (level.0.refined(), level.1),
                        Refinement::Time => (level.0, level.1.halved()),
                    };
                    all.push(level);
                }
                let rep = convergence_study("convergence", &all, *declared_order, |g, tg| {
                    let w = Window::new(*g, tg.t0(), tg.t_end())?;
                    let pair = family.pair(&w)?;
                    let s = build_source(src, &family, &pair, *g, tg).map_err(|e| match e {
                        CliError::Core(e) => e,
                        other => intertwine::Error::InvalidParameter(other.to_string()),
                    })?;
                    Ok(worst_forward(&check_intertwining("level", &pair, &s, f64::INFINITY, None)?.report))
                })?;
                reports.push(rep);
            }
        }
    }
    reports.push(head);
    let report = VerificationReport::merge(cfg.scenario.clone(), reports).with_provenance(provenance);
    Ok(Outcome { report, source, image })
}
