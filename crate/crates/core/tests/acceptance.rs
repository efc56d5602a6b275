//! Acceptance criteria, one pass/fail line each. Runs as a plain binary so the
//! lines are printed on every run; exits non-zero on any unexpected failure.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use intertwine::families::*;
use intertwine::field::{make_grid, Bivariate, ComplexField, Grid1D, Jet, Profile, TimeGrid, C64};
use intertwine::ode::{integrate_riccati, ode_residual, OdeEquation, OdeInput, RiccatiKind};
use intertwine::propagate::*;
use intertwine::verify::*;
use intertwine::{Error, Result};

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
    /// Set when the item cannot pass as stated; the reason is printed with it.
    known_unattainable: Option<&'static str>,
}

fn line(id: &'static str, pass: bool, detail: String) -> Line {
    Line { id, pass, detail, known_unattainable: None }
}

fn window(lo: f64, hi: f64, n: usize, t0: f64, t1: f64) -> Result<Window> {
    Window::new(make_grid(lo, hi, n)?, t0, t1)
}

fn packet(g: Grid1D, center: f64, width: f64, p: f64) -> Result<ComplexField> {
    let c = (PI * width * width).powf(-0.25);
    ComplexField::from_fn(g, |x| {
        let u = (x - center) / width;
        C64::from_polar(c * (-u * u / 2.0).exp(), p * x)
    })
}

fn gaussians(g: Grid1D, centers: &[f64], width: f64) -> Result<Vec<ComplexField>> {
    centers.iter().map(|&c| packet(g, c, width, 0.0)).collect()
}

fn worst(report: &VerificationReport) -> f64 {
    report.residuals.iter().map(|e| e.value).fold(0.0, f64::max)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

fn poly(c: &[f64]) -> Profile {
    Profile::Polynomial(c.to_vec())
}

// 1. first excited oscillator state transported through ∂x + x
fn intertwining_transport() -> Result<Vec<Line>> {
    let w = window(-10.0, 10.0, 2001, 0.0, 0.2)?;
    let pair = FirstOrderFamily::stationary(poly(&[0.0, 0.0, 0.5])).pair(&w)?;
    let c1 = 2f64.sqrt() * PI.powf(-0.25);
    let psi0 = ComplexField::from_real_fn(w.grid, |x| c1 * x * (-x * x / 2.0).exp())?;
    let tg = TimeGrid::new(0.0, 1e-4, 2000)?;
    let source = propagate(&pair.v2, &psi0, &tg, EquationKind::Schrodinger)?;
    let out = check_intertwining("harmonic-chain", &pair, &source, 1e-5, None)?;
    let residual = worst(&out.report);
    // (∂ + x)(c₁ x e^{−x²/2}) = c₁ e^{−x²/2}
    let mut image_gap: f64 = 0.0;
    for k in (0..out.image.len()).step_by(100) {
        let t = tg.t(k);
        let exact = ComplexField::from_fn(w.grid, |x| C64::from_polar(c1 * (-x * x / 2.0).exp(), -2.0 * t))?;
        image_gap = image_gap.max(out.image.field(k).sub(&exact)?.reliable_norm());
    }
    Ok(vec![
        line("1a", out.report.pass, format!("mapped S[V1] residual {residual:.3e} < 1e-5")),
        line("1b", image_gap < 1e-5, format!("image vs e^(-x^2/2)e^(-2it) L2 gap {image_gap:.3e} < 1e-5")),
    ])
}

// 2. zero modes of K = y²/2 and K = y⁴/4
fn zero_modes() -> Result<Vec<Line>> {
    // ∫e^{−y²} = √π; ∫e^{−y⁴/2} = 2Γ(5/4)·2^{1/4}
    const GAMMA_5_4: f64 = 0.906_402_477_055_477_1;
    let cases = [
        ("2a", poly(&[0.0, 0.0, 0.5]), PI.sqrt(), make_grid(-10.0, 10.0, 2001)?),
        ("2b", poly(&[0.0, 0.0, 0.0, 0.0, 0.25]), 2.0 * GAMMA_5_4 * 2f64.powf(0.25), make_grid(-6.0, 6.0, 2401)?),
    ];
    let mut out = Vec::new();
    for (id, k, oracle, g) in cases {
        let fam = FirstOrderFamily::stationary(k);
        let rep = zero_mode_check(id, &fam, &g, 0.0)?;
        let annihilation = rep.residuals[0].value;
        let integral = rep.metrics.get("normalization-integral").copied().unwrap_or(f64::NAN);
        let gap = (integral - oracle).abs();
        out.push(line(
            id,
            rep.pass && gap < 1e-8,
            format!("K = {:?}: annihilation {annihilation:.3e} < 1e-8, integral gap {gap:.3e} < 1e-8", fam.k),
        ));
    }
    Ok(out)
}

// 3. direct propagation against the separated solution for ρ = e^t
fn r_separation_equivalence() -> Result<Vec<Line>> {
    let fam = FirstOrderFamily {
        rho: Profile::Exponential { a: 1.0, lambda: 1.0 },
        mu: Profile::zero(),
        gamma: Profile::zero(),
        k: poly(&[0.0, 0.0, 0.5]),
    };
    let g = make_grid(-15.0, 15.0, 3001)?;
    let pair = fam.pair(&Window::new(g, 0.0, 0.5)?)?;
    let spec = SeparatedSolutionSpec::solve(fam, Branch::Two, 1, g)?;
    let tg = TimeGrid::new(0.0, 1e-4, 5000)?;
    let opts = PropagateOptions { record_every: 5000, ..PropagateOptions::default() };
    let separated = separated_solution(&spec, &g, &TimeGrid::new(0.0, 0.5, 1)?)?;
    let direct = propagate_with(&pair.v2, separated.field(0), &tg, EquationKind::Schrodinger, opts)?;
    let gap = direct.last().sub(separated.last())?.norm();
    Ok(vec![line("3", gap < 1e-4, format!("L2 discrepancy at t = 0.5: {gap:.3e} < 1e-4"))])
}

// 4. symmetry commutators
fn symmetry_commutators() -> Result<Vec<Line>> {
    let mut out = Vec::new();

    let v = 0.5;
    let phi = Profile::Sum(vec![Profile::Cosh { a: 0.0, kappa: 1.0 }, poly(&[0.0, 0.0, 0.25])]);
    let fam = SymmetryFamily { omega: Profile::constant(1.0), nu: Profile::constant(2.0 * v), phi };
    let w = window(-10.0, 10.0, 2001, 0.0, 1.0)?;
    let b = fam.build(&w)?;
    let rep = check_symmetry("traveling", &b.v, &b.r, &gaussians(w.grid, &[-1.0, 0.0, 1.0], 1.0)?, &[0.2, 0.7], 1e-5)?;
    out.push(line("4a", rep.pass, format!("traveling symmetry family: max commutator {:.3e} < 1e-5", worst(&rep))));

    let ns = NonStatFamily { f1: Profile::Cosh { a: FRAC_1_SQRT_2, kappa: 1.0 }, sigma: 0.5, delta: 0.5, lambda0: 1.0 };
    let pair = ns.pair(&w)?;
    let rep = check_symmetry("nonstat-r2", &pair.v2, &ns.r2()?, &gaussians(w.grid, &[-1.0, 0.0, 1.0], 1.0)?, &[0.3], 1e-5)?;
    out.push(line("4b", rep.pass, format!("q-q+ on the free partner: max commutator {:.3e} < 1e-5", worst(&rep))));

    let mut piv = PainleveIVFamily::new(Profile::Power { a: 0.5, p: -1.0 }, 1.0, -1.0, -1.0, 0.0);
    piv.m0 = 0.7;
    let w = window(1.0, 15.0, 1751, 0.0, 1.0)?;
    let pair = piv.pair(&w)?;
    let tests = gaussians(w.grid, &[7.5, 8.0, 8.5], 1.0)?;
    let good = check_symmetry("corrected", &pair.v2, &piv.r2(R2Ordering::Corrected)?, &tests, &[0.35], 1e-5)?;
    out.push(line("4c", good.pass, format!("Painleve IV R2, corrected ordering: max commutator {:.3e} < 1e-5", worst(&good))));
    let bad = check_symmetry("printed", &pair.v2, &piv.r2(R2Ordering::Printed)?, &tests, &[0.35], 1e-5)?;
    let smallest = bad.residuals.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
    out.push(line("4d", smallest > 1e-2, format!("Painleve IV R2, printed ordering: min commutator {smallest:.3e} > 1e-2")));
    Ok(out)
}

// 5. norm identity on random packets
fn norm_identity() -> Result<Vec<Line>> {
    let ns = NonStatFamily { f1: Profile::Cosh { a: FRAC_1_SQRT_2, kappa: 1.0 }, sigma: 0.5, delta: 0.5, lambda0: 1.0 };
    let w = window(-15.0, 15.0, 3001, 0.0, 1.0)?;
    let pair = ns.pair(&w)?;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut gap: f64 = 0.0;
    let mut pass = true;
    for _ in 0..5 {
        let psi = packet(w.grid, rng.gen_range(-3.0..3.0), rng.gen_range(0.7..1.5), rng.gen_range(-1.5..1.5))?;
        let t = rng.gen_range(0.0..1.0);
        let rep = check_norm_identity("packet", &pair, &psi, NormIdentity { lambda0: 1.0, t, energy: None, tol: 1e-5 })?;
        pass &= rep.pass;
        gap = gap.max(worst(&rep));
    }
    Ok(vec![line("5", pass, format!("max |‖q+ψ‖² − ‖H2ψ‖² − 1/4| over 5 packets {gap:.3e} < 1e-5"))])
}

// 6. Painlevé and Riccati residuals
fn painleve_residuals() -> Result<Vec<Line>> {
    let mut out = Vec::new();
    let g = make_grid(0.5, 5.0, 901)?;
    let half_inverse = Profile::Power { a: 0.5, p: -1.0 };
    let literal = ode_residual(OdeEquation::Painleve4 { m: 1.0, a: 0.0, d: 0.0 }, OdeInput::Profile(&half_inverse, &g))?.max;
    out.push(Line {
        id: "6a",
        pass: literal < 1e-9,
        detail: format!("f = 1/(2x), Painleve IV with m = 1, a = d = 0: max residual {literal:.3e} < 1e-9"),
        known_unattainable: Some("the residual is exactly -x - 1/x; f = 1/(2x) solves the equation for a = d = -1"),
    });
    let corrected = ode_residual(OdeEquation::Painleve4 { m: 1.0, a: -1.0, d: -1.0 }, OdeInput::Profile(&half_inverse, &g))?.max;
    out.push(line("6a'", corrected < 1e-9, format!("f = 1/(2x), Painleve IV with m = 1, a = d = -1: max residual {corrected:.3e} < 1e-9")));

    let inverse = Profile::Power { a: 1.0, p: -1.0 };
    let p2 = ode_residual(OdeEquation::Painleve2 { mtilde: 1.0, k: -4.0 }, OdeInput::Profile(&inverse, &g))?.max;
    out.push(line("6b", p2 < 1e-9, format!("W = 1/x, Painleve II with k = -4m: max residual {p2:.3e} < 1e-9")));

    let lin = poly(&[0.0, 1.0]);
    let g3 = make_grid(0.0, 3.0, 301)?;
    let kind = RiccatiKind::FourthOrderRiccati { beta: 8.0, d: 1.0 };
    let riccati = g3.points().map(|x| (1.0 - kind.rhs(x, x)).abs()).fold(0.0, f64::max);
    let constraint = ode_residual(OdeEquation::FourthOrderConstraint { beta: 8.0, c: 0.0, x0: 0.0 }, OdeInput::Profile(&lin, &g3))?.max;
    let worst6c = riccati.max(constraint);
    out.push(line("6c", worst6c < 1e-9, format!("f = x, beta = 8, d = 1: Riccati {riccati:.3e}, constraint {constraint:.3e} < 1e-9")));

    let g4 = make_grid(3.0, 6.0, 3001)?;
    let s4 = integrate_riccati(RiccatiKind::Painleve4 { m: 1.0, a: 2.0 }, 3.0, -1.0, &g4)?;
    let r4 = ode_residual(OdeEquation::Painleve4 { m: 1.0, a: 2.0, d: -4.0 }, OdeInput::Solution(&s4))?.max;
    let g2 = make_grid(-2.0, 1.0, 3001)?;
    let s2 = integrate_riccati(RiccatiKind::Painleve2 { k: 2.0 }, 0.0, 0.0, &g2)?;
    let r2 = ode_residual(OdeEquation::Painleve2 { mtilde: 1.0, k: 2.0 }, OdeInput::Solution(&s2))?.max;
    let s41 = integrate_riccati(RiccatiKind::FourthOrderRiccati { beta: 1.0, d: 0.0 }, 0.0, 0.0, &g2)?;
    let r41 = ode_residual(OdeEquation::FourthOrderConstraint { beta: 1.0, c: 0.0, x0: 0.0 }, OdeInput::Solution(&s41))?.max;
    let rk = r4.max(r2).max(r41);
    out.push(line("6d", rk < 1e-6, format!("RK4 solutions: IV {r4:.3e}, II {r2:.3e}, constraint {r41:.3e} < 1e-6")));

    let fam = PainleveIVFamily::new(s4.to_profile(), 1.0, 2.0, -4.0, 0.0);
    let pair = fam.pair(&Window::new(make_grid(3.05, 5.95, 291)?, 0.0, 1.0)?)?;
    let gap = pair.provenance.checks["route-gap"];
    out.push(line("6e", gap < 1e-8, format!("RK4-fed Painleve IV pair: construction routes agree to {gap:.3e} < 1e-8")));
    Ok(out)
}

fn free_gaussian(x: f64, t: f64) -> C64 {
    let a = C64::new(1.0, t);
    let pref = (2.0 * PI).powf(-0.25) * (C64::new(1.0, 0.0) / a).sqrt();
    pref * (-(x * x) / (4.0 * a)).exp()
}

// 7. Crank-Nicolson quality
fn crank_nicolson() -> Result<Vec<Line>> {
    let g = make_grid(-20.0, 20.0, 4001)?;
    let psi0 = ComplexField::from_fn(g, |x| free_gaussian(x, 0.0))?;
    let tg = TimeGrid::new(0.0, 1e-4, 10_000)?;
    let opts = PropagateOptions { record_every: 10_000, ..PropagateOptions::default() };
    let s = propagate_with(&Bivariate::zero(), &psi0, &tg, EquationKind::Schrodinger, opts)?;
    let exact = ComplexField::from_fn(g, |x| free_gaussian(x, 1.0))?;
    let err = s.last().sub(&exact)?.norm();
    let norms = &s.diagnostics().expect("propagation diagnostics").norms;
    let drift = norms.iter().map(|n| (n - norms[0]).abs()).fold(0.0, f64::max);

    let levels: Vec<GridLevel> = [25, 50, 100].iter().map(|&n| Ok((g, TimeGrid::new(0.0, 0.5 / n as f64, n)?))).collect::<Result<_>>()?;
    let study = convergence_study("cn-dt", &levels, 2.0, |g, tg| {
        let psi0 = ComplexField::from_fn(*g, |x| free_gaussian(x, 0.0))?;
        let opts = PropagateOptions { record_every: tg.steps(), ..PropagateOptions::default() };
        let s = propagate_with(&Bivariate::zero(), &psi0, tg, EquationKind::Schrodinger, opts)?;
        Ok(s.last().sub(&ComplexField::from_fn(*g, |x| free_gaussian(x, tg.t_end()))?)?.norm())
    })?;
    let orders: Vec<f64> = study.convergence.iter().map(|c| c.observed_order).collect();
    let in_band = orders.iter().all(|p| (p - 2.0).abs() <= 0.3);
    Ok(vec![
        line("7a", err < 1e-5, format!("free Gaussian at t = 1: L2 error {err:.3e} < 1e-5")),
        line("7b", drift < 1e-8, format!("norm drift over 1e4 steps {drift:.3e} < 1e-8")),
        line("7c", in_band, format!("dt-halving orders {orders:.3?} within 2.0 ± 0.3")),
    ])
}

// 8. Fokker-Planck equilibrium, positivity and partner drift
fn fokker_planck() -> Result<Vec<Line>> {
    let g = make_grid(-8.0, 8.0, 1601)?;
    let tg = TimeGrid::new(0.0, 1e-3, 1000)?;
    let drift = DriftPotential::new(|x, _| (Jet::variable(x).square(), 0.0));
    let opts = PropagateOptions { record_every: 100, ..PropagateOptions::default() };
    let eq = ComplexField::from_real_fn(g, |x| (-x * x).exp() / PI.sqrt())?;
    let s = propagate_fokker_planck(&drift, &eq, &tg, opts)?;
    let stationary = s.fields().iter().map(|f| f.sub(&eq).map(|d| d.norm())).collect::<Result<Vec<_>>>()?;
    let stationary = max_of(&stationary);

    let p0 = ComplexField::from_real_fn(g, |x| (-(x - 1.0).powi(2) / 0.5).exp())?;
    let s = propagate_fokker_planck(&drift, &p0, &tg, opts)?;
    let min_p = s.fields().iter().flat_map(|f| f.values().iter().map(|z| z.re)).fold(f64::INFINITY, f64::min);

    let chi = Chi::new(vec![
        ChiTerm { x: poly(&[0.0, 0.0, 0.5]), t: Profile::constant(1.0), coeff: C64::new(1.0, 0.0) },
        ChiTerm { x: Profile::sin(1.0, 1.0), t: Profile::cos(1.0, 2.0), coeff: C64::new(0.3, 0.0) },
        ChiTerm { x: poly(&[0.0, 1.0]), t: poly(&[0.0, 1.0]), coeff: C64::new(0.2, 0.0) },
    ])?;
    let fp = FokkerPlanckFamily { chi: chi.clone(), rho: Profile::constant(1.0) }.build(&window(-6.0, 6.0, 601, -1.0, 1.0)?)?;
    let mut partner: f64 = 0.0;
    for t in [-0.8, -0.3, 0.0, 0.45, 0.9] {
        for x in make_grid(-6.0, 6.0, 601)?.points() {
            partner = partner.max((fp.u2.value(x, t) - 2.0 * chi.eval(x, -t).0.value()).abs());
        }
    }
    Ok(vec![
        line("8a", stationary < 1e-6, format!("equilibrium e^(-x^2)/sqrt(pi) L2 drift over t = 1: {stationary:.3e} < 1e-6")),
        line("8b", min_p > -1e-10, format!("min P over the run {min_p:.3e} > -1e-10")),
        line("8c", partner < 1e-12, format!("U2(x,t) vs 2 chi(x,-t) pointwise {partner:.3e} < 1e-12")),
    ])
}

// 9. corrected non-stationary family
fn nonstat_consistency() -> Result<Vec<Line>> {
    let w = window(-6.0, 6.0, 1201, -1.0, 1.0)?;
    let fam = NonStatFamily { f1: Profile::Cosh { a: FRAC_1_SQRT_2, kappa: 1.0 }, sigma: 0.5, delta: 0.5, lambda0: 1.0 };
    let pair = fam.pair(&w)?;
    let free = fam.require_free(&w, 1e-8)?;
    let mut variation: f64 = 0.0;
    for t in w.sample_times(9) {
        for x in w.grid.points() {
            variation = variation.max((pair.v2.eval(x, t) - pair.v2.eval(x, w.t_min)).abs());
        }
    }
    let c = fam.constraints(&w, &w.sample_times(9));
    let uncorrected = NonStatFamily { f1: Profile::Cosh { a: 1.0, kappa: 1.0 }, ..fam.clone() };
    let rejected = matches!(uncorrected.require_free(&w, 1e-8), Err(Error::V2NotFree { .. }));
    Ok(vec![
        line("9a", free < 1e-8 && variation == 0.0, format!("max |V2| {free:.3e} < 1e-8, time variation {variation:.1e}")),
        line("9b", c.max() < 1e-6, format!("four constraints max residual {:.3e} < 1e-6", c.max())),
        line("9c", rejected, "amplitude 1 is rejected by the V2 = 0 check".to_string()),
    ])
}

// 10. reflectionless image of a plane wave
fn reflectionless() -> Result<Vec<Line>> {
    let fam = NonStatFamily { f1: Profile::Cosh { a: FRAC_1_SQRT_2, kappa: 1.0 }, sigma: 0.5, delta: 0.5, lambda0: 1.0 };
    let l = 60.0;
    let w = window(-l, l, 12001, 0.0, 0.01)?;
    let pair = fam.pair(&w)?;
    let k = 2.0 * PI * 24.0 / (2.0 * l);
    let tg = TimeGrid::new(0.0, 1e-4, 40)?;
    let src = Snapshots::from_fn(w.grid, tg, EquationKind::Schrodinger, |x, t| C64::from_polar(1.0, k * x - k * k * t))?;
    let out = check_intertwining("reflectionless", &pair, &src, 1e-4, None)?;
    let rep = check_reflectionless("reflectionless", &out.image, k, (-20.0, 20.0), 1e-3, 10)?;
    Ok(vec![line(
        "10",
        rep.pass && out.report.pass,
        format!("counter-propagating amplitude {:.3e} < 1e-3 (mapped residual {:.3e})", worst(&rep), worst(&out.report)),
    )])
}

type Criterion = (&'static str, fn() -> Result<Vec<Line>>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1", intertwining_transport),
        ("2", zero_modes),
        ("3", r_separation_equivalence),
        ("4", symmetry_commutators),
        ("5", norm_identity),
        ("6", painleve_residuals),
        ("7", crank_nicolson),
        ("8", fokker_planck),
        ("9", nonstat_consistency),
        ("10", reflectionless),
    ];
    let mut unexpected = 0;
    let mut known = 0;
    for (id, run) in criteria {
        let start = Instant::now();
        let lines = run().unwrap_or_else(|e| vec![line(id, false, format!("error: {e}"))]);
        let secs = start.elapsed().as_secs_f64();
        for l in lines {
            let verdict = if l.pass { "PASS" } else { "FAIL" };
            println!("criterion {:<4} {verdict}  {}  [{secs:.1}s]", l.id, l.detail);
            match (l.pass, l.known_unattainable) {
                (true, _) => {}
                (false, Some(why)) => {
                    known += 1;
                    println!("              expected failure: {why}");
                }
                (false, None) => unexpected += 1,
            }
        }
    }
    println!("acceptance: {unexpected} unexpected failure(s), {known} documented unattainable item(s)");
    if unexpected > 0 {
        std::process::exit(1);
    }
}
