use std::f64::consts::PI;

use intertwine::families::{Branch, DriftPotential, FirstOrderFamily, Window};
use intertwine::field::{make_grid, Bivariate, ComplexField, Jet, Profile, TimeGrid, C64};
use intertwine::operators::{diffusion_residual, schrodinger_residual};
use intertwine::propagate::*;
use intertwine::Error;

fn free_gaussian(x: f64, t: f64, s0: f64) -> C64 {
    let a = C64::new(s0 * s0, t);
    let pref = (2.0 * PI * s0 * s0).powf(-0.25) * (C64::new(s0 * s0, 0.0) / a).sqrt();
    pref * (-(x * x) / (4.0 * a)).exp()
}

fn l2_gap(f: &ComplexField, g: impl Fn(f64) -> C64) -> f64 {
    let d = ComplexField::from_fn(*f.grid(), |x| g(x)).unwrap();
    f.sub(&d).unwrap().norm()
}

fn recorded(every: usize) -> PropagateOptions {
    PropagateOptions { record_every: every, ..PropagateOptions::default() }
}

#[test]
fn free_gaussian_matches_closed_form() {
    let g = make_grid(-20.0, 20.0, 4001).unwrap();
    let psi0 = ComplexField::from_fn(g, |x| free_gaussian(x, 0.0, 1.0)).unwrap();
    let tg = TimeGrid::new(0.0, 1e-4, 10_000).unwrap();
    let s = propagate_with(&Bivariate::zero(), &psi0, &tg, EquationKind::Schrodinger, recorded(1000)).unwrap();
    assert_eq!(s.len(), 11);
    let err = l2_gap(s.last(), |x| free_gaussian(x, 1.0, 1.0));
    assert!(err < 1e-5, "{err}");
    let d = s.diagnostics().unwrap();
    assert_eq!(d.norms.len(), 10_001);
    let drift = d.norms.iter().map(|n| (n - d.norms[0]).abs()).fold(0.0, f64::max);
    assert!(drift < 1e-8, "{drift}");
    assert!(!d.boundary_leak);
}

#[test]
fn oscillator_ground_state_is_stationary() {
    let g = make_grid(-10.0, 10.0, 2001).unwrap();
    let phi0 = |x: f64| PI.powf(-0.25) * (-x * x / 2.0).exp();
    let psi0 = ComplexField::from_real_fn(g, phi0).unwrap();
    let v = Bivariate::stationary(|x| x * x - 1.0);
    let tg = TimeGrid::new(0.0, 1e-3, 1000).unwrap();
    let s = propagate_with(&v, &psi0, &tg, EquationKind::Schrodinger, recorded(100)).unwrap();
    let overlap = psi0.inner(s.last()).unwrap().norm();
    assert!((overlap - 1.0).abs() < 1e-6, "{overlap}");
}

#[test]
fn heat_mode_decays() {
    let g = make_grid(0.0, PI, 315).unwrap();
    let psi0 = ComplexField::from_real_fn(g, f64::sin).unwrap();
    let tg = TimeGrid::new(0.0, 1e-3, 1000).unwrap();
    let s = propagate_with(&Bivariate::zero(), &psi0, &tg, EquationKind::Diffusion, recorded(100)).unwrap();
    let err = s.last().values().iter().zip(g.points()).map(|(z, x)| (z - (-1.0f64).exp() * x.sin()).norm()).fold(0.0, f64::max);
    assert!(err < 1e-5, "{err}");
}

#[test]
fn second_order_variant_is_less_accurate_but_close() {
    let g = make_grid(-20.0, 20.0, 4001).unwrap();
    let psi0 = ComplexField::from_fn(g, |x| free_gaussian(x, 0.0, 1.0)).unwrap();
    let tg = TimeGrid::new(0.0, 1e-3, 500).unwrap();
    let opts = PropagateOptions { record_every: 500, spatial_order: SpatialOrder::Second };
    let s = propagate_with(&Bivariate::zero(), &psi0, &tg, EquationKind::Schrodinger, opts).unwrap();
    let err = l2_gap(s.last(), |x| free_gaussian(x, 0.5, 1.0));
    assert!(err < 1e-3 && err > 1e-7, "{err}");
}

#[test]
fn dt_halving_is_second_order() {
    let g = make_grid(-20.0, 20.0, 4001).unwrap();
    let psi0 = ComplexField::from_fn(g, |x| free_gaussian(x, 0.0, 1.0)).unwrap();
    let errs: Vec<f64> = [0.02, 0.01, 0.005]
        .iter()
        .map(|&dt| {
            let steps = (0.5 / dt) as usize;
            let tg = TimeGrid::new(0.0, dt, steps).unwrap();
            let s = propagate_with(&Bivariate::zero(), &psi0, &tg, EquationKind::Schrodinger, recorded(steps)).unwrap();
            l2_gap(s.last(), |x| free_gaussian(x, 0.5, 1.0))
        })
        .collect();
    for w in errs.windows(2) {
        let p = (w[0] / w[1]).log2();
        assert!((p - 2.0).abs() < 0.3, "{errs:?}");
    }
}

#[test]
fn refuses_unstable_potential() {
    let g = make_grid(-1.0, 1.0, 101).unwrap();
    let psi0 = ComplexField::from_real_fn(g, |x| (1.0 - x * x).max(0.0)).unwrap();
    let tg = TimeGrid::new(0.0, 1e-2, 10).unwrap();
    let v = Bivariate::stationary(|x| 500.0 * x * x);
    let r = propagate(&v, &psi0, &tg, EquationKind::Schrodinger);
    assert!(matches!(r, Err(Error::UnstablePotential { .. })));
}

#[test]
fn flags_boundary_leak() {
    let g = make_grid(-5.0, 5.0, 1001).unwrap();
    let psi0 = ComplexField::from_fn(g, |x| free_gaussian(x - 3.0, 0.0, 0.5)).unwrap();
    let tg = TimeGrid::new(0.0, 1e-3, 200).unwrap();
    let s = propagate(&Bivariate::zero(), &psi0, &tg, EquationKind::Schrodinger).unwrap();
    assert!(s.diagnostics().unwrap().boundary_leak);
}

#[test]
fn record_every_must_divide_steps() {
    let g = make_grid(-1.0, 1.0, 101).unwrap();
    let tg = TimeGrid::new(0.0, 1e-3, 10).unwrap();
    let r = propagate_with(&Bivariate::zero(), &ComplexField::zeros(g), &tg, EquationKind::Schrodinger, recorded(3));
    assert!(matches!(r, Err(Error::InvalidTimeGrid(_))));
}

// ---- separated solutions ----

fn harmonic(rho: Profile) -> FirstOrderFamily {
    FirstOrderFamily { rho, mu: Profile::zero(), gamma: Profile::zero(), k: Profile::Polynomial(vec![0.0, 0.0, 0.5]) }
}

#[test]
fn separated_first_excited_state() {
    let g = make_grid(-10.0, 10.0, 2001).unwrap();
    let spec = SeparatedSolutionSpec::solve(harmonic(Profile::constant(1.0)), Branch::Two, 1, g).unwrap();
    let tg = TimeGrid::new(0.0, 1e-4, 20).unwrap();
    let s = separated_solution(&spec, &g, &tg).unwrap();
    let phi1 = |x: f64| 2f64.sqrt() * PI.powf(-0.25) * x.abs() * (-x * x / 2.0).exp();
    let t = tg.t(20);
    let err = s.last().values().iter().zip(g.points()).map(|(z, x)| (z.norm() - phi1(x)).abs()).fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");
    let phase = s.last().values()[1200] / s.field(0).values()[1200];
    assert!((phase - C64::from_polar(1.0, -2.0 * t)).norm() < 1e-8);
    let v2 = Bivariate::stationary(|x| x * x - 1.0);
    let r = schrodinger_residual(&v2, &s).unwrap();
    assert!(r.iter().all(|v| *v < 1e-6), "{r:?}");
}

#[test]
fn separated_with_growing_scale() {
    let fam = harmonic(Profile::Exponential { a: 1.0, lambda: 1.0 });
    let g = make_grid(-12.0, 12.0, 2401).unwrap();
    let spec = SeparatedSolutionSpec::solve(fam.clone(), Branch::Two, 1, g).unwrap();
    let tg = TimeGrid::new(0.5, 1e-4, 10).unwrap();
    let s = separated_solution(&spec, &g, &tg).unwrap();
    let pair = fam.pair(&Window::new(g, 0.0, 1.0).unwrap()).unwrap();
    let r = schrodinger_residual(&pair.v2, &s).unwrap();
    assert!(r.iter().all(|v| *v < 1e-5), "{r:?}");
}

#[test]
fn separated_free_box_mode() {
    let fam = FirstOrderFamily::stationary(Profile::zero());
    let g = make_grid(0.0, PI, 315).unwrap();
    let spec = SeparatedSolutionSpec::solve(fam, Branch::One, 0, g).unwrap();
    let tg = TimeGrid::new(0.0, 1e-4, 10).unwrap();
    let s = separated_solution(&spec, &g, &tg).unwrap();
    let r = schrodinger_residual(&Bivariate::zero(), &s).unwrap();
    assert!(r.iter().all(|v| *v < 1e-5), "{r:?}");
}

#[test]
fn separated_rejects_missing_level_and_bad_rho() {
    let g = make_grid(-5.0, 5.0, 501).unwrap();
    let mut spec = SeparatedSolutionSpec::solve(harmonic(Profile::constant(1.0)), Branch::Two, 0, g).unwrap();
    let tg = TimeGrid::new(0.0, 0.1, 10).unwrap();
    spec.level = 3;
    assert!(matches!(separated_solution(&spec, &g, &tg), Err(Error::InvalidParameter(_))));
    spec.level = 0;
    spec.family.rho = Profile::cos(1.0, 2.0);
    assert!(matches!(separated_solution(&spec, &g, &TimeGrid::new(0.0, 0.1, 10).unwrap()), Err(Error::WindowViolation(_))));
}

// ---- frame maps ----

fn boosted() -> FirstOrderFamily {
    FirstOrderFamily {
        rho: Profile::Sum(vec![Profile::constant(1.0), Profile::sin(0.2, 1.0)]),
        mu: Profile::Polynomial(vec![0.0, 0.3]),
        gamma: Profile::zero(),
        k: Profile::Polynomial(vec![0.0, 0.0, 0.5]),
    }
}

#[test]
fn r_separation_round_trip() {
    let g = make_grid(-12.0, 12.0, 2401).unwrap();
    let tg = TimeGrid::new(0.0, 0.1, 5).unwrap();
    let s = Snapshots::from_fn(g, tg, EquationKind::Schrodinger, |x, t| {
        C64::from_polar((-(x - t).powi(2)).exp(), 0.5 * x)
    })
    .unwrap();
    let fam = boosted();
    let there = r_separation(&fam, &s, MapDirection::Forward).unwrap();
    let back = r_separation(&fam, &there, MapDirection::Inverse).unwrap();
    for k in 0..s.len() {
        let e = back.field(k).sub(s.field(k)).unwrap().max_abs();
        assert!(e < 1e-6, "{k}: {e}");
    }
}

#[test]
fn r_separation_of_separated_solution_has_constant_modulus() {
    let fam = FirstOrderFamily { k: Profile::Polynomial(vec![0.0, 0.0, 0.5]), ..boosted() };
    let g = make_grid(-12.0, 12.0, 2401).unwrap();
    let spec = SeparatedSolutionSpec::solve(fam.clone(), Branch::Two, 2, g).unwrap();
    let tg = TimeGrid::new(0.0, 0.2, 5).unwrap();
    let s = separated_solution(&spec, &g, &tg).unwrap();
    let y = r_separation(&fam, &s, MapDirection::Forward).unwrap();
    for k in 1..y.len() {
        let e = y
            .field(k)
            .values()
            .iter()
            .zip(y.field(0).values())
            .map(|(a, b)| (a.norm() - b.norm()).abs())
            .fold(0.0, f64::max);
        assert!(e < 1e-6, "{k}: {e}");
    }
}

#[test]
fn r_separation_trivial_gauge_is_identity() {
    let g = make_grid(-5.0, 5.0, 501).unwrap();
    let tg = TimeGrid::new(0.0, 0.1, 3).unwrap();
    let s = Snapshots::from_fn(g, tg, EquationKind::Schrodinger, |x, t| C64::new((-x * x).exp(), t)).unwrap();
    let fam = FirstOrderFamily::stationary(Profile::zero());
    let out = r_separation(&fam, &s, MapDirection::Forward).unwrap();
    for k in 0..s.len() {
        assert!(out.field(k).sub(s.field(k)).unwrap().max_abs() < 1e-14);
    }
}

// ---- Fokker-Planck gauge ----

fn harmonic_drift() -> DriftPotential {
    DriftPotential::new(|x, _| (Jet::variable(x).square(), 0.0))
}

#[test]
fn fp_transform_identity_and_round_trip() {
    let g = make_grid(-6.0, 6.0, 601).unwrap();
    let tg = TimeGrid::new(0.0, 0.1, 4).unwrap();
    let p = Snapshots::from_fn(g, tg, EquationKind::Diffusion, |x, t| C64::new((-(x * x) - t).exp(), 0.0)).unwrap();
    let same = fp_transform(&p, &Bivariate::zero(), FpDirection::FpToDiffusion).unwrap();
    assert!(same.last().sub(p.last()).unwrap().max_abs() == 0.0);
    let u = Bivariate::new(|x, t| x * x + 0.1 * t * x);
    let psi = fp_transform(&p, &u, FpDirection::FpToDiffusion).unwrap();
    let back = fp_transform(&psi, &u, FpDirection::DiffusionToFp).unwrap();
    for k in 0..p.len() {
        assert!(back.field(k).sub(p.field(k)).unwrap().max_abs() < 1e-12);
    }
}

#[test]
fn fp_equilibrium_solves_diffusion_form() {
    let g = make_grid(-6.0, 6.0, 1201).unwrap();
    let tg = TimeGrid::new(0.0, 1e-4, 4).unwrap();
    let p = Snapshots::from_fn(g, tg, EquationKind::Diffusion, |x, _| C64::new((-x * x).exp(), 0.0)).unwrap();
    let drift = harmonic_drift();
    let psi = fp_transform(&p, &drift.as_bivariate(), FpDirection::FpToDiffusion).unwrap();
    let r = diffusion_residual(&drift.diffusion_potential(), &psi).unwrap();
    assert!(r.iter().all(|v| *v < 1e-6), "{r:?}");
}

#[test]
fn fp_rejects_complex_density() {
    let g = make_grid(-1.0, 1.0, 101).unwrap();
    let tg = TimeGrid::new(0.0, 0.1, 2).unwrap();
    let p = Snapshots::from_fn(g, tg, EquationKind::Diffusion, |_, _| C64::new(1.0, 1e-3)).unwrap();
    assert_eq!(fp_transform(&p, &Bivariate::zero(), FpDirection::FpToDiffusion).unwrap_err(), Error::ComplexInputForFp);
}

#[test]
fn fokker_planck_equilibrium_and_conservation() {
    let g = make_grid(-8.0, 8.0, 1601).unwrap();
    let tg = TimeGrid::new(0.0, 1e-3, 1000).unwrap();
    let drift = harmonic_drift();
    let eq = ComplexField::from_real_fn(g, |x| (-x * x).exp() / PI.sqrt()).unwrap();
    let s = propagate_fokker_planck(&drift, &eq, &tg, recorded(100)).unwrap();
    assert!(s.last().sub(&eq).unwrap().norm() < 1e-6);

    let p0 = ComplexField::from_real_fn(g, |x| (-(x - 1.0).powi(2) / 0.5).exp()).unwrap();
    let s = propagate_fokker_planck(&drift, &p0, &tg, recorded(100)).unwrap();
    let mass = |f: &ComplexField| f.values().iter().map(|z| z.re).sum::<f64>() * g.h();
    let m0 = mass(&p0);
    for f in s.fields() {
        assert!((mass(f) - m0).abs() < 1e-6);
        assert!(f.values().iter().all(|z| z.re > -1e-10));
    }
}

