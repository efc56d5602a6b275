use std::f64::consts::PI;
use std::sync::Arc;

use intertwine::field::{make_grid, Bivariate, CJet, ComplexField, Grid1D, Jet, Profile, TimeGrid, C64};
use intertwine::operators::*;
use intertwine::propagate::{EquationKind, Snapshots};
use intertwine::Error;

fn interior_err(a: &ComplexField, f: impl Fn(f64) -> C64) -> f64 {
    let g = a.grid();
    a.reliable().map(|i| (a.values()[i] - f(g.x(i))).norm()).fold(0.0, f64::max)
}

fn harmonic_darboux() -> ChargeSpec {
    ChargeSpec::darboux(Arc::new(|x, _| Jet::variable(x)))
}

fn grid() -> Grid1D {
    make_grid(-10.0, 10.0, 2001).unwrap()
}

#[test]
fn charge_maps_first_excited_to_ground_profile() {
    let psi = ComplexField::from_real_fn(grid(), |x| x * (-x * x / 2.0).exp()).unwrap();
    let out = apply_charge(&harmonic_darboux(), &psi, 0.0).unwrap();
    assert!(interior_err(&out, |x| C64::new((-x * x / 2.0).exp(), 0.0)) < 1e-8);
    assert_eq!(out.reliable(), 4..1997);
}

#[test]
fn charge_annihilates_zero_mode() {
    let psi = ComplexField::from_real_fn(grid(), |x| (-x * x / 2.0).exp()).unwrap();
    let out = apply_charge(&harmonic_darboux(), &psi, 0.0).unwrap();
    assert!(interior_err(&out, |_| C64::new(0.0, 0.0)) < 1e-8);
}

#[test]
fn derivative_charge_kills_constants_exactly() {
    let q = ChargeSpec::darboux(Arc::new(|_, _| Jet::constant(0.0)));
    let psi = ComplexField::from_real_fn(grid(), |_| 3.5).unwrap();
    let out = apply_charge(&q, &psi, 0.0).unwrap();
    assert!(out.values().iter().all(|v| *v == C64::new(0.0, 0.0)));
}

#[test]
fn charge_rejects_time_outside_window() {
    let q = harmonic_darboux().with_t_range(0.0, 1.0);
    let psi = ComplexField::zeros(grid());
    assert!(matches!(apply_charge(&q, &psi, 1.5), Err(Error::WindowViolation(_))));
}

#[test]
fn plane_wave_residual() {
    let tg = TimeGrid::new(0.0, 1e-4, 4).unwrap();
    let s = Snapshots::from_fn(grid(), tg, EquationKind::Schrodinger, |x, t| C64::from_polar(1.0, x - t)).unwrap();
    let r = schrodinger_residual(&Bivariate::zero(), &s).unwrap();
    assert_eq!(r.len(), 3);
    assert!(r.iter().all(|v| *v < 1e-6), "{r:?}");
}

#[test]
fn oscillator_ground_state_residual() {
    let tg = TimeGrid::new(0.0, 1e-4, 4).unwrap();
    let phi0 = |x: f64| PI.powf(-0.25) * (-x * x / 2.0).exp();
    let s = Snapshots::from_fn(grid(), tg, EquationKind::Schrodinger, |x, _| C64::new(phi0(x), 0.0)).unwrap();
    let v = Bivariate::stationary(|x| x * x - 1.0);
    assert!(schrodinger_residual(&v, &s).unwrap().iter().all(|r| *r < 1e-6));
}

#[test]
fn zero_field_residual_is_exactly_zero() {
    let tg = TimeGrid::new(0.0, 1e-4, 3).unwrap();
    let s = Snapshots::from_fn(grid(), tg, EquationKind::Schrodinger, |_, _| C64::new(0.0, 0.0)).unwrap();
    let v = Bivariate::stationary(|x| x * x);
    assert!(schrodinger_residual(&v, &s).unwrap().iter().all(|r| *r == 0.0));
}

#[test]
fn too_few_snapshots() {
    let tg = TimeGrid::new(0.0, 1e-4, 1).unwrap();
    let s = Snapshots::from_fn(grid(), tg, EquationKind::Schrodinger, |_, _| C64::new(1.0, 0.0)).unwrap();
    assert!(matches!(schrodinger_residual(&Bivariate::zero(), &s), Err(Error::TooFewSnapshots(2))));
}

#[test]
fn heat_mode_residual() {
    let tg = TimeGrid::new(0.0, 1e-4, 4).unwrap();
    let s = Snapshots::from_fn(grid(), tg, EquationKind::Diffusion, |x, t| C64::new((-t).exp() * x.sin(), 0.0))
        .unwrap();
    assert!(diffusion_residual(&Bivariate::zero(), &s).unwrap().iter().all(|r| *r < 1e-6));
}

#[test]
fn wick_rotated_ground_state_residual() {
    let tg = TimeGrid::new(0.0, 1e-4, 4).unwrap();
    let s = Snapshots::from_fn(grid(), tg, EquationKind::Diffusion, |x, t| {
        C64::new(PI.powf(-0.25) * (-x * x / 2.0 - t).exp(), 0.0)
    })
    .unwrap();
    // e^(−t) decay needs the level E = 1, i.e. V = x²; with V = x² − 1 the residual is ψ itself
    let v = Bivariate::stationary(|x| x * x);
    assert!(diffusion_residual(&v, &s).unwrap().iter().all(|r| *r < 1e-6));
    let shifted = Bivariate::stationary(|x| x * x - 1.0);
    let r = diffusion_residual(&shifted, &s).unwrap();
    assert!(r.iter().all(|r| (r - (-2.0 * 1e-4f64).exp().sqrt()).abs() < 1e-3));
}

#[test]
fn constant_diffusion_residual_vanishes() {
    let tg = TimeGrid::new(0.0, 1e-4, 3).unwrap();
    let s = Snapshots::from_fn(grid(), tg, EquationKind::Diffusion, |_, _| C64::new(2.0, 0.0)).unwrap();
    assert!(diffusion_residual(&Bivariate::zero(), &s).unwrap().iter().all(|r| *r < 1e-12));
}

#[test]
fn hamiltonian_as_symmetry_on_its_ground_state() {
    let v = Bivariate::stationary(|x| x * x);
    let r = SymmetryOpSpec::new(vec![SymTerm::unit(vec![OpFactor::Hamiltonian(v)])]).unwrap();
    let phi0 = ComplexField::from_real_fn(grid(), |x| PI.powf(-0.25) * (-x * x / 2.0).exp()).unwrap();
    let out = apply_symmetry(&r, &phi0, 0.0).unwrap();
    assert!(interior_err(&out, |x| C64::new(PI.powf(-0.25) * (-x * x / 2.0).exp(), 0.0)) < 1e-6);
}

#[test]
fn empty_symmetry_gives_zero() {
    let psi = ComplexField::from_real_fn(grid(), |x| (-x * x).exp()).unwrap();
    let out = apply_symmetry(&SymmetryOpSpec::zero(), &psi, 0.3).unwrap();
    assert!(out.values().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn excessive_order_is_rejected() {
    let v = Bivariate::zero();
    let h = || OpFactor::Hamiltonian(v.clone());
    let term = SymTerm::unit(vec![h(), h(), OpFactor::Charge(harmonic_darboux())]);
    assert!(matches!(SymmetryOpSpec::new(vec![term]), Err(Error::ExcessiveOrder(5))));
}

fn sample_second_order() -> ChargeSpec {
    let c2: CoefFn = Arc::new(|x, t| CJet::new(Jet::constant(1.0 + t), Jet::variable(x).scale(0.1)));
    let c1: CoefFn = Arc::new(|x, _| CJet::new(Jet::variable(x).square(), Jet::variable(x).scale(-0.5)));
    let c0: CoefFn = Arc::new(|x, _| CJet::new((Jet::variable(x).scale(0.3)).exp(), Jet::constant(0.7)));
    ChargeSpec::second_order(c2, c1, c0)
}

#[test]
fn adjoint_is_an_involution() {
    for q in [harmonic_darboux(), sample_second_order()] {
        let qq = q.adjoint().adjoint();
        for &x in &[-1.3, 0.0, 0.4, 2.2] {
            for (a, b) in q.coefficients(x, 0.2).iter().zip(qq.coefficients(x, 0.2)) {
                for k in 0..4 {
                    assert!((a.d(k) - b.d(k)).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn adjoint_integrates_by_parts() {
    let g = grid();
    let f = ComplexField::from_fn(g, |x| C64::new(1.0, 0.5 * x) * (-(x - 0.5).powi(2)).exp()).unwrap();
    let h = ComplexField::from_fn(g, |x| C64::new(x, -1.0) * (-(x * x) / 2.0).exp()).unwrap();
    for q in [harmonic_darboux(), sample_second_order()] {
        let lhs = q.adjoint().apply_raw(&f, 0.1).unwrap().inner(&h).unwrap();
        let rhs = f.inner(&q.apply_raw(&h, 0.1).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-6, "{lhs} vs {rhs}");
    }
}

fn real_coef(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> CoefFn {
    Arc::new(move |x, t| {
        let j = Jet::variable(x);
        // linear in x for the checks below
        let a = f(1.0, t) - f(0.0, t);
        CJet::real(j.scale(a) + f(0.0, t))
    })
}

#[test]
fn canonicalize_identity() {
    let f = real_coef(|x, _| 0.3 * x);
    let b = real_coef(|x, _| 1.0 - x);
    let c = canonicalize_second_order(Profile::constant(1.0), f.clone(), b.clone(), Profile::zero(), (-5.0, 5.0), (-1.0, 1.0))
        .unwrap();
    for &(x, t) in &[(0.3, 0.2), (-2.0, -0.7)] {
        let (y, tau) = c.map.forward(x, t);
        assert!((y - x).abs() < 1e-12 && (tau - t).abs() < 1e-12);
        assert!((c.multiplier(x, t) - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(c.potential_shift.eval(x, t).abs() < 1e-14);
        let coefs = c.charge.coefficients(x, t);
        assert!((coefs[0].value() - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((coefs[1].value() - f(x, t).value().scale(-2.0)).norm() < 1e-12);
        assert!((coefs[2].value() - b(x, t).value()).norm() < 1e-12);
    }
}

#[test]
fn canonicalize_contracting_oscillator_map() {
    let rho = Profile::cos(1.0, 2.0);
    let g = Profile::Product(vec![rho.clone(), rho]);
    let f: CoefFn = Arc::new(|x, t| {
        let gd = -2.0 * (4.0 * t).sin();
        CJet::new(Jet::constant(0.0), Jet::variable(x).scale(gd / 4.0))
    });
    let b: CoefFn = Arc::new(|_, _| CJet::zero());
    let c = canonicalize_second_order(g, f, b, Profile::zero(), (-5.0, 5.0), (-0.6, 0.6)).unwrap();
    for &(x, t) in &[(1.0, 0.3), (-2.0, 0.55), (0.5, -0.4)] {
        let (y, tau) = c.map.forward(x, t);
        assert!((tau - (2.0 * t).tan() / 2.0).abs() < 1e-10);
        assert!((y - x / (2.0 * t).cos()).abs() < 1e-12);
        let (xb, tb) = c.map.inverse(y, tau);
        assert!((xb - x).abs() < 1e-9 && (tb - t).abs() < 1e-10);
    }
}

#[test]
fn canonicalize_rejects_inconsistent_imaginary_part() {
    let f: CoefFn = Arc::new(|x, _| CJet::new(Jet::constant(0.0), Jet::variable(x)));
    let b: CoefFn = Arc::new(|_, _| CJet::zero());
    let err = canonicalize_second_order(Profile::constant(1.0), f, b, Profile::zero(), (-1.0, 1.0), (0.0, 1.0));
    assert!(matches!(err, Err(Error::ImFConstraintViolated { .. })));
}

#[test]
fn stationary_hamiltonian_commutes_with_itself() {
    let v = Bivariate::stationary(|x| x * x + 0.5 * x);
    let r = SymmetryOpSpec::new(vec![SymTerm::unit(vec![OpFactor::Hamiltonian(v.clone())])]).unwrap();
    let g = make_grid(-12.0, 12.0, 1201).unwrap();
    let f = ComplexField::from_real_fn(g, |x| (-(x - 0.3).powi(2) / 2.0).exp()).unwrap();
    let d = operator_defect(&r, &v, &v, &f, 0.0, EquationKind::Schrodinger).unwrap();
    assert!(d.reliable_norm() < 1e-6, "{}", d.reliable_norm());
}

#[test]
fn darboux_defect_for_harmonic_partners() {
    let v1 = Bivariate::stationary(|x| x * x + 1.0);
    let v2 = Bivariate::stationary(|x| x * x - 1.0);
    let g = make_grid(-12.0, 12.0, 1201).unwrap();
    let f = ComplexField::from_real_fn(g, |x| (-(x - 0.3).powi(2) / 2.0).exp()).unwrap();
    let d = operator_defect(&harmonic_darboux(), &v1, &v2, &f, 0.0, EquationKind::Schrodinger).unwrap();
    assert!(d.reliable_norm() < 1e-6);
    let wrong = operator_defect(&harmonic_darboux(), &v2, &v1, &f, 0.0, EquationKind::Schrodinger).unwrap();
    assert!(wrong.reliable_norm() > 1e-1);
}
