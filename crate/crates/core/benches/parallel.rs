use criterion::{criterion_group, criterion_main, Criterion};

use intertwine::families::{FirstOrderFamily, Window};
use intertwine::field::{make_grid, Profile, TimeGrid, C64};
use intertwine::operators::schrodinger_residual;
use intertwine::par;
use intertwine::propagate::{EquationKind, Snapshots};

fn residual_workload(c: &mut Criterion) {
    let grid = make_grid(-10.0, 10.0, 4001).unwrap();
    let tg = TimeGrid::new(0.0, 1e-3, 64).unwrap();
    let pair = FirstOrderFamily::stationary(Profile::Polynomial(vec![0.0, 0.0, 0.5]))
        .pair(&Window::new(grid, 0.0, 0.1).unwrap())
        .unwrap();
    let norm = 2f64.sqrt() * std::f64::consts::PI.powf(-0.25);
    let snaps = Snapshots::from_fn(grid, tg, EquationKind::Schrodinger, |x, t| {
        C64::from_polar(norm * x * (-x * x / 2.0).exp(), -2.0 * t)
    })
    .unwrap();

    let mut group = c.benchmark_group("mapped-residual");
    let run = || {
        let image = snaps.map_fields(|f, t| intertwine::operators::apply_charge(&pair.charge, f, t)).unwrap();
        schrodinger_residual(&pair.v1, &image).unwrap()
    };
    group.bench_function("one-thread", |b| b.iter(|| par::with_threads(1, run)));
    group.bench_function("default-pool", |b| b.iter(run));
    group.finish();
}

criterion_group!(benches, residual_workload);
criterion_main!(benches);
