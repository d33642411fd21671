use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use uurlab_bench::{gram_fixture, mus_fixture, scan_fixture};
use uurlab_core::interferometer::fit_fringe;
use uurlab_core::otoc::{heisenberg_evolve, otoc_bounds};
use uurlab_core::overlap::{mus_scan, our_evaluate, OverlapTriple};
use uurlab_core::qlinalg::random::random_hermitian;
use uurlab_core::qlinalg::seeded_rng;
use uurlab_core::uur::{permutation_expansion_det, uur_evaluate};

fn gram(c: &mut Criterion) {
    let mut g = c.benchmark_group("uur_evaluate");
    for (d, n) in [(2, 2), (3, 3), (4, 4)] {
        let (rho, us) = gram_fixture(d, n, 1);
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("d{d}_n{n}")),
            &(rho, us),
            |b, (rho, us)| b.iter(|| uur_evaluate(black_box(rho), black_box(us)).unwrap()),
        );
    }
    g.finish();
    let (rho, us) = gram_fixture(3, 3, 2);
    c.bench_function("permutation_expansion_n3", |b| {
        b.iter(|| permutation_expansion_det(black_box(&rho), black_box(&us)).unwrap())
    });
}

fn overlap(c: &mut Criterion) {
    let t = OverlapTriple::new(0.3, 0.5, 0.7).unwrap();
    c.bench_function("our_evaluate", |b| b.iter(|| our_evaluate(black_box(&t))));
    let (u, v) = mus_fixture();
    c.bench_function("mus_scan_64", |b| {
        b.iter(|| mus_scan(black_box(&u), black_box(&v), 64).unwrap())
    });
}

fn fringe(c: &mut Criterion) {
    let scan = scan_fixture(3);
    c.bench_function("fit_fringe_24", |b| {
        b.iter(|| fit_fringe(black_box(&scan)).unwrap())
    });
}

fn otoc(c: &mut Criterion) {
    let (rho, us) = gram_fixture(4, 2, 4);
    let h = random_hermitian(4, &mut seeded_rng(5));
    c.bench_function("otoc_bounds_d4", |b| {
        b.iter(|| {
            let wt = heisenberg_evolve(&us[1], black_box(&h), 1.3).unwrap();
            otoc_bounds(&rho, &us[0], &wt).unwrap()
        })
    });
}

criterion_group!(benches, gram, overlap, fringe, otoc);
criterion_main!(benches);
