use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use surface_census::{
    build_fgh, census, claim1_reduce, claim2_run, compile_surface, normal_form, CensusMethod,
    SurfaceCoefficients, Triangulation,
};

fn orbit_counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbit_count");
    for (u, v) in [(8u64, 13u64), (89, 144), (610, 987)] {
        let coeffs = SurfaceCoefficients::new(u, v).unwrap();
        let sys = build_fgh(coeffs);
        let label = format!("{u}_{v}");
        group.bench_with_input(BenchmarkId::new("unionfind", &label), &sys, |b, s| {
            b.iter(|| s.count_orbits().unwrap())
        });
        group.bench_with_input(BenchmarkId::new("reduction", &label), &sys, |b, s| {
            b.iter(|| claim2_run(s, false).unwrap().orbits)
        });
        group.bench_with_input(BenchmarkId::new("accelerated", &label), &sys, |b, s| {
            b.iter(|| claim2_run(s, true).unwrap().orbits)
        });
    }
    group.finish();
}

fn huge_reduction(c: &mut Criterion) {
    let sys = normal_form(1_000_000_000_000_000_000, 618_033_988_749_894_848).unwrap();
    c.bench_function("accelerated_1e18", |b| b.iter(|| claim2_run(black_box(&sys), true).unwrap().orbits));
}

fn compile_and_reduce(c: &mut Criterion) {
    let tri = Triangulation::k13n586();
    let coeffs = SurfaceCoefficients::new(34, 55).unwrap();
    c.bench_function("compile_34_55", |b| b.iter(|| compile_surface(black_box(coeffs), &tri).unwrap()));
    let sys = compile_surface(coeffs, &tri).unwrap();
    c.bench_function("claim1_34_55", |b| b.iter(|| claim1_reduce(black_box(&sys), coeffs, &tri).unwrap()));
}

fn totient_census(c: &mut Criterion) {
    c.bench_function("census_gcd_1e5", |b| b.iter(|| census(black_box(100_000), CensusMethod::Gcd).unwrap()));
    c.bench_function("census_reduction_200", |b| {
        b.iter(|| census(black_box(200), CensusMethod::Reduction).unwrap())
    });
}

criterion_group!(benches, orbit_counting, huge_reduction, compile_and_reduce, totient_census);
criterion_main!(benches);
