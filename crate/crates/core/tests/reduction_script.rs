mod common;

use common::gcd;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use surface_census::reduction::{claim1_reduce_observed, Claim1Move};
use surface_census::{
    build_fgh, claim1_reduce, claim2_run, claim2_run_observed, claim2_widths, compile_surface, normal_form,
    Interval, SurfaceCoefficients, Triangulation,
};

fn coeffs(u: u64, v: u64) -> SurfaceCoefficients {
    SurfaceCoefficients::new(u, v).unwrap()
}

#[test]
fn claim1_preserves_orbits_at_every_move() {
    let tri = Triangulation::k13n586();
    for u in 0..=6 {
        for v in 0..=6 {
            if (u, v) == (0, 0) {
                continue;
            }
            let c = coeffs(u, v);
            let sys = compile_surface(c, &tri).unwrap();
            let before = sys.count_orbits().unwrap();
            let out = claim1_reduce_observed(&sys, c, &tri, &mut |step, s| {
                assert_eq!(s.count_orbits().unwrap(), before, "({u}, {v}) after {:?}", step.mv);
            })
            .unwrap();
            assert!(out.system.same_maps_as(&build_fgh(c)), "({u}, {v})");
            assert!(!out.reflected);
        }
    }
}

#[test]
fn claim1_uses_the_expected_move_kinds() {
    let tri = Triangulation::k13n586();
    let c = coeffs(3, 2);
    let out = claim1_reduce(&compile_surface(c, &tri).unwrap(), c, &tri).unwrap();
    let has = |f: &dyn Fn(&Claim1Move) -> bool| out.steps.iter().any(|s| f(&s.mv));
    assert!(has(&|m| matches!(m, Claim1Move::Transmit { .. })));
    assert!(has(&|m| matches!(m, Claim1Move::SplitRange { .. } | Claim1Move::SplitDomain { .. })));
    assert!(has(&|m| matches!(m, Claim1Move::ComposeBack { .. })));
    assert!(has(&|m| matches!(m, Claim1Move::TruncateLeft { cut: 4 })));
}

#[test]
fn claim1_at_large_coefficients() {
    let tri = Triangulation::k13n586();
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..5 {
        let (u, v) = (rng.gen_range(1..=10_000), rng.gen_range(1..=10_000));
        let c = coeffs(u, v);
        let out = claim1_reduce(&compile_surface(c, &tri).unwrap(), c, &tri).unwrap();
        assert_eq!(out.system.carrier(), Interval::new(1, 2 * (u + v) as i64).unwrap());
        assert!(out.system.same_maps_as(&build_fgh(c)));
    }
}

#[test]
fn claim2_recurrence_and_reflection_symmetry() {
    for u in 0..=30 {
        for v in 0..=30 {
            if (u, v) == (0, 0) {
                continue;
            }
            let run = claim2_widths(u, v, false).unwrap();
            for pair in run.trace.windows(2) {
                let (a, b) = (&pair[0], &pair[1]);
                assert_eq!(b.f.max(b.g), a.g.max(a.f - a.g));
                assert_eq!(b.f.min(b.g), a.g.min(a.f - a.g));
                assert_eq!(b.h, a.f);
            }
            assert_eq!(run.orbits, gcd(u, v));
            let mirror = claim2_widths(v, u, false).unwrap();
            assert_eq!(run.trace[1..], mirror.trace[1..]);
        }
    }
}

#[test]
fn claim2_moves_preserve_orbits() {
    for u in 0..=8 {
        for v in 0..=8 {
            if (u, v) == (0, 0) {
                continue;
            }
            let sys = build_fgh(coeffs(u, v));
            let before = sys.count_orbits().unwrap();
            claim2_run_observed(&sys, false, &mut |s| assert_eq!(s.count_orbits().unwrap(), before)).unwrap();
        }
    }
}

#[test]
fn accelerated_claim2_on_random_huge_pairs() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..500 {
        let (u, v) = (rng.gen_range(1..=1_000_000_000_000_000_000u64), rng.gen_range(0..=1_000_000_000_000_000_000u64));
        let run = claim2_run(&normal_form(u, v).unwrap(), true).unwrap();
        assert_eq!(run.orbits, gcd(u, v));
        assert_eq!(run, claim2_widths(u, v, true).unwrap());
    }
}
