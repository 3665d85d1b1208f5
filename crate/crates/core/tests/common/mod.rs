//! Shared generators for the integration tests.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use surface_census::{Interval, Orientation, Pairing, PairingError, PairingSystem, Point};

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn random_pairing(rng: &mut StdRng, lo: Point, hi: Point, max_width: u64) -> Pairing {
    let span = (hi - lo + 1) as u64;
    let w = rng.gen_range(1..=max_width.min(span).max(1)) as Point;
    let a = rng.gen_range(lo..=hi - w + 1);
    let c = rng.gen_range(lo..=hi - w + 1);
    let orientation = if rng.gen_bool(0.5) { Orientation::Preserving } else { Orientation::Reversing };
    Pairing::new(Interval::new(a, a + w - 1).unwrap(), Interval::new(c, c + w - 1).unwrap(), orientation).unwrap()
}

/// A random system on `[1, N]` with `N <= 200` and at most 12 pairings.
///
/// Half of the systems get planted structure so that the rarer moves apply:
/// a pairing onto a fresh right end (truncation), and movers whose range lies
/// in some pairing's range (transmission).
pub fn random_system(rng: &mut StdRng) -> PairingSystem {
    let planted = rng.gen_bool(0.5);
    let tail = if planted { rng.gen_range(1..=20) } else { 0 };
    let body = rng.gen_range(2..=200 - tail);
    let n = body + tail;
    let mut sys = PairingSystem::on(n).unwrap();
    let count = rng.gen_range(0..=if planted { 9 } else { 12 });
    for i in 0..count {
        let p = random_pairing(rng, 1, body, 40);
        sys.insert(format!("p{i}"), p).unwrap();
    }
    if planted {
        if tail <= body {
            let a = rng.gen_range(1..=body - tail + 1);
            let orientation = if rng.gen_bool(0.5) { Orientation::Preserving } else { Orientation::Reversing };
            let domain = Interval::new(a, a + tail - 1).unwrap();
            let end = Pairing::new(domain, Interval::new(body + 1, n).unwrap(), orientation).unwrap();
            sys.insert("end", end).unwrap();
        }
        // Movers with range inside an existing range.
        for j in 0..rng.gen_range(0..=2) {
            if sys.is_empty() {
                break;
            }
            let host = sys.pairings()[rng.gen_range(0..sys.len())].pairing;
            let r = host.range();
            let w = rng.gen_range(1..=r.width()) as Point;
            let c = rng.gen_range(r.lo()..=r.hi() - w + 1);
            let a = rng.gen_range(1..=n - w + 1);
            let orientation = if rng.gen_bool(0.5) { Orientation::Preserving } else { Orientation::Reversing };
            let p = Pairing::new(Interval::new(a, a + w - 1).unwrap(), Interval::new(c, c + w - 1).unwrap(), orientation);
            sys.insert(format!("m{j}"), p.unwrap()).unwrap();
        }
    }
    sys
}

/// Every move applicable to `sys`, by name, with the resulting system.
pub fn applicable_moves(sys: &PairingSystem, rng: &mut StdRng) -> Vec<(String, PairingSystem)> {
    let mut out = Vec::new();
    let mut keep = |name: String, r: Result<PairingSystem, PairingError>| {
        if let Ok(s) = r {
            out.push((name, s));
        }
    };
    let tags: Vec<String> = sys.pairings().iter().map(|p| p.tag.clone()).collect();
    let c = sys.carrier();
    for t in &tags {
        keep(format!("trim {t}"), sys.trim(t));
        let p = *sys.get(t).unwrap();
        for _ in 0..2 {
            let r = p.range();
            if r.width() > 1 {
                let point = rng.gen_range(r.lo()..r.hi());
                keep(format!("split {t} at {point}"), sys.split(t, point));
            }
            let d = p.domain();
            if d.width() > 1 {
                let point = rng.gen_range(d.lo()..d.hi());
                keep(format!("split domain {t} at {point}"), sys.split_domain(t, point));
            }
        }
        for s in &tags {
            keep(format!("transmit {s} by {t}"), sys.transmit(s, t));
            keep(format!("compose {s} back through {t}"), sys.compose_back(s, t));
        }
    }
    for cut in c.lo()..c.hi() {
        keep(format!("truncate right {cut}"), sys.truncate_right(cut));
        keep(format!("truncate left {cut}"), sys.truncate_left(cut));
    }
    keep("reflect".into(), Ok(sys.reflect()));
    let delta = rng.gen_range(-50..=50);
    keep(format!("translate {delta}"), sys.translate(delta));
    out
}
