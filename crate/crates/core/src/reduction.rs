//! Reduction of the compiled system of uF + vG to three pairings on
//! `[1, 2u + 2v]`, and the Euclid-style orbit count of that normal form.
//!
//! The normal form with widths `(a, b)` lives on `[1, 2a + 2b]`:
//! `f` reverses the leftmost `2a` points, `g` the rightmost `2b`, and `h`
//! the whole carrier.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::compiler::{locate_carriers, Carrier, CompileError, PointIndexing};
use crate::pairing::{Interval, Pairing, PairingError, PairingSystem, Point, TaggedPairing};
use crate::surface::SurfaceCoefficients;
use crate::triangulation::Triangulation;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error("reduced system lacks {missing:?}; pairings left: {}", list(pairings))]
    ConventionMismatch { missing: Vec<&'static str>, pairings: Vec<TaggedPairing> },
    #[error("reduced system is not the expected normal form:\n{0}")]
    FinalMismatch(String),
    #[error("not a normal-form system: {0}")]
    Structure(String),
    #[error("step {step}: |h| = {h} but |f| + |g| = {f} + {g}")]
    Invariant { step: u64, f: u64, g: u64, h: u64 },
    #[error("widths ({0}, {1}) are too large for the carrier")]
    TooLarge(u64, u64),
    #[error("both widths are zero")]
    Empty,
}

fn list(ps: &[TaggedPairing]) -> String {
    ps.iter().map(|p| format!("{} {}", p.tag, p.pairing)).collect::<Vec<_>>().join("; ")
}

/// Largest `a + b` for which the normal form fits in [`Point`].
pub const MAX_NORMAL_FORM_SUM: u64 = (Point::MAX / 2) as u64;

fn fold(lo: Point, width: u64) -> Result<Pairing, PairingError> {
    let w = width as Point;
    Pairing::reversing(lo, lo + w - 1, lo + w, lo + 2 * w - 1)
}

/// The normal form with `|f| = a`, `|g| = b`, tagged `f`, `g`, `h`.
/// Pairings of width 0 are left out.
pub fn normal_form(a: u64, b: u64) -> Result<PairingSystem, ReductionError> {
    if a == 0 && b == 0 {
        return Err(ReductionError::Empty);
    }
    if a.checked_add(b).is_none_or(|s| s > MAX_NORMAL_FORM_SUM) {
        return Err(ReductionError::TooLarge(a, b));
    }
    let n = 2 * (a + b) as Point;
    let mut sys = PairingSystem::on(n)?;
    if a > 0 {
        sys.insert("f", fold(1, a)?)?;
    }
    if b > 0 {
        sys.insert("g", fold(2 * a as Point + 1, b)?)?;
    }
    sys.insert("h", fold(1, a + b)?)?;
    Ok(sys)
}

/// f: `[1,u]→[u+1,2u]`, g: `[2u+1,2u+v]→[2u+v+1,2u+2v]`, h: `[1,u+v]→[u+v+1,2u+2v]`, all reversing.
pub fn build_fgh(c: SurfaceCoefficients) -> PairingSystem {
    normal_form(c.u(), c.v()).expect("coefficient bounds keep the normal form in range")
}

// ---------------------------------------------------------------------------
// Reduction of the compiled system.

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Claim1Move {
    Transmit { mover: String, carrier: String },
    SplitRange { tag: String, point: Point },
    SplitDomain { tag: String, point: Point },
    TruncateRight { cut: Point },
    TruncateLeft { cut: Point },
    Reflect,
    Discard { tags: Vec<String> },
    Retag { from: String, to: String },
    Trim { tag: String },
    ComposeBack { mover: String, carrier: String },
}

impl Claim1Move {
    fn apply(&self, sys: &PairingSystem) -> Result<PairingSystem, PairingError> {
        match self {
            Claim1Move::Transmit { mover, carrier } => sys.transmit(mover, carrier),
            Claim1Move::SplitRange { tag, point } => sys.split(tag, *point),
            Claim1Move::SplitDomain { tag, point } => sys.split_domain(tag, *point),
            Claim1Move::TruncateRight { cut } => sys.truncate_right(*cut),
            Claim1Move::TruncateLeft { cut } => sys.truncate_left(*cut),
            Claim1Move::Reflect => Ok(sys.reflect()),
            Claim1Move::Discard { tags } => {
                let mut out = sys.clone();
                out.retain(|t| !tags.iter().any(|d| d == t));
                Ok(out)
            }
            Claim1Move::Retag { from, to } => sys.retag(from, to.clone()),
            Claim1Move::Trim { tag } => sys.trim(tag),
            Claim1Move::ComposeBack { mover, carrier } => sys.compose_back(mover, carrier),
        }
    }
}

impl fmt::Display for Claim1Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim1Move::Transmit { mover, carrier } => write!(f, "transmit {mover} by {carrier}"),
            Claim1Move::SplitRange { tag, point } => write!(f, "split {tag} range at {point}"),
            Claim1Move::SplitDomain { tag, point } => write!(f, "split {tag} domain at {point}"),
            Claim1Move::TruncateRight { cut } => write!(f, "truncate right at {cut}"),
            Claim1Move::TruncateLeft { cut } => write!(f, "truncate left at {cut}"),
            Claim1Move::Reflect => write!(f, "reflect"),
            Claim1Move::Discard { tags } => write!(f, "discard {} pairings", tags.len()),
            Claim1Move::Retag { from, to } => write!(f, "retag {from} as {to}"),
            Claim1Move::Trim { tag } => write!(f, "trim {tag}"),
            Claim1Move::ComposeBack { mover, carrier } => write!(f, "compose {mover} back through {carrier}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim1Phase {
    /// Moving everything off one edge class, then truncating its carriers.
    Clear { edge: usize },
    /// Keeping the three pairings that survive onto `[1, 4u + 4v]`.
    Select,
    /// Trimming, composing and truncating down to the normal form.
    Finish,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim1Step {
    pub phase: Claim1Phase,
    #[serde(flatten)]
    pub mv: Claim1Move,
}

#[derive(Debug, Clone)]
pub struct Claim1Outcome {
    pub system: PairingSystem,
    pub steps: Vec<Claim1Step>,
    /// Pairings on `[1, 4u + 4v]` other than the three kept.
    pub discarded: Vec<TaggedPairing>,
    /// Whether the kept pairings were only found after reflecting the carrier.
    pub reflected: bool,
}

/// Order in which edge classes are cleared, with their carriers.
pub const CLEARING_PLAN: [(usize, &[Carrier]); 9] = [
    (7, &[Carrier::T7]),
    (5, &[Carrier::T5]),
    (4, &[Carrier::T4]),
    (3, &[Carrier::T3]),
    (2, &[Carrier::T2]),
    (0, &[Carrier::T0]),
    (9, &[Carrier::T9]),
    (6, &[Carrier::T6]),
    (8, &[Carrier::T8a, Carrier::T8b]),
];

struct Runner<'a> {
    sys: PairingSystem,
    steps: Vec<Claim1Step>,
    observer: &'a mut dyn FnMut(&Claim1Step, &PairingSystem),
}

impl Runner<'_> {
    fn run(&mut self, phase: Claim1Phase, mv: Claim1Move) -> Result<(), ReductionError> {
        self.sys = mv.apply(&self.sys)?;
        let step = Claim1Step { phase, mv };
        (self.observer)(&step, &self.sys);
        self.steps.push(step);
        Ok(())
    }
}

/// The three pairings on `[1, 4u + 4v]` that survive the clearing phases:
/// `(name, pairing)`, omitting those of width 0.
pub fn surviving_pairings(c: SurfaceCoefficients) -> Vec<(&'static str, Pairing)> {
    let (u, v) = (c.u() as Point, c.v() as Point);
    let mut out = vec![
        ("f", Pairing::reversing(1, u + 3 * v, u + v + 1, 2 * u + 4 * v).expect("widths agree")),
        ("g", Pairing::reversing(2 * v + 1, 3 * u + 3 * v, u + 3 * v + 1, 4 * u + 4 * v).expect("widths agree")),
    ];
    if u > 0 {
        out.push((
            "h",
            Pairing::preserving(u + 3 * v + 1, 2 * u + 4 * v, 3 * u + 3 * v + 1, 4 * u + 4 * v).expect("widths agree"),
        ));
    }
    out
}

pub fn claim1_reduce(
    sys: &PairingSystem,
    c: SurfaceCoefficients,
    tri: &Triangulation,
) -> Result<Claim1Outcome, ReductionError> {
    claim1_reduce_observed(sys, c, tri, &mut |_, _| {})
}

/// Runs the reduction on `sys = compile_surface(c)`, calling `observer` after
/// every move with the system it produced.
pub fn claim1_reduce_observed(
    sys: &PairingSystem,
    c: SurfaceCoefficients,
    tri: &Triangulation,
    observer: &mut dyn FnMut(&Claim1Step, &PairingSystem),
) -> Result<Claim1Outcome, ReductionError> {
    let carriers = locate_carriers(sys, c, tri)?;
    let indexing = PointIndexing::for_surface(c, tri).map_err(CompileError::from)?;
    let mut r = Runner { sys: sys.clone(), steps: Vec::new(), observer };

    for (edge, edge_carriers) in CLEARING_PLAN {
        let Some(segment) = indexing.segment(edge) else { continue };
        let phase = Claim1Phase::Clear { edge };
        let tags: Vec<&str> = edge_carriers.iter().filter_map(|&k| carriers.get(k)).collect();
        while let Some(mv) = next_clearing_move(&r.sys, segment, &tags)? {
            r.run(phase, mv)?;
        }
        let mut ranges: Vec<Interval> = tags
            .iter()
            .map(|t| r.sys.get(t).map(|p| p.range()).ok_or_else(|| PairingError::UnknownTag(t.to_string())))
            .collect::<Result<_, _>>()?;
        ranges.sort_by_key(|i| std::cmp::Reverse(i.lo()));
        for range in ranges {
            r.run(phase, Claim1Move::TruncateRight { cut: range.lo() - 1 })?;
        }
    }

    let n = 4 * (c.u() + c.v()) as Point;
    if r.sys.carrier() != Interval::new(1, n)? {
        return Err(ReductionError::FinalMismatch(format!(
            "carrier after clearing is {}, expected [1, {n}]\n{}",
            r.sys.carrier(),
            r.sys
        )));
    }

    let templates = surviving_pairings(c);
    let find = |sys: &PairingSystem| -> Vec<Option<String>> {
        templates
            .iter()
            .map(|(_, t)| sys.pairings().iter().find(|p| p.pairing.same_map(t)).map(|p| p.tag.clone()))
            .collect()
    };
    let mut found = find(&r.sys);
    let mut reflected = false;
    if found.iter().any(Option::is_none) {
        let alt = find(&r.sys.reflect());
        if alt.iter().all(Option::is_some) {
            r.run(Claim1Phase::Select, Claim1Move::Reflect)?;
            found = alt;
            reflected = true;
        } else {
            let missing = templates.iter().zip(&found).filter(|(_, f)| f.is_none()).map(|((n, _), _)| *n).collect();
            return Err(ReductionError::ConventionMismatch { missing, pairings: r.sys.pairings().to_vec() });
        }
    }
    let kept: Vec<String> = found.into_iter().flatten().collect();
    let discarded: Vec<TaggedPairing> = r.sys.pairings().iter().filter(|p| !kept.contains(&p.tag)).cloned().collect();
    if !discarded.is_empty() {
        r.run(Claim1Phase::Select, Claim1Move::Discard { tags: discarded.iter().map(|p| p.tag.clone()).collect() })?;
    }
    for ((name, _), tag) in templates.iter().zip(&kept) {
        r.run(Claim1Phase::Select, Claim1Move::Retag { from: tag.clone(), to: name.to_string() })?;
    }

    let (u, v) = (c.u() as Point, c.v() as Point);
    for tag in ["f", "g"] {
        if r.sys.get(tag).is_some_and(Pairing::is_overlapping) {
            r.run(Claim1Phase::Finish, Claim1Move::Trim { tag: tag.into() })?;
        }
    }
    if r.sys.get("h").is_some() {
        r.run(Claim1Phase::Finish, Claim1Move::ComposeBack { mover: "h".into(), carrier: "g".into() })?;
    }
    if u > 0 {
        r.run(Claim1Phase::Finish, Claim1Move::TruncateRight { cut: 2 * u + 4 * v })?;
    }
    if v > 0 {
        r.run(Claim1Phase::Finish, Claim1Move::TruncateLeft { cut: 2 * v })?;
    }

    if !r.sys.same_maps_as(&build_fgh(c)) {
        return Err(ReductionError::FinalMismatch(r.sys.to_text()));
    }
    Ok(Claim1Outcome { system: r.sys, steps: r.steps, discarded, reflected })
}

/// Next move clearing `segment`, or `None` once only carriers touch it.
/// Among movers, the one whose side on the segment starts furthest right goes first.
fn next_clearing_move(
    sys: &PairingSystem,
    segment: Interval,
    carrier_tags: &[&str],
) -> Result<Option<Claim1Move>, ReductionError> {
    let mover = sys
        .pairings()
        .iter()
        .filter(|p| !carrier_tags.contains(&p.tag.as_str()))
        .filter_map(|p| {
            let q = p.pairing;
            // Orient so the range is on the segment.
            if q.range().meets(segment) {
                Some((p, q, false))
            } else if q.domain().meets(segment) {
                Some((p, q.invert(), true))
            } else {
                None
            }
        })
        .max_by_key(|(p, q, _)| (q.range().lo(), std::cmp::Reverse(p.tag.clone())));
    let Some((tp, q, inverted)) = mover else { return Ok(None) };
    let tag = tp.tag.clone();

    let carriers: Vec<(&str, Pairing)> = carrier_tags
        .iter()
        .map(|t| sys.get(t).map(|p| (*t, *p)).ok_or_else(|| PairingError::UnknownTag(t.to_string())))
        .collect::<Result<_, _>>()?;

    // A range straddling two carriers is cut at the boundary.
    for (_, c) in &carriers {
        let lo = c.range().lo();
        if q.range().lo() < lo && lo <= q.range().hi() {
            let point = lo - 1;
            return Ok(Some(if inverted {
                Claim1Move::SplitDomain { tag, point }
            } else {
                Claim1Move::SplitRange { tag, point }
            }));
        }
    }
    let Some((carrier, c)) = carriers.iter().find(|(_, c)| c.range().contains_interval(q.range())) else {
        return Err(ReductionError::Structure(format!("range of {tag} is not covered by a carrier of {segment}")));
    };
    let d = q.domain();
    if d.meets(c.range()) && !c.range().contains_interval(d) {
        let point = if d.lo() < c.range().lo() { c.range().lo() - 1 } else { c.range().hi() };
        return Ok(Some(if inverted {
            Claim1Move::SplitRange { tag, point }
        } else {
            Claim1Move::SplitDomain { tag, point }
        }));
    }
    Ok(Some(Claim1Move::Transmit { mover: tag, carrier: carrier.to_string() }))
}

// ---------------------------------------------------------------------------
// Euclid-style count on the normal form.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Claim2Move {
    Reflect,
    Transmit,
    Truncate,
    Assign,
    Batch(u64),
}

impl fmt::Display for Claim2Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim2Move::Reflect => f.write_str("reflect"),
            Claim2Move::Transmit => f.write_str("transmit"),
            Claim2Move::Truncate => f.write_str("truncate"),
            Claim2Move::Assign => f.write_str("assign"),
            Claim2Move::Batch(k) => write!(f, "batch({k})"),
        }
    }
}

/// Widths after step `index`, with the moves that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim2Step {
    pub index: u64,
    pub f: u64,
    pub g: u64,
    pub h: u64,
    pub moves: Vec<Claim2Move>,
}

impl Claim2Step {
    pub fn move_label(&self) -> String {
        if self.moves.is_empty() {
            "none".to_string()
        } else {
            self.moves.iter().map(ToString::to_string).collect::<Vec<_>>().join("+")
        }
    }
}

impl fmt::Display for Claim2Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} |f|={} |g|={} |h|={} move={}", self.index, self.f, self.g, self.h, self.move_label())
    }
}

impl Serialize for Claim2Step {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Claim2Step", 5)?;
        st.serialize_field("step", &self.index)?;
        st.serialize_field("f", &self.f)?;
        st.serialize_field("g", &self.g)?;
        st.serialize_field("h", &self.h)?;
        st.serialize_field("move", &self.move_label())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim2Run {
    pub orbits: u64,
    pub trace: Vec<Claim2Step>,
}

/// One subtract step on widths with `f > g > 0`. Returns the new widths and
/// whether the larger pairing ends up on the right (so a reflection follows).
fn subtract(f: u64, g: u64) -> (u64, u64, bool) {
    let rest = f - g;
    if rest > g {
        (rest, g, true)
    } else {
        (g, rest, false)
    }
}

/// Number of upcoming steps that leave `g` unchanged and can be batched.
fn batchable(f: u64, g: u64) -> u64 {
    let (q, r) = (f / g, f % g);
    if r > 0 {
        q - 1
    } else {
        q.saturating_sub(2)
    }
}

/// Runs the count on widths alone.
pub fn claim2_widths(u: u64, v: u64, accelerated: bool) -> Result<Claim2Run, ReductionError> {
    if u == 0 && v == 0 {
        return Err(ReductionError::Empty);
    }
    let (mut f, mut g) = (u.max(v), u.min(v));
    let mut trace = vec![Claim2Step {
        index: 0,
        f,
        g,
        h: f + g,
        // With one width zero the system is symmetric and needs no reflection.
        moves: if 0 < u && u < v { vec![Claim2Move::Reflect] } else { vec![] },
    }];
    let mut index = 0;
    while f != g && g != 0 {
        index += 1;
        let h = f;
        let k = if accelerated { batchable(f, g) } else { 0 };
        let moves = if k >= 2 {
            f -= k * g;
            vec![Claim2Move::Batch(k)]
        } else {
            let (nf, ng, reflect) = subtract(f, g);
            (f, g) = (nf, ng);
            let mut m = vec![Claim2Move::Transmit, Claim2Move::Truncate, Claim2Move::Assign];
            if reflect {
                m.push(Claim2Move::Reflect);
            }
            m
        };
        let h = if k >= 2 { f + g } else { h };
        if h != f + g {
            return Err(ReductionError::Invariant { step: index, f, g, h });
        }
        trace.push(Claim2Step { index, f, g, h, moves });
    }
    Ok(Claim2Run { orbits: f, trace })
}

/// Reads the widths `(|f|, |g|)` off a system in normal form (tags are
/// ignored), choosing `f` on the left.
pub fn identify_normal_form(sys: &PairingSystem) -> Result<(u64, u64), ReductionError> {
    let bad = |why: &str| ReductionError::Structure(format!("{why}\n{}", sys.to_text()));
    let carrier = sys.carrier();
    if carrier.lo() != 1 || !carrier.width().is_multiple_of(2) {
        return Err(bad("carrier must be [1, 2n]"));
    }
    let half = carrier.width() / 2;
    let full = fold(1, half)?;
    let h_index = sys
        .pairings()
        .iter()
        .position(|p| p.pairing.same_map(&full))
        .ok_or_else(|| bad("no pairing reverses the whole carrier"))?;
    let (mut left, mut right) = (0u64, 0u64);
    for (i, p) in sys.pairings().iter().enumerate() {
        if i == h_index {
            continue;
        }
        let q = p.pairing;
        let w = q.width();
        let n = carrier.hi();
        if left == 0 && q.same_map(&fold(1, w)?) {
            left = w;
        } else if right == 0 && q.same_map(&fold(n - 2 * w as Point + 1, w)?) {
            right = w;
        } else {
            return Err(bad(&format!("pairing {} is neither the left nor the right fold", p.tag)));
        }
    }
    // With one width zero the remaining fold coincides with the full one.
    if sys.len() == 1 {
        return Ok((half, 0));
    }
    if left + right != half {
        return Err(bad("fold widths do not add up to half the carrier"));
    }
    Ok((left, right))
}

fn check_normal_form(sys: &PairingSystem, f: u64, g: u64, step: u64) -> Result<(), ReductionError> {
    let expected = normal_form(f, g)?;
    let ok = sys.carrier() == expected.carrier()
        && ["f", "g", "h"].iter().all(|t| match (sys.get(t), expected.get(t)) {
            (Some(a), Some(b)) => a.same_map(b),
            (None, None) => true,
            _ => false,
        })
        && sys.len() == expected.len();
    if ok {
        Ok(())
    } else {
        let h = sys.get("h").map_or(0, Pairing::width);
        let fw = sys.get("f").map_or(0, Pairing::width);
        let gw = sys.get("g").map_or(0, Pairing::width);
        Err(ReductionError::Invariant { step, f: fw, g: gw, h })
    }
}

pub fn claim2_run(sys: &PairingSystem, accelerated: bool) -> Result<Claim2Run, ReductionError> {
    claim2_run_observed(sys, accelerated, &mut |_| {})
}

/// Runs the count by moves on the system itself. `observer` sees every
/// intermediate system.
pub fn claim2_run_observed(
    sys: &PairingSystem,
    accelerated: bool,
    observer: &mut dyn FnMut(&PairingSystem),
) -> Result<Claim2Run, ReductionError> {
    let (left, right) = identify_normal_form(sys)?;
    // Relabel to f, g, h (f on the left).
    let mut cur = normal_form(left, right)?;
    observer(&cur);
    let mut first = Vec::new();
    if left < right {
        cur = cur.reflect().retag_all(&[("f", "g"), ("g", "f")])?;
        observer(&cur);
        first.push(Claim2Move::Reflect);
    }
    let (mut f, mut g) = (left.max(right), left.min(right));
    check_normal_form(&cur, f, g, 0)?;
    let mut trace = vec![Claim2Step { index: 0, f, g, h: f + g, moves: first }];
    let mut index = 0;
    while f != g && g != 0 {
        index += 1;
        let k = if accelerated { batchable(f, g) } else { 0 };
        let moves = if k >= 2 {
            f -= k * g;
            cur = normal_form(f, g)?;
            observer(&cur);
            vec![Claim2Move::Batch(k)]
        } else {
            let n = cur.carrier().hi();
            cur = cur.transmit("g", "h")?;
            observer(&cur);
            cur = cur.truncate_right(n - 2 * g as Point)?;
            observer(&cur);
            let (nf, ng, reflect) = subtract(f, g);
            // g now folds the left end and h the right end of what is left.
            cur = if reflect {
                cur.retag_all(&[("f", "h"), ("h", "f"), ("g", "g")])?
            } else {
                cur.retag_all(&[("f", "h"), ("g", "f"), ("h", "g")])?
            };
            observer(&cur);
            let mut m = vec![Claim2Move::Transmit, Claim2Move::Truncate, Claim2Move::Assign];
            if reflect {
                cur = cur.reflect();
                observer(&cur);
                m.push(Claim2Move::Reflect);
            }
            (f, g) = (nf, ng);
            m
        };
        check_normal_form(&cur, f, g, index)?;
        trace.push(Claim2Step { index, f, g, h: f + g, moves });
    }
    Ok(Claim2Run { orbits: f, trace })
}

/// Number of components of uF + vG via the normal form.
pub fn components_via_reduction(c: SurfaceCoefficients) -> Result<u64, ReductionError> {
    Ok(claim2_run(&build_fgh(c), true)?.orbits)
}
