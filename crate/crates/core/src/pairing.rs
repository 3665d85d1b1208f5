//! Systems of pairings between integer intervals and the orbit-preserving
//! moves on them: trimming, truncation, transmission, splitting, reflection.
//!
//! A pairing is a bijection between two intervals of equal width that is
//! either increasing (orientation preserving) or decreasing. Orbits are the
//! classes of the carrier under the generated pseudogroup.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::dsu::DisjointSets;

pub type Point = i64;

/// Default largest carrier width [`PairingSystem::count_orbits`] will expand.
pub const DEFAULT_ORBIT_CAP: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_ORBIT_CAP`].
pub const ORBIT_CAP_ENV: &str = "SURFACE_CENSUS_UF_CAP";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: Point, hi: Point },
    #[error("domain {domain} and range {range} have different widths")]
    WidthMismatch { domain: Interval, range: Interval },
    #[error("{x} is outside the domain {domain}")]
    OutsideDomain { x: Point, domain: Interval },
    #[error("pairing {tag} leaves the carrier {carrier}")]
    OutsideCarrier { tag: String, carrier: Interval },
    #[error("duplicate tag {0:?}")]
    DuplicateTag(String),
    #[error("no pairing tagged {0:?}")]
    UnknownTag(String),
    #[error("cannot trim {tag}: {reason}")]
    Trim { tag: String, reason: &'static str },
    #[error("cannot truncate at {cut}: {reason} (pairings: {offenders:?})")]
    Truncation { cut: Point, reason: &'static str, offenders: Vec<String> },
    #[error("cannot transmit {mover} by {carrier}: {reason}")]
    Transmission { mover: String, carrier: String, reason: &'static str },
    #[error("cannot split {tag} at {point}: {point} is not strictly inside {side}")]
    SplitPoint { tag: String, point: Point, side: Interval },
    #[error("carrier width {width} exceeds the union-find cap {cap}; use the reduction path")]
    TooLarge { width: u64, cap: u64 },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Interval {
    lo: Point,
    hi: Point,
}

impl Interval {
    pub fn new(lo: Point, hi: Point) -> Result<Self, PairingError> {
        if lo > hi {
            return Err(PairingError::EmptyInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// `None` when `lo > hi`.
    pub fn nonempty(lo: Point, hi: Point) -> Option<Self> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn lo(self) -> Point {
        self.lo
    }

    pub fn hi(self) -> Point {
        self.hi
    }

    pub fn width(self) -> u64 {
        (self.hi as i128 - self.lo as i128 + 1) as u64
    }

    pub fn contains(self, x: Point) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn meets(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(self, other: Interval) -> Option<Interval> {
        Interval::nonempty(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn shifted(self, delta: Point) -> Result<Interval, PairingError> {
        Ok(Interval {
            lo: self.lo.checked_add(delta).ok_or(PairingError::Overflow)?,
            hi: self.hi.checked_add(delta).ok_or(PairingError::Overflow)?,
        })
    }

    pub fn points(self) -> std::ops::RangeInclusive<Point> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn then(self, other: Orientation) -> Orientation {
        if self == other {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Orientation::Preserving => '+',
            Orientation::Reversing => '-',
        }
    }
}

/// x ↦ sign·x + offset
#[derive(Debug, Clone, Copy)]
struct Affine {
    sign: i128,
    offset: i128,
}

impl Affine {
    fn at(self, x: i128) -> i128 {
        self.sign * x + self.offset
    }

    /// `self` after `first`.
    fn after(self, first: Affine) -> Affine {
        Affine { sign: self.sign * first.sign, offset: self.sign * first.offset + self.offset }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Pairing {
    domain: Interval,
    range: Interval,
    orientation: Orientation,
}

impl Pairing {
    pub fn new(domain: Interval, range: Interval, orientation: Orientation) -> Result<Self, PairingError> {
        if domain.width() != range.width() {
            return Err(PairingError::WidthMismatch { domain, range });
        }
        Ok(Pairing { domain, range, orientation })
    }

    pub fn preserving(a: Point, b: Point, c: Point, d: Point) -> Result<Self, PairingError> {
        Pairing::new(Interval::new(a, b)?, Interval::new(c, d)?, Orientation::Preserving)
    }

    pub fn reversing(a: Point, b: Point, c: Point, d: Point) -> Result<Self, PairingError> {
        Pairing::new(Interval::new(a, b)?, Interval::new(c, d)?, Orientation::Reversing)
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn range(&self) -> Interval {
        self.range
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn width(&self) -> u64 {
        self.domain.width()
    }

    pub fn is_reversing(&self) -> bool {
        self.orientation == Orientation::Reversing
    }

    fn affine(&self) -> Affine {
        match self.orientation {
            Orientation::Preserving => Affine { sign: 1, offset: self.range.lo as i128 - self.domain.lo as i128 },
            Orientation::Reversing => Affine { sign: -1, offset: self.domain.lo as i128 + self.range.hi as i128 },
        }
    }

    pub fn apply(&self, x: Point) -> Result<Point, PairingError> {
        if !self.domain.contains(x) {
            return Err(PairingError::OutsideDomain { x, domain: self.domain });
        }
        Ok(self.apply_unchecked(x))
    }

    /// Image of a point known to lie in the domain.
    #[inline]
    pub fn apply_unchecked(&self, x: Point) -> Point {
        match self.orientation {
            Orientation::Preserving => x + (self.range.lo - self.domain.lo),
            Orientation::Reversing => self.domain.lo + self.range.hi - x,
        }
    }

    pub fn invert(&self) -> Pairing {
        Pairing { domain: self.range, range: self.domain, orientation: self.orientation }
    }

    /// Image of a subinterval of the domain.
    pub fn image(&self, sub: Interval) -> Result<Interval, PairingError> {
        let a = self.apply(sub.lo)?;
        let b = self.apply(sub.hi)?;
        Ok(Interval { lo: a.min(b), hi: a.max(b) })
    }

    /// The restriction to a subinterval of the domain.
    pub fn restrict_domain(&self, sub: Interval) -> Result<Pairing, PairingError> {
        Ok(Pairing { domain: sub, range: self.image(sub)?, orientation: self.orientation })
    }

    /// The restriction whose range is a given subinterval of the range.
    pub fn restrict_range(&self, sub: Interval) -> Result<Pairing, PairingError> {
        Ok(self.invert().restrict_domain(sub)?.invert())
    }

    /// Stored form: the side with the smaller left endpoint is the domain.
    pub fn canonical(&self) -> Pairing {
        if self.domain.lo <= self.range.lo {
            *self
        } else {
            self.invert()
        }
    }

    /// Whether the domain and range share a point.
    pub fn is_overlapping(&self) -> bool {
        self.domain.meets(self.range)
    }

    /// Same graph up to inversion. Orientation is immaterial for width 1.
    pub fn same_map(&self, other: &Pairing) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        a.domain == b.domain && a.range == b.range && (a.orientation == b.orientation || a.width() == 1)
    }

    /// Disjoint-support form of a reversing pairing whose domain meets its
    /// range: the fixed midpoint (if any) is dropped. `None` when nothing is left.
    pub fn trim(&self) -> Result<Option<Pairing>, &'static str> {
        if !self.is_reversing() {
            return Err("pairing is orientation preserving");
        }
        let p = self.canonical();
        if !p.is_overlapping() {
            return Err("domain and range are already disjoint");
        }
        let (a, d) = (p.domain.lo, p.range.hi);
        let sum = a as i128 + d as i128;
        let (b, c) = if sum % 2 == 0 {
            let m = (sum / 2) as Point;
            (m - 1, m + 1)
        } else {
            let m = sum.div_euclid(2) as Point;
            (m, m + 1)
        };
        Ok(Interval::nonempty(a, b).map(|domain| Pairing {
            domain,
            range: Interval { lo: c, hi: d },
            orientation: Orientation::Reversing,
        }))
    }

    /// Cuts the range into `[lo, point]` and `[point + 1, hi]`, returning the
    /// two restrictions in that order.
    pub fn split_range(&self, point: Point) -> Option<(Pairing, Pairing)> {
        let r = self.range;
        if !(r.lo <= point && point < r.hi) {
            return None;
        }
        let left = self.restrict_range(Interval { lo: r.lo, hi: point }).ok()?;
        let right = self.restrict_range(Interval { lo: point + 1, hi: r.hi }).ok()?;
        Some((left, right))
    }

    fn from_affine(domain: Interval, map: Affine) -> Result<Pairing, PairingError> {
        let a = map.at(domain.lo as i128);
        let b = map.at(domain.hi as i128);
        let to_point = |x: i128| Point::try_from(x).map_err(|_| PairingError::Overflow);
        let range = Interval { lo: to_point(a.min(b))?, hi: to_point(a.max(b))? };
        let orientation = if map.sign > 0 { Orientation::Preserving } else { Orientation::Reversing };
        Ok(Pairing { domain, range, orientation })
    }

    fn shifted(&self, delta: Point) -> Result<Pairing, PairingError> {
        Ok(Pairing { domain: self.domain.shifted(delta)?, range: self.range.shifted(delta)?, orientation: self.orientation })
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} ({})", self.domain, self.range, self.orientation.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaggedPairing {
    pub tag: String,
    pub pairing: Pairing,
}

/// A carrier interval with a list of tagged pairings inside it. Pairings are
/// kept in canonical form (domain to the left of range).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairingSystem {
    carrier: Interval,
    pairings: Vec<TaggedPairing>,
}

impl PairingSystem {
    pub fn new(carrier: Interval) -> Self {
        PairingSystem { carrier, pairings: Vec::new() }
    }

    /// Carrier `[1, n]`.
    pub fn on(n: Point) -> Result<Self, PairingError> {
        Ok(PairingSystem::new(Interval::new(1, n)?))
    }

    pub fn with(mut self, tag: impl Into<String>, pairing: Pairing) -> Result<Self, PairingError> {
        self.insert(tag, pairing)?;
        Ok(self)
    }

    pub fn carrier(&self) -> Interval {
        self.carrier
    }

    pub fn pairings(&self) -> &[TaggedPairing] {
        &self.pairings
    }

    pub fn len(&self) -> usize {
        self.pairings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairings.is_empty()
    }

    pub fn get(&self, tag: &str) -> Option<&Pairing> {
        self.pairings.iter().find(|p| p.tag == tag).map(|p| &p.pairing)
    }

    fn position(&self, tag: &str) -> Result<usize, PairingError> {
        self.pairings
            .iter()
            .position(|p| p.tag == tag)
            .ok_or_else(|| PairingError::UnknownTag(tag.to_string()))
    }

    pub fn insert(&mut self, tag: impl Into<String>, pairing: Pairing) -> Result<(), PairingError> {
        let tag = tag.into();
        if self.get(&tag).is_some() {
            return Err(PairingError::DuplicateTag(tag));
        }
        if !self.carrier.contains_interval(pairing.domain) || !self.carrier.contains_interval(pairing.range) {
            return Err(PairingError::OutsideCarrier { tag, carrier: self.carrier });
        }
        self.pairings.push(TaggedPairing { tag, pairing: pairing.canonical() });
        Ok(())
    }

    pub fn remove(&mut self, tag: &str) -> Result<Pairing, PairingError> {
        let i = self.position(tag)?;
        Ok(self.pairings.remove(i).pairing)
    }

    /// Keeps only the pairings whose tags satisfy `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&str) -> bool) {
        self.pairings.retain(|p| keep(&p.tag));
    }

    pub fn retag(&self, old: &str, new: impl Into<String>) -> Result<PairingSystem, PairingError> {
        let new = new.into();
        if new != old && self.get(&new).is_some() {
            return Err(PairingError::DuplicateTag(new));
        }
        let mut out = self.clone();
        let i = out.position(old)?;
        out.pairings[i].tag = new;
        Ok(out)
    }

    /// Renames several pairings at once; tags not mentioned are kept.
    pub fn retag_all(&self, renames: &[(&str, &str)]) -> Result<PairingSystem, PairingError> {
        let mut out = self.clone();
        for &(old, _) in renames {
            self.position(old)?;
        }
        for p in &mut out.pairings {
            if let Some(&(_, new)) = renames.iter().find(|(old, _)| *old == p.tag) {
                p.tag = new.to_string();
            }
        }
        out.check()?;
        Ok(out)
    }

    fn replace(&mut self, i: usize, replacement: Vec<TaggedPairing>) {
        self.pairings.splice(i..=i, replacement);
    }

    /// Replaces a reversing pairing whose domain meets its range by its
    /// trimmed form (dropped if nothing is left).
    pub fn trim(&self, tag: &str) -> Result<PairingSystem, PairingError> {
        let i = self.position(tag)?;
        let trimmed = self.pairings[i]
            .pairing
            .trim()
            .map_err(|reason| PairingError::Trim { tag: tag.to_string(), reason })?;
        let mut out = self.clone();
        out.replace(i, trimmed.map(|p| TaggedPairing { tag: tag.to_string(), pairing: p }).into_iter().collect());
        Ok(out)
    }

    /// Peels `[cut + 1, hi]` off the right end of the carrier.
    pub fn truncate_right(&self, cut: Point) -> Result<PairingSystem, PairingError> {
        if !(self.carrier.lo <= cut && cut < self.carrier.hi) {
            return Err(PairingError::Truncation {
                cut,
                reason: "cut must leave a nonempty carrier and peel a nonempty end",
                offenders: vec![],
            });
        }
        let peel = Interval { lo: cut + 1, hi: self.carrier.hi };
        let keep = Interval { lo: self.carrier.lo, hi: cut };
        let mut out = self.peel(peel, keep, cut)?;
        out.carrier = keep;
        Ok(out)
    }

    /// Peels `[lo, cut]` off the left end of the carrier, then translates so
    /// the carrier starts at 1 again.
    pub fn truncate_left(&self, cut: Point) -> Result<PairingSystem, PairingError> {
        if !(self.carrier.lo <= cut && cut < self.carrier.hi) {
            return Err(PairingError::Truncation {
                cut,
                reason: "cut must leave a nonempty carrier and peel a nonempty end",
                offenders: vec![],
            });
        }
        let peel = Interval { lo: self.carrier.lo, hi: cut };
        let keep = Interval { lo: cut + 1, hi: self.carrier.hi };
        let mut out = self.peel(peel, keep, cut)?;
        out.carrier = keep;
        out.translate(1 - keep.lo)
    }

    fn peel(&self, peel: Interval, keep: Interval, cut: Point) -> Result<PairingSystem, PairingError> {
        let touching: Vec<usize> = (0..self.pairings.len())
            .filter(|&i| {
                let p = &self.pairings[i].pairing;
                p.domain.meets(peel) || p.range.meets(peel)
            })
            .collect();
        let offenders = || touching.iter().map(|&i| self.pairings[i].tag.clone()).collect::<Vec<_>>();
        let i = match touching.as_slice() {
            [i] => *i,
            [] => {
                return Err(PairingError::Truncation { cut, reason: "no pairing covers the peeled end", offenders: vec![] })
            }
            _ => {
                return Err(PairingError::Truncation {
                    cut,
                    reason: "more than one pairing meets the peeled end",
                    offenders: offenders(),
                })
            }
        };
        let p = self.pairings[i].pairing;
        if p.domain.meets(peel) && p.range.meets(peel) {
            return Err(PairingError::Truncation {
                cut,
                reason: "both sides of the pairing meet the peeled end; trim it first",
                offenders: offenders(),
            });
        }
        // Orient so the range is the side meeting the peel.
        let near = if p.range.meets(peel) { p } else { p.invert() };
        if !near.range.contains_interval(peel) {
            return Err(PairingError::Truncation {
                cut,
                reason: "the pairing does not cover the whole peeled end",
                offenders: offenders(),
            });
        }
        let mut out = self.clone();
        let rest = near.range.intersection(keep);
        let replacement = match rest {
            Some(sub) => vec![TaggedPairing { tag: self.pairings[i].tag.clone(), pairing: near.restrict_range(sub)?.canonical() }],
            None => vec![],
        };
        out.replace(i, replacement);
        Ok(out)
    }

    /// Shifts the carrier and every pairing by `delta`.
    pub fn translate(&self, delta: Point) -> Result<PairingSystem, PairingError> {
        Ok(PairingSystem {
            carrier: self.carrier.shifted(delta)?,
            pairings: self
                .pairings
                .iter()
                .map(|p| Ok(TaggedPairing { tag: p.tag.clone(), pairing: p.pairing.shifted(delta)? }))
                .collect::<Result<_, PairingError>>()?,
        })
    }

    /// Replaces `mover` by its transmission through `carrier`: with the orientation of
    /// `carrier` whose range contains the range of `mover`, the new pairing is
    /// `carrier⁻¹ ∘ mover` when the domain of `mover` lies outside that range and
    /// `carrier⁻¹ ∘ mover ∘ carrier` when it lies inside.
    pub fn transmit(&self, mover: &str, carrier: &str) -> Result<PairingSystem, PairingError> {
        let err = |reason| PairingError::Transmission { mover: mover.to_string(), carrier: carrier.to_string(), reason };
        if mover == carrier {
            return Err(err("a pairing cannot be transmitted by itself"));
        }
        let mi = self.position(mover)?;
        let ci = self.position(carrier)?;
        let g1 = self.pairings[ci].pairing;
        let g2 = self.pairings[mi].pairing;
        if g1.is_overlapping() {
            return Err(err("carrier domain and range overlap; trim it first"));
        }
        let mut partial = false;
        for c in [g1, g1.invert()] {
            for m in [g2, g2.invert()] {
                if !c.range.contains_interval(m.range) {
                    continue;
                }
                let back = c.invert().affine();
                let composite = if !m.domain.meets(c.range) {
                    Pairing::from_affine(m.domain, back.after(m.affine()))?
                } else if c.range.contains_interval(m.domain) {
                    let domain = c.invert().image(m.domain)?;
                    Pairing::from_affine(domain, back.after(m.affine()).after(c.affine()))?
                } else {
                    partial = true;
                    continue;
                };
                let mut out = self.clone();
                out.pairings[mi].pairing = composite.canonical();
                return Ok(out);
            }
        }
        if partial {
            Err(err("mover domain partially overlaps the carrier range; split it first"))
        } else {
            Err(err("mover range is not contained in the carrier range"))
        }
    }

    /// Replaces `mover` by `carrier⁻¹ ∘ mover`, for an orientation of each in
    /// which the range of `mover` lies in the range of `carrier`. The domain of
    /// `mover` is unrestricted. Since `carrier` stays in the system, the
    /// generated pseudogroup is unchanged.
    pub fn compose_back(&self, mover: &str, carrier: &str) -> Result<PairingSystem, PairingError> {
        let err = |reason| PairingError::Transmission { mover: mover.to_string(), carrier: carrier.to_string(), reason };
        if mover == carrier {
            return Err(err("a pairing cannot be composed with itself"));
        }
        let mi = self.position(mover)?;
        let ci = self.position(carrier)?;
        let g1 = self.pairings[ci].pairing;
        let g2 = self.pairings[mi].pairing;
        for c in [g1, g1.invert()] {
            for m in [g2, g2.invert()] {
                if c.range.contains_interval(m.range) {
                    let composite = Pairing::from_affine(m.domain, c.invert().affine().after(m.affine()))?;
                    let mut out = self.clone();
                    out.pairings[mi].pairing = composite.canonical();
                    return Ok(out);
                }
            }
        }
        Err(err("mover range is not contained in the carrier range"))
    }

    /// Splits a pairing's stored range into `[lo, point]` and `[point + 1, hi]`.
    /// The pieces are tagged `{tag}/a` and `{tag}/b`.
    pub fn split(&self, tag: &str, point: Point) -> Result<PairingSystem, PairingError> {
        let i = self.position(tag)?;
        let p = self.pairings[i].pairing;
        self.split_with(i, p, point)
    }

    /// As [`split`](Self::split), cutting the stored domain instead.
    pub fn split_domain(&self, tag: &str, point: Point) -> Result<PairingSystem, PairingError> {
        let i = self.position(tag)?;
        let p = self.pairings[i].pairing.invert();
        self.split_with(i, p, point)
    }

    fn split_with(&self, i: usize, oriented: Pairing, point: Point) -> Result<PairingSystem, PairingError> {
        let tag = &self.pairings[i].tag;
        let (a, b) = oriented.split_range(point).ok_or_else(|| PairingError::SplitPoint {
            tag: tag.clone(),
            point,
            side: oriented.range,
        })?;
        let (ta, tb) = (format!("{tag}/a"), format!("{tag}/b"));
        for t in [&ta, &tb] {
            if self.get(t).is_some() {
                return Err(PairingError::DuplicateTag(t.clone()));
            }
        }
        let mut out = self.clone();
        out.replace(
            i,
            vec![
                TaggedPairing { tag: ta, pairing: a.canonical() },
                TaggedPairing { tag: tb, pairing: b.canonical() },
            ],
        );
        Ok(out)
    }

    /// Conjugates every pairing by the reflection `x ↦ lo + hi − x` of the carrier.
    pub fn reflect(&self) -> PairingSystem {
        let (lo, hi) = (self.carrier.lo, self.carrier.hi);
        let mirror = |i: Interval| Interval { lo: lo + hi - i.hi, hi: lo + hi - i.lo };
        let pairings = self
            .pairings
            .iter()
            .map(|p| {
                let q = p.pairing;
                let pairing = Pairing { domain: mirror(q.domain), range: mirror(q.range), orientation: q.orientation };
                TaggedPairing { tag: p.tag.clone(), pairing: pairing.canonical() }
            })
            .collect();
        PairingSystem { carrier: self.carrier, pairings }
    }

    /// Groups of tags whose pairings have the same graph.
    pub fn same_maps(&self) -> Vec<Vec<String>> {
        let mut groups: Vec<(Pairing, Vec<String>)> = Vec::new();
        for p in &self.pairings {
            match groups.iter_mut().find(|(q, _)| q.same_map(&p.pairing)) {
                Some((_, tags)) => tags.push(p.tag.clone()),
                None => groups.push((p.pairing, vec![p.tag.clone()])),
            }
        }
        groups.into_iter().map(|(_, t)| t).filter(|t| t.len() > 1).collect()
    }

    /// Whether both systems have the same carrier and the same set of maps,
    /// ignoring tags, order and duplicates.
    pub fn same_maps_as(&self, other: &PairingSystem) -> bool {
        self.carrier == other.carrier
            && self.pairings.iter().all(|p| other.pairings.iter().any(|q| p.pairing.same_map(&q.pairing)))
            && other.pairings.iter().all(|q| self.pairings.iter().any(|p| p.pairing.same_map(&q.pairing)))
    }

    /// Orbit count by union-find, capped by [`ORBIT_CAP_ENV`] or [`DEFAULT_ORBIT_CAP`].
    pub fn count_orbits(&self) -> Result<u64, PairingError> {
        self.count_orbits_with_cap(orbit_cap())
    }

    pub fn count_orbits_with_cap(&self, cap: u64) -> Result<u64, PairingError> {
        let width = self.carrier.width();
        if width > cap || width > u32::MAX as u64 {
            return Err(PairingError::TooLarge { width, cap: cap.min(u32::MAX as u64) });
        }
        let base = self.carrier.lo;
        let mut sets = DisjointSets::new(width as usize);
        for p in &self.pairings {
            let p = p.pairing;
            for x in p.domain.points() {
                sets.union((x - base) as usize, (p.apply_unchecked(x) - base) as usize);
            }
        }
        Ok(sets.count() as u64)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("interval {} {}\n", self.carrier.lo, self.carrier.hi);
        for p in &self.pairings {
            let q = p.pairing;
            s.push_str(&format!(
                "pair {} {} {} {} {} {}\n",
                q.domain.lo,
                q.domain.hi,
                q.range.lo,
                q.range.hi,
                q.orientation.symbol(),
                p.tag
            ));
        }
        s
    }

    /// Parses the text format: `interval LO HI`, then lines
    /// `pair A B C D +|- [TAG]`, where the tag is the rest of the line and `#`
    /// starts a comment. Untagged pairings are named `p{index}`.
    pub fn parse(text: &str) -> Result<PairingSystem, PairingError> {
        let mut system: Option<PairingSystem> = None;
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let err = |message: String| PairingError::Parse { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let keyword = words.next().unwrap_or_default();
            let int = |w: Option<&str>| -> Result<Point, PairingError> {
                let w = w.ok_or_else(|| err("missing number".into()))?;
                w.parse::<Point>().map_err(|_| err(format!("not an integer: {w:?}")))
            };
            match (keyword, &mut system) {
                ("interval", None) => {
                    let lo = int(words.next())?;
                    let hi = int(words.next())?;
                    if let Some(extra) = words.next() {
                        return Err(err(format!("unexpected token {extra:?}")));
                    }
                    system = Some(PairingSystem::new(Interval::new(lo, hi).map_err(|e| err(e.to_string()))?));
                }
                ("interval", Some(_)) => return Err(err("second interval line".into())),
                ("pair", None) => return Err(err("pair before interval line".into())),
                ("pair", Some(sys)) => {
                    let (a, b, c, d) = (int(words.next())?, int(words.next())?, int(words.next())?, int(words.next())?);
                    let orientation = match words.next() {
                        Some("+") => Orientation::Preserving,
                        Some("-") => Orientation::Reversing,
                        other => return Err(err(format!("expected + or -, found {other:?}"))),
                    };
                    let tag = words.collect::<Vec<_>>().join(" ");
                    let tag = if tag.is_empty() { format!("p{}", sys.len()) } else { tag };
                    let domain = Interval::new(a, b).map_err(|e| err(e.to_string()))?;
                    let range = Interval::new(c, d).map_err(|e| err(e.to_string()))?;
                    let pairing = Pairing::new(domain, range, orientation).map_err(|e| err(e.to_string()))?;
                    sys.insert(tag, pairing).map_err(|e| err(e.to_string()))?;
                }
                (other, _) => return Err(err(format!("unknown keyword {other:?}"))),
            }
        }
        system.ok_or(PairingError::Parse { line: 0, message: "missing interval line".into() })
    }

    /// Tags are checked for uniqueness on insertion; this re-checks the
    /// structural invariants of a system built by hand.
    pub fn check(&self) -> Result<(), PairingError> {
        let mut seen = HashSet::new();
        for p in &self.pairings {
            if !seen.insert(p.tag.as_str()) {
                return Err(PairingError::DuplicateTag(p.tag.clone()));
            }
            let q = p.pairing;
            if !self.carrier.contains_interval(q.domain) || !self.carrier.contains_interval(q.range) {
                return Err(PairingError::OutsideCarrier { tag: p.tag.clone(), carrier: self.carrier });
            }
        }
        Ok(())
    }
}

impl FromStr for PairingSystem {
    type Err = PairingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PairingSystem::parse(s)
    }
}

impl fmt::Display for PairingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn orbit_cap() -> u64 {
    std::env::var(ORBIT_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ORBIT_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: Point, hi: Point) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn sys(n: Point, ps: &[(&str, Pairing)]) -> PairingSystem {
        let mut s = PairingSystem::on(n).unwrap();
        for (t, p) in ps {
            s.insert(*t, *p).unwrap();
        }
        s
    }

    fn orbits(s: &PairingSystem) -> u64 {
        s.count_orbits().unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(Pairing::preserving(1, 3, 6, 8).unwrap().apply(2), Ok(7));
        assert_eq!(Pairing::reversing(1, 3, 6, 8).unwrap().apply(1), Ok(8));
        assert_eq!(Pairing::reversing(5, 9, 5, 9).unwrap().apply(7), Ok(7));
        assert!(matches!(
            Pairing::preserving(1, 3, 6, 8).unwrap().apply(4),
            Err(PairingError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn widths_must_agree() {
        assert!(matches!(Pairing::preserving(1, 3, 6, 9), Err(PairingError::WidthMismatch { .. })));
        assert!(matches!(Interval::new(3, 2), Err(PairingError::EmptyInterval { .. })));
    }

    #[test]
    fn invert_examples() {
        let p = Pairing::preserving(1, 3, 6, 8).unwrap();
        assert_eq!(p.invert(), Pairing::preserving(6, 8, 1, 3).unwrap());
        assert_eq!(p.invert().invert(), p);
        let r = Pairing::reversing(1, 3, 6, 8).unwrap();
        assert_eq!(r.invert().orientation(), Orientation::Reversing);
        for x in 1..=3 {
            assert_eq!(r.invert().apply(r.apply(x).unwrap()), Ok(x));
        }
    }

    #[test]
    fn trim_examples() {
        assert_eq!(Pairing::reversing(1, 6, 1, 6).unwrap().trim(), Ok(Some(Pairing::reversing(1, 3, 4, 6).unwrap())));
        assert_eq!(Pairing::reversing(1, 5, 1, 5).unwrap().trim(), Ok(Some(Pairing::reversing(1, 2, 4, 5).unwrap())));
        assert_eq!(Pairing::reversing(4, 4, 4, 4).unwrap().trim(), Ok(None));
        // A partial overlap is a restriction of the same reflection.
        assert_eq!(Pairing::reversing(1, 4, 3, 6).unwrap().trim(), Ok(Some(Pairing::reversing(1, 3, 4, 6).unwrap())));
        assert!(Pairing::preserving(1, 3, 2, 4).unwrap().trim().is_err());
        assert!(Pairing::reversing(1, 3, 4, 6).unwrap().trim().is_err());
    }

    #[test]
    fn truncate_right_examples() {
        let s = sys(10, &[("g", Pairing::preserving(1, 5, 6, 10).unwrap())]);
        let t = s.truncate_right(8).unwrap();
        assert_eq!(t.carrier(), iv(1, 8));
        assert_eq!(*t.get("g").unwrap(), Pairing::preserving(1, 3, 6, 8).unwrap());

        let s = sys(10, &[("g", Pairing::reversing(1, 5, 6, 10).unwrap())]);
        assert_eq!(*s.truncate_right(8).unwrap().get("g").unwrap(), Pairing::reversing(3, 5, 6, 8).unwrap());
        let full = s.truncate_right(5).unwrap();
        assert!(full.is_empty());
        assert_eq!(full.carrier(), iv(1, 5));
    }

    #[test]
    fn truncate_left_examples() {
        let s = sys(10, &[("g", Pairing::preserving(1, 3, 8, 10).unwrap())]);
        let t = s.truncate_left(3).unwrap();
        assert_eq!(t.carrier(), iv(1, 7));
        assert!(t.is_empty());

        // Mirror of the truncate_right examples.
        let s = sys(10, &[("g", Pairing::preserving(1, 5, 6, 10).unwrap())]).reflect();
        let t = s.truncate_left(2).unwrap();
        assert_eq!(t, sys(10, &[("g", Pairing::preserving(1, 5, 6, 10).unwrap())]).truncate_right(8).unwrap().reflect());
    }

    #[test]
    fn truncation_preconditions() {
        let s = sys(
            10,
            &[("g", Pairing::preserving(1, 5, 6, 10).unwrap()), ("k", Pairing::preserving(9, 9, 10, 10).unwrap())],
        );
        match s.truncate_right(8) {
            Err(PairingError::Truncation { offenders, .. }) => assert_eq!(offenders, vec!["g", "k"]),
            other => panic!("{other:?}"),
        }
        let bare = sys(10, &[("g", Pairing::preserving(1, 2, 3, 4).unwrap())]);
        assert!(bare.truncate_right(8).is_err());
        let folded = sys(6, &[("g", Pairing::reversing(1, 6, 1, 6).unwrap())]);
        assert!(folded.truncate_right(4).is_err());
        assert!(folded.trim("g").unwrap().truncate_right(3).is_ok());
        let short = sys(10, &[("g", Pairing::preserving(1, 4, 6, 9).unwrap())]);
        assert!(short.truncate_right(8).is_err());
    }

    #[test]
    fn transmit_outside_domain() {
        let s = sys(
            6,
            &[("g1", Pairing::reversing(1, 3, 4, 6).unwrap()), ("g2", Pairing::preserving(1, 2, 5, 6).unwrap())],
        );
        let t = s.transmit("g2", "g1").unwrap();
        let g2 = t.get("g2").unwrap();
        assert_eq!(g2.apply(1), Ok(2));
        assert_eq!(g2.apply(2), Ok(1));
        assert_eq!(orbits(&s), orbits(&t));
    }

    #[test]
    fn transmit_inside_domain() {
        let (u, v) = (2, 1);
        let s = sys(
            2 * u + 2 * v,
            &[
                ("h", Pairing::reversing(1, u + v, u + v + 1, 2 * u + 2 * v).unwrap()),
                ("g", Pairing::reversing(2 * u + 1, 2 * u + v, 2 * u + v + 1, 2 * u + 2 * v).unwrap()),
            ],
        );
        let t = s.transmit("g", "h").unwrap();
        assert!(t.get("g").unwrap().same_map(&Pairing::reversing(1, v, v + 1, 2 * v).unwrap()));
        assert_eq!(orbits(&s), orbits(&t));
    }

    #[test]
    fn transmit_preconditions() {
        let s = sys(
            8,
            &[
                ("c", Pairing::preserving(1, 4, 5, 8).unwrap()),
                ("m", Pairing::preserving(4, 5, 6, 7).unwrap()),
            ],
        );
        assert!(matches!(s.transmit("c", "c"), Err(PairingError::Transmission { .. })));
        let e = s.transmit("m", "c").unwrap_err();
        assert!(e.to_string().contains("split"), "{e}");
        let folded = sys(4, &[("c", Pairing::reversing(1, 3, 2, 4).unwrap()), ("m", Pairing::preserving(1, 1, 2, 2).unwrap())]);
        assert!(folded.transmit("m", "c").is_err());
        let wide = sys(8, &[("c", Pairing::preserving(1, 2, 7, 8).unwrap()), ("m", Pairing::preserving(1, 3, 4, 6).unwrap())]);
        assert!(wide.transmit("m", "c").unwrap_err().to_string().contains("not contained"));
    }

    #[test]
    fn compose_back_allows_partial_overlap() {
        let s = sys(
            8,
            &[("c", Pairing::preserving(1, 4, 5, 8).unwrap()), ("m", Pairing::preserving(3, 4, 5, 6).unwrap())],
        );
        let t = s.compose_back("m", "c").unwrap();
        assert_eq!(*t.get("m").unwrap(), Pairing::preserving(1, 2, 3, 4).unwrap());
        assert_eq!(orbits(&s), orbits(&t));
    }

    #[test]
    fn split_examples() {
        let s = sys(14, &[("g", Pairing::preserving(1, 4, 11, 14).unwrap())]);
        let t = s.split("g", 12).unwrap();
        assert_eq!(*t.get("g/a").unwrap(), Pairing::preserving(1, 2, 11, 12).unwrap());
        assert_eq!(*t.get("g/b").unwrap(), Pairing::preserving(3, 4, 13, 14).unwrap());

        let s = sys(14, &[("g", Pairing::reversing(1, 4, 11, 14).unwrap())]);
        let t = s.split("g", 12).unwrap();
        assert_eq!(*t.get("g/a").unwrap(), Pairing::reversing(3, 4, 11, 12).unwrap());
        assert_eq!(*t.get("g/b").unwrap(), Pairing::reversing(1, 2, 13, 14).unwrap());

        let d = s.split_domain("g", 2).unwrap();
        assert_eq!(*d.get("g/a").unwrap(), Pairing::reversing(1, 2, 13, 14).unwrap());
        assert!(matches!(s.split("g", 14), Err(PairingError::SplitPoint { .. })));
        assert!(matches!(s.split("g", 5), Err(PairingError::SplitPoint { .. })));
    }

    #[test]
    fn reflect_examples() {
        let s = sys(6, &[("g", Pairing::preserving(1, 2, 4, 5).unwrap())]);
        let r = s.reflect();
        assert_eq!(*r.get("g").unwrap(), Pairing::preserving(2, 3, 5, 6).unwrap());
        assert_eq!(r.reflect(), s);
        assert_eq!(orbits(&r), orbits(&s));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbits(&sys(4, &[("g", Pairing::preserving(1, 2, 3, 4).unwrap())])), 2);
        assert_eq!(orbits(&sys(9, &[])), 9);
        let big = PairingSystem::on(100).unwrap();
        assert!(matches!(big.count_orbits_with_cap(99), Err(PairingError::TooLarge { .. })));
    }

    #[test]
    fn translate_relabels() {
        let s = sys(6, &[("g", Pairing::reversing(1, 2, 5, 6).unwrap())]);
        let t = s.translate(10).unwrap();
        assert_eq!(t.carrier(), iv(11, 16));
        assert_eq!(orbits(&s), orbits(&t));
    }

    #[test]
    fn text_round_trip() {
        let text = "# header\ninterval 1 8\npair 1 2 3 4 + (tet0,F1,cut v2)\npair 5 6 7 8 -   # comment\n";
        let s = PairingSystem::parse(text).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.pairings()[0].tag, "(tet0,F1,cut v2)");
        assert_eq!(s.pairings()[1].tag, "p1");
        assert_eq!(PairingSystem::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn parse_errors_name_the_line() {
        for (text, line) in [
            ("pair 1 2 3 4 +\n", 1),
            ("interval 1 4\npair 1 2 3 +\n", 2),
            ("interval 1 4\npair 1 2 3 4 *\n", 2),
            ("interval 1 4\n\npair 1 2 3 5 +\n", 3),
            ("interval 1 4\npair 1 2 5 6 +\n", 2),
            ("interval 1 4\nfrob\n", 2),
        ] {
            match PairingSystem::parse(text) {
                Err(PairingError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(PairingSystem::parse("# nothing\n").is_err());
    }

    #[test]
    fn same_map_detection() {
        let s = sys(
            6,
            &[
                ("a", Pairing::reversing(1, 2, 5, 6).unwrap()),
                ("b", Pairing::reversing(5, 6, 1, 2).unwrap()),
                ("c", Pairing::preserving(3, 3, 4, 4).unwrap()),
                ("d", Pairing::reversing(3, 3, 4, 4).unwrap()),
            ],
        );
        assert_eq!(s.same_maps(), vec![vec!["a", "b"], vec!["c", "d"]]);
    }

    #[test]
    fn duplicate_tags_and_carrier_bounds() {
        let mut s = sys(6, &[("a", Pairing::reversing(1, 2, 5, 6).unwrap())]);
        assert!(matches!(s.insert("a", Pairing::preserving(1, 1, 2, 2).unwrap()), Err(PairingError::DuplicateTag(_))));
        assert!(matches!(s.insert("z", Pairing::preserving(1, 2, 6, 7).unwrap()), Err(PairingError::OutsideCarrier { .. })));
        assert!(s.check().is_ok());
    }
}
