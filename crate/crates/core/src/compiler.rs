//! Compiles the intersection pattern of a normal surface with the 2-skeleton
//! into a pairing system on `[1, total edge weight]`.
//!
//! Intersection points are numbered edge by edge in [`EDGE_ORDER`], each edge
//! read along its class orientation. Every arc type on a face class (the arcs
//! cutting off one vertex) pairs its endpoints on one edge with its endpoints
//! on the other.

use std::fmt;

use thiserror::Error;

use crate::pairing::{Interval, Orientation, Pairing, PairingError, PairingSystem, Point};
use crate::surface::{check_matching, edge_weights, EdgeWeights, NormalCoordinates, SurfaceCoefficients, SurfaceError};
use crate::triangulation::{FaceSlot, OrientedEdge, Triangulation, EDGE_CLASS_COUNT};

/// Order in which edge classes are laid out along the carrier.
pub const EDGE_ORDER: [usize; EDGE_CLASS_COUNT] = [1, 8, 6, 9, 0, 2, 3, 4, 5, 7];

#[derive(Debug, Error)]
pub enum CompileError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error("edge {0} is not in any edge class")]
    UnknownEdge(OrientedEdge),
    #[error("arcs {tag} do not end on a contiguous block of points")]
    NonContiguous { tag: String },
    #[error("carrier {carrier} (pairing {tag}) has width {found}, expected {expected}")]
    CarrierWidth { carrier: Carrier, tag: String, found: u64, expected: u64 },
    #[error("carrier {carrier} (pairing {tag}) is missing from the compiled system")]
    MissingCarrier { carrier: Carrier, tag: String },
    #[error("carrier {carrier} (pairing {tag}) does not join e{from} to e{to}")]
    CarrierEdges { carrier: Carrier, tag: String, from: usize, to: usize },
}

/// Where each edge class sits along the carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointIndexing {
    offsets: [Point; EDGE_CLASS_COUNT],
    weights: [u64; EDGE_CLASS_COUNT],
}

impl PointIndexing {
    pub fn new(weights: &EdgeWeights) -> Self {
        let mut offsets = [0; EDGE_CLASS_COUNT];
        let mut acc: Point = 0;
        for e in EDGE_ORDER {
            offsets[e] = acc;
            acc += weights.get(e) as Point;
        }
        PointIndexing { offsets, weights: weights.0 }
    }

    pub fn for_surface(c: SurfaceCoefficients, tri: &Triangulation) -> Result<Self, SurfaceError> {
        Ok(PointIndexing::new(&edge_weights(&crate::surface::coordinates(c), tri)?))
    }

    pub fn total(&self) -> Point {
        self.weights.iter().sum::<u64>() as Point
    }

    pub fn weight(&self, class: usize) -> u64 {
        self.weights[class]
    }

    /// Points on edge class `class`; `None` if the surface misses it.
    pub fn segment(&self, class: usize) -> Option<Interval> {
        let lo = self.offsets[class] + 1;
        Interval::nonempty(lo, self.offsets[class] + self.weights[class] as Point)
    }

    /// The edge class containing a carrier point.
    pub fn class_of(&self, x: Point) -> Option<usize> {
        (0..EDGE_CLASS_COUNT).find(|&e| self.segment(e).is_some_and(|s| s.contains(x)))
    }

    /// Global index of the `m`-th point (1-based) from `edge.from` along `edge`.
    pub fn position(&self, tri: &Triangulation, edge: OrientedEdge, m: u64) -> Result<Point, CompileError> {
        let loc = tri.locate_edge(edge).ok_or(CompileError::UnknownEdge(edge))?;
        let (off, w) = (self.offsets[loc.class], self.weights[loc.class] as Point);
        Ok(if loc.forward { off + m as Point } else { off + w + 1 - m as Point })
    }
}

/// Tag of the pairing for arcs on `face` cutting off `vertex`.
pub fn arc_tag(face: FaceSlot, vertex: u8) -> String {
    format!("(tet{},F{},cut v{})", face.tet, face.face, vertex)
}

/// One pairing per face class and nonempty arc type, tagged by the smaller
/// side of the face gluing.
pub fn compile(nc: &NormalCoordinates, tri: &Triangulation) -> Result<PairingSystem, CompileError> {
    if let Some(v) = check_matching(nc, tri).into_iter().next() {
        return Err(SurfaceError::Matching(v).into());
    }
    let indexing = PointIndexing::new(&edge_weights(nc, tri)?);
    let mut system = PairingSystem::on(indexing.total())?;
    for slot in tri.face_class_representatives() {
        for w in slot.vertices() {
            let n = nc.tet(slot.tet).arcs(slot.face, w);
            if n == 0 {
                continue;
            }
            let tag = arc_tag(slot, w);
            let others: Vec<u8> = slot.vertices().into_iter().filter(|&x| x != w).collect();
            let block = |x: u8| -> Result<(Interval, i8), CompileError> {
                let edge = OrientedEdge::new(slot.tet, w, x);
                let first = indexing.position(tri, edge, 1)?;
                let last = indexing.position(tri, edge, n)?;
                if (last - first).unsigned_abs() != n - 1 {
                    return Err(CompileError::NonContiguous { tag: tag.clone() });
                }
                let dir = if last >= first { 1 } else { -1 };
                Ok((Interval::new(first.min(last), first.max(last))?, dir))
            };
            let (domain, d_dir) = block(others[0])?;
            let (range, r_dir) = block(others[1])?;
            let orientation =
                if n == 1 || d_dir == r_dir { Orientation::Preserving } else { Orientation::Reversing };
            system.insert(tag, Pairing::new(domain, range, orientation)?)?;
        }
    }
    Ok(system)
}

/// Compiles uF + vG on the standard triangulation.
pub fn compile_surface(c: SurfaceCoefficients, tri: &Triangulation) -> Result<PairingSystem, CompileError> {
    compile(&crate::surface::coordinates(c), tri)
}

/// The pairings used to move everything off one edge class, each named by
/// the edge it clears.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Carrier {
    T0,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T9,
    T8a,
    T8b,
}

impl Carrier {
    pub const ALL: [Carrier; 10] = [
        Carrier::T0,
        Carrier::T2,
        Carrier::T3,
        Carrier::T4,
        Carrier::T5,
        Carrier::T6,
        Carrier::T7,
        Carrier::T9,
        Carrier::T8a,
        Carrier::T8b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Carrier::T0 => "t0",
            Carrier::T2 => "t2",
            Carrier::T3 => "t3",
            Carrier::T4 => "t4",
            Carrier::T5 => "t5",
            Carrier::T6 => "t6",
            Carrier::T7 => "t7",
            Carrier::T9 => "t9",
            Carrier::T8a => "t8a",
            Carrier::T8b => "t8b",
        }
    }

    /// `(tet, face, cut vertex)` of the arc type on one side of the face.
    pub fn arc_type(self) -> (usize, u8, u8) {
        match self {
            Carrier::T0 => (5, 3, 2),
            Carrier::T2 => (0, 3, 2),
            Carrier::T3 => (0, 1, 0),
            Carrier::T5 => (0, 1, 2),
            Carrier::T4 => (5, 1, 2),
            Carrier::T7 => (5, 1, 0),
            Carrier::T6 => (9, 2, 3),
            Carrier::T9 => (4, 2, 3),
            Carrier::T8a => (3, 3, 0),
            Carrier::T8b => (3, 3, 2),
        }
    }

    /// `(cleared edge, other edge)` in the compiled system.
    pub fn edges(self) -> (usize, usize) {
        match self {
            Carrier::T0 => (0, 1),
            Carrier::T2 => (2, 1),
            Carrier::T3 => (3, 1),
            Carrier::T4 => (4, 1),
            Carrier::T5 => (5, 1),
            Carrier::T7 => (7, 1),
            Carrier::T6 => (6, 8),
            Carrier::T9 => (9, 8),
            Carrier::T8a => (8, 3),
            Carrier::T8b => (8, 7),
        }
    }

    /// Width as `(a, b)` meaning `a·u + b·v`.
    pub fn width_form(self) -> (u64, u64) {
        match self {
            Carrier::T0 | Carrier::T2 | Carrier::T6 | Carrier::T9 => (2, 2),
            Carrier::T3 => (4, 2),
            Carrier::T4 => (2, 0),
            Carrier::T5 => (0, 2),
            Carrier::T7 => (2, 4),
            Carrier::T8a => (3, 1),
            Carrier::T8b => (1, 3),
        }
    }

    pub fn width(self, c: SurfaceCoefficients) -> u64 {
        let (a, b) = self.width_form();
        a * c.u() + b * c.v()
    }

    /// Tag under which [`compile`] stores this carrier.
    pub fn tag(self, tri: &Triangulation) -> String {
        let (tet, face, w) = self.arc_type();
        let (slot, perm) = tri.canonical_side(FaceSlot::new(tet, face));
        arc_tag(slot, perm.apply(w))
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tags of the carrier pairings in a compiled system. Carriers of width 0
/// are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrierMap {
    tags: [Option<String>; 10],
}

impl CarrierMap {
    pub fn get(&self, carrier: Carrier) -> Option<&str> {
        self.tags[carrier as usize].as_deref()
    }

    pub fn is_carrier(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t.as_deref() == Some(tag))
    }
}

/// Finds the carriers in `compile_surface(c)` and checks their widths and edges.
pub fn locate_carriers(
    sys: &PairingSystem,
    c: SurfaceCoefficients,
    tri: &Triangulation,
) -> Result<CarrierMap, CompileError> {
    let indexing = PointIndexing::for_surface(c, tri)?;
    let mut tags: [Option<String>; 10] = Default::default();
    for carrier in Carrier::ALL {
        let tag = carrier.tag(tri);
        let expected = carrier.width(c);
        let Some(p) = sys.get(&tag) else {
            if expected == 0 {
                continue;
            }
            return Err(CompileError::MissingCarrier { carrier, tag });
        };
        if p.width() != expected {
            return Err(CompileError::CarrierWidth { carrier, tag, found: p.width(), expected });
        }
        let (from, to) = carrier.edges();
        let inside = |side: Interval, e: usize| indexing.segment(e).is_some_and(|s| s.contains_interval(side));
        let ok = (inside(p.domain(), from) && inside(p.range(), to)) || (inside(p.domain(), to) && inside(p.range(), from));
        if !ok {
            return Err(CompileError::CarrierEdges { carrier, tag, from, to });
        }
        tags[carrier as usize] = Some(tag);
    }
    Ok(CarrierMap { tags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::coordinates;

    fn coeffs(u: u64, v: u64) -> SurfaceCoefficients {
        SurfaceCoefficients::new(u, v).unwrap()
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn layout_starts_with_e1_and_ends_with_e7() {
        let tri = Triangulation::k13n586();
        let (u, v) = (3, 2);
        let idx = PointIndexing::for_surface(coeffs(u, v), &tri).unwrap();
        assert_eq!(idx.total(), 24 * (u + v) as Point);
        assert_eq!(idx.segment(1), Interval::nonempty(1, 4 * (u + v) as Point));
        assert_eq!(idx.segment(7).unwrap().hi(), idx.total());
        assert_eq!(idx.segment(8).unwrap().lo(), 4 * (u + v) as Point + 1);
        let idx0 = PointIndexing::for_surface(coeffs(1, 0), &tri).unwrap();
        assert_eq!(idx0.segment(5), None);
    }

    #[test]
    fn compiled_carrier_width() {
        let tri = Triangulation::k13n586();
        let sys = compile_surface(coeffs(1, 1), &tri).unwrap();
        assert_eq!(sys.carrier(), Interval::new(1, 48).unwrap());
        let t7 = sys.get("(tet5,F1,cut v0)").unwrap();
        assert_eq!(t7.width(), 6);
        assert!(sys.len() <= 60);
    }

    #[test]
    fn compiled_orbits_match_gcd() {
        let tri = Triangulation::k13n586();
        for u in 0..=6 {
            for v in 0..=6 {
                if (u, v) == (0, 0) {
                    continue;
                }
                let sys = compile(&coordinates(coeffs(u, v)), &tri).unwrap();
                assert_eq!(sys.count_orbits().unwrap(), gcd(u, v), "({u}, {v})");
            }
        }
    }

    #[test]
    fn carriers_are_found_with_their_widths() {
        let tri = Triangulation::k13n586();
        for (u, v) in [(1, 1), (3, 2), (2, 5)] {
            let c = coeffs(u, v);
            let sys = compile_surface(c, &tri).unwrap();
            let map = locate_carriers(&sys, c, &tri).unwrap();
            let w = |k: Carrier| sys.get(map.get(k).unwrap()).unwrap().width();
            assert_eq!(w(Carrier::T3), 4 * u + 2 * v);
            assert_eq!(w(Carrier::T8a) + w(Carrier::T8b), 4 * u + 4 * v);
        }
        assert_eq!(Carrier::T6.tag(&tri), "(tet4,F2,cut v0)");
    }

    #[test]
    fn zero_width_carrier_is_absent() {
        let tri = Triangulation::k13n586();
        let c = coeffs(1, 0);
        let sys = compile_surface(c, &tri).unwrap();
        let map = locate_carriers(&sys, c, &tri).unwrap();
        assert_eq!(map.get(Carrier::T5), None);
        assert!(sys.get(&Carrier::T5.tag(&tri)).is_none());
        assert!(map.get(Carrier::T4).is_some());
    }

    #[test]
    fn matching_failure_is_reported() {
        let tri = Triangulation::k13n586();
        let mut nc = coordinates(coeffs(1, 1));
        nc.tet_mut(3).quad += 1;
        assert!(matches!(compile(&nc, &tri), Err(CompileError::Surface(SurfaceError::Matching(_)))));
    }
}
