//! Normal coordinates of the surfaces uF + vG and the disk-gluing oracle.
//!
//! Each tetrahedron carries four triangle types `tri0..tri3` (triangle `triw`
//! cuts off vertex `w`) and the single quad type separating `E01` from `E23`.

use serde::Serialize;
use thiserror::Error;

use crate::dsu::DisjointSets;
use crate::triangulation::{FaceSlot, OrientedEdge, Triangulation, TET_COUNT, TET_EDGES};

/// Largest allowed `u + v`. Keeps every point index of the compiled
/// interval `[1, 24(u + v)]` inside `i64`.
pub const MAX_COEFFICIENT_SUM: u64 = 1 << 58;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("(u, v) = (0, 0) is the empty surface")]
    EmptySurface,
    #[error("u + v = {sum} exceeds the supported bound {MAX_COEFFICIENT_SUM}")]
    TooLarge { sum: u128 },
    #[error("matching equations fail: {0}")]
    Matching(MatchingViolation),
    #[error("edge e{class} has weight {first} from {first_rep} but {other} from {other_rep}")]
    WeightDisagreement {
        class: usize,
        first: u64,
        first_rep: OrientedEdge,
        other: u64,
        other_rep: OrientedEdge,
    },
    #[error("component {component} has odd Euler characteristic {chi}")]
    OddEulerCharacteristic { component: usize, chi: i64 },
    #[error("component {component}: {what} is not integral")]
    NonIntegralCount { component: usize, what: &'static str },
    #[error("oracle supports at most {limit} disks, surface has {disks}")]
    TooManyDisks { disks: u64, limit: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SurfaceCoefficients {
    u: u64,
    v: u64,
}

impl SurfaceCoefficients {
    pub fn new(u: u64, v: u64) -> Result<Self, SurfaceError> {
        if u == 0 && v == 0 {
            return Err(SurfaceError::EmptySurface);
        }
        let sum = u as u128 + v as u128;
        if sum > MAX_COEFFICIENT_SUM as u128 {
            return Err(SurfaceError::TooLarge { sum });
        }
        Ok(SurfaceCoefficients { u, v })
    }

    pub fn u(self) -> u64 {
        self.u
    }

    pub fn v(self) -> u64 {
        self.v
    }

    pub fn swapped(self) -> Self {
        SurfaceCoefficients { u: self.v, v: self.u }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DiskKind {
    Triangle(u8),
    Quad,
}

/// One elementary disk: layer `layer` (1-based) of its parallel family in `tet`.
///
/// Triangles cutting off `w` are layered outward from `w`; quads are layered
/// from `E01` towards `E23`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DiskInstance {
    pub tet: usize,
    pub kind: DiskKind,
    pub layer: u64,
}

/// Whether the quad type (separating `E01` from `E23`) meets edge `Eij`.
#[inline]
pub fn quad_meets(i: u8, j: u8) -> bool {
    !matches!((i.min(j), i.max(j)), (0, 1) | (2, 3))
}

/// The vertex cut off by the quad's arc on face `Fk`.
#[inline]
pub fn quad_cut_vertex(face: u8) -> u8 {
    face ^ 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TetCoordinates {
    pub tri: [u64; 4],
    pub quad: u64,
}

impl TetCoordinates {
    pub const fn new(tri: [u64; 4], quad: u64) -> Self {
        TetCoordinates { tri, quad }
    }

    /// Points where the surface crosses edge `Eij` of this tetrahedron.
    pub fn edge_weight(&self, i: u8, j: u8) -> u64 {
        let q = if quad_meets(i, j) { self.quad } else { 0 };
        self.tri[i as usize] + self.tri[j as usize] + q
    }

    /// Arcs on face `Fk` cutting off vertex `w`.
    pub fn arcs(&self, face: u8, w: u8) -> u64 {
        debug_assert_ne!(face, w);
        let q = if quad_cut_vertex(face) == w { self.quad } else { 0 };
        self.tri[w as usize] + q
    }

    pub fn disks(&self) -> u64 {
        self.tri.iter().sum::<u64>() + self.quad
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalCoordinates {
    tets: Vec<TetCoordinates>,
}

impl NormalCoordinates {
    pub fn from_tets(tets: Vec<TetCoordinates>) -> Self {
        NormalCoordinates { tets }
    }

    pub fn tet(&self, tet: usize) -> &TetCoordinates {
        &self.tets[tet]
    }

    pub fn tet_mut(&mut self, tet: usize) -> &mut TetCoordinates {
        &mut self.tets[tet]
    }

    pub fn tets(&self) -> &[TetCoordinates] {
        &self.tets
    }

    pub fn total_disks(&self) -> u64 {
        self.tets.iter().map(TetCoordinates::disks).sum()
    }
}

const F_COLUMNS: [TetCoordinates; TET_COUNT] = [
    TetCoordinates::new([2, 0, 0, 0], 2),
    TetCoordinates::new([3, 1, 0, 0], 1),
    TetCoordinates::new([1, 1, 0, 0], 1),
    TetCoordinates::new([3, 1, 1, 1], 0),
    TetCoordinates::new([2, 0, 0, 2], 0),
    TetCoordinates::new([2, 0, 2, 0], 0),
    TetCoordinates::new([1, 1, 0, 2], 1),
    TetCoordinates::new([2, 0, 0, 2], 0),
    TetCoordinates::new([1, 1, 2, 0], 1),
    TetCoordinates::new([2, 0, 1, 1], 1),
];

const G_COLUMNS: [TetCoordinates; TET_COUNT] = [
    TetCoordinates::new([2, 0, 2, 0], 0),
    TetCoordinates::new([1, 1, 0, 2], 1),
    TetCoordinates::new([2, 0, 0, 2], 0),
    TetCoordinates::new([1, 1, 2, 0], 1),
    TetCoordinates::new([2, 0, 1, 1], 1),
    TetCoordinates::new([2, 0, 0, 0], 2),
    TetCoordinates::new([3, 1, 0, 0], 1),
    TetCoordinates::new([1, 1, 0, 0], 1),
    TetCoordinates::new([3, 1, 1, 1], 0),
    TetCoordinates::new([2, 0, 0, 2], 0),
];

/// Normal coordinates of uF + vG.
pub fn coordinates(c: SurfaceCoefficients) -> NormalCoordinates {
    let tets = F_COLUMNS
        .iter()
        .zip(&G_COLUMNS)
        .map(|(f, g)| TetCoordinates {
            tri: [0, 1, 2, 3].map(|i| c.u * f.tri[i] + c.v * g.tri[i]),
            quad: c.u * f.quad + c.v * g.quad,
        })
        .collect();
    NormalCoordinates { tets }
}

/// Disagreement of arc counts across a glued face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchingViolation {
    pub face: FaceSlot,
    /// Cut-off vertex on `face`.
    pub vertex: u8,
    pub here: u64,
    pub there: u64,
}

impl std::fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} arcs cutting off v{}: {} on this side, {} across the gluing",
            self.face, self.vertex, self.here, self.there
        )
    }
}

/// Checks the matching equations on every face class.
pub fn check_matching(nc: &NormalCoordinates, tri: &Triangulation) -> Vec<MatchingViolation> {
    let mut out = Vec::new();
    for slot in tri.face_class_representatives() {
        let g = tri.gluing(slot);
        let there = g.target_slot();
        for w in slot.vertices() {
            let a = nc.tet(slot.tet).arcs(slot.face, w);
            let b = nc.tet(there.tet).arcs(there.face, g.perm.apply(w));
            if a != b {
                out.push(MatchingViolation { face: slot, vertex: w, here: a, there: b });
            }
        }
    }
    out
}

fn require_matching(nc: &NormalCoordinates, tri: &Triangulation) -> Result<(), SurfaceError> {
    match check_matching(nc, tri).into_iter().next() {
        Some(v) => Err(SurfaceError::Matching(v)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeWeights(pub [u64; 10]);

impl EdgeWeights {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn get(&self, class: usize) -> u64 {
        self.0[class]
    }
}

/// Edge weights per edge class, checked to agree across all representatives.
pub fn edge_weights(nc: &NormalCoordinates, tri: &Triangulation) -> Result<EdgeWeights, SurfaceError> {
    let mut weights = [0u64; 10];
    for class in tri.edge_classes() {
        let first_rep = class.canonical();
        let first = nc.tet(first_rep.tet).edge_weight(first_rep.from, first_rep.to);
        for &rep in &class.members[1..] {
            let other = nc.tet(rep.tet).edge_weight(rep.from, rep.to);
            if other != first {
                return Err(SurfaceError::WeightDisagreement {
                    class: class.label,
                    first,
                    first_rep,
                    other,
                    other_rep: rep,
                });
            }
        }
        weights[class.label] = first;
    }
    Ok(EdgeWeights(weights))
}

/// χ = (points on edges) − (arcs on faces) + (disks).
pub fn euler_characteristic(nc: &NormalCoordinates, tri: &Triangulation) -> Result<i64, SurfaceError> {
    require_matching(nc, tri)?;
    let vertices = edge_weights(nc, tri)?.total() as i128;
    let edges: u64 = tri
        .face_class_representatives()
        .into_iter()
        .map(|s| s.vertices().iter().map(|&w| nc.tet(s.tet).arcs(s.face, w)).sum::<u64>())
        .sum();
    let faces = nc.total_disks() as i128;
    Ok((vertices - edges as i128 + faces) as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub triangles: u64,
    pub quads: u64,
    pub euler_characteristic: i64,
}

impl ComponentSummary {
    pub fn disks(&self) -> u64 {
        self.triangles + self.quads
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Components {
    pub components: Vec<ComponentSummary>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.components.len()
    }
}

/// Default cap on the number of disks instantiated by [`glue_components`].
pub const DISK_LIMIT: u64 = 50_000_000;

struct DiskIndex {
    base: Vec<usize>,
    nc: NormalCoordinates,
}

impl DiskIndex {
    fn new(nc: &NormalCoordinates) -> Self {
        let mut base = Vec::with_capacity(nc.tets.len() + 1);
        let mut acc = 0usize;
        for t in &nc.tets {
            base.push(acc);
            acc += t.disks() as usize;
        }
        base.push(acc);
        DiskIndex { base, nc: nc.clone() }
    }

    fn total(&self) -> usize {
        *self.base.last().unwrap()
    }

    fn index(&self, d: DiskInstance) -> usize {
        let c = self.nc.tet(d.tet);
        let offset = match d.kind {
            DiskKind::Triangle(w) => c.tri[..w as usize].iter().sum::<u64>(),
            DiskKind::Quad => c.tri.iter().sum::<u64>(),
        };
        self.base[d.tet] + (offset + d.layer - 1) as usize
    }

    fn disk(&self, index: usize) -> DiskInstance {
        let tet = self.base.partition_point(|&b| b <= index) - 1;
        let mut rem = (index - self.base[tet]) as u64;
        let c = self.nc.tet(tet);
        for w in 0..4u8 {
            if rem < c.tri[w as usize] {
                return DiskInstance { tet, kind: DiskKind::Triangle(w), layer: rem + 1 };
            }
            rem -= c.tri[w as usize];
        }
        DiskInstance { tet, kind: DiskKind::Quad, layer: rem + 1 }
    }

    /// Disks meeting face `Fk` of `tet` in an arc cutting off `w`, ordered by
    /// distance from `w`.
    fn arc_sequence(&self, tet: usize, face: u8, w: u8) -> impl Iterator<Item = DiskInstance> + '_ {
        let c = *self.nc.tet(tet);
        let tris = (1..=c.tri[w as usize]).map(move |layer| DiskInstance {
            tet,
            kind: DiskKind::Triangle(w),
            layer,
        });
        let quads = if quad_cut_vertex(face) == w { c.quad } else { 0 };
        // Faces F2, F3 contain E01, so their quad arcs cut off an end of E23
        // and the quad nearest `w` is the last layer.
        let descending = face >= 2;
        let quad_layers = (1..=quads).map(move |k| {
            let layer = if descending { quads + 1 - k } else { k };
            DiskInstance { tet, kind: DiskKind::Quad, layer }
        });
        tris.chain(quad_layers)
    }
}

/// Connected components of the surface, by instantiating every elementary
/// disk and identifying boundary arcs across each glued face.
pub fn glue_components(nc: &NormalCoordinates, tri: &Triangulation) -> Result<Components, SurfaceError> {
    glue_components_with_limit(nc, tri, DISK_LIMIT)
}

pub fn glue_components_with_limit(
    nc: &NormalCoordinates,
    tri: &Triangulation,
    limit: u64,
) -> Result<Components, SurfaceError> {
    require_matching(nc, tri)?;
    let disks = nc.total_disks();
    if disks > limit {
        return Err(SurfaceError::TooManyDisks { disks, limit });
    }
    let index = DiskIndex::new(nc);
    let mut sets = DisjointSets::new(index.total());
    for slot in tri.face_class_representatives() {
        let g = tri.gluing(slot);
        let there = g.target_slot();
        for w in slot.vertices() {
            let mut near = index.arc_sequence(slot.tet, slot.face, w);
            let mut far = index.arc_sequence(there.tet, there.face, g.perm.apply(w));
            loop {
                match (near.next(), far.next()) {
                    (Some(a), Some(b)) => {
                        sets.union(index.index(a), index.index(b));
                    }
                    (None, None) => break,
                    _ => {
                        let here = nc.tet(slot.tet).arcs(slot.face, w);
                        let there_count = nc.tet(there.tet).arcs(there.face, g.perm.apply(w));
                        return Err(SurfaceError::Matching(MatchingViolation {
                            face: slot,
                            vertex: w,
                            here,
                            there: there_count,
                        }));
                    }
                }
            }
        }
    }

    // χ per component: V counts each disk corner as 1/deg of its edge class.
    let degrees: Vec<u64> = tri.edge_classes().iter().map(|c| c.degree() as u64).collect();
    let lcm = degrees.iter().fold(1u64, |acc, &d| acc / gcd(acc, d) * d);
    let corner_share = |tet: usize, i: u8, j: u8| -> u64 {
        let loc = tri.locate_edge(OrientedEdge::new(tet, i, j)).expect("edge belongs to a class");
        lcm / degrees[loc.class]
    };
    let labels = sets.labels();
    let mut acc: Vec<(u64, u64, u64)> = vec![(0, 0, 0); sets.count()];
    for (i, &label) in labels.iter().enumerate() {
        let d = index.disk(i);
        let entry = &mut acc[label];
        match d.kind {
            DiskKind::Triangle(w) => {
                entry.0 += 1;
                for x in (0..4u8).filter(|&x| x != w) {
                    entry.2 += corner_share(d.tet, w, x);
                }
            }
            DiskKind::Quad => {
                entry.1 += 1;
                for (i, j) in TET_EDGES.into_iter().filter(|&(i, j)| quad_meets(i, j)) {
                    entry.2 += corner_share(d.tet, i, j);
                }
            }
        }
    }
    let components = acc
        .into_iter()
        .enumerate()
        .map(|(component, (triangles, quads, scaled_vertices))| {
            if scaled_vertices % lcm != 0 {
                return Err(SurfaceError::NonIntegralCount { component, what: "vertex count" });
            }
            let sides = 3 * triangles + 4 * quads;
            if sides % 2 != 0 {
                return Err(SurfaceError::NonIntegralCount { component, what: "edge count" });
            }
            let chi = (scaled_vertices / lcm) as i64 - (sides / 2) as i64 + (triangles + quads) as i64;
            Ok(ComponentSummary { triangles, quads, euler_characteristic: chi })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Components { components })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusEntry {
    pub components: usize,
    pub euler_characteristic: i64,
    pub genera: Vec<u64>,
}

/// Component count, total χ and the genus of each (closed, orientable) component.
pub fn genus_census_entry(c: SurfaceCoefficients, tri: &Triangulation) -> Result<GenusEntry, SurfaceError> {
    let nc = coordinates(c);
    let parts = glue_components(&nc, tri)?;
    let genera = parts
        .components
        .iter()
        .enumerate()
        .map(|(component, s)| {
            let chi = s.euler_characteristic;
            if chi % 2 != 0 || chi > 2 {
                Err(SurfaceError::OddEulerCharacteristic { component, chi })
            } else {
                Ok((1 - chi / 2) as u64)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GenusEntry {
        components: parts.count(),
        euler_characteristic: parts.components.iter().map(|s| s.euler_characteristic).sum(),
        genera,
    })
}

/// Serializable summary of one surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceRecord {
    pub u: u64,
    pub v: u64,
    pub weights: [u64; 10],
    pub total: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<u64>,
    pub chi: i64,
}

impl SurfaceRecord {
    pub fn new(c: SurfaceCoefficients, tri: &Triangulation, components: Option<u64>) -> Result<Self, SurfaceError> {
        let nc = coordinates(c);
        let weights = edge_weights(&nc, tri)?;
        Ok(SurfaceRecord {
            u: c.u(),
            v: c.v(),
            total: weights.total(),
            weights: weights.0,
            components,
            chi: euler_characteristic(&nc, tri)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(u: u64, v: u64) -> SurfaceCoefficients {
        SurfaceCoefficients::new(u, v).unwrap()
    }

    #[test]
    fn coefficient_bounds() {
        assert_eq!(SurfaceCoefficients::new(0, 0), Err(SurfaceError::EmptySurface));
        assert!(SurfaceCoefficients::new(MAX_COEFFICIENT_SUM, 0).is_ok());
        assert!(SurfaceCoefficients::new(MAX_COEFFICIENT_SUM, 1).is_err());
    }

    #[test]
    fn columns_of_f_and_g() {
        let f = coordinates(coeffs(1, 0));
        assert_eq!(*f.tet(0), TetCoordinates::new([2, 0, 0, 0], 2));
        assert_eq!(*f.tet(5), TetCoordinates::new([2, 0, 2, 0], 0));
        let g = coordinates(coeffs(0, 1));
        assert_eq!(*g.tet(8), TetCoordinates::new([3, 1, 1, 1], 0));
        assert_eq!(coordinates(coeffs(2, 3)).tet(1).tri[0], 9);
    }

    #[test]
    fn linear_forms_of_the_sum() {
        // (tri0, tri1, tri2, tri3, quad) of uF + vG as (u-coefficient, v-coefficient) pairs.
        let forms: [[(u64, u64); 5]; 10] = [
            [(2, 2), (0, 0), (0, 2), (0, 0), (2, 0)],
            [(3, 1), (1, 1), (0, 0), (0, 2), (1, 1)],
            [(1, 2), (1, 0), (0, 0), (0, 2), (1, 0)],
            [(3, 1), (1, 1), (1, 2), (1, 0), (0, 1)],
            [(2, 2), (0, 0), (0, 1), (2, 1), (0, 1)],
            [(2, 2), (0, 0), (2, 0), (0, 0), (0, 2)],
            [(1, 3), (1, 1), (0, 0), (2, 0), (1, 1)],
            [(2, 1), (0, 1), (0, 0), (2, 0), (0, 1)],
            [(1, 3), (1, 1), (2, 1), (0, 1), (1, 0)],
            [(2, 2), (0, 0), (1, 0), (1, 2), (1, 0)],
        ];
        for (u, v) in [(1, 0), (0, 1), (3, 7), (11, 2)] {
            let nc = coordinates(coeffs(u, v));
            for (tet, row) in forms.iter().enumerate() {
                let eval: Vec<u64> = row.iter().map(|&(a, b)| a * u + b * v).collect();
                let c = nc.tet(tet);
                assert_eq!(eval, vec![c.tri[0], c.tri[1], c.tri[2], c.tri[3], c.quad], "tet{tet}");
            }
        }
    }

    #[test]
    fn matching_holds_and_detects_defects() {
        let tri = Triangulation::k13n586();
        for (u, v) in [(1, 0), (0, 1), (1, 1), (5, 3)] {
            assert!(check_matching(&coordinates(coeffs(u, v)), &tri).is_empty());
        }
        let mut nc = coordinates(coeffs(1, 1));
        nc.tet_mut(0).tri[0] += 1;
        let violations = check_matching(&nc, &tri);
        assert!(!violations.is_empty());
        assert!(violations.iter().any(|v| {
            v.face.tet == 0 || tri.gluing(v.face).target == 0
        }));
        assert!(matches!(glue_components(&nc, &tri), Err(SurfaceError::Matching(_))));
    }

    #[test]
    fn weights_of_f() {
        let tri = Triangulation::k13n586();
        let w = edge_weights(&coordinates(coeffs(1, 0)), &tri).unwrap();
        assert_eq!(w.0, [2, 4, 2, 4, 2, 0, 2, 2, 4, 2]);
        assert_eq!(w.total(), 24);
    }

    #[test]
    fn weight_disagreement_is_reported() {
        let tri = Triangulation::k13n586();
        let mut nc = coordinates(coeffs(1, 1));
        nc.tet_mut(1).tri[2] += 5;
        assert!(matches!(edge_weights(&nc, &tri), Err(SurfaceError::WeightDisagreement { .. })));
    }

    #[test]
    fn f_and_g_are_connected_genus_two() {
        let tri = Triangulation::k13n586();
        for c in [coeffs(1, 0), coeffs(0, 1)] {
            let e = genus_census_entry(c, &tri).unwrap();
            assert_eq!(e, GenusEntry { components: 1, euler_characteristic: -2, genera: vec![2] });
        }
    }

    #[test]
    fn small_component_counts() {
        let tri = Triangulation::k13n586();
        let count = |u, v| glue_components(&coordinates(coeffs(u, v)), &tri).unwrap().count();
        assert_eq!(count(2, 2), 2);
        assert_eq!(count(4, 6), 2);
        assert_eq!(count(3, 2), 1);
        assert_eq!(count(6, 9), 3);
    }

    #[test]
    fn genus_of_multiples() {
        let tri = Triangulation::k13n586();
        let e = genus_census_entry(coeffs(1, 1), &tri).unwrap();
        assert_eq!(e, GenusEntry { components: 1, euler_characteristic: -4, genera: vec![3] });
        let e = genus_census_entry(coeffs(2, 2), &tri).unwrap();
        assert_eq!(e, GenusEntry { components: 2, euler_characteristic: -8, genera: vec![3, 3] });
    }

    #[test]
    fn euler_characteristic_by_both_routes() {
        let tri = Triangulation::k13n586();
        let nc = coordinates(coeffs(2, 3));
        assert_eq!(euler_characteristic(&nc, &tri).unwrap(), -10);
        let parts = glue_components(&nc, &tri).unwrap();
        assert_eq!(parts.components.iter().map(|c| c.euler_characteristic).sum::<i64>(), -10);
    }

    #[test]
    fn disk_limit_is_enforced() {
        let tri = Triangulation::k13n586();
        let nc = coordinates(coeffs(100, 100));
        assert!(matches!(
            glue_components_with_limit(&nc, &tri, 10),
            Err(SurfaceError::TooManyDisks { .. })
        ));
    }

    #[test]
    fn disk_index_round_trips() {
        let nc = coordinates(coeffs(2, 1));
        let idx = DiskIndex::new(&nc);
        for i in 0..idx.total() {
            assert_eq!(idx.index(idx.disk(i)), i);
        }
    }

    #[test]
    fn record_serializes() {
        let tri = Triangulation::k13n586();
        let rec = SurfaceRecord::new(coeffs(1, 0), &tri, Some(1)).unwrap();
        assert_eq!(rec.total, 24);
        assert_eq!(rec.chi, -2);
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(
            json,
            r#"{"u":1,"v":0,"weights":[2,4,2,4,2,0,2,2,4,2],"total":24,"components":1,"chi":-2}"#
        );
    }
}
