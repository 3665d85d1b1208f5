//! The 10-tetrahedron one-vertex triangulation of the K13n586 exterior.
//!
//! Every tetrahedron carries the vertex order 0..3. `Fk` is the face opposite
//! vertex `k` and `Eij` the edge from vertex `i` to vertex `j`. A gluing of face
//! `Fk` of `tetA` to `tetB` is a permutation sending vertex `i` of `tetA` to
//! vertex `perm[i]` of `tetB`, so the target face is `F(perm[k])`.
//!
//! All indices are 0-based.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::dsu::DisjointSets;

pub const TET_COUNT: usize = 10;
pub const EDGE_CLASS_COUNT: usize = 10;

/// The six edges of a tetrahedron as vertex pairs.
pub const TET_EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("{images:?} is not a permutation of 0..3")]
    InvalidPermutation { images: [u8; 4] },
    #[error("orientation conflict in the edge class containing {edge}")]
    OrientationConflict { edge: OrientedEdge },
    #[error("derived edge class {{{members}}} matches no reference class")]
    UnmatchedEdgeClass { members: String },
    #[error("gluings are not an involution at {slot}")]
    NotInvolution { slot: FaceSlot },
}

/// A permutation of the four vertices of a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Result<Self, TriangulationError> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return Err(TriangulationError::InvalidPermutation { images });
            }
            seen[i as usize] = true;
        }
        Ok(Perm4(images))
    }

    #[inline]
    pub fn apply(self, vertex: u8) -> u8 {
        self.0[vertex as usize]
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(self, first: Perm4) -> Perm4 {
        Perm4([0, 1, 2, 3].map(|i| self.apply(first.apply(i))))
    }

    pub fn is_identity(self) -> bool {
        self == Perm4::IDENTITY
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// A face `F{face}` of tetrahedron `tet`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FaceSlot {
    pub tet: usize,
    pub face: u8,
}

impl FaceSlot {
    pub fn new(tet: usize, face: u8) -> Self {
        FaceSlot { tet, face }
    }

    /// The three vertices of the face, ascending.
    pub fn vertices(self) -> [u8; 3] {
        let mut out = [0u8; 3];
        let mut n = 0;
        for v in 0..4u8 {
            if v != self.face {
                out[n] = v;
                n += 1;
            }
        }
        out
    }
}

impl fmt::Display for FaceSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(tet{}, F{})", self.tet, self.face)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceGluing {
    pub source: FaceSlot,
    pub target: usize,
    pub perm: Perm4,
}

impl FaceGluing {
    pub fn target_slot(&self) -> FaceSlot {
        FaceSlot::new(self.target, self.perm.apply(self.source.face))
    }
}

/// Edge `E{from}{to}` of tetrahedron `tet`, oriented from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrientedEdge {
    pub tet: usize,
    pub from: u8,
    pub to: u8,
}

impl OrientedEdge {
    pub fn new(tet: usize, from: u8, to: u8) -> Self {
        debug_assert!(from != to && from < 4 && to < 4);
        OrientedEdge { tet, from, to }
    }

    pub fn reversed(self) -> Self {
        OrientedEdge::new(self.tet, self.to, self.from)
    }

    fn slot_index(self) -> usize {
        self.tet * 12 + self.from as usize * 3 + (self.to as usize - (self.to > self.from) as usize)
    }
}

impl fmt::Display for OrientedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}{}:tet{}", self.from, self.to, self.tet)
    }
}

/// One edge of the triangulation: every tetrahedron edge identified to it,
/// each oriented consistently with the class orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    pub label: usize,
    pub members: Vec<OrientedEdge>,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.members.len()
    }

    /// The representative whose orientation defines the class orientation.
    pub fn canonical(&self) -> OrientedEdge {
        self.members[0]
    }
}

/// Where an oriented tetrahedron edge sits in the edge classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeLocation {
    pub class: usize,
    /// `true` when the oriented edge runs along the class orientation.
    pub forward: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CellCounts {
    pub tetrahedra: usize,
    pub face_classes: usize,
    pub edge_classes: usize,
    pub vertex_classes: usize,
}

// Face gluings: row = tetrahedron, column = face F0..F3, entry = (target tet, permutation).
const GLUINGS: [[(usize, [u8; 4]); 4]; TET_COUNT] = [
    [(2, [0, 1, 3, 2]), (1, [0, 1, 3, 2]), (7, [0, 2, 1, 3]), (5, [2, 1, 0, 3])],
    [(4, [3, 0, 1, 2]), (0, [0, 1, 3, 2]), (6, [3, 1, 2, 0]), (3, [0, 1, 3, 2])],
    [(0, [0, 1, 3, 2]), (5, [0, 2, 1, 3]), (3, [1, 3, 0, 2]), (9, [3, 1, 2, 0])],
    [(2, [2, 0, 3, 1]), (9, [0, 1, 3, 2]), (1, [0, 1, 3, 2]), (8, [2, 1, 0, 3])],
    [(7, [3, 1, 2, 0]), (8, [0, 1, 3, 2]), (9, [3, 1, 2, 0]), (1, [1, 2, 3, 0])],
    [(7, [0, 1, 3, 2]), (6, [0, 1, 3, 2]), (2, [0, 2, 1, 3]), (0, [2, 1, 0, 3])],
    [(9, [3, 0, 1, 2]), (5, [0, 1, 3, 2]), (1, [3, 1, 2, 0]), (8, [0, 1, 3, 2])],
    [(5, [0, 1, 3, 2]), (0, [0, 2, 1, 3]), (8, [1, 3, 0, 2]), (4, [3, 1, 2, 0])],
    [(7, [2, 0, 3, 1]), (4, [0, 1, 3, 2]), (6, [0, 1, 3, 2]), (3, [2, 1, 0, 3])],
    [(2, [3, 1, 2, 0]), (3, [0, 1, 3, 2]), (4, [3, 1, 2, 0]), (6, [1, 2, 3, 0])],
];

// Edge classes e0..e9 as (tet, from, to); the first entry fixes the class orientation.
const REFERENCE_EDGES: [&[(usize, u8, u8)]; EDGE_CLASS_COUNT] = [
    &[(0, 1, 0), (4, 2, 3), (5, 1, 2), (7, 2, 0), (7, 1, 3), (8, 3, 2)],
    &[(0, 2, 0), (1, 3, 0), (5, 0, 2), (6, 0, 3)],
    &[(0, 1, 2), (2, 2, 0), (2, 1, 3), (3, 3, 2), (5, 1, 0), (9, 2, 3)],
    &[
        (0, 3, 0),
        (1, 0, 1),
        (1, 2, 0),
        (3, 0, 1),
        (3, 3, 0),
        (6, 3, 1),
        (7, 3, 0),
        (8, 2, 1),
        (9, 2, 0),
    ],
    &[(0, 3, 1), (2, 2, 1), (5, 2, 3), (6, 3, 2), (7, 3, 2), (9, 2, 1)],
    &[(0, 2, 3), (1, 3, 2), (2, 3, 2), (4, 2, 1), (5, 3, 1), (7, 2, 1)],
    &[(1, 1, 2), (2, 0, 1), (3, 1, 3), (4, 0, 1), (9, 3, 1)],
    // tet2 is oriented E30 here: the tet2 F1 and F2 gluings carry it onto
    // E30:tet5 and E21:tet3. Listings that print E03:tet2 contradict the gluings.
    &[
        (1, 3, 1),
        (2, 3, 0),
        (3, 2, 1),
        (4, 2, 0),
        (5, 3, 0),
        (6, 0, 1),
        (6, 2, 0),
        (8, 0, 1),
        (8, 3, 0),
    ],
    &[(3, 2, 0), (4, 0, 3), (8, 0, 2), (9, 3, 0)],
    &[(4, 3, 1), (6, 1, 2), (7, 0, 1), (8, 1, 3), (9, 0, 1)],
];

/// Edge classes in reference order and orientation.
pub fn reference_edge_classes() -> Vec<EdgeClass> {
    REFERENCE_EDGES
        .iter()
        .enumerate()
        .map(|(label, members)| EdgeClass {
            label,
            members: members.iter().map(|&(t, a, b)| OrientedEdge::new(t, a, b)).collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[FaceGluing; 4]>,
    edge_classes: Vec<EdgeClass>,
    edge_lookup: HashMap<OrientedEdge, EdgeLocation>,
}

impl Triangulation {
    /// The triangulation of the K13n586 exterior, with edge classes labelled
    /// e0..e9 in reference order.
    pub fn k13n586() -> Triangulation {
        let gluings = GLUINGS
            .iter()
            .enumerate()
            .map(|(tet, row)| {
                let mut faces = [FaceGluing {
                    source: FaceSlot::new(tet, 0),
                    target: 0,
                    perm: Perm4::IDENTITY,
                }; 4];
                for (face, &(target, images)) in row.iter().enumerate() {
                    faces[face] = FaceGluing {
                        source: FaceSlot::new(tet, face as u8),
                        target,
                        perm: Perm4::new(images).expect("static gluing table"),
                    };
                }
                faces
            })
            .collect();
        let mut tri = Triangulation {
            gluings,
            edge_classes: Vec::new(),
            edge_lookup: HashMap::new(),
        };
        let classes = compute_edge_classes(&tri).expect("static triangulation is consistent");
        tri.set_edge_classes(classes);
        tri
    }

    fn set_edge_classes(&mut self, classes: Vec<EdgeClass>) {
        let mut lookup = HashMap::new();
        for class in &classes {
            for &m in &class.members {
                lookup.insert(m, EdgeLocation { class: class.label, forward: true });
                lookup.insert(m.reversed(), EdgeLocation { class: class.label, forward: false });
            }
        }
        self.edge_classes = classes;
        self.edge_lookup = lookup;
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, slot: FaceSlot) -> &FaceGluing {
        &self.gluings[slot.tet][slot.face as usize]
    }

    pub fn gluings(&self) -> impl Iterator<Item = &FaceGluing> {
        self.gluings.iter().flatten()
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edge_classes
    }

    pub fn edge_class(&self, label: usize) -> &EdgeClass {
        &self.edge_classes[label]
    }

    /// Locates an oriented tetrahedron edge in the stored edge classes.
    pub fn locate_edge(&self, edge: OrientedEdge) -> Option<EdgeLocation> {
        self.edge_lookup.get(&edge).copied()
    }

    /// A copy with one gluing overwritten. Edge classes are left as they were,
    /// so `validate` can report the damage.
    pub fn with_gluing(&self, slot: FaceSlot, target: usize, perm: Perm4) -> Triangulation {
        let mut out = self.clone();
        out.gluings[slot.tet][slot.face as usize] = FaceGluing { source: slot, target, perm };
        out
    }

    /// One representative slot per face class: the lexicographically smaller side.
    pub fn face_class_representatives(&self) -> Vec<FaceSlot> {
        self.gluings()
            .filter(|g| g.source <= g.target_slot())
            .map(|g| g.source)
            .collect()
    }

    /// The slot a face class is listed under: the smaller of the two sides of
    /// the gluing, with the permutation mapping `slot`'s vertices to it.
    pub fn canonical_side(&self, slot: FaceSlot) -> (FaceSlot, Perm4) {
        let g = self.gluing(slot);
        let other = g.target_slot();
        if slot <= other {
            (slot, Perm4::IDENTITY)
        } else {
            (other, g.perm)
        }
    }

    pub fn cell_counts(&self) -> CellCounts {
        let n = self.tet_count();
        let mut vertices = DisjointSets::new(4 * n);
        for g in self.gluings() {
            if g.target >= n {
                continue;
            }
            for v in g.source.vertices() {
                vertices.union(4 * g.source.tet + v as usize, 4 * g.target + g.perm.apply(v) as usize);
            }
        }
        let mut faces = DisjointSets::new(4 * n);
        for g in self.gluings() {
            if g.target < n {
                let t = g.target_slot();
                faces.union(4 * g.source.tet + g.source.face as usize, 4 * t.tet + t.face as usize);
            }
        }
        CellCounts {
            tetrahedra: n,
            face_classes: faces.count(),
            edge_classes: self.edge_classes.len(),
            vertex_classes: vertices.count(),
        }
    }

    /// Plain-text listing of gluings and edge classes.
    pub fn to_table(&self) -> String {
        let mut out = String::from("# face gluings: tet | F0 F1 F2 F3 as target (permutation)\n");
        for (tet, row) in self.gluings.iter().enumerate() {
            out.push_str(&format!("tet{tet}"));
            for g in row {
                out.push_str(&format!(" | tet{} {}", g.target, g.perm));
            }
            out.push('\n');
        }
        out.push_str("# edge classes\n");
        for class in &self.edge_classes {
            let members: Vec<String> = class.members.iter().map(|m| m.to_string()).collect();
            out.push_str(&format!("e{} ({}) {}\n", class.label, class.degree(), members.join(" ")));
        }
        out
    }
}

/// Edge classes by transitive closure of the face gluings, in discovery order.
/// Each class is oriented by its first-discovered member.
pub fn derive_edge_classes(tri: &Triangulation) -> Result<Vec<Vec<OrientedEdge>>, TriangulationError> {
    let n = tri.tet_count();
    let mut sets = DisjointSets::new(12 * n);
    for g in tri.gluings() {
        if g.target >= n {
            return Err(TriangulationError::NotInvolution { slot: g.source });
        }
        let [a, b, c] = g.source.vertices();
        for (i, j) in [(a, b), (a, c), (b, c), (b, a), (c, a), (c, b)] {
            let here = OrientedEdge::new(g.source.tet, i, j);
            let there = OrientedEdge::new(g.target, g.perm.apply(i), g.perm.apply(j));
            if there.from == there.to {
                return Err(TriangulationError::NotInvolution { slot: g.source });
            }
            sets.union(here.slot_index(), there.slot_index());
        }
    }
    let mut classes: Vec<Vec<OrientedEdge>> = Vec::new();
    let mut class_of_root: HashMap<usize, usize> = HashMap::new();
    for tet in 0..n {
        for (i, j) in TET_EDGES {
            let edge = OrientedEdge::new(tet, i, j);
            let (fwd, back) = (sets.find(edge.slot_index()), sets.find(edge.reversed().slot_index()));
            if fwd == back {
                return Err(TriangulationError::OrientationConflict { edge });
            }
            // Orient by whichever root was seen first.
            if let Some(&k) = class_of_root.get(&fwd) {
                classes[k].push(edge);
            } else if let Some(&k) = class_of_root.get(&back) {
                classes[k].push(edge.reversed());
            } else {
                class_of_root.insert(fwd, classes.len());
                classes.push(vec![edge]);
            }
        }
    }
    Ok(classes)
}

/// Derives the edge classes and labels them against the reference listing by
/// membership. Members come out in reference order, each carrying the
/// orientation the gluings give it relative to the class's first member.
pub fn compute_edge_classes(tri: &Triangulation) -> Result<Vec<EdgeClass>, TriangulationError> {
    let derived = derive_edge_classes(tri)?;
    let reference = reference_edge_classes();
    let mut labelled: Vec<Option<EdgeClass>> = vec![None; reference.len()];
    for class in derived {
        let unmatched = || TriangulationError::UnmatchedEdgeClass {
            members: class.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" "),
        };
        let r = reference
            .iter()
            .find(|r| class.contains(&r.canonical()) || class.contains(&r.canonical().reversed()))
            .ok_or_else(unmatched)?;
        if labelled[r.label].is_some() || class.len() != r.degree() {
            return Err(unmatched());
        }
        let oriented: Vec<OrientedEdge> = if class.contains(&r.canonical()) {
            class.clone()
        } else {
            class.iter().map(|e| e.reversed()).collect()
        };
        let members = r
            .members
            .iter()
            .map(|&m| {
                if oriented.contains(&m) {
                    Ok(m)
                } else if oriented.contains(&m.reversed()) {
                    Ok(m.reversed())
                } else {
                    Err(unmatched())
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        labelled[r.label] = Some(EdgeClass { label: r.label, members });
    }
    labelled
        .into_iter()
        .enumerate()
        .map(|(label, c)| {
            c.ok_or_else(|| TriangulationError::UnmatchedEdgeClass {
                members: format!("<no derived class for e{label}>"),
            })
        })
        .collect()
}

/// A violated triangulation invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TargetOutOfRange { slot: FaceSlot, target: usize },
    SelfGlued { slot: FaceSlot },
    NotInvolution { slot: FaceSlot, returns_to: FaceSlot, composite: Perm4 },
    Edges(TriangulationError),
    EdgeClassMismatch { label: usize, expected: String, derived: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TargetOutOfRange { slot, target } => {
                write!(f, "{slot}: glued to nonexistent tet{target}")
            }
            Violation::SelfGlued { slot } => write!(f, "{slot}: glued to itself"),
            Violation::NotInvolution { slot, returns_to, composite } => write!(
                f,
                "{slot}: gluing is not an involution (round trip lands on {returns_to} with {composite})"
            ),
            Violation::Edges(e) => write!(f, "edge classes: {e}"),
            Violation::EdgeClassMismatch { label, expected, derived } => {
                write!(f, "e{label}: expected {{{expected}}}, derived {{{derived}}}")
            }
        }
    }
}

/// Checks every triangulation invariant. An empty report means valid.
pub fn validate(tri: &Triangulation) -> Vec<Violation> {
    let n = tri.tet_count();
    let mut report = Vec::new();
    for g in tri.gluings() {
        if g.target >= n {
            report.push(Violation::TargetOutOfRange { slot: g.source, target: g.target });
            continue;
        }
        let there = g.target_slot();
        if there == g.source {
            report.push(Violation::SelfGlued { slot: g.source });
            continue;
        }
        let back = tri.gluing(there);
        let returns_to = back.target_slot();
        let composite = back.perm.after(g.perm);
        if back.target != g.source.tet || returns_to != g.source || !composite.is_identity() {
            report.push(Violation::NotInvolution { slot: g.source, returns_to, composite });
        }
    }
    if !report.is_empty() {
        return report;
    }
    match compute_edge_classes(tri) {
        Err(e) => report.push(Violation::Edges(e)),
        Ok(derived) => {
            let reference = reference_edge_classes();
            let listing = |c: &EdgeClass| {
                c.members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ")
            };
            for (d, r) in derived.iter().zip(&reference) {
                if d != r {
                    report.push(Violation::EdgeClassMismatch {
                        label: r.label,
                        expected: listing(r),
                        derived: listing(d),
                    });
                }
            }
            for (d, s) in derived.iter().zip(tri.edge_classes()) {
                if d != s && !report.iter().any(|v| matches!(v, Violation::EdgeClassMismatch { label, .. } if *label == d.label)) {
                    report.push(Violation::EdgeClassMismatch {
                        label: d.label,
                        expected: listing(s),
                        derived: listing(d),
                    });
                }
            }
        }
    }
    report
}
