//! Connected components of the normal surfaces uF + vG in a ten-tetrahedron
//! triangulation of the K13n586 exterior, counted three ways: by gluing
//! elementary disks, by union-find on a compiled interval pairing system,
//! and by reducing that system to a Euclid-style recursion.

pub mod census;
pub mod compiler;
pub mod dsu;
pub mod pairing;
pub mod reduction;
pub mod surface;
pub mod triangulation;

pub use census::{census, totient, CensusError, CensusMethod, CensusRow};
pub use compiler::{compile, compile_surface, locate_carriers, Carrier, CarrierMap, CompileError, PointIndexing, EDGE_ORDER};
pub use pairing::{Interval, Orientation, Pairing, PairingError, PairingSystem, Point, TaggedPairing};
pub use reduction::{
    build_fgh, claim1_reduce, claim1_reduce_observed, claim2_run, claim2_run_observed, claim2_widths,
    components_via_reduction, normal_form, Claim1Outcome, Claim1Step, Claim2Run, Claim2Step, ReductionError,
};
pub use surface::{
    check_matching, coordinates, edge_weights, euler_characteristic, genus_census_entry, glue_components,
    Components, EdgeWeights, NormalCoordinates, SurfaceCoefficients, SurfaceError, SurfaceRecord, TetCoordinates,
};
pub use triangulation::{validate, EdgeClass, FaceSlot, OrientedEdge, Perm4, Triangulation, Violation};
