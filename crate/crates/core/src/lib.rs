//! Exact construction and certification of graph associahedra.
//!
//! Given a finite simple graph, this crate enumerates its tubes and
//! tubings, realizes the graph associahedron with exact integer vertex
//! coordinates, builds the matching truncation halfspace system, and
//! certifies with exact rational arithmetic that the two descriptions
//! define the same simple polytope.
//!
//! The modules mirror that pipeline:
//!
//! * [`graph`]: graphs, bitmask node sets, families, connectivity;
//! * [`tubing`]: tubes, compatibility, tubings, flips, face counts;
//! * [`realize`]: weight schemes, vertex coordinates, halfspaces;
//! * [`verify`]: rational solvers, the brute-force vertex oracle, and the
//!   aggregated verification report.

pub mod graph;
pub mod realize;
pub mod tubing;
pub mod verify;

pub use graph::{Family, Graph, GraphError, NodeSet};
pub use realize::{
    build_hrep, check_weight_condition, compute_coordinates, realize, HRep, Point, RealizeError,
    RealizedVertex, WeightScheme,
};
pub use tubing::{
    are_compatible, classify_pair, enumerate_maximal_tubings, enumerate_tubes, enumerate_tubings,
    f_vector, flip_neighbors, is_tube, is_valid_tubing, PairClass, Tube, Tubing, TubingError,
};
pub use verify::{
    euler_check, full_report, solve_affine, tight_set, AffineSolution, CheckStatus,
    VerificationReport, VerifyCaps,
};
