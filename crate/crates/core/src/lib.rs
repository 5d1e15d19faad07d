//! Exact cycle/cocycle projection algebra for oriented graphs.
//!
//! A spanning tree splits the edges of a connected oriented graph into
//! cochords (tree edges) and chords. The fundamental cycles and cocycles it
//! induces give a pair of complementary oblique projections `P` and `Q`,
//! whose Gram matrices `K` and `*K` share their spectrum away from 1.

pub mod basis;
pub mod cli;
pub mod duality;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod ks;
pub mod lab;
pub mod laplacian;
pub mod linalg;
pub mod poly;
pub mod projections;
pub mod random;
pub mod report;
pub mod suite;
pub mod thermo;

pub use basis::{build_basis, fundamental_cocycle, fundamental_cycle, verify_basis, BasisBundle};
pub use error::{Error, Result};
pub use graph::{
    default_spanning_tree, enumerate_spanning_trees, incidence_matrix, load_graph, validate_tree,
    GraphDocument, OrientedGraph, TreeSelection,
};
pub use linalg::{Rational, RationalMatrix};
pub use poly::{IntPolynomial, Polynomial};
pub use projections::{build_projections, verify_projection_identities, verify_two_form, ProjectionPair};
pub use report::VerificationReport;
