//! Small reference graphs shipped with the crate.
//!
//! The JSON sources live in `fixtures/` next to the crate manifest and are
//! embedded at compile time.

use crate::graph::{load_graph, GraphDocument, OrientedGraph};

pub const APPENDIX_B_JSON: &str = include_str!("../fixtures/appendix_b.json");
pub const EDGE_JSON: &str = include_str!("../fixtures/edge.json");
pub const TRIANGLE_JSON: &str = include_str!("../fixtures/triangle.json");
pub const LOOP_JSON: &str = include_str!("../fixtures/loop.json");
pub const TRIANGLE_FACES_JSON: &str = include_str!("../fixtures/triangle_faces.json");
/// Currents and forces both equal to the cycle `e2 + e3 + e4` of [`g_reference`].
pub const STATE_C4_JSON: &str = include_str!("../fixtures/state_c4.json");
pub const STATE_E1_JSON: &str = include_str!("../fixtures/state_e1.json");
pub const STATE_ZERO_JSON: &str = include_str!("../fixtures/state_zero.json");

fn doc(text: &str) -> GraphDocument {
    GraphDocument::from_json(text).expect("bundled fixture parses")
}

fn graph(text: &str) -> OrientedGraph {
    load_graph(&doc(text)).expect("bundled fixture is a valid graph")
}

/// Four vertices, five edges: the square v1→v2→v4→v3→v1 (edges e1, e4, e3,
/// e5) with the diagonal e2: v3→v2. Carries tree {e1,e2,e3} and a planar
/// rotation system.
pub fn reference_document() -> GraphDocument {
    doc(APPENDIX_B_JSON)
}

pub fn g_reference() -> OrientedGraph {
    graph(APPENDIX_B_JSON)
}

/// Single edge a→b.
pub fn edge_document() -> GraphDocument {
    doc(EDGE_JSON)
}

pub fn g_edge() -> OrientedGraph {
    graph(EDGE_JSON)
}

/// Directed triangle v1→v2→v3→v1.
pub fn triangle_document() -> GraphDocument {
    doc(TRIANGLE_JSON)
}

pub fn g_tri() -> OrientedGraph {
    graph(TRIANGLE_JSON)
}

/// Edge a→b plus a self-loop at a.
pub fn loop_document() -> GraphDocument {
    doc(LOOP_JSON)
}

pub fn g_loop() -> OrientedGraph {
    graph(LOOP_JSON)
}
