//! Graph Laplacian and the cone construction.
//!
//! Adding an apex joined to every vertex and taking the star of apex edges
//! as spanning tree turns the cocycle Gramian into `Δ + I`.

use crate::basis::build_basis;
use crate::error::{Error, Result};
use crate::graph::{enumerate_spanning_trees, incidence_matrix, validate_tree, OrientedGraph, TreeSelection, ENUMERATION_LIMIT};
use crate::ks::gram;
use crate::linalg::{rat, Rational, RationalMatrix};
use crate::report::VerificationReport;

/// `Δ = ∂∂ᵀ` of a simple graph.
pub fn laplacian(g: &OrientedGraph) -> Result<RationalMatrix> {
    if let Some(why) = g.simple_violation() {
        return Err(Error::NotSimple(why));
    }
    let d = incidence_matrix(g);
    Ok(&d * &d.transpose())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeResult {
    pub augmented: OrientedGraph,
    pub apex: String,
    /// Apex edges, one per original vertex, in vertex order.
    pub star_tree: TreeSelection,
    /// Original vertex index → cochord index of its apex edge.
    pub vertex_map: Vec<usize>,
}

fn fresh(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut id = base.to_string();
    while taken(&id) {
        id.push('\'');
    }
    id
}

/// Adds an apex `v0` with edges `v0 → v` for every vertex `v`.
pub fn cone_augment(g: &OrientedGraph) -> Result<ConeResult> {
    if let Some(why) = g.simple_violation() {
        return Err(Error::NotSimple(why));
    }
    let apex = fresh("v0", |s| g.vertex(s).is_some());
    let apex_edges: Vec<String> = {
        let mut out: Vec<String> = Vec::new();
        for v in g.vertices() {
            let id = fresh(&format!("{apex}{v}"), |s| g.edge(s).is_some() || out.iter().any(|o| o == s));
            out.push(id);
        }
        out
    };
    let vertices = std::iter::once(apex.clone()).chain(g.vertices().iter().cloned());
    let edges = g
        .edges()
        .iter()
        .map(|e| (e.id.clone(), g.vertex_id(e.tail).to_string(), g.vertex_id(e.head).to_string()))
        .chain(
            apex_edges
                .iter()
                .zip(g.vertices())
                .map(|(id, v)| (id.clone(), apex.clone(), v.clone())),
        );
    let augmented = OrientedGraph::new(vertices, edges)?;
    let star_tree = validate_tree(&augmented, &apex_edges)?;
    let vertex_map = apex_edges
        .iter()
        .map(|id| star_tree.canonical_index(augmented.edge(id).expect("apex edge exists")))
        .collect();
    Ok(ConeResult {
        augmented,
        apex,
        star_tree,
        vertex_map,
    })
}

/// Checks `*K̃ = Δ + I` exactly, together with the basic Laplacian
/// properties and, for small cones, the spanning tree count of `G̃`.
pub fn laplacian_shift_check(g: &OrientedGraph) -> Result<VerificationReport> {
    let delta = laplacian(g)?;
    let cone = cone_augment(g)?;
    let b = build_basis(&cone.augmented, &cone.star_tree)?;
    let kstar = gram(b.cocycles());
    let n = g.vertex_count();
    let kstar = kstar.select(&cone.vertex_map, &cone.vertex_map);
    let mut r = VerificationReport::new("laplacian");
    r.record_with(
        "cone size",
        cone.augmented.edge_count() == g.edge_count() + n
            && cone.augmented.cyclomatic_number() == g.edge_count(),
        format!("|E~| = {}, |C~| = {}", cone.augmented.edge_count(), cone.augmented.cyclomatic_number()),
    );
    r.matrices_equal("*K~ = Delta + I", &kstar, &(&delta + &RationalMatrix::identity(n)));
    r.record("Delta symmetric", delta.is_symmetric());
    let row_sums_zero = (0..n).all(|i| delta.row(i).iter().sum::<Rational>() == rat(0));
    r.record("Delta rows sum to zero", row_sums_zero);
    r.record_with("Delta has rank |V|-1", delta.rank() + 1 == n, format!("rank {}", delta.rank()));
    if cone.augmented.edge_count() <= ENUMERATION_LIMIT {
        let count = enumerate_spanning_trees(&cone.augmented)?;
        let det = kstar.det()?;
        r.record_with(
            "det *K~ = #trees of cone",
            det == Rational::from_integer(count.into()),
            format!("{det} vs {count}"),
        );
    }
    Ok(r)
}
