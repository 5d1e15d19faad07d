//! Seeded generators for graphs, trees and states used by the property
//! suites.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{validate_tree, OrientedGraph, TreeSelection, UnionFind};
use crate::linalg::Rational;

fn build(n: usize, mut edges: Vec<(usize, usize)>, rng: &mut impl Rng) -> OrientedGraph {
    edges.shuffle(rng);
    OrientedGraph::new(
        (1..=n).map(|i| format!("v{i}")),
        edges
            .iter()
            .enumerate()
            .map(|(k, &(t, h))| (format!("e{}", k + 1), format!("v{}", t + 1), format!("v{}", h + 1))),
    )
    .expect("generated graphs are connected")
}

/// Random spanning tree on `n` vertices as `(tail, head)` pairs with random
/// orientation.
fn random_tree_edges(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    (1..n)
        .map(|i| {
            let (a, b) = (order[i], order[rng.random_range(0..i)]);
            if rng.random_bool(0.5) {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

/// Connected multigraph with `1..=max_v` vertices and at most `max_e` edges;
/// parallel edges and self-loops occur.
pub fn random_connected_multigraph(rng: &mut impl Rng, max_v: usize, max_e: usize) -> OrientedGraph {
    let max_v = max_v.clamp(1, max_e + 1);
    let n = rng.random_range(1..=max_v);
    let mut edges = random_tree_edges(n, rng);
    let total = rng.random_range(n - 1..=max_e.max(n - 1));
    while edges.len() < total {
        let t = rng.random_range(0..n);
        let h = if rng.random_bool(0.15) { t } else { rng.random_range(0..n) };
        edges.push((t, h));
    }
    build(n, edges, rng)
}

/// Connected simple graph with `2..=max_v` vertices.
pub fn random_simple_graph(rng: &mut impl Rng, max_v: usize) -> OrientedGraph {
    let n = rng.random_range(2..=max_v.max(2));
    let mut edges = random_tree_edges(n, rng);
    let adjacent: HashSet<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let density: f64 = rng.random_range(0.0..0.7);
    for a in 0..n {
        for b in a + 1..n {
            if !adjacent.contains(&(a, b)) && rng.random_bool(density) {
                edges.push(if rng.random_bool(0.5) { (a, b) } else { (b, a) });
            }
        }
    }
    build(n, edges, rng)
}

/// A tree whose only chords are self-loops, so every edge is a bridge or a
/// loop.
pub fn random_loop_bridge_graph(rng: &mut impl Rng, max_v: usize, max_loops: usize) -> OrientedGraph {
    let n = rng.random_range(1..=max_v.max(1));
    let mut edges = random_tree_edges(n, rng);
    for _ in 0..rng.random_range(0..=max_loops) {
        let v = rng.random_range(0..n);
        edges.push((v, v));
    }
    build(n, edges, rng)
}

/// Uniformly shuffled Kruskal spanning tree.
pub fn random_spanning_tree(rng: &mut impl Rng, g: &OrientedGraph) -> TreeSelection {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    let mut uf = UnionFind::new(g.vertex_count());
    let chosen: Vec<&str> = order
        .into_iter()
        .filter(|&e| {
            let edge = &g.edges()[e];
            uf.union(edge.tail, edge.head)
        })
        .map(|e| g.edge_id(e))
        .collect();
    validate_tree(g, &chosen).expect("kruskal yields a spanning tree")
}

/// Small random rationals `p/q` with `|p| ≤ 6`, `1 ≤ q ≤ 5`.
pub fn random_rationals(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::new(rng.random_range(-6i64..=6).into(), rng.random_range(1i64..=5).into()))
        .collect()
}
