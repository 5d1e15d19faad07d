//! Fundamental cycles and cocycles generated by a spanning tree.
//!
//! All vectors are expressed in the canonical edge order of the
//! [`TreeSelection`]: cochords first, then chords.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{incidence_matrix, OrientedGraph, TreeSelection};
use crate::linalg::{dot_i64, RationalMatrix};
use crate::report::VerificationReport;

/// Integer edge vector in canonical order.
pub type EdgeVector = Vec<i64>;

/// A spanning tree choice with its fundamental cycle and cocycle bases.
#[derive(Clone, Debug)]
pub struct BasisBundle {
    graph: OrientedGraph,
    tree: TreeSelection,
    cycles: Vec<EdgeVector>,
    cocycles: Vec<EdgeVector>,
}

/// Spanning tree rooted at the first vertex.
struct RootedTree {
    /// `(parent vertex, edge to parent)` for every non-root vertex.
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
}

impl RootedTree {
    fn new(g: &OrientedGraph, t: &TreeSelection) -> Self {
        let n = g.vertex_count();
        let adj = tree_adjacency(g, t, None);
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        Self { parent, depth }
    }

    /// Signed edges along the tree path from `from` to `to`; `+1` when the
    /// walk follows the edge's orientation.
    fn path(&self, g: &OrientedGraph, from: usize, to: usize) -> Vec<(usize, i64)> {
        let mut up = Vec::new();
        let mut down = Vec::new();
        let (mut a, mut b) = (from, to);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let (p, e) = self.parent[a].expect("non-root vertex has a parent");
                up.push((e, if g.edges()[e].tail == a { 1 } else { -1 }));
                a = p;
            } else {
                let (p, e) = self.parent[b].expect("non-root vertex has a parent");
                down.push((e, if g.edges()[e].tail == p { 1 } else { -1 }));
                b = p;
            }
        }
        up.extend(down.into_iter().rev());
        up
    }
}

fn tree_adjacency(
    g: &OrientedGraph,
    t: &TreeSelection,
    skip: Option<usize>,
) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for &e in t.cochords() {
        if Some(e) == skip {
            continue;
        }
        let edge = &g.edges()[e];
        adj[edge.tail].push((edge.head, e));
        adj[edge.head].push((edge.tail, e));
    }
    adj
}

/// Fundamental cycle of a chord: `+1` on the chord and the signed tree path
/// from its head back to its tail. A self-loop is its own cycle.
pub fn fundamental_cycle(g: &OrientedGraph, t: &TreeSelection, chord: &str) -> Result<EdgeVector> {
    let e = g.edge(chord).ok_or_else(|| Error::UnknownEdge(chord.to_string()))?;
    if t.contains(e) {
        return Err(Error::NotAChord(chord.to_string()));
    }
    Ok(cycle_of(g, t, &RootedTree::new(g, t), e))
}

fn cycle_of(g: &OrientedGraph, t: &TreeSelection, rooted: &RootedTree, chord: usize) -> EdgeVector {
    let mut v = vec![0; g.edge_count()];
    v[t.canonical_index(chord)] = 1;
    let edge = &g.edges()[chord];
    for (e, s) in rooted.path(g, edge.head, edge.tail) {
        v[t.canonical_index(e)] += s;
    }
    v
}

/// Fundamental cocycle of a cochord: the cut between the component holding
/// the cochord's tail (source) and the one holding its head (sink), oriented
/// from source to sink.
pub fn fundamental_cocycle(
    g: &OrientedGraph,
    t: &TreeSelection,
    cochord: &str,
) -> Result<EdgeVector> {
    let e = g.edge(cochord).ok_or_else(|| Error::UnknownEdge(cochord.to_string()))?;
    if !t.contains(e) {
        return Err(Error::NotACochord(cochord.to_string()));
    }
    Ok(cocycle_of(g, t, e))
}

fn cocycle_of(g: &OrientedGraph, t: &TreeSelection, cochord: usize) -> EdgeVector {
    let adj = tree_adjacency(g, t, Some(cochord));
    let mut source = vec![false; g.vertex_count()];
    let start = g.edges()[cochord].tail;
    source[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &(w, _) in &adj[v] {
            if !source[w] {
                source[w] = true;
                stack.push(w);
            }
        }
    }
    let mut v = vec![0; g.edge_count()];
    for (i, edge) in g.edges().iter().enumerate() {
        v[t.canonical_index(i)] = match (source[edge.tail], source[edge.head]) {
            (true, false) => 1,
            (false, true) => -1,
            _ => 0,
        };
    }
    v
}

/// Builds all fundamental cycles and cocycles and checks the basis
/// invariants exactly.
pub fn build_basis(g: &OrientedGraph, t: &TreeSelection) -> Result<BasisBundle> {
    let rooted = RootedTree::new(g, t);
    let cycles = t.chords().iter().map(|&e| cycle_of(g, t, &rooted, e)).collect();
    let cocycles = t.cochords().iter().map(|&e| cocycle_of(g, t, e)).collect();
    let bundle = BasisBundle {
        graph: g.clone(),
        tree: t.clone(),
        cycles,
        cocycles,
    };
    verify_basis(&bundle).into_result()?;
    Ok(bundle)
}

impl BasisBundle {
    pub fn graph(&self) -> &OrientedGraph {
        &self.graph
    }

    pub fn tree(&self) -> &TreeSelection {
        &self.tree
    }

    /// Fundamental cycles, one per chord in canonical order.
    pub fn cycles(&self) -> &[EdgeVector] {
        &self.cycles
    }

    /// Fundamental cocycles, one per cochord in canonical order.
    pub fn cocycles(&self) -> &[EdgeVector] {
        &self.cocycles
    }

    pub fn cochord_count(&self) -> usize {
        self.cocycles.len()
    }

    pub fn chord_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Canonical unit vector `e_i`.
    pub fn unit(&self, i: usize) -> EdgeVector {
        let mut v = vec![0; self.edge_count()];
        v[i] = 1;
        v
    }

    /// Incidence matrix with columns in canonical order.
    pub fn canonical_incidence(&self) -> RationalMatrix {
        let inc = incidence_matrix(&self.graph);
        let rows: Vec<usize> = (0..inc.rows()).collect();
        inc.select(&rows, self.tree.permutation())
    }

    /// Cycle vectors stacked as rows (`|C| × |E|`).
    pub fn cycle_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_i64_rows(&self.cycles, self.edge_count())
    }

    /// Cocycle vectors stacked as rows (`(|V|-1) × |E|`).
    pub fn cocycle_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_i64_rows(&self.cocycles, self.edge_count())
    }

    /// Converts a canonical-order vector to user edge order.
    pub fn to_user_order<T: Clone>(&self, v: &[T]) -> Vec<T> {
        (0..v.len())
            .map(|e| v[self.tree.canonical_index(e)].clone())
            .collect()
    }

    /// Converts a user-order vector to canonical order.
    pub fn to_canonical_order<T: Clone>(&self, v: &[T]) -> Vec<T> {
        self.tree.permutation().iter().map(|&e| v[e].clone()).collect()
    }
}

/// Exact checks of null-space and row-space membership, the orthogonality
/// table between chords, cochords, cycles and cocycles, and independence of
/// cycles+cochords and cocycles+chords.
pub fn verify_basis(b: &BasisBundle) -> VerificationReport {
    let mut r = VerificationReport::new("basis");
    let m = b.cochord_count();
    let n_e = b.edge_count();
    let inc = b.canonical_incidence();

    let not_null = b.cycles.iter().position(|c| {
        let col = RationalMatrix::from_i64_rows(std::slice::from_ref(c), n_e).transpose();
        !(&inc * &col).is_zero()
    });
    r.record_at("cycles in null space of incidence", not_null.map(|a| vec![a]));

    let base_rank = inc.rank();
    let outside_row_space = b.cocycles.iter().position(|c| {
        let mut rows = inc.to_i64_rows().expect("incidence is integral");
        rows.push(c.clone());
        RationalMatrix::from_i64_rows(&rows, n_e).rank() != base_rank
    });
    r.record_at("cocycles in row space of incidence", outside_row_space.map(|u| vec![u]));
    r.record_with(
        "incidence rank is |V|-1",
        base_rank == b.graph.vertex_count() - 1,
        format!("rank {base_rank}"),
    );

    let bad_entry = b
        .cycles
        .iter()
        .chain(&b.cocycles)
        .enumerate()
        .find_map(|(k, v)| v.iter().position(|x| x.abs() > 1).map(|i| vec![k, i]));
    r.record_at("entries in {-1, 0, 1}", bad_entry);

    let mut cross = None;
    'outer: for (a, ca) in b.cycles.iter().enumerate() {
        for (u, cu) in b.cocycles.iter().enumerate() {
            if dot_i64(ca, cu) != 0 {
                cross = Some(vec![u, m + a]);
                break 'outer;
            }
        }
    }
    r.record_at("<c_alpha|c_mu> = 0", cross);

    let chord_delta = (0..b.chord_count())
        .flat_map(|a| (0..b.chord_count()).map(move |a2| (a, a2)))
        .find(|&(a, a2)| b.cycles[a2][m + a] != i64::from(a == a2))
        .map(|(a, a2)| vec![m + a, m + a2]);
    r.record_at("<e_alpha|c_alpha'> = delta", chord_delta);

    let cochord_delta = (0..m)
        .flat_map(|u| (0..m).map(move |u2| (u, u2)))
        .find(|&(u, u2)| b.cocycles[u2][u] != i64::from(u == u2))
        .map(|(u, u2)| vec![u, u2]);
    r.record_at("<e_mu|c_mu'> = delta", cochord_delta);

    let mut cyc_cochord: Vec<EdgeVector> = b.cycles.clone();
    cyc_cochord.extend((0..m).map(|u| b.unit(u)));
    let rank1 = RationalMatrix::from_i64_rows(&cyc_cochord, n_e).rank();
    r.record_with("cycles and cochords span the edge space", rank1 == n_e, format!("rank {rank1}"));

    let mut cocyc_chord: Vec<EdgeVector> = b.cocycles.clone();
    cocyc_chord.extend((m..n_e).map(|a| b.unit(a)));
    let rank2 = RationalMatrix::from_i64_rows(&cocyc_chord, n_e).rank();
    r.record_with("cocycles and chords span the edge space", rank2 == n_e, format!("rank {rank2}"));
    r
}
