//! Oriented multigraphs, incidence matrices and spanning trees.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;

/// Upper bound on `|E|` for brute-force spanning tree enumeration.
pub const ENUMERATION_LIMIT: usize = 24;

/// One edge record of the graph JSON document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: String,
    pub tail: String,
    pub head: String,
}

/// The on-disk graph document. `tree`, `rotations` and `faces` are optional.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotations: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<String>>>,
}

impl GraphDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph documents always serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// The endpoint opposite to `v`.
    pub fn other(&self, v: usize) -> usize {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// A connected oriented multigraph. Vertex and edge order are the user's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl OrientedGraph {
    /// Validates ids, endpoints and undirected connectivity.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(Error::Empty);
        }
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateId(v.clone()));
            }
        }
        let mut out = Vec::new();
        let mut edge_index = HashMap::new();
        for (id, tail, head) in edges {
            if edge_index.contains_key(&id) {
                return Err(Error::DuplicateId(id));
            }
            let lookup = |v: &String| {
                vertex_index.get(v).copied().ok_or_else(|| Error::UnknownEndpoint {
                    edge: id.clone(),
                    vertex: v.clone(),
                })
            };
            let (t, h) = (lookup(&tail)?, lookup(&head)?);
            edge_index.insert(id.clone(), out.len());
            out.push(Edge { id, tail: t, head: h });
        }
        let g = Self {
            vertices,
            edges: out,
            vertex_index,
            edge_index,
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Convenience constructor from string slices `(id, tail, head)`.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        Self::new(
            vertices.iter().copied(),
            edges
                .iter()
                .map(|(id, t, h)| (id.to_string(), t.to_string(), h.to_string())),
        )
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Cyclomatic number `|E| - |V| + 1`.
    pub fn cyclomatic_number(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn vertex(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edges[e].id
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertices.len());
        let mut parts = self.vertices.len();
        for e in &self.edges {
            if uf.union(e.tail, e.head) {
                parts -= 1;
            }
        }
        parts == 1
    }

    /// True when there are no self-loops and no two edges share an
    /// unordered endpoint pair.
    pub fn simple_violation(&self) -> Option<String> {
        let mut pairs = HashMap::new();
        for e in &self.edges {
            if e.is_loop() {
                return Some(format!("self-loop `{}`", e.id));
            }
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if let Some(prev) = pairs.insert(key, &e.id) {
                return Some(format!("parallel edges `{prev}` and `{}`", e.id));
            }
        }
        None
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    id: e.id.clone(),
                    tail: self.vertices[e.tail].clone(),
                    head: self.vertices[e.head].clone(),
                })
                .collect(),
            ..Default::default()
        }
    }
}

/// Builds and validates the graph described by a document. Edge order is
/// preserved as user order.
pub fn load_graph(doc: &GraphDocument) -> Result<OrientedGraph> {
    OrientedGraph::new(
        doc.vertices.iter().cloned(),
        doc.edges
            .iter()
            .map(|e| (e.id.clone(), e.tail.clone(), e.head.clone())),
    )
}

/// `|V| × |E|` incidence matrix: `+1` where the edge enters the vertex, `-1`
/// where it leaves. Self-loop columns vanish.
pub fn incidence_matrix(g: &OrientedGraph) -> RationalMatrix {
    let rows: Vec<Vec<i64>> = (0..g.vertex_count())
        .map(|v| {
            g.edges()
                .iter()
                .map(|e| i64::from(e.head == v) - i64::from(e.tail == v))
                .collect()
        })
        .collect();
    RationalMatrix::from_i64_rows(&rows, g.edge_count())
}

/// A spanning tree together with the canonical edge order: cochords (tree
/// edges) in user order, followed by chords in user order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSelection {
    order: Vec<usize>,
    canonical: Vec<usize>,
    tree_len: usize,
}

impl TreeSelection {
    fn from_tree_mask(in_tree: &[bool]) -> Self {
        let cochords = (0..in_tree.len()).filter(|&e| in_tree[e]);
        let chords = (0..in_tree.len()).filter(|&e| !in_tree[e]);
        let order: Vec<usize> = cochords.chain(chords).collect();
        let mut canonical = vec![0; order.len()];
        for (c, &e) in order.iter().enumerate() {
            canonical[e] = c;
        }
        Self {
            order,
            canonical,
            tree_len: in_tree.iter().filter(|&&b| b).count(),
        }
    }

    /// Tree edges (cochords) as user edge indices, in user order.
    pub fn cochords(&self) -> &[usize] {
        &self.order[..self.tree_len]
    }

    /// Non-tree edges (chords) as user edge indices, in user order.
    pub fn chords(&self) -> &[usize] {
        &self.order[self.tree_len..]
    }

    /// Canonical index → user edge index.
    pub fn permutation(&self) -> &[usize] {
        &self.order
    }

    /// User edge index → canonical index.
    pub fn canonical_index(&self, edge: usize) -> usize {
        self.canonical[edge]
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.canonical[edge] < self.tree_len
    }

    pub fn tree_edge_ids<'g>(&self, g: &'g OrientedGraph) -> Vec<&'g str> {
        self.cochords().iter().map(|&e| g.edge_id(e)).collect()
    }

    pub fn chord_ids<'g>(&self, g: &'g OrientedGraph) -> Vec<&'g str> {
        self.chords().iter().map(|&e| g.edge_id(e)).collect()
    }

    /// User edge ids in canonical order.
    pub fn permutation_ids<'g>(&self, g: &'g OrientedGraph) -> Vec<&'g str> {
        self.order.iter().map(|&e| g.edge_id(e)).collect()
    }
}

/// Deterministic depth-first spanning tree rooted at the first vertex.
///
/// At each vertex the outgoing edges are tried in user order, then the
/// incoming ones; self-loops are skipped.
pub fn default_spanning_tree(g: &OrientedGraph) -> TreeSelection {
    let n = g.vertex_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        if !e.is_loop() {
            incident[e.tail].push(i);
        }
    }
    for (i, e) in g.edges().iter().enumerate() {
        if !e.is_loop() {
            incident[e.head].push(i);
        }
    }
    let mut visited = vec![false; n];
    let mut in_tree = vec![false; g.edge_count()];
    // explicit stack of (vertex, next incident position)
    let mut stack = vec![(0usize, 0usize)];
    visited[0] = true;
    while let Some(top) = stack.last_mut() {
        let v = top.0;
        if top.1 == incident[v].len() {
            stack.pop();
            continue;
        }
        let e = incident[v][top.1];
        top.1 += 1;
        let w = g.edges()[e].other(v);
        if !visited[w] {
            visited[w] = true;
            in_tree[e] = true;
            stack.push((w, 0));
        }
    }
    TreeSelection::from_tree_mask(&in_tree)
}

/// Checks that `edge_ids` is a spanning tree of `g` and returns the
/// corresponding selection. Duplicated ids count once.
pub fn validate_tree<S: AsRef<str>>(g: &OrientedGraph, edge_ids: &[S]) -> Result<TreeSelection> {
    let mut in_tree = vec![false; g.edge_count()];
    for id in edge_ids {
        let id = id.as_ref();
        let e = g.edge(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))?;
        in_tree[e] = true;
    }
    if let Some(e) = (0..g.edge_count()).find(|&e| in_tree[e] && g.edges()[e].is_loop()) {
        return Err(Error::ContainsSelfLoop(g.edge_id(e).to_string()));
    }
    let got = in_tree.iter().filter(|&&b| b).count();
    let expected = g.vertex_count() - 1;
    if got != expected {
        return Err(Error::WrongCardinality { expected, got });
    }
    let mut uf = UnionFind::new(g.vertex_count());
    for (i, e) in g.edges().iter().enumerate() {
        if in_tree[i] && !uf.union(e.tail, e.head) {
            return Err(Error::ContainsCycle(e.id.clone()));
        }
    }
    let root = uf.find(0);
    if (1..g.vertex_count()).any(|v| uf.find(v) != root) {
        return Err(Error::NotSpanning);
    }
    Ok(TreeSelection::from_tree_mask(&in_tree))
}

/// Counts spanning trees by checking every `(|V|-1)`-subset of non-loop
/// edges for acyclicity.
pub fn enumerate_spanning_trees(g: &OrientedGraph) -> Result<u64> {
    if g.edge_count() > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            edges: g.edge_count(),
            limit: ENUMERATION_LIMIT,
        });
    }
    let k = g.vertex_count() - 1;
    let candidates: Vec<&Edge> = g.edges().iter().filter(|e| !e.is_loop()).collect();
    if k == 0 {
        return Ok(1);
    }
    if candidates.len() < k {
        return Ok(0);
    }
    let mut count = 0;
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let mut uf = UnionFind::new(g.vertex_count());
        if pick.iter().all(|&i| uf.union(candidates[i].tail, candidates[i].head)) {
            count += 1;
        }
        // next k-combination in lexicographic order
        let m = candidates.len();
        let Some(i) = (0..k).rev().find(|&i| pick[i] < m - k + i) else {
            break;
        };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    Ok(count)
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if they were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
