//! Undirected simple graphs on vertices `1..=n`, their generators, and the
//! Laplacian `D - A`.
//!
//! Vertex numbering is 1-based throughout the public API and in every
//! serialized format. Edges are stored canonically as `(u, v)` with `u < v`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degree::DegreeSequence;
use crate::matrix::{Matrix, SymMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("{family} requires k >= {min}, got {k}")]
    TooSmall {
        family: &'static str,
        min: usize,
        k: usize,
    },
    #[error("threshold creation sequence must not be empty")]
    EmptyCreation,
    #[error("invalid creation step {0:?}; expected 'J' or 'U'")]
    BadCreationStep(char),
    #[error("permutation is not a bijection on 1..={0}")]
    BadPermutation(usize),
}

/// An undirected simple graph.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(raw: GraphJson) -> Result<Self, Self::Error> {
        Graph::from_edges(raw.n, raw.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges.into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    /// Edgeless graph on `n >= 1` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        Ok(Graph {
            n,
            edges: BTreeSet::new(),
        })
    }

    /// Builds a graph from an edge list; pairs may come in either order but
    /// must not repeat.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            if !g.add_edge(u, v)? {
                let (a, b) = canonical(u, v);
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Ok(g)
    }

    /// Inserts `{u, v}`. Returns `false` if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(self.edges.insert(canonical(u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v == 0 || v > self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&canonical(u, v))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Degrees indexed by vertex; entry 0 belongs to vertex 1.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u - 1] += 1;
            deg[v - 1] += 1;
        }
        deg
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence::from_unsorted(self.degrees())
    }

    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u - 1].push(v - 1);
            adj[v - 1].push(u - 1);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n
    }

    /// `D - A` with exact integer entries.
    pub fn laplacian(&self) -> SymMatrix {
        let mut m = Matrix::<i64>::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            let (i, j) = (u - 1, v - 1);
            m[(i, j)] -= 1;
            m[(j, i)] -= 1;
            m[(i, i)] += 1;
            m[(j, j)] += 1;
        }
        SymMatrix::new(m).expect("laplacian of an undirected graph is symmetric")
    }

    /// Relabels vertex `v` as `perm[v - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        check_permutation(perm, self.n)?;
        Graph::from_edges(
            self.n,
            self.edges.iter().map(|&(u, v)| (perm[u - 1], perm[v - 1])),
        )
    }

    /// Disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph {
            n: self.n + other.n,
            edges,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Graph, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Graphviz DOT, one line: `graph { 1 -- 2; ... }`. Isolated vertices are
    /// listed on their own so the vertex count survives.
    pub fn to_dot(&self) -> String {
        let deg = self.degrees();
        let mut out = String::from("graph {");
        for &(u, v) in &self.edges {
            let _ = write!(out, " {u} -- {v};");
        }
        for (i, _) in deg.iter().enumerate().filter(|(_, &d)| d == 0) {
            let _ = write!(out, " {};", i + 1);
        }
        out.push_str(" }");
        out
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

fn canonical(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<(), GraphError> {
    if perm.len() != n {
        return Err(GraphError::BadPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p == 0 || p > n || seen[p - 1] {
            return Err(GraphError::BadPermutation(n));
        }
        seen[p - 1] = true;
    }
    Ok(())
}

/// One step of a threshold-graph creation sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Creation {
    /// New vertex adjacent to every existing vertex.
    #[serde(rename = "J")]
    Join,
    /// New isolated vertex.
    #[serde(rename = "U")]
    Union,
}

impl Creation {
    /// Parses a string such as `"UJUJ"`.
    pub fn parse_sequence(s: &str) -> Result<Vec<Creation>, GraphError> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c.to_ascii_uppercase() {
                'J' => Ok(Creation::Join),
                'U' => Ok(Creation::Union),
                other => Err(GraphError::BadCreationStep(other)),
            })
            .collect()
    }
}

/// The path `1 - 2 - ... - k`.
pub fn path(k: usize) -> Result<Graph, GraphError> {
    if k == 0 {
        return Err(GraphError::TooSmall {
            family: "path",
            min: 1,
            k,
        });
    }
    Graph::from_edges(k, (1..k).map(|i| (i, i + 1)))
}

/// The complete graph `K_k`.
pub fn complete(k: usize) -> Result<Graph, GraphError> {
    if k == 0 {
        return Err(GraphError::TooSmall {
            family: "complete",
            min: 1,
            k,
        });
    }
    Graph::from_edges(
        k,
        (1..=k).flat_map(|i| ((i + 1)..=k).map(move |j| (i, j))),
    )
}

/// The connected antiregular graph on `k` vertices.
///
/// Vertices are numbered by nonincreasing degree: vertex 1 is dominating,
/// vertex `k` is terminal, and the repeated degree sits at positions
/// `ceil(k/2)` and `ceil(k/2) + 1`. With this layout `i ~ j` exactly when
/// `i + j <= k + 1`. Downstream index arithmetic (chains, composite vertex
/// choices) relies on this ordering.
pub fn antiregular(k: usize) -> Result<Graph, GraphError> {
    if k < 2 {
        return Err(GraphError::TooSmall {
            family: "antiregular",
            min: 2,
            k,
        });
    }
    Graph::from_edges(
        k,
        (1..=k).flat_map(|i| ((i + 1)..=k).filter(move |j| i + j <= k + 1).map(move |j| (i, j))),
    )
}

/// Threshold graph from a creation sequence.
///
/// Starts from a single vertex; step `t` adds vertex `t + 2`, joined to all
/// earlier vertices (`Join`) or to none (`Union`).
pub fn threshold(creation: &[Creation]) -> Result<Graph, GraphError> {
    if creation.is_empty() {
        return Err(GraphError::EmptyCreation);
    }
    let n = creation.len() + 1;
    let mut g = Graph::empty(n)?;
    for (t, step) in creation.iter().enumerate() {
        let v = t + 2;
        if *step == Creation::Join {
            for u in 1..v {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}
