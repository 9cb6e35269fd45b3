//! Complete multipartite graphs and the small simple-graph type every other
//! module is built on.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on vertex count; adjacency rows are stored as `u64` bitsets.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid partite spec: {0}")]
    InvalidSpec(String),
    #[error("graph has {0} vertices, at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("edge {0}-{1} is a loop or names a vertex outside the graph")]
    BadEdge(usize, usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
}

/// Part sizes of a complete multipartite graph `K_{n1,...,nk}`.
///
/// Vertices are `0..n` and are assigned to parts in blocks, in list order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PartiteSpec {
    parts: Vec<usize>,
}

impl PartiteSpec {
    pub fn new(parts: Vec<usize>) -> Result<Self, GraphError> {
        if parts.is_empty() {
            return Err(GraphError::InvalidSpec("no parts".into()));
        }
        if let Some(i) = parts.iter().position(|&p| p == 0) {
            return Err(GraphError::InvalidSpec(format!("part {i} has size 0")));
        }
        let n: usize = parts.iter().sum();
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(PartiteSpec { parts })
    }

    /// The complete graph `K_n`, i.e. `n` parts of size one.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Self::new(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn vertex_count(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn edge_count(&self) -> usize {
        let n = self.vertex_count();
        let sq: usize = self.parts.iter().map(|p| p * p).sum();
        (n * n - sq) / 2
    }

    /// Part index of every vertex.
    pub fn part_of(&self) -> Vec<usize> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &size)| std::iter::repeat_n(i, size))
            .collect()
    }
}

impl TryFrom<Vec<usize>> for PartiteSpec {
    type Error = GraphError;
    fn try_from(parts: Vec<usize>) -> Result<Self, Self::Error> {
        PartiteSpec::new(parts)
    }
}

impl From<PartiteSpec> for Vec<usize> {
    fn from(spec: PartiteSpec) -> Self {
        spec.parts
    }
}

impl fmt::Display for PartiteSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.iter().all(|&p| p == 1) {
            return write!(f, "K{}", self.parts.len());
        }
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "K{}", parts.join(","))
    }
}

/// Accepts `3,3,1`, `K3,3,1`, `K_{3,3,1}` and the shorthand `8` / `K8` / `K_8`
/// for the complete graph on 8 vertices.
impl FromStr for PartiteSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let body = body.strip_prefix(['K', 'k']).unwrap_or(body);
        let body = body.strip_prefix('_').unwrap_or(body);
        let body = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .unwrap_or(body);
        let parts = body
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| GraphError::InvalidSpec(format!("cannot parse {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if parts.len() == 1 {
            PartiteSpec::complete(parts[0])
        } else {
            PartiteSpec::new(parts)
        }
    }
}

/// An undirected edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        Edge {
            u: a.min(b),
            v: a.max(b),
        }
    }

    pub fn has(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    pub fn shares_vertex(&self, other: &Edge) -> bool {
        self.has(other.u) || self.has(other.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

/// A simple undirected graph on at most [`MAX_VERTICES`] vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<Edge>,
    adj: Vec<u64>,
    spec: Option<PartiteSpec>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut g = Graph {
            n,
            edges: BTreeSet::new(),
            adj: vec![0; n],
            spec: None,
        };
        for (a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(GraphError::BadEdge(a, b));
            }
            let e = Edge::new(a, b);
            if !g.edges.insert(e) {
                return Err(GraphError::DuplicateEdge(e.u, e.v));
            }
            g.adj[a] |= 1 << b;
            g.adj[b] |= 1 << a;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a] >> b & 1 == 1
    }

    /// Neighbours of `v` as a bitset.
    pub fn neighbour_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// The partite spec this graph was built from, if any.
    pub fn spec(&self) -> Option<&PartiteSpec> {
        self.spec.as_ref()
    }

    pub fn component_count(&self) -> usize {
        let mut seen = 0u64;
        let mut count = 0;
        for s in 0..self.n {
            if seen >> s & 1 == 1 {
                continue;
            }
            count += 1;
            let mut frontier = 1u64 << s;
            seen |= frontier;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                frontier = next & !seen;
                seen |= frontier;
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// The subgraph induced by `keep`, relabelled `0..keep.len()` in the
    /// given order. Returns the graph and the old-to-new vertex map.
    pub fn induced(&self, keep: &[usize]) -> (Graph, Vec<Option<usize>>) {
        let mut map = vec![None; self.n];
        for (i, &v) in keep.iter().enumerate() {
            map[v] = Some(i);
        }
        let edges = self.edges.iter().filter_map(|e| Some((map[e.u]?, map[e.v]?)));
        let g = Graph::new(keep.len(), edges).expect("induced subgraph of a simple graph is simple");
        (g, map)
    }
}

/// Builds `K_{n1,...,nk}`: `{u,v}` is an edge iff `u` and `v` lie in different parts.
pub fn build_complete_multipartite(spec: &PartiteSpec) -> Graph {
    let part = spec.part_of();
    let n = part.len();
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| part[u] != part[v]);
    let mut g = Graph::new(n, edges).expect("partite spec yields a simple graph");
    g.spec = Some(spec.clone());
    g
}

/// Iterates the set bits of a mask, lowest first.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_edges(parts: &[usize]) -> usize {
        let spec = PartiteSpec::new(parts.to_vec()).unwrap();
        let part = spec.part_of();
        let mut count = 0;
        for u in 0..part.len() {
            for v in 0..part.len() {
                if u < v && part[u] != part[v] {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn complete_graph_edge_count() {
        let g = build_complete_multipartite(&PartiteSpec::complete(7).unwrap());
        assert_eq!(g.edge_count(), 21);
    }

    #[test]
    fn k331_edge_count() {
        assert_eq!(brute_edges(&[3, 3, 1]), 15);
        let spec = PartiteSpec::new(vec![3, 3, 1]).unwrap();
        assert_eq!(spec.edge_count(), 15);
        assert_eq!(build_complete_multipartite(&spec).edge_count(), 15);
    }

    #[test]
    fn edge_count_formula_matches_enumeration() {
        for parts in [vec![1, 1], vec![4, 4], vec![2, 2, 1], vec![3, 2, 1, 1], vec![5, 1, 1, 1]] {
            let spec = PartiteSpec::new(parts.clone()).unwrap();
            let g = build_complete_multipartite(&spec);
            assert_eq!(g.edge_count(), brute_edges(&parts), "{parts:?}");
            assert_eq!(spec.edge_count(), brute_edges(&parts), "{parts:?}");
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(matches!(PartiteSpec::new(vec![]), Err(GraphError::InvalidSpec(_))));
        assert!(matches!(PartiteSpec::new(vec![3, 0, 1]), Err(GraphError::InvalidSpec(_))));
        assert!(matches!(PartiteSpec::new(vec![40, 40]), Err(GraphError::TooManyVertices(80))));
    }

    #[test]
    fn parse_spec_notations() {
        let k8: PartiteSpec = "K8".parse().unwrap();
        assert_eq!(k8.parts(), &[1; 8]);
        assert_eq!("K_8".parse::<PartiteSpec>().unwrap(), k8);
        assert_eq!("8".parse::<PartiteSpec>().unwrap(), k8);
        let k44: PartiteSpec = "K_{4,4}".parse().unwrap();
        assert_eq!(k44.parts(), &[4, 4]);
        assert_eq!("4,4".parse::<PartiteSpec>().unwrap(), k44);
        assert_eq!(k44.to_string(), "K4,4");
        assert_eq!(k8.to_string(), "K8");
        assert!("K_{4,x}".parse::<PartiteSpec>().is_err());
        assert!("0".parse::<PartiteSpec>().is_err());
    }

    #[test]
    fn graph_rejects_loops_and_duplicates() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::BadEdge(1, 1)));
        assert_eq!(Graph::new(3, [(0, 3)]), Err(GraphError::BadEdge(0, 3)));
        assert_eq!(Graph::new(3, [(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
    }

    #[test]
    fn components() {
        let g = Graph::new(5, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.component_count(), 3);
        assert!(!g.is_connected());
        let k = build_complete_multipartite(&"2,2,1".parse().unwrap());
        assert!(k.is_connected());
    }

    #[test]
    fn induced_subgraph_relabels() {
        let k5 = build_complete_multipartite(&PartiteSpec::complete(5).unwrap());
        let (h, map) = k5.induced(&[4, 2, 0]);
        assert_eq!(h.edge_count(), 3);
        assert_eq!(map[4], Some(0));
        assert_eq!(map[1], None);
    }
}
