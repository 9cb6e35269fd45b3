//! The cycle space of a connected graph, in fundamental-cycle coordinates.
//!
//! A BFS spanning tree from vertex 0 fixes the basis: one fundamental cycle
//! per non-tree edge `u-v` (`u < v`), oriented so that it crosses that edge
//! from `u` to `v`. The GF(2) coordinates of a cycle are then just the set
//! of non-tree edges it uses, and the integer coordinates of a closed walk
//! are its signed traversal counts of the non-tree edges.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::cycle::Cycle;
use crate::graph::{Edge, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleSpaceError {
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("cycle space has dimension {0}; at most 64 is supported")]
    TooLarge(usize),
    #[error("{0} is not an edge of the graph")]
    NotAnEdge(Edge),
}

#[derive(Debug, Clone)]
pub struct CycleSpace {
    host: Graph,
    tree: Vec<Edge>,
    cotree: Vec<Edge>,
    cotree_index: HashMap<Edge, usize>,
    basis: Vec<Vec<usize>>,
}

pub fn build_cycle_space(g: &Graph) -> Result<CycleSpace, CycleSpaceError> {
    let n = g.vertex_count();
    let components = g.component_count();
    if components != 1 {
        return Err(CycleSpaceError::Disconnected(components));
    }
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut queue = VecDeque::from([0]);
    parent[0] = 0;
    let mut tree = Vec::new();
    while let Some(v) = queue.pop_front() {
        for w in g.neighbours(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                depth[w] = depth[v] + 1;
                tree.push(Edge::new(v, w));
                queue.push_back(w);
            }
        }
    }
    tree.sort();
    let cotree: Vec<Edge> = g.edges().filter(|e| tree.binary_search(e).is_err()).collect();
    if cotree.len() > 64 {
        return Err(CycleSpaceError::TooLarge(cotree.len()));
    }
    let basis = cotree
        .iter()
        .map(|e| {
            // tree paths from u and from v up to their common ancestor
            let (mut a, mut b) = (e.u, e.v);
            let mut from_u = vec![a];
            let mut from_v = vec![b];
            while a != b {
                if depth[a] >= depth[b] {
                    a = parent[a];
                    from_u.push(a);
                } else {
                    b = parent[b];
                    from_v.push(b);
                }
            }
            from_v.pop();
            // u .. ancestor .. v, closed by the cotree edge v-u
            from_u.extend(from_v.into_iter().rev());
            orient_from(from_u, e.u, e.v)
        })
        .collect();
    Ok(CycleSpace {
        host: g.clone(),
        tree,
        cotree_index: cotree.iter().enumerate().map(|(i, &e)| (e, i)).collect(),
        cotree,
        basis,
    })
}

/// Rotates/reverses the cyclic sequence `seq` so it starts `u, v, ...`.
fn orient_from(seq: Vec<usize>, u: usize, v: usize) -> Vec<usize> {
    let k = seq.len();
    let i = seq.iter().position(|&x| x == u).expect("u on its fundamental cycle");
    let mut out: Vec<usize> = (0..k).map(|j| seq[(i + j) % k]).collect();
    if out[1] != v {
        out[1..].reverse();
    }
    debug_assert_eq!(out[1], v);
    out
}

impl CycleSpace {
    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn dimension(&self) -> usize {
        self.cotree.len()
    }

    pub fn tree(&self) -> &[Edge] {
        &self.tree
    }

    pub fn cotree(&self) -> &[Edge] {
        &self.cotree
    }

    /// Fundamental cycles as oriented walks, in coordinate order.
    pub fn basis_walks(&self) -> &[Vec<usize>] {
        &self.basis
    }

    pub fn basis(&self) -> Vec<Cycle> {
        self.basis.iter().map(|w| Cycle::new(w).expect("fundamental cycle is simple")).collect()
    }

    fn closed_walk_edges(&self, walk: &[usize]) -> Result<Vec<(usize, usize)>, CycleSpaceError> {
        let n = self.host.vertex_count();
        (0..walk.len())
            .map(|i| {
                let (x, y) = (walk[i], walk[(i + 1) % walk.len()]);
                if x < n && y < n && self.host.has_edge(x, y) {
                    Ok((x, y))
                } else {
                    Err(CycleSpaceError::NotAnEdge(Edge::new(x, y)))
                }
            })
            .collect()
    }

    /// GF(2) coordinates: bit `i` is set when the cycle uses cotree edge `i`.
    pub fn gf2_coords(&self, c: &Cycle) -> Result<u64, CycleSpaceError> {
        self.gf2_coords_of_walk(c.vertices())
    }

    pub fn gf2_coords_of_walk(&self, walk: &[usize]) -> Result<u64, CycleSpaceError> {
        let mut mask = 0u64;
        for (x, y) in self.closed_walk_edges(walk)? {
            if let Some(&i) = self.cotree_index.get(&Edge::new(x, y)) {
                mask ^= 1 << i;
            }
        }
        Ok(mask)
    }

    /// Integer coordinates of a closed walk: `+1` per traversal of a cotree
    /// edge `u-v` from `u` to `v`, `-1` the other way.
    pub fn integer_coords(&self, walk: &[usize]) -> Result<Vec<i64>, CycleSpaceError> {
        let mut coords = vec![0i64; self.dimension()];
        for (x, y) in self.closed_walk_edges(walk)? {
            if let Some(&i) = self.cotree_index.get(&Edge::new(x, y)) {
                coords[i] += if x < y { 1 } else { -1 };
            }
        }
        Ok(coords)
    }
}

/// A homomorphism from the cycle space to GF(2), given by its values on
/// the basis (bit `i` = value on fundamental cycle `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParityFunctional(pub u64);

impl ParityFunctional {
    pub fn value(&self, coords: u64) -> bool {
        (coords & self.0).count_ones() % 2 == 1
    }

    /// All `2^dim` functionals.
    pub fn all(dim: usize) -> impl Iterator<Item = ParityFunctional> {
        (0..1u64 << dim).map(ParityFunctional)
    }
}

/// A homomorphism from the integral cycle space to the integers, given by
/// its values on the oriented fundamental cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerFunctional(pub Vec<i64>);

impl IntegerFunctional {
    pub fn value(&self, coords: &[i64]) -> i64 {
        self.0.iter().zip(coords).map(|(f, c)| f * c).sum()
    }

    /// Every functional with basis values in `[-window, window]`.
    pub fn window(dim: usize, window: i64) -> impl Iterator<Item = IntegerFunctional> {
        let side = (2 * window + 1) as u64;
        let total = side.pow(dim as u32);
        (0..total).map(move |mut k| {
            let mut values = Vec::with_capacity(dim);
            for _ in 0..dim {
                values.push((k % side) as i64 - window);
                k /= side;
            }
            IntegerFunctional(values)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::all_cycles;
    use crate::graph::{build_complete_multipartite, PartiteSpec};
    use std::collections::BTreeSet;

    fn host(s: &str) -> Graph {
        build_complete_multipartite(&s.parse::<PartiteSpec>().unwrap())
    }

    fn cyc(seq: &[usize]) -> Cycle {
        Cycle::new(seq).unwrap()
    }

    fn edge_set(c: &Cycle) -> BTreeSet<Edge> {
        c.edges().map(|(a, b)| Edge::new(a, b)).collect()
    }

    #[test]
    fn dimensions() {
        for (s, dim) in [("4", 3), ("2,2,1", 4), ("5", 6), ("2,1,1,1", 5), ("3,3", 4), ("8", 21)] {
            let g = host(s);
            let cs = build_cycle_space(&g).unwrap();
            assert_eq!(cs.dimension(), g.edge_count() - g.vertex_count() + 1, "{s}");
            assert_eq!(cs.dimension(), dim);
            assert_eq!(cs.tree().len(), g.vertex_count() - 1);
        }
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(build_cycle_space(&g).unwrap_err(), CycleSpaceError::Disconnected(2));
    }

    #[test]
    fn basis_is_oriented_through_its_cotree_edge() {
        let cs = build_cycle_space(&host("5")).unwrap();
        for (i, (w, e)) in cs.basis_walks().iter().zip(cs.cotree()).enumerate() {
            assert_eq!((w[0], w[1]), (e.u, e.v));
            let mut unit = vec![0; cs.dimension()];
            unit[i] = 1;
            assert_eq!(cs.integer_coords(w).unwrap(), unit);
            assert_eq!(cs.gf2_coords_of_walk(w).unwrap(), 1 << i);
        }
    }

    #[test]
    fn tetrahedron_triangles_sum_to_zero() {
        let cs = build_cycle_space(&host("4")).unwrap();
        let sum = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
            .iter()
            .map(|t| cs.gf2_coords(&cyc(t)).unwrap())
            .fold(0, |a, b| a ^ b);
        assert_eq!(sum, 0);
        // over the integers with boundary orientations
        let walks: [&[usize]; 4] = [&[0, 1, 2], &[0, 3, 1], &[0, 2, 3], &[1, 3, 2]];
        let mut total = vec![0; 3];
        for w in walks {
            for (t, c) in total.iter_mut().zip(cs.integer_coords(w).unwrap()) {
                *t += c;
            }
        }
        assert_eq!(total, vec![0, 0, 0]);
    }

    #[test]
    fn pyramid_faces_sum_to_zero() {
        // parts {0,1} {2,3} {4}; apex 4, base square 0-2-1-3
        let cs = build_cycle_space(&host("2,2,1")).unwrap();
        let faces: [&[usize]; 5] = [&[4, 0, 2], &[4, 2, 1], &[4, 1, 3], &[4, 3, 0], &[0, 2, 1, 3]];
        let sum = faces.iter().map(|f| cs.gf2_coords(&cyc(f)).unwrap()).fold(0, |a, b| a ^ b);
        assert_eq!(sum, 0);
    }

    #[test]
    fn doubled_tetrahedron_relations() {
        // parts {a, d} {b} {c} {e}
        let (a, d, b, c, e) = (0, 1, 2, 3, 4);
        let cs = build_cycle_space(&host("2,1,1,1")).unwrap();
        let gf = |s: &[usize]| cs.gf2_coords(&cyc(s)).unwrap();
        let faces = [[a, b, c], [a, c, e], [a, e, b], [d, c, b], [d, b, e], [d, e, c]];
        assert_eq!(faces.iter().map(|f| gf(f)).fold(0, |x, y| x ^ y), 0);
        assert_eq!(gf(&[a, b, c, d, e]), gf(&[a, b, c]) ^ gf(&[a, c, e]) ^ gf(&[d, e, c]));
        // the same decomposition holds over the integers
        let int = |s: &[usize]| cs.integer_coords(s).unwrap();
        let sum: Vec<i64> = (0..cs.dimension())
            .map(|i| int(&[a, b, c])[i] + int(&[a, c, e])[i] + int(&[d, e, c])[i])
            .collect();
        assert_eq!(int(&[a, b, c, d, e]), sum);
    }

    #[test]
    fn coordinates_are_linear_and_injective() {
        for s in ["4", "5", "2,2,1", "2,1,1,1", "3,3"] {
            let g = host(s);
            let cs = build_cycle_space(&g).unwrap();
            let cycles = all_cycles(&g);
            let by_edges: HashMap<BTreeSet<Edge>, u64> =
                cycles.iter().map(|c| (edge_set(c), cs.gf2_coords(c).unwrap())).collect();
            assert_eq!(by_edges.len(), cycles.len());
            let mut seen = BTreeSet::new();
            for coords in by_edges.values() {
                assert!(seen.insert(*coords), "{s}: two cycles share a class");
            }
            for x in &cycles {
                for y in &cycles {
                    let sym: BTreeSet<Edge> = edge_set(x).symmetric_difference(&edge_set(y)).copied().collect();
                    if let Some(z) = by_edges.get(&sym) {
                        let (cx, cy) = (cs.gf2_coords(x).unwrap(), cs.gf2_coords(y).unwrap());
                        assert_eq!(cx ^ cy, *z);
                        for f in ParityFunctional::all(cs.dimension()) {
                            assert_eq!(f.value(*z), f.value(cx) ^ f.value(cy));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reversal_negates_integer_coords() {
        let cs = build_cycle_space(&host("5")).unwrap();
        let c = cyc(&[0, 1, 2, 3, 4]);
        let fwd = cs.integer_coords(c.vertices()).unwrap();
        let back = cs.integer_coords(&c.reversed_walk()).unwrap();
        assert_eq!(fwd.iter().map(|x| -x).collect::<Vec<_>>(), back);
    }

    #[test]
    fn non_edges_rejected() {
        let cs = build_cycle_space(&host("2,2,1")).unwrap();
        assert_eq!(cs.gf2_coords_of_walk(&[0, 1, 4]), Err(CycleSpaceError::NotAnEdge(Edge::new(0, 1))));
    }

    #[test]
    fn functional_enumeration_sizes() {
        assert_eq!(ParityFunctional::all(4).count(), 16);
        let all: Vec<_> = IntegerFunctional::window(2, 1).collect();
        assert_eq!(all.len(), 9);
        assert!(all.contains(&IntegerFunctional(vec![-1, 1])));
        assert!(all.contains(&IntegerFunctional(vec![0, 0])));
    }
}
