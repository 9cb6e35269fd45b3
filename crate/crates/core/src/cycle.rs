//! Simple cycles in canonical form, exhaustive cycle enumeration, and
//! vertex-disjoint cycle pairs.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{bits, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("a cycle needs at least 3 vertices, got {0}")]
    TooShort(usize),
    #[error("vertex {0} repeats in cycle")]
    RepeatedVertex(usize),
    #[error("{0}-{1} is not an edge of the host graph")]
    NotAnEdge(usize, usize),
    #[error("cycle length range [{min}, {max}] is invalid for a graph on {n} vertices")]
    BadRange { min: usize, max: usize, n: usize },
}

/// A simple cycle stored canonically: smallest vertex first, then the
/// traversal direction whose second vertex is smaller.
///
/// Cycles order by length first, then lexicographically; this is the order
/// of [`enumerate_cycles`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Cycle {
    vertices: Vec<usize>,
}

impl Cycle {
    /// Canonicalizes any rotation or reflection of a vertex sequence.
    /// Adjacency is not checked here; see [`Cycle::in_graph`].
    pub fn new(seq: &[usize]) -> Result<Self, CycleError> {
        if seq.len() < 3 {
            return Err(CycleError::TooShort(seq.len()));
        }
        let mut seen = 0u128;
        for &v in seq {
            if v >= 128 || seen >> v & 1 == 1 {
                return Err(CycleError::RepeatedVertex(v));
            }
            seen |= 1 << v;
        }
        Ok(Cycle {
            vertices: canonical(seq),
        })
    }

    /// Like [`Cycle::new`], and also checks every consecutive pair is an edge of `g`.
    pub fn in_graph(g: &Graph, seq: &[usize]) -> Result<Self, CycleError> {
        let c = Cycle::new(seq)?;
        for (a, b) in c.edges() {
            if !g.has_edge(a, b) {
                return Err(CycleError::NotAnEdge(a, b));
            }
        }
        Ok(c)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Vertex set as a bitset (vertex ids below 64).
    pub fn mask(&self) -> u64 {
        self.vertices.iter().fold(0, |m, &v| m | 1 << v)
    }

    /// Consecutive vertex pairs along the stored orientation, closing the loop.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn is_disjoint(&self, other: &Cycle) -> bool {
        self.mask() & other.mask() == 0
    }

    /// The stored sequence traversed backwards (same cycle, opposite orientation).
    pub fn reversed_walk(&self) -> Vec<usize> {
        let mut w = self.vertices.clone();
        w[1..].reverse();
        w
    }

    /// Relabels vertices through `map` and re-canonicalizes.
    pub fn relabel(&self, map: &[usize]) -> Cycle {
        let seq: Vec<usize> = self.vertices.iter().map(|&v| map[v]).collect();
        Cycle::new(&seq).expect("a relabelling by a permutation keeps the cycle simple")
    }
}

fn canonical(seq: &[usize]) -> Vec<usize> {
    let n = seq.len();
    let start = (0..n).min_by_key(|&i| seq[i]).unwrap();
    let forward = seq[(start + 1) % n];
    let backward = seq[(start + n - 1) % n];
    if forward < backward {
        (0..n).map(|k| seq[(start + k) % n]).collect()
    } else {
        (0..n).map(|k| seq[(start + n - k) % n]).collect()
    }
}

impl Ord for Cycle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices
            .len()
            .cmp(&other.vertices.len())
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl PartialOrd for Cycle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<usize>> for Cycle {
    type Error = CycleError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Cycle::new(&v)
    }
}

impl From<Cycle> for Vec<usize> {
    fn from(c: Cycle) -> Self {
        c.vertices
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        f.write_str(&s.join("-"))
    }
}

/// All simple cycles of `g` with length in `[min_len, max_len]`, canonical,
/// sorted by length then lexicographically.
///
/// Backtracking from each root `s` through vertices greater than `s`; a
/// closed path is kept only in the direction whose second vertex is smaller
/// than its last, so each cycle is produced exactly once, already canonical.
pub fn enumerate_cycles(g: &Graph, min_len: usize, max_len: usize) -> Result<Vec<Cycle>, CycleError> {
    let n = g.vertex_count();
    if min_len < 3 || min_len > max_len || max_len > n {
        return Err(CycleError::BadRange {
            min: min_len,
            max: max_len,
            n,
        });
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(max_len);
    for root in 0..n {
        let allowed = !0u64 << root << 1 & mask_below(n);
        path.clear();
        path.push(root);
        extend(g, root, allowed, 1 << root, min_len, max_len, &mut path, &mut out);
    }
    out.sort();
    Ok(out)
}

fn mask_below(n: usize) -> u64 {
    if n == 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Graph,
    root: usize,
    allowed: u64,
    used: u64,
    min_len: usize,
    max_len: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Cycle>,
) {
    let last = *path.last().unwrap();
    let nbrs = g.neighbour_mask(last);
    if path.len() >= min_len && nbrs >> root & 1 == 1 && path[1] < last {
        out.push(Cycle {
            vertices: path.clone(),
        });
    }
    if path.len() == max_len {
        return;
    }
    for v in bits(nbrs & allowed & !used) {
        path.push(v);
        extend(g, root, allowed, used | 1 << v, min_len, max_len, path, out);
        path.pop();
    }
}

/// All simple cycles of `g` (lengths 3 through `n`).
pub fn all_cycles(g: &Graph) -> Vec<Cycle> {
    if g.vertex_count() < 3 {
        return Vec::new();
    }
    enumerate_cycles(g, 3, g.vertex_count()).expect("full range is valid")
}

/// Every unordered pair of vertex-disjoint simple cycles, smaller cycle
/// first, pairs sorted.
pub fn enumerate_disjoint_cycle_pairs(g: &Graph) -> Vec<(Cycle, Cycle)> {
    let n = g.vertex_count();
    if n < 6 {
        return Vec::new();
    }
    // Two disjoint cycles need 3 vertices each.
    let cycles = enumerate_cycles(g, 3, n - 3).expect("n >= 6");
    let masks: Vec<u64> = cycles.iter().map(Cycle::mask).collect();
    let mut pairs = Vec::new();
    for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            if masks[i] & masks[j] == 0 {
                pairs.push((cycles[i].clone(), cycles[j].clone()));
            }
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_complete_multipartite, PartiteSpec};
    use proptest::prelude::*;

    fn complete(n: usize) -> Graph {
        build_complete_multipartite(&PartiteSpec::complete(n).unwrap())
    }

    fn spec(s: &str) -> Graph {
        build_complete_multipartite(&s.parse().unwrap())
    }

    /// Brute force: every vertex subset, every cyclic order, keep the
    /// ones whose consecutive pairs are edges, dedup via edge sets.
    fn brute_cycles(g: &Graph, k: usize) -> usize {
        use std::collections::BTreeSet;
        let n = g.vertex_count();
        let mut found = BTreeSet::new();
        for subset in 0u64..1 << n {
            if subset.count_ones() as usize != k {
                continue;
            }
            let verts: Vec<usize> = bits(subset).collect();
            permute(&verts, &mut |perm| {
                if (0..k).all(|i| g.has_edge(perm[i], perm[(i + 1) % k])) {
                    let mut es: Vec<(usize, usize)> = (0..k)
                        .map(|i| {
                            let (a, b) = (perm[i], perm[(i + 1) % k]);
                            (a.min(b), a.max(b))
                        })
                        .collect();
                    es.sort();
                    found.insert(es);
                }
            });
        }
        found.len()
    }

    fn permute(items: &[usize], f: &mut dyn FnMut(&[usize])) {
        fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
            if rest.is_empty() {
                f(prefix);
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                prefix.push(x);
                rec(prefix, rest, f);
                prefix.pop();
                rest.insert(i, x);
            }
        }
        rec(&mut Vec::new(), &mut items.to_vec(), f);
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn k4_has_four_triangles_three_squares() {
        let cycles = enumerate_cycles(&complete(4), 3, 4).unwrap();
        assert_eq!(cycles.len(), 7);
        assert_eq!(cycles.iter().filter(|c| c.len() == 3).count(), 4);
        assert_eq!(cycles.iter().filter(|c| c.len() == 4).count(), 3);
        assert_eq!(brute_cycles(&complete(4), 3), 4);
        assert_eq!(brute_cycles(&complete(4), 4), 3);
    }

    #[test]
    fn complete_graph_counts_match_closed_form() {
        for n in 3..=8 {
            let cycles = all_cycles(&complete(n));
            let expected: usize = (3..=n).map(|k| binom(n, k) * factorial(k - 1) / 2).sum();
            assert_eq!(cycles.len(), expected, "K{n}");
        }
    }

    #[test]
    fn matches_brute_force_on_multipartite_hosts() {
        for s in ["3,3,1", "2,2,1", "2,1,1,1", "4,3"] {
            let g = spec(s);
            for k in 3..=g.vertex_count() {
                let ours = enumerate_cycles(&g, k, k).unwrap().len();
                assert_eq!(ours, brute_cycles(&g, k), "{s} length {k}");
            }
        }
    }

    #[test]
    fn bipartite_has_no_triangles() {
        assert!(enumerate_cycles(&spec("4,4"), 3, 3).unwrap().is_empty());
    }

    #[test]
    fn k331_triangles_use_the_singleton_vertex() {
        let g = spec("3,3,1");
        let triangles = enumerate_cycles(&g, 3, 3).unwrap();
        assert!(!triangles.is_empty());
        assert!(triangles.iter().all(|t| t.vertices().contains(&6)));
    }

    #[test]
    fn ordering_is_by_length_then_lex() {
        let cycles = all_cycles(&complete(5));
        for w in cycles.windows(2) {
            assert!(w[0] < w[1]);
            assert!(w[0].len() <= w[1].len());
        }
    }

    #[test]
    fn bad_ranges() {
        let g = complete(4);
        assert!(enumerate_cycles(&g, 2, 4).is_err());
        assert!(enumerate_cycles(&g, 4, 3).is_err());
        assert!(enumerate_cycles(&g, 3, 5).is_err());
    }

    #[test]
    fn cycle_validation() {
        assert_eq!(Cycle::new(&[0, 1]), Err(CycleError::TooShort(2)));
        assert_eq!(Cycle::new(&[0, 1, 0]), Err(CycleError::RepeatedVertex(0)));
        let g = spec("4,4");
        assert_eq!(Cycle::in_graph(&g, &[0, 1, 4]), Err(CycleError::NotAnEdge(0, 1)));
        assert!(Cycle::in_graph(&g, &[0, 4, 1, 5]).is_ok());
    }

    #[test]
    fn k6_triangle_pairs() {
        let pairs = enumerate_disjoint_cycle_pairs(&complete(6));
        assert_eq!(pairs.len(), binom(6, 3) / 2);
        assert!(pairs.iter().all(|(a, b)| a.len() == 3 && b.len() == 3));
    }

    #[test]
    fn k8_triangle_triangle_pairs() {
        let pairs = enumerate_disjoint_cycle_pairs(&complete(8));
        let tt = pairs.iter().filter(|(a, b)| a.len() == 3 && b.len() == 3).count();
        assert_eq!(tt, binom(8, 3) * binom(5, 3) / 2);
        // brute force over triangles
        let tri = enumerate_cycles(&complete(8), 3, 3).unwrap();
        let mut brute = 0;
        for a in &tri {
            for b in &tri {
                if a < b && a.is_disjoint(b) {
                    brute += 1;
                }
            }
        }
        assert_eq!(tt, brute);
    }

    #[test]
    fn k331_pairs_are_triangle_square() {
        let pairs = enumerate_disjoint_cycle_pairs(&spec("3,3,1"));
        assert!(!pairs.is_empty());
        assert!(pairs.iter().all(|(a, b)| a.len() == 3 && b.len() == 4));
    }

    #[test]
    fn n111_has_no_disjoint_pairs() {
        for n in 1..=8 {
            let g = build_complete_multipartite(&PartiteSpec::new(vec![n, 1, 1, 1]).unwrap());
            assert!(enumerate_disjoint_cycle_pairs(&g).is_empty(), "K{n},1,1,1");
        }
    }

    #[test]
    fn pairs_are_disjoint_ordered_and_unique() {
        let pairs = enumerate_disjoint_cycle_pairs(&spec("3,2,1,1"));
        for (a, b) in &pairs {
            assert!(a < b);
            assert!(a.is_disjoint(b));
        }
        let mut sorted = pairs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, pairs);
    }

    proptest! {
        #[test]
        fn canonical_form_is_rotation_and_reflection_invariant(
            verts in proptest::sample::subsequence((0usize..20).collect::<Vec<_>>(), 3..10)
                .prop_shuffle(),
            rot in 0usize..10,
            flip: bool,
        ) {
            let c = Cycle::new(&verts).unwrap();
            let k = verts.len();
            let mut moved: Vec<usize> = (0..k).map(|i| verts[(i + rot) % k]).collect();
            if flip {
                moved.reverse();
            }
            let d = Cycle::new(&moved).unwrap();
            prop_assert_eq!(&c, &d);
            prop_assert_eq!(Cycle::new(c.vertices()).unwrap(), c.clone());
            prop_assert_eq!(c.vertices()[0], *verts.iter().min().unwrap());
            prop_assert!(c.vertices()[1] < c.vertices()[k - 1]);
            prop_assert_eq!(Cycle::new(&c.reversed_walk()).unwrap(), c);
        }
    }
}
