//! The fan embedding of `K_{m,n}`.
//!
//! `a_i` sits at `(i, 0, 0)` and `b_j` at `(0, j, 0)`. Seen from above, the
//! segments `a_i b_j` and `a_k b_l` with `i < k` cross exactly when `j > l`,
//! and there `a_i b_j` is the upper strand. Each edge is lifted to a 4-point
//! polyline: a short ramp off each endpoint and a flat middle at height
//! `(j - i) * delta`, so every top-view crossing lands in two flat middles
//! whose heights put the smaller `a`-index on top.

use std::collections::BTreeMap;

use crate::embedding::{EmbeddingError, Polyline, SpatialGraph};
use crate::geom::{int, rat, Point3, Rational};
use crate::graph::{build_complete_multipartite, Edge, PartiteSpec};

/// Vertex id of `a_i` (1-based `i`).
pub fn a_vertex(i: usize) -> usize {
    i - 1
}

/// Vertex id of `b_j` (1-based `j`) in `K_{m,n}`.
pub fn b_vertex(m: usize, j: usize) -> usize {
    m + j - 1
}

/// Fraction of each edge spent on the ramps at either end.
pub fn ramp_fraction(m: usize, n: usize) -> Rational {
    let big = m.max(n) as i64;
    rat(1, 8 * big * big)
}

pub fn height_step(m: usize, n: usize) -> Rational {
    rat(1, 4 * (m + n) as i64)
}

pub fn fan_embedding(m: usize, n: usize) -> Result<SpatialGraph, EmbeddingError> {
    if m == 0 || n == 0 {
        return Err(EmbeddingError::InvalidArgument(format!("fan {m} {n}: both sides must be positive")));
    }
    let spec = PartiteSpec::new(vec![m, n]).map_err(|e| EmbeddingError::InvalidArgument(e.to_string()))?;
    let graph = build_complete_multipartite(&spec);
    let mut positions = Vec::with_capacity(m + n);
    positions.extend((1..=m).map(|i| Point3::from_ints(i as i64, 0, 0)));
    positions.extend((1..=n).map(|j| Point3::from_ints(0, j as i64, 0)));

    let eps = ramp_fraction(m, n);
    let far = int(1) - &eps;
    let delta = height_step(m, n);
    let mut arcs = BTreeMap::new();
    for i in 1..=m {
        for j in 1..=n {
            let a = &positions[a_vertex(i)];
            let b = &positions[b_vertex(m, j)];
            let z = int(j as i64 - i as i64) * &delta;
            let mut near_a = a.lerp(b, &eps);
            let mut near_b = a.lerp(b, &far);
            near_a.z = z.clone();
            near_b.z = z;
            let arc = Polyline::new(vec![a.clone(), near_a, near_b, b.clone()]).expect("distinct points");
            arcs.insert(Edge::new(a_vertex(i), b_vertex(m, j)), arc);
        }
    }
    SpatialGraph::new(graph, positions, arcs, format!("fan {m} {n}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{cross2, orient2d, Point2};
    use num_traits::{One, Signed, Zero};

    fn top(p: &Point3) -> Point2 {
        Point2 {
            x: p.x.clone(),
            y: p.y.clone(),
        }
    }

    /// Two top-view edges and whether the first passes above.
    type TopCrossing = ((usize, usize), (usize, usize), bool);

    /// Recomputes, from the 3D data alone, which edges cross in the
    /// top view and which strand is higher there.
    fn top_view_crossings(sg: &SpatialGraph, m: usize) -> Vec<TopCrossing> {
        let mut out = Vec::new();
        let arcs: Vec<(Edge, &Polyline)> = sg.arcs().collect();
        for (x, (e1, p1)) in arcs.iter().enumerate() {
            for (e2, p2) in &arcs[x + 1..] {
                if e1.shares_vertex(e2) {
                    continue;
                }
                let mut hits = Vec::new();
                for (si, s) in p1.points().windows(2).enumerate() {
                    for (ti, t) in p2.points().windows(2).enumerate() {
                        let (a0, a1, b0, b1) = (top(&s[0]), top(&s[1]), top(&t[0]), top(&t[1]));
                        let den = cross2(&a0, &a1, &b0, &b1);
                        if den.is_zero() {
                            // parallel pieces never overlap in this layout
                            assert!(!orient2d(&a0, &a1, &b0).is_zero());
                            continue;
                        }
                        let w = Point2 {
                            x: &b0.x - &a0.x,
                            y: &b0.y - &a0.y,
                        };
                        let tt = (&w.x * (&b1.y - &b0.y) - &w.y * (&b1.x - &b0.x)) / &den;
                        let ss = (&w.x * (&a1.y - &a0.y) - &w.y * (&a1.x - &a0.x)) / &den;
                        let inside = |r: &Rational| !r.is_negative() && *r <= Rational::one();
                        if inside(&tt) && inside(&ss) {
                            // must be interior to both flat middles
                            assert!(si == 1 && ti == 1, "{e1} / {e2} cross on a ramp");
                            assert!(tt.is_positive() && tt < Rational::one());
                            assert!(ss.is_positive() && ss < Rational::one());
                            let za = &s[0].z + (&s[1].z - &s[0].z) * &tt;
                            let zb = &t[0].z + (&t[1].z - &t[0].z) * &ss;
                            assert_ne!(za, zb);
                            hits.push(za > zb);
                        }
                    }
                }
                assert!(hits.len() <= 1, "{e1} and {e2} cross {} times", hits.len());
                if let Some(first_over) = hits.first() {
                    let label = |e: &Edge| (e.u + 1, e.v + 1 - m);
                    out.push((label(e1), label(e2), *first_over));
                }
            }
        }
        out
    }

    #[test]
    fn projection_matches_crossing_rule() {
        for m in 1..=8 {
            for n in 1..=8 {
                let sg = fan_embedding(m, n).unwrap();
                let crossings = top_view_crossings(&sg, m);
                let mut expected = 0;
                for i in 1..=m {
                    for k in i + 1..=m {
                        for j in 1..=n {
                            for l in 1..=n {
                                if j > l {
                                    expected += 1;
                                    let found = crossings
                                        .iter()
                                        .find(|c| (c.0 == (i, j) && c.1 == (k, l)) || (c.0 == (k, l) && c.1 == (i, j)))
                                        .unwrap_or_else(|| panic!("a{i}b{j} / a{k}b{l} should cross in fan {m} {n}"));
                                    // a_i b_j is the upper strand
                                    let upper = if found.0 == (i, j) { found.2 } else { !found.2 };
                                    assert!(upper, "a{i}b{j} should pass over a{k}b{l}");
                                }
                            }
                        }
                    }
                }
                assert_eq!(crossings.len(), expected, "fan {m} {n}");
            }
        }
    }

    #[test]
    fn star_has_no_crossings() {
        for n in 1..=6 {
            let sg = fan_embedding(1, n).unwrap();
            assert!(top_view_crossings(&sg, 1).is_empty());
        }
    }

    #[test]
    fn zero_side_rejected() {
        assert!(matches!(fan_embedding(0, 3), Err(EmbeddingError::InvalidArgument(_))));
    }

    #[test]
    fn vertex_layout() {
        let sg = fan_embedding(3, 2).unwrap();
        assert_eq!(sg.position(a_vertex(2)), &Point3::from_ints(2, 0, 0));
        assert_eq!(sg.position(b_vertex(3, 2)), &Point3::from_ints(0, 2, 0));
        assert_eq!(sg.arc(Edge::new(0, 3)).points().len(), 4);
    }
}
