//! Piecewise-linear spatial embeddings with exact injectivity checking.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::geom::{point_on_segment, segment_contact, Point3, Rational, SegmentContact};
use crate::graph::{Edge, Graph};

/// One straight piece of an arc: `segment` indexes the arc's polyline,
/// which runs from `edge.u` to `edge.v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegmentRef {
    pub edge: Edge,
    pub segment: usize,
}

impl fmt::Display for SegmentRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "edge {} segment {}", self.edge, self.segment)
    }
}

/// A pair of segments that meet where the embedding does not allow it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub first: SegmentRef,
    pub second: SegmentRef,
    pub contact: SegmentContact,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.contact {
            SegmentContact::Point(p) => write!(f, "{} meets {} at {}", self.first, self.second, p),
            _ => write!(f, "{} overlaps {}", self.first, self.second),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("expected {expected} vertex positions, got {got}")]
    VertexCount { expected: usize, got: usize },
    #[error("vertices {0} and {1} share a position")]
    CoincidentVertices(usize, usize),
    #[error("no arc given for edge {0}")]
    MissingArc(Edge),
    #[error("arc given for {0}, which is not an edge")]
    UnknownArc(Edge),
    #[error("arc for edge {0} does not run between its endpoints' positions")]
    ArcEndpoints(Edge),
    #[error("arc for edge {0} needs at least two points")]
    ArcTooShort(Edge),
    #[error("arc for edge {edge} has a zero-length segment at index {segment}")]
    ZeroLengthSegment { edge: Edge, segment: usize },
    #[error("vertex {vertex} lies on {segment}")]
    VertexOnArc { vertex: usize, segment: SegmentRef },
    #[error("embedding is not injective: {}", first_violation(.0))]
    Degenerate(Vec<Violation>),
    #[error("invalid generator argument: {0}")]
    InvalidArgument(String),
}

fn first_violation(v: &[Violation]) -> String {
    match v.first() {
        Some(first) if v.len() > 1 => format!("{first} (and {} more)", v.len() - 1),
        Some(first) => first.to_string(),
        None => "no violations".into(),
    }
}

/// An ordered list of points, consecutive points distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    points: Vec<Point3>,
}

impl Polyline {
    pub fn new(points: Vec<Point3>) -> Option<Self> {
        if points.len() < 2 || points.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Polyline { points })
    }

    pub fn segment(a: Point3, b: Point3) -> Option<Self> {
        Polyline::new(vec![a, b])
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    pub fn first(&self) -> &Point3 {
        &self.points[0]
    }

    pub fn last(&self) -> &Point3 {
        self.points.last().unwrap()
    }

    pub fn reversed(&self) -> Polyline {
        let mut points = self.points.clone();
        points.reverse();
        Polyline { points }
    }
}

/// A PL embedding of a graph: a position per vertex and a polyline per edge.
///
/// Construction validates injectivity exactly, so a `SpatialGraph` value is
/// always a genuine embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpatialGraph {
    graph: Graph,
    positions: Vec<Point3>,
    arcs: BTreeMap<Edge, Polyline>,
    generator: String,
}

impl SpatialGraph {
    /// Validates and builds an embedding. Arcs may be given in either
    /// direction; they are stored running from `edge.u` to `edge.v`.
    pub fn new(
        graph: Graph,
        positions: Vec<Point3>,
        arcs: BTreeMap<Edge, Polyline>,
        generator: impl Into<String>,
    ) -> Result<Self, EmbeddingError> {
        let n = graph.vertex_count();
        if positions.len() != n {
            return Err(EmbeddingError::VertexCount {
                expected: n,
                got: positions.len(),
            });
        }
        for u in 0..n {
            for v in u + 1..n {
                if positions[u] == positions[v] {
                    return Err(EmbeddingError::CoincidentVertices(u, v));
                }
            }
        }
        let mut oriented = BTreeMap::new();
        for (edge, arc) in arcs {
            if !graph.has_edge(edge.u, edge.v) {
                return Err(EmbeddingError::UnknownArc(edge));
            }
            let (pu, pv) = (&positions[edge.u], &positions[edge.v]);
            let arc = if arc.first() == pu && arc.last() == pv {
                arc
            } else if arc.first() == pv && arc.last() == pu {
                arc.reversed()
            } else {
                return Err(EmbeddingError::ArcEndpoints(edge));
            };
            oriented.insert(edge, arc);
        }
        if let Some(e) = graph.edges().find(|e| !oriented.contains_key(e)) {
            return Err(EmbeddingError::MissingArc(e));
        }
        let sg = SpatialGraph {
            graph,
            positions,
            arcs: oriented,
            generator: generator.into(),
        };
        sg.check_vertices_off_arcs()?;
        let violations = sg.injectivity_violations();
        if violations.is_empty() {
            Ok(sg)
        } else {
            Err(EmbeddingError::Degenerate(violations))
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn position(&self, v: usize) -> &Point3 {
        &self.positions[v]
    }

    pub fn positions(&self) -> &[Point3] {
        &self.positions
    }

    pub fn arc(&self, e: Edge) -> &Polyline {
        &self.arcs[&e]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Edge, &Polyline)> {
        self.arcs.iter().map(|(e, p)| (*e, p))
    }

    /// Free-form name of whatever produced this embedding.
    pub fn generator(&self) -> &str {
        &self.generator
    }

    /// The sub-embedding induced by `keep`, vertices relabelled in the given order.
    pub fn induced(&self, keep: &[usize]) -> SpatialGraph {
        let (graph, map) = self.graph.induced(keep);
        let positions = keep.iter().map(|&v| self.positions[v].clone()).collect();
        let arcs = self
            .arcs
            .iter()
            .filter_map(|(e, arc)| {
                let (a, b) = (map[e.u]?, map[e.v]?);
                let ne = Edge::new(a, b);
                Some((ne, if a < b { arc.clone() } else { arc.reversed() }))
            })
            .collect();
        SpatialGraph {
            graph,
            positions,
            arcs,
            generator: format!("{} (induced)", self.generator),
        }
    }

    fn check_vertices_off_arcs(&self) -> Result<(), EmbeddingError> {
        for (edge, arc) in &self.arcs {
            for (i, w) in arc.points.windows(2).enumerate() {
                for (v, p) in self.positions.iter().enumerate() {
                    if edge.has(v) {
                        continue;
                    }
                    if point_on_segment(p, &w[0], &w[1]) {
                        return Err(EmbeddingError::VertexOnArc {
                            vertex: v,
                            segment: SegmentRef { edge: *edge, segment: i },
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Every segment pair whose intersection is not allowed: segments of
    /// one arc may only share the joint between consecutive segments, and
    /// arcs of adjacent edges may only share the common vertex.
    pub fn injectivity_violations(&self) -> Vec<Violation> {
        struct Seg<'a> {
            id: SegmentRef,
            a: &'a Point3,
            b: &'a Point3,
            last: bool,
        }
        let segs: Vec<Seg> = self
            .arcs
            .iter()
            .flat_map(|(e, arc)| {
                let k = arc.segment_count();
                arc.points.windows(2).enumerate().map(move |(i, w)| Seg {
                    id: SegmentRef { edge: *e, segment: i },
                    a: &w[0],
                    b: &w[1],
                    last: i + 1 == k,
                })
            })
            .collect();
        // The segment's end at the arc's first or last point, which is a vertex.
        let touches = |s: &Seg, pos: &Point3| (s.id.segment == 0 && s.a == pos) || (s.last && s.b == pos);

        let mut out = Vec::new();
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                let (s, t) = (&segs[i], &segs[j]);
                if !boxes_touch(s.a, s.b, t.a, t.b) {
                    continue;
                }
                let contact = segment_contact(s.a, s.b, t.a, t.b);
                let allowed = match &contact {
                    SegmentContact::Disjoint => true,
                    SegmentContact::Overlap => false,
                    SegmentContact::Point(p) => {
                        if s.id.edge == t.id.edge {
                            // consecutive segments of one arc share their joint
                            t.id.segment == s.id.segment + 1 && p == s.b
                        } else if let Some(v) = shared_vertex(s.id.edge, t.id.edge) {
                            let pos = &self.positions[v];
                            p == pos && touches(s, pos) && touches(t, pos)
                        } else {
                            false
                        }
                    }
                };
                if !allowed {
                    out.push(Violation {
                        first: s.id,
                        second: t.id,
                        contact,
                    });
                }
            }
        }
        out
    }
}

fn shared_vertex(a: Edge, b: Edge) -> Option<usize> {
    if b.has(a.u) {
        Some(a.u)
    } else if b.has(a.v) {
        Some(a.v)
    } else {
        None
    }
}

fn boxes_touch(a0: &Point3, a1: &Point3, b0: &Point3, b1: &Point3) -> bool {
    fn span<'a>(p: &'a Rational, q: &'a Rational) -> (&'a Rational, &'a Rational) {
        if p <= q {
            (p, q)
        } else {
            (q, p)
        }
    }
    let axes = [(&a0.x, &a1.x, &b0.x, &b1.x), (&a0.y, &a1.y, &b0.y, &b1.y), (&a0.z, &a1.z, &b0.z, &b1.z)];
    axes.iter().all(|(p, q, r, s)| {
        let (lo1, hi1) = span(p, q);
        let (lo2, hi2) = span(r, s);
        lo1 <= hi2 && lo2 <= hi1
    })
}

/// Embeds every edge as the straight segment between its endpoints.
pub fn straight_line_embedding(graph: Graph, coords: Vec<Point3>) -> Result<SpatialGraph, EmbeddingError> {
    if coords.len() != graph.vertex_count() {
        return Err(EmbeddingError::VertexCount {
            expected: graph.vertex_count(),
            got: coords.len(),
        });
    }
    let mut arcs = BTreeMap::new();
    for e in graph.edges() {
        let arc = Polyline::segment(coords[e.u].clone(), coords[e.v].clone())
            .ok_or(EmbeddingError::CoincidentVertices(e.u, e.v))?;
        arcs.insert(e, arc);
    }
    SpatialGraph::new(graph, coords, arcs, "straight-line")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_complete_multipartite, PartiteSpec};

    fn complete(n: usize) -> Graph {
        build_complete_multipartite(&PartiteSpec::complete(n).unwrap())
    }

    fn p(x: i64, y: i64, z: i64) -> Point3 {
        Point3::from_ints(x, y, z)
    }

    #[test]
    fn tetrahedron_is_valid() {
        let sg = straight_line_embedding(complete(4), vec![p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(0, 0, 1)]).unwrap();
        assert_eq!(sg.arcs().count(), 6);
        assert!(sg.injectivity_violations().is_empty());
    }

    #[test]
    fn coincident_vertices_rejected() {
        let err = straight_line_embedding(complete(4), vec![p(0, 0, 0), p(1, 0, 0), p(1, 0, 0), p(0, 0, 1)]).unwrap_err();
        assert_eq!(err, EmbeddingError::CoincidentVertices(1, 2));
    }

    #[test]
    fn coplanar_crossing_rejected_with_pair() {
        // square 0..3 in the plane z = 0: diagonals 0-2 and 1-3 cross at (1,1,0)
        let coords = vec![p(0, 0, 0), p(2, 0, 0), p(2, 2, 0), p(0, 2, 0), p(1, 1, 5)];
        let err = straight_line_embedding(complete(5), coords).unwrap_err();
        match err {
            EmbeddingError::Degenerate(v) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].first.edge, Edge::new(0, 2));
                assert_eq!(v[0].second.edge, Edge::new(1, 3));
                assert_eq!(v[0].contact, SegmentContact::Point(p(1, 1, 0)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn vertex_on_foreign_arc_rejected() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        let err = straight_line_embedding(g, vec![p(0, 0, 0), p(2, 0, 0), p(1, 0, 0)]).unwrap_err();
        assert!(matches!(err, EmbeddingError::VertexOnArc { vertex: 2, .. }));
    }

    #[test]
    fn self_intersecting_arc_rejected() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let arc = Polyline::new(vec![p(0, 0, 0), p(4, 0, 0), p(4, 2, 0), p(2, -2, 0), p(2, 2, 1)]).unwrap();
        let mut arcs = BTreeMap::new();
        arcs.insert(Edge::new(0, 1), arc);
        let err = SpatialGraph::new(g, vec![p(0, 0, 0), p(2, 2, 1)], arcs, "test").unwrap_err();
        assert!(matches!(err, EmbeddingError::Degenerate(_)));
    }

    #[test]
    fn arc_may_be_given_backwards() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let arc = Polyline::new(vec![p(3, 0, 0), p(1, 1, 1), p(0, 0, 0)]).unwrap();
        let mut arcs = BTreeMap::new();
        arcs.insert(Edge::new(0, 1), arc);
        let sg = SpatialGraph::new(g, vec![p(0, 0, 0), p(3, 0, 0)], arcs, "test").unwrap();
        assert_eq!(sg.arc(Edge::new(0, 1)).first(), &p(0, 0, 0));
    }

    #[test]
    fn arc_endpoints_checked() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let mut arcs = BTreeMap::new();
        arcs.insert(Edge::new(0, 1), Polyline::segment(p(0, 0, 0), p(1, 1, 1)).unwrap());
        let err = SpatialGraph::new(g.clone(), vec![p(0, 0, 0), p(3, 0, 0)], arcs, "t").unwrap_err();
        assert_eq!(err, EmbeddingError::ArcEndpoints(Edge::new(0, 1)));
        let err = SpatialGraph::new(g, vec![p(0, 0, 0), p(3, 0, 0)], BTreeMap::new(), "t").unwrap_err();
        assert_eq!(err, EmbeddingError::MissingArc(Edge::new(0, 1)));
    }

    #[test]
    fn adjacent_arcs_overlapping_near_vertex_rejected() {
        // two edges out of vertex 0 that run along the same ray
        let g = Graph::new(3, [(0, 1), (0, 2)]).unwrap();
        let mut arcs = BTreeMap::new();
        arcs.insert(Edge::new(0, 1), Polyline::segment(p(0, 0, 0), p(2, 0, 0)).unwrap());
        arcs.insert(
            Edge::new(0, 2),
            Polyline::new(vec![p(0, 0, 0), p(1, 0, 0), p(1, 1, 0)]).unwrap(),
        );
        let err = SpatialGraph::new(g, vec![p(0, 0, 0), p(2, 0, 0), p(1, 1, 0)], arcs, "t").unwrap_err();
        assert!(matches!(err, EmbeddingError::Degenerate(_)));
    }

    #[test]
    fn polyline_rejects_repeated_points() {
        assert!(Polyline::new(vec![p(0, 0, 0)]).is_none());
        assert!(Polyline::new(vec![p(0, 0, 0), p(0, 0, 0)]).is_none());
    }

    #[test]
    fn induced_subembedding() {
        let sg = straight_line_embedding(complete(4), vec![p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(0, 0, 1)]).unwrap();
        let sub = sg.induced(&[3, 1, 2]);
        assert_eq!(sub.graph().edge_count(), 3);
        assert_eq!(sub.position(0), &p(0, 0, 1));
        assert_eq!(sub.arc(Edge::new(0, 1)).first(), &p(0, 0, 1));
    }
}
