//! Book embeddings: vertices on a spine, each edge drawn in one page.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::embedding::{EmbeddingError, Polyline, SpatialGraph};
use crate::geom::{int, rat, Point3, Rational};
use crate::graph::{Edge, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("spine order is not a permutation of 0..{0}")]
    BadSpine(usize),
    #[error("edge {0} has no page")]
    Unassigned(Edge),
    #[error("{0} is not an edge of the graph")]
    UnknownEdge(Edge),
    #[error("edge {edge} is on page {page}, but there are only {count} pages")]
    PageOutOfRange { edge: Edge, page: usize, count: usize },
    #[error("edges {0} and {1} interleave on page {2}")]
    Interleaved(Edge, Edge, usize),
    #[error("a canonical book needs n >= 3, got {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// A spine order plus a page for every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BookLayout {
    /// `spine_order[k]` is the vertex at spine position `k`.
    pub spine_order: Vec<usize>,
    pub page_of: BTreeMap<Edge, usize>,
    pub page_count: usize,
}

impl BookLayout {
    /// Spine position of every vertex.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.spine_order.len()];
        for (k, &v) in self.spine_order.iter().enumerate() {
            pos[v] = k;
        }
        pos
    }

    /// Checks the layout against `g`: permutation spine, every edge on a
    /// valid page, and no two same-page edges with interleaved spine intervals.
    pub fn validate(&self, g: &Graph) -> Result<(), LayoutError> {
        let n = g.vertex_count();
        let mut seen = vec![false; n];
        if self.spine_order.len() != n {
            return Err(LayoutError::BadSpine(n));
        }
        for &v in &self.spine_order {
            if v >= n || seen[v] {
                return Err(LayoutError::BadSpine(n));
            }
            seen[v] = true;
        }
        for (&e, &page) in &self.page_of {
            if !g.has_edge(e.u, e.v) {
                return Err(LayoutError::UnknownEdge(e));
            }
            if page >= self.page_count {
                return Err(LayoutError::PageOutOfRange {
                    edge: e,
                    page,
                    count: self.page_count,
                });
            }
        }
        if let Some(e) = g.edges().find(|e| !self.page_of.contains_key(e)) {
            return Err(LayoutError::Unassigned(e));
        }
        let pos = self.positions();
        let interval = |e: &Edge| {
            let (a, b) = (pos[e.u], pos[e.v]);
            (a.min(b), a.max(b))
        };
        let edges: Vec<(&Edge, &usize)> = self.page_of.iter().collect();
        for (i, (e, p)) in edges.iter().enumerate() {
            for (f, q) in &edges[i + 1..] {
                if p != q {
                    continue;
                }
                let (a, b) = interval(e);
                let (c, d) = interval(f);
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return Err(LayoutError::Interleaved(**e, **f, **p));
                }
            }
        }
        Ok(())
    }
}

/// The zigzag layout of `K_n`: spine `0..n`, `ceil(n/2)` pages, page `p`
/// carrying the path `p, p+1, p-1, p+2, p-2, ...` (mod `n`). An edge on two
/// such paths (odd `n`) goes to the first.
pub fn canonical_book_layout(n: usize) -> Result<BookLayout, LayoutError> {
    if n < 3 {
        return Err(LayoutError::TooSmall(n));
    }
    let page_count = n.div_ceil(2);
    let mut page_of = BTreeMap::new();
    for p in 0..page_count {
        let mut path = vec![p % n];
        let mut k = 1;
        while path.len() < n {
            path.push((p + k) % n);
            if path.len() < n {
                path.push((p + n - k % n) % n);
            }
            k += 1;
        }
        for w in path.windows(2) {
            page_of.entry(Edge::new(w[0], w[1])).or_insert(p);
        }
    }
    Ok(BookLayout {
        spine_order: (0..n).collect(),
        page_of,
        page_count,
    })
}

/// Direction of page `p` of `count`: a rational point on the unit circle at
/// angle close to `2*pi*p/count` (exact at multiples of a quarter turn).
pub fn page_direction(p: usize, count: usize) -> (Rational, Rational) {
    // (p/count) of a turn, reduced, to spot the exact quarter turns
    let g = gcd(p * 4, count);
    match (p * 4 / g, count / g) {
        (0, _) => return (int(1), int(0)),
        (1, 1) => return (int(0), int(1)),
        (2, 1) => return (int(-1), int(0)),
        (3, 1) => return (int(0), int(-1)),
        _ => {}
    }
    // stereographic parametrisation: t = tan(theta/2), rounded to 1/1000
    let theta = std::f64::consts::TAU * p as f64 / count as f64;
    let t = rat(((theta / 2.0).tan() * 1000.0).round() as i64, 1000);
    let one = int(1);
    let d = &one + &t * &t;
    ((&one - &t * &t) / &d, int(2) * &t / &d)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Realizes a layout in 3-space. Spine position `k` is `(0, 0, k)`; the arc
/// of an edge on page `p` goes from one endpoint to an apex at mid-height,
/// pushed out along the page direction by `len^2 / 2` for a spine interval of
/// length `len`, and back to the other endpoint. Apex distance over length
/// grows strictly with `len`, so a nested arc's apex lies strictly inside
/// the outer arc's triangle, even when the two share an endpoint.
pub fn book_embedding(g: &Graph, layout: &BookLayout) -> Result<SpatialGraph, LayoutError> {
    layout.validate(g)?;
    let pos = layout.positions();
    let positions: Vec<Point3> = pos.iter().map(|&k| Point3::from_ints(0, 0, k as i64)).collect();
    let dirs: Vec<(Rational, Rational)> = (0..layout.page_count)
        .map(|p| page_direction(p, layout.page_count))
        .collect();
    let mut arcs = BTreeMap::new();
    for (&e, &page) in &layout.page_of {
        let (hu, hv) = (pos[e.u] as i64, pos[e.v] as i64);
        let len = (hu - hv).abs();
        let half = rat(len * len, 2);
        let (dx, dy) = &dirs[page];
        let apex = Point3::new(dx * &half, dy * &half, rat(hu + hv, 2));
        let arc = Polyline::new(vec![positions[e.u].clone(), apex, positions[e.v].clone()]).expect("apex is off the spine");
        arcs.insert(e, arc);
    }
    let label = format!("book {} pages", layout.page_count);
    Ok(SpatialGraph::new(g.clone(), positions, arcs, label)?)
}
