//! Exact linking numbers of disjoint PL cycles from signed crossings in a
//! sheared parallel projection.
//!
//! A [`ProjectionFrame`] maps `(x, y, z)` to the plane point
//! `(x + sx*z, y + sy*z)` and keeps `z` as the height; the larger height is
//! the over strand. The sign of a crossing is the sign of
//! `cross(over direction, under direction)` in the plane (right-handed
//! crossings are positive), and `lk(A, B)` is the sum of signs over the
//! crossings where `A` passes over `B`.
//!
//! Degenerate frames (overlapping parallel pieces, crossings at a segment
//! end, equal heights at a crossing) are never perturbed away in the
//! embedding. Instead the next frame of a fixed, seeded sequence is tried,
//! so results are reproducible and independent of evaluation order.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cycle::Cycle;
use crate::embedding::{SegmentRef, SpatialGraph};
use crate::geom::{cross2, format_rational, int, orient2d, rat, Point2, Point3, Rational};
use crate::graph::Edge;

/// Frames tried before giving up on a pair.
pub const MAX_FRAME_ATTEMPTS: usize = 64;

const FRAME_SEED: u64 = 0x6c6b_5f66_7261_6d65;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionFrame {
    pub sx: Rational,
    pub sy: Rational,
}

impl ProjectionFrame {
    pub fn new(sx: Rational, sy: Rational) -> Self {
        ProjectionFrame { sx, sy }
    }

    /// Straight down the z-axis.
    pub fn identity() -> Self {
        ProjectionFrame::new(int(0), int(0))
    }

    pub fn project(&self, p: &Point3) -> Point2 {
        Point2 {
            x: &p.x + &self.sx * &p.z,
            y: &p.y + &self.sy * &p.z,
        }
    }

    /// The `index`-th frame of the retry sequence. Frame 0 is a fixed small
    /// shear; the rest are drawn from a seeded generator.
    pub fn nth(index: usize) -> Self {
        if index == 0 {
            return ProjectionFrame::new(rat(7, 61), rat(5, 67));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(FRAME_SEED);
        rng.set_stream(index as u64);
        random_frame(&mut rng)
    }
}

impl fmt::Display for ProjectionFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "shear ({}, {})", format_rational(&self.sx), format_rational(&self.sy))
    }
}

/// A random shear with small denominators and both components nonzero.
pub fn random_frame(rng: &mut impl Rng) -> ProjectionFrame {
    let den: i64 = rng.gen_range(23..=211);
    let mut num = || loop {
        let k: i64 = rng.gen_range(-den..=den);
        if k != 0 {
            return k;
        }
    };
    ProjectionFrame::new(rat(num(), den), rat(num(), den))
}

/// Which of the two input cycles a segment belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
}

/// Where a crossing sits: a segment of an arc and the parameter along it,
/// measured in the arc's stored direction (`edge.u` to `edge.v`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingSite {
    pub segment: SegmentRef,
    pub param: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingRecord {
    pub over: CrossingSite,
    pub under: CrossingSite,
    pub over_side: Side,
    pub under_side: Side,
    /// `+1` or `-1`, relative to the traversal directions of the two cycles.
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degeneracy {
    /// Projected segments are collinear and meet.
    ParallelOverlap(SegmentRef, SegmentRef),
    /// Projected segments meet at an end of one of them.
    EndpointCrossing(SegmentRef, SegmentRef),
    /// Projected crossing with both strands at the same height.
    EqualHeight(SegmentRef, SegmentRef),
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::ParallelOverlap(a, b) => write!(f, "{a} and {b} overlap in projection"),
            Degeneracy::EndpointCrossing(a, b) => write!(f, "{a} and {b} cross at a segment end"),
            Degeneracy::EqualHeight(a, b) => write!(f, "{a} and {b} cross at equal height"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkError {
    #[error("cycles share vertex {0}")]
    NotDisjoint(usize),
    #[error("not a cycle of the embedded graph: {0}")]
    BadWalk(String),
    #[error("degenerate projection: {0}")]
    DegenerateProjection(Degeneracy),
    #[error("no generic projection in {attempts} frames; last problem: {last}")]
    NoGenericFrame { attempts: usize, last: Degeneracy },
}

/// A projected segment, in the arc's stored direction.
#[derive(Debug, Clone)]
struct ProjectedSegment {
    id: SegmentRef,
    a: Point2,
    b: Point2,
    za: Rational,
    zb: Rational,
    lo: (Rational, Rational),
    hi: (Rational, Rational),
}

impl ProjectedSegment {
    fn new(id: SegmentRef, p: &Point3, q: &Point3, frame: &ProjectionFrame) -> Self {
        let a = frame.project(p);
        let b = frame.project(q);
        let lo = (a.x.clone().min(b.x.clone()), a.y.clone().min(b.y.clone()));
        let hi = (a.x.clone().max(b.x.clone()), a.y.clone().max(b.y.clone()));
        ProjectedSegment {
            id,
            a,
            b,
            za: p.z.clone(),
            zb: q.z.clone(),
            lo,
            hi,
        }
    }

    fn height_at(&self, t: &Rational) -> Rational {
        &self.za + (&self.zb - &self.za) * t
    }
}

/// A crossing between two stored-direction segments `s` and `t`.
#[derive(Debug, Clone)]
struct RawCrossing {
    s: SegmentRef,
    t: SegmentRef,
    s_param: Rational,
    t_param: Rational,
    s_over: bool,
    /// sign of `cross(dir s, dir t)`
    orientation: i8,
}

fn cross_segments(s: &ProjectedSegment, t: &ProjectedSegment) -> Result<Option<RawCrossing>, Degeneracy> {
    if s.hi.0 < t.lo.0 || t.hi.0 < s.lo.0 || s.hi.1 < t.lo.1 || t.hi.1 < s.lo.1 {
        return Ok(None);
    }
    let den = cross2(&s.a, &s.b, &t.a, &t.b);
    let w = Point2 {
        x: &t.a.x - &s.a.x,
        y: &t.a.y - &s.a.y,
    };
    if den.is_zero() {
        // also covers segments that project to a single point
        let collinear = orient2d(&s.a, &s.b, &t.a).is_zero()
            && orient2d(&s.a, &s.b, &t.b).is_zero()
            && orient2d(&t.a, &t.b, &s.a).is_zero()
            && orient2d(&t.a, &t.b, &s.b).is_zero();
        if collinear {
            // on one line with overlapping boxes: they share at least a point
            return Err(Degeneracy::ParallelOverlap(s.id, t.id));
        }
        return Ok(None);
    }
    // s.a + u (s.b - s.a) = t.a + v (t.b - t.a)
    let mut u_num = &w.x * (&t.b.y - &t.a.y) - &w.y * (&t.b.x - &t.a.x);
    let mut v_num = &w.x * (&s.b.y - &s.a.y) - &w.y * (&s.b.x - &s.a.x);
    let mut den_pos = den.clone();
    if den.is_negative() {
        u_num = -u_num;
        v_num = -v_num;
        den_pos = -den_pos;
    }
    let outside = |r: &Rational| r.is_negative() || *r > den_pos;
    if outside(&u_num) || outside(&v_num) {
        return Ok(None);
    }
    let at_end = |r: &Rational| r.is_zero() || *r == den_pos;
    if at_end(&u_num) || at_end(&v_num) {
        return Err(Degeneracy::EndpointCrossing(s.id, t.id));
    }
    let u = u_num / &den_pos;
    let v = v_num / &den_pos;
    let hs = s.height_at(&u);
    let ht = t.height_at(&v);
    if hs == ht {
        return Err(Degeneracy::EqualHeight(s.id, t.id));
    }
    Ok(Some(RawCrossing {
        s: s.id,
        t: t.id,
        s_param: u,
        t_param: v,
        s_over: hs > ht,
        orientation: if den.is_positive() { 1 } else { -1 },
    }))
}

fn project_arc(sg: &SpatialGraph, e: Edge, frame: &ProjectionFrame) -> Vec<ProjectedSegment> {
    sg.arc(e)
        .points()
        .windows(2)
        .enumerate()
        .map(|(i, w)| ProjectedSegment::new(SegmentRef { edge: e, segment: i }, &w[0], &w[1], frame))
        .collect()
}

fn cross_arcs(s: &[ProjectedSegment], t: &[ProjectedSegment]) -> Result<Vec<RawCrossing>, Degeneracy> {
    let mut out = Vec::new();
    for a in s {
        for b in t {
            if let Some(c) = cross_segments(a, b)? {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// An oriented step of a walk: the edge and whether it is traversed in
/// stored direction.
#[derive(Debug, Clone, Copy)]
struct Step {
    edge: Edge,
    forward: bool,
}

fn walk_steps(sg: &SpatialGraph, walk: &[usize]) -> Result<Vec<Step>, LinkError> {
    let g = sg.graph();
    if walk.len() < 3 {
        return Err(LinkError::BadWalk(format!("{walk:?} has fewer than 3 vertices")));
    }
    let mut seen = 0u64;
    for &v in walk {
        if v >= g.vertex_count() || seen >> v & 1 == 1 {
            return Err(LinkError::BadWalk(format!("{walk:?} repeats or leaves the graph at {v}")));
        }
        seen |= 1 << v;
    }
    (0..walk.len())
        .map(|i| {
            let (x, y) = (walk[i], walk[(i + 1) % walk.len()]);
            if !g.has_edge(x, y) {
                return Err(LinkError::BadWalk(format!("{x}-{y} is not an edge")));
            }
            let edge = Edge::new(x, y);
            Ok(Step {
                edge,
                forward: edge.u == x,
            })
        })
        .collect()
}

fn check_disjoint(a: &[usize], b: &[usize]) -> Result<(), LinkError> {
    match a.iter().find(|v| b.contains(v)) {
        Some(&v) => Err(LinkError::NotDisjoint(v)),
        None => Ok(()),
    }
}

/// Signed sum and crossing count for a pair, and which frame produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairTally {
    pub lk: i64,
    pub crossings: usize,
    /// Sum of all crossing signs; always `2 * lk`.
    pub signed_total: i64,
    pub frame_index: usize,
}

/// Folds raw edge-pair crossings into a tally for walks with the given steps.
fn tally_steps(
    steps_a: &[Step],
    steps_b: &[Step],
    mut lookup: impl FnMut(Edge, Edge) -> Result<Vec<RawCrossingSummary>, Degeneracy>,
) -> Result<(i64, usize, i64), Degeneracy> {
    let (mut lk, mut count, mut total) = (0i64, 0usize, 0i64);
    for sa in steps_a {
        for sb in steps_b {
            for c in lookup(sa.edge, sb.edge)? {
                let flip = if sa.forward == sb.forward { 1 } else { -1 };
                // orientation of (A dir, B dir) along the traversals
                let ab = i64::from(c.orientation) * flip;
                let sign = if c.a_over { ab } else { -ab };
                if c.a_over {
                    lk += sign;
                }
                count += 1;
                total += sign;
            }
        }
    }
    Ok((lk, count, total))
}

#[derive(Debug, Clone, Copy)]
struct RawCrossingSummary {
    a_over: bool,
    orientation: i8,
}

impl RawCrossingSummary {
    fn from_raw(c: &RawCrossing, a_is_s: bool) -> Self {
        if a_is_s {
            RawCrossingSummary {
                a_over: c.s_over,
                orientation: c.orientation,
            }
        } else {
            // cross(dir t, dir s) = -cross(dir s, dir t)
            RawCrossingSummary {
                a_over: !c.s_over,
                orientation: -c.orientation,
            }
        }
    }
}

/// All crossings between the projections of walks `a` and `b` in `frame`.
pub fn project_and_cross(
    sg: &SpatialGraph,
    a: &[usize],
    b: &[usize],
    frame: &ProjectionFrame,
) -> Result<Vec<CrossingRecord>, LinkError> {
    check_disjoint(a, b)?;
    let steps_a = walk_steps(sg, a)?;
    let steps_b = walk_steps(sg, b)?;
    let proj_b: Vec<(Step, Vec<ProjectedSegment>)> =
        steps_b.iter().map(|s| (*s, project_arc(sg, s.edge, frame))).collect();
    let mut out = Vec::new();
    for sa in &steps_a {
        let pa = project_arc(sg, sa.edge, frame);
        for (sb, pb) in &proj_b {
            for c in cross_arcs(&pa, pb).map_err(LinkError::DegenerateProjection)? {
                let flip = if sa.forward == sb.forward { 1 } else { -1 };
                let ab = i8::try_from(i64::from(c.orientation) * flip).unwrap();
                let site_a = CrossingSite {
                    segment: c.s,
                    param: c.s_param,
                };
                let site_b = CrossingSite {
                    segment: c.t,
                    param: c.t_param,
                };
                out.push(if c.s_over {
                    CrossingRecord {
                        over: site_a,
                        under: site_b,
                        over_side: Side::A,
                        under_side: Side::B,
                        sign: ab,
                    }
                } else {
                    CrossingRecord {
                        over: site_b,
                        under: site_a,
                        over_side: Side::B,
                        under_side: Side::A,
                        sign: -ab,
                    }
                });
            }
        }
    }
    Ok(out)
}

/// Linking number of two oriented walks in one fixed frame; fails on a degenerate frame.
pub fn linking_number_in_frame(
    sg: &SpatialGraph,
    a: &[usize],
    b: &[usize],
    frame: &ProjectionFrame,
) -> Result<i64, LinkError> {
    let crossings = project_and_cross(sg, a, b, frame)?;
    Ok(crossings
        .iter()
        .filter(|c| c.over_side == Side::A)
        .map(|c| i64::from(c.sign))
        .sum())
}

/// Tally for two oriented walks, trying frames `0, 1, 2, ...` until one is generic.
pub fn tally_walks(sg: &SpatialGraph, a: &[usize], b: &[usize]) -> Result<PairTally, LinkError> {
    check_disjoint(a, b)?;
    let steps_a = walk_steps(sg, a)?;
    let steps_b = walk_steps(sg, b)?;
    tally_with_retry(sg, &steps_a, &steps_b, 0)
}

fn tally_with_retry(sg: &SpatialGraph, steps_a: &[Step], steps_b: &[Step], first: usize) -> Result<PairTally, LinkError> {
    let mut last = None;
    for index in first..MAX_FRAME_ATTEMPTS {
        let frame = ProjectionFrame::nth(index);
        let mut cache: HashMap<Edge, Vec<ProjectedSegment>> = HashMap::new();
        let mut arc = |e: Edge| cache.entry(e).or_insert_with(|| project_arc(sg, e, &frame)).clone();
        let result = tally_steps(steps_a, steps_b, |ea, eb| {
            let (pa, pb) = (arc(ea), arc(eb));
            Ok(cross_arcs(&pa, &pb)?
                .iter()
                .map(|c| RawCrossingSummary::from_raw(c, true))
                .collect())
        });
        match result {
            Ok((lk, crossings, signed_total)) => {
                return Ok(PairTally {
                    lk,
                    crossings,
                    signed_total,
                    frame_index: index,
                })
            }
            Err(d) => last = Some(d),
        }
    }
    Err(LinkError::NoGenericFrame {
        attempts: MAX_FRAME_ATTEMPTS - first,
        last: last.expect("at least one attempt"),
    })
}

/// `lk(a, b)` for cycles in their canonical orientation.
pub fn linking_number(sg: &SpatialGraph, a: &Cycle, b: &Cycle) -> Result<i64, LinkError> {
    Ok(tally_walks(sg, a.vertices(), b.vertices())?.lk)
}

/// Inter-cycle crossings in the first generic frame of the retry sequence.
/// Projection-dependent: a heuristic figure, not an invariant.
pub fn crossing_count(sg: &SpatialGraph, a: &Cycle, b: &Cycle) -> Result<usize, LinkError> {
    Ok(tally_walks(sg, a.vertices(), b.vertices())?.crossings)
}

/// Crossings of one arc pair in frame 0, `None` when the arcs share a vertex.
type ArcPairCrossings = Option<Result<Vec<RawCrossing>, Degeneracy>>;

/// Precomputed crossings between every pair of vertex-disjoint arcs in
/// frame 0, so many cycle pairs of one embedding can be tallied cheaply.
/// Pairs that hit a degenerate arc pair fall back to the retry sequence.
pub struct LinkingEngine<'a> {
    sg: &'a SpatialGraph,
    edge_index: HashMap<Edge, usize>,
    /// `table[i][j]` for `i < j`: crossings of arc `i` (as `s`) with arc `j`.
    table: Vec<Vec<ArcPairCrossings>>,
}

impl<'a> LinkingEngine<'a> {
    pub fn new(sg: &'a SpatialGraph) -> Self {
        Self::with_execution(sg, crate::par::Execution::default())
    }

    pub fn with_execution(sg: &'a SpatialGraph, exec: crate::par::Execution) -> Self {
        let frame = ProjectionFrame::nth(0);
        let edges: Vec<Edge> = sg.graph().edges().collect();
        let projected: Vec<Vec<ProjectedSegment>> = edges.iter().map(|&e| project_arc(sg, e, &frame)).collect();
        let rows: Vec<usize> = (0..edges.len()).collect();
        let table = crate::par::map(&rows, exec, |&i| {
            (0..edges.len())
                .map(|j| {
                    if j <= i || edges[i].shares_vertex(&edges[j]) {
                        None
                    } else {
                        Some(cross_arcs(&projected[i], &projected[j]))
                    }
                })
                .collect()
        });
        LinkingEngine {
            sg,
            edge_index: edges.iter().enumerate().map(|(i, &e)| (e, i)).collect(),
            table,
        }
    }

    pub fn embedding(&self) -> &SpatialGraph {
        self.sg
    }

    fn lookup(&self, ea: Edge, eb: Edge) -> Result<Vec<RawCrossingSummary>, Degeneracy> {
        let (i, j) = (self.edge_index[&ea], self.edge_index[&eb]);
        let (lo, hi, a_is_s) = if i < j { (i, j, true) } else { (j, i, false) };
        match self.table[lo][hi].as_ref().expect("disjoint walks use vertex-disjoint edges") {
            Ok(list) => Ok(list.iter().map(|c| RawCrossingSummary::from_raw(c, a_is_s)).collect()),
            Err(d) => Err(d.clone()),
        }
    }

    /// Tally for oriented walks `a` and `b`.
    pub fn tally(&self, a: &[usize], b: &[usize]) -> Result<PairTally, LinkError> {
        check_disjoint(a, b)?;
        let steps_a = walk_steps(self.sg, a)?;
        let steps_b = walk_steps(self.sg, b)?;
        match tally_steps(&steps_a, &steps_b, |ea, eb| self.lookup(ea, eb)) {
            Ok((lk, crossings, signed_total)) => Ok(PairTally {
                lk,
                crossings,
                signed_total,
                frame_index: 0,
            }),
            Err(_) => tally_with_retry(self.sg, &steps_a, &steps_b, 1),
        }
    }

    pub fn linking_number(&self, a: &Cycle, b: &Cycle) -> Result<i64, LinkError> {
        Ok(self.tally(a.vertices(), b.vertices())?.lk)
    }
}

/// Fraction strictly between 0 and 1, for sanity checks on records.
pub fn is_interior(r: &Rational) -> bool {
    r.is_positive() && *r < Rational::one()
}
