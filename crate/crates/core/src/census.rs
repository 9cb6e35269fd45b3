//! The full census of an embedding: every vertex-disjoint cycle pair with
//! its linking number and crossing count, plus aggregates by class.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycle::{enumerate_disjoint_cycle_pairs, Cycle};
use crate::embedding::SpatialGraph;
use crate::linking::{LinkError, LinkingEngine};
use crate::par::{self, Execution};

/// Crossing count above which an unlinked pair is flagged for a manual look.
pub const DEFAULT_FLAG_THRESHOLD: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("pair {a} / {b}: {source}")]
    Pair {
        a: Cycle,
        b: Cycle,
        #[source]
        source: LinkError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub a: Cycle,
    pub b: Cycle,
    pub lk: i64,
    pub crossings: usize,
}

/// Number of pairs with cycle lengths `len_a <= len_b` and `|lk| = abs_lk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassCount {
    pub len_a: usize,
    pub len_b: usize,
    pub abs_lk: u64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusMetadata {
    pub graph: String,
    pub vertices: usize,
    pub edges: usize,
    pub generator: String,
    pub flag_threshold: usize,
    /// Wall-clock time, omitted when timing is switched off.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub metadata: CensusMetadata,
    pub link_count: usize,
    /// Sorted by `(len_a, len_b, abs_lk)`; includes the `abs_lk = 0` classes.
    pub aggregates: Vec<ClassCount>,
    /// Sorted as the pairs are enumerated.
    pub per_pair: Vec<PairRecord>,
    /// Pairs with `lk = 0` and more crossings than the threshold.
    #[serde(rename = "manual_check")]
    pub flagged: Vec<PairRecord>,
}

impl CensusReport {
    pub fn count(&self, len_a: usize, len_b: usize, abs_lk: u64) -> usize {
        self.aggregates
            .iter()
            .find(|c| (c.len_a, c.len_b, c.abs_lk) == (len_a, len_b, abs_lk))
            .map_or(0, |c| c.count)
    }

    /// Links (nonzero `lk`) with cycle lengths `len_a <= len_b`.
    pub fn links_of_class(&self, len_a: usize, len_b: usize) -> usize {
        self.aggregates
            .iter()
            .filter(|c| c.len_a == len_a && c.len_b == len_b && c.abs_lk > 0)
            .map(|c| c.count)
            .sum()
    }

    /// Links broken down by `(len_a, len_b)`.
    pub fn links_by_class(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for c in self.aggregates.iter().filter(|c| c.abs_lk > 0) {
            *out.entry((c.len_a, c.len_b)).or_insert(0) += c.count;
        }
        out
    }

    /// Pairs with odd linking number.
    pub fn odd_count(&self) -> usize {
        self.aggregates.iter().filter(|c| c.abs_lk % 2 == 1).map(|c| c.count).sum()
    }

    /// Rebuilds the aggregate fields from `per_pair` and compares.
    pub fn is_self_consistent(&self) -> bool {
        let (aggregates, link_count) = aggregate(&self.per_pair);
        let flagged = flag(&self.per_pair, self.metadata.flag_threshold);
        aggregates == self.aggregates && link_count == self.link_count && flagged == self.flagged
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusOptions {
    pub flag_threshold: usize,
    pub execution: Execution,
    pub timing: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            flag_threshold: DEFAULT_FLAG_THRESHOLD,
            execution: Execution::default(),
            timing: true,
        }
    }
}

pub fn census(sg: &SpatialGraph) -> Result<CensusReport, CensusError> {
    census_with(sg, CensusOptions::default())
}

pub fn census_with(sg: &SpatialGraph, options: CensusOptions) -> Result<CensusReport, CensusError> {
    let start = Instant::now();
    let pairs = enumerate_disjoint_cycle_pairs(sg.graph());
    let engine = LinkingEngine::with_execution(sg, options.execution);
    let results = par::map(&pairs, options.execution, |(a, b)| {
        engine
            .tally(a.vertices(), b.vertices())
            .map(|t| PairRecord {
                a: a.clone(),
                b: b.clone(),
                lk: t.lk,
                crossings: t.crossings,
            })
            .map_err(|source| CensusError::Pair {
                a: a.clone(),
                b: b.clone(),
                source,
            })
    });
    let per_pair = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let (aggregates, link_count) = aggregate(&per_pair);
    let flagged = flag(&per_pair, options.flag_threshold);
    let g = sg.graph();
    Ok(CensusReport {
        metadata: CensusMetadata {
            graph: g.spec().map_or_else(|| "custom".to_string(), |s| s.to_string()),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            generator: sg.generator().to_string(),
            flag_threshold: options.flag_threshold,
            elapsed_ms: options.timing.then(|| start.elapsed().as_millis() as u64),
        },
        link_count,
        aggregates,
        per_pair,
        flagged,
    })
}

fn aggregate(per_pair: &[PairRecord]) -> (Vec<ClassCount>, usize) {
    let mut map: BTreeMap<(usize, usize, u64), usize> = BTreeMap::new();
    for p in per_pair {
        let (la, lb) = (p.a.len().min(p.b.len()), p.a.len().max(p.b.len()));
        *map.entry((la, lb, p.lk.unsigned_abs())).or_insert(0) += 1;
    }
    let link_count = per_pair.iter().filter(|p| p.lk != 0).count();
    let classes = map
        .into_iter()
        .map(|((len_a, len_b, abs_lk), count)| ClassCount {
            len_a,
            len_b,
            abs_lk,
            count,
        })
        .collect();
    (classes, link_count)
}

fn flag(per_pair: &[PairRecord], threshold: usize) -> Vec<PairRecord> {
    per_pair
        .iter()
        .filter(|p| p.lk == 0 && p.crossings > threshold)
        .cloned()
        .collect()
}

/// Change in link count for one `(len_a, len_b)` class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDelta {
    pub len_a: usize,
    pub len_b: usize,
    pub delta: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusDiff {
    /// Classes whose link counts differ, sorted.
    pub classes: Vec<ClassDelta>,
    pub total: i64,
}

impl CensusDiff {
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.total == 0
    }
}

/// Link counts of `a` minus those of `b`, by class.
pub fn census_diff(a: &CensusReport, b: &CensusReport) -> CensusDiff {
    diff_link_classes(&a.links_by_class(), &b.links_by_class())
}

/// [`census_diff`] on bare per-class link counts, for comparing against
/// published breakdowns that come without a full report.
pub fn diff_link_classes(a: &BTreeMap<(usize, usize), usize>, b: &BTreeMap<(usize, usize), usize>) -> CensusDiff {
    let mut keys: Vec<&(usize, usize)> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    let classes: Vec<ClassDelta> = keys
        .into_iter()
        .map(|&(len_a, len_b)| ClassDelta {
            len_a,
            len_b,
            delta: *a.get(&(len_a, len_b)).unwrap_or(&0) as i64 - *b.get(&(len_a, len_b)).unwrap_or(&0) as i64,
        })
        .filter(|d| d.delta != 0)
        .collect();
    let total = a.values().sum::<usize>() as i64 - b.values().sum::<usize>() as i64;
    CensusDiff { classes, total }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::book::{book_embedding, canonical_book_layout};
    use crate::embedding::straight_line_embedding;
    use crate::geom::Point3;
    use crate::graph::{build_complete_multipartite, Graph, PartiteSpec};

    fn canonical(n: usize) -> SpatialGraph {
        let g = build_complete_multipartite(&PartiteSpec::complete(n).unwrap());
        book_embedding(&g, &canonical_book_layout(n).unwrap()).unwrap()
    }

    #[test]
    fn k6_has_one_link() {
        let r = census(&canonical(6)).unwrap();
        assert_eq!(r.link_count, 1);
        assert_eq!(r.count(3, 3, 1), 1);
        assert_eq!(r.per_pair.len(), 10);
        assert!(r.is_self_consistent());
        assert_eq!(r.metadata.graph, "K6");
    }

    #[test]
    fn split_triangles_have_no_links() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let coords = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (10, 0, 0), (11, 0, 0), (10, 1, 1)]
            .map(|(x, y, z)| Point3::from_ints(x, y, z))
            .to_vec();
        let r = census(&straight_line_embedding(g, coords).unwrap()).unwrap();
        assert_eq!(r.link_count, 0);
        assert_eq!(r.per_pair.len(), 1);
        assert!(r.flagged.is_empty());
        assert_eq!(r.metadata.graph, "custom");
    }

    #[test]
    fn tampered_report_is_inconsistent() {
        let mut r = census(&canonical(6)).unwrap();
        r.per_pair[0].lk += 1;
        assert!(!r.is_self_consistent());
    }

    #[test]
    fn flag_threshold_is_strict() {
        let rec = |lk, crossings| PairRecord {
            a: Cycle::new(&[0, 1, 2]).unwrap(),
            b: Cycle::new(&[3, 4, 5]).unwrap(),
            lk,
            crossings,
        };
        let pairs = vec![rec(0, 4), rec(0, 5), rec(1, 9), rec(0, 0)];
        assert_eq!(flag(&pairs, 4), vec![rec(0, 5)]);
        assert_eq!(flag(&pairs, 0), vec![rec(0, 4), rec(0, 5)]);
    }

    #[test]
    fn identical_reports_have_empty_diff() {
        let r = census(&canonical(6)).unwrap();
        assert!(census_diff(&r, &r).is_empty());
    }

    #[test]
    fn published_breakdown_diff() {
        let ours: BTreeMap<_, _> = [((3, 3), 28), ((3, 4), 112), ((3, 5), 112), ((4, 4), 53)].into();
        let theirs: BTreeMap<_, _> = [((3, 3), 28), ((3, 4), 112), ((3, 5), 109), ((4, 4), 56)].into();
        let d = diff_link_classes(&ours, &theirs);
        assert_eq!(d.total, 0);
        let deltas: Vec<i64> = [(3, 3), (3, 4), (3, 5), (4, 4)]
            .iter()
            .map(|&(a, b)| d.classes.iter().find(|c| (c.len_a, c.len_b) == (a, b)).map_or(0, |c| c.delta))
            .collect();
        assert_eq!(deltas, vec![0, 0, 3, -3]);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let sg = canonical(7);
        let mut seq = census_with(
            &sg,
            CensusOptions {
                execution: Execution::Sequential,
                timing: false,
                ..Default::default()
            },
        )
        .unwrap();
        let par = census_with(
            &sg,
            CensusOptions {
                execution: Execution::Parallel,
                timing: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
        seq.metadata.elapsed_ms = Some(1);
        assert_ne!(seq, par);
    }
}
