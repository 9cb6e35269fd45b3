//! The reproduction table: every published count this crate can rebuild,
//! recomputed and compared.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::book::{book_embedding, canonical_book_layout};
use crate::census::{census_with, CensusOptions, CensusReport};
use crate::copies::count_subgraph_copies;
use crate::cycle::{all_cycles, enumerate_disjoint_cycle_pairs};
use crate::cycle_space::{build_cycle_space, IntegerFunctional};
use crate::embedding::{straight_line_embedding, SpatialGraph};
use crate::fan::fan_embedding;
use crate::geom::Point3;
use crate::graph::{build_complete_multipartite, PartiteSpec};
use crate::lemma::{parse_lemma, verify_integer_lemma, verify_parity_lemma, DEFAULT_WINDOW};
use crate::linking::{linking_number_in_frame, random_frame, tally_walks, LinkingEngine};
use crate::par::Execution;

/// The lemma files shipped with the crate, by file name.
pub const BUNDLED_LEMMAS: [(&str, &str); 4] = [
    ("tetrahedron.lemma", include_str!("../../../lemmas/tetrahedron.lemma")),
    ("pyramid.lemma", include_str!("../../../lemmas/pyramid.lemma")),
    ("k2111.lemma", include_str!("../../../lemmas/k2111.lemma")),
    ("k5-pentagon.lemma", include_str!("../../../lemmas/k5-pentagon.lemma")),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproRow {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproTable {
    pub rows: Vec<ReproRow>,
}

impl ReproTable {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

impl fmt::Display for ReproTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.rows {
            writeln!(
                f,
                "{}  {:<w$}  expected {}  observed {}  ({} ms)",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.expected,
                r.observed,
                r.elapsed_ms
            )?;
        }
        let passed = self.rows.iter().filter(|r| r.pass).count();
        write!(f, "{passed}/{} passed", self.rows.len())
    }
}

pub fn canonical_book(n: usize) -> SpatialGraph {
    let g = build_complete_multipartite(&PartiteSpec::complete(n).expect("n >= 1"));
    book_embedding(&g, &canonical_book_layout(n).expect("n >= 3")).expect("canonical layout embeds")
}

fn run_census(sg: &SpatialGraph, execution: Execution) -> CensusReport {
    census_with(
        sg,
        CensusOptions {
            execution,
            ..Default::default()
        },
    )
    .expect("canonical embeddings are valid")
}

/// Link counts by class, as `a-b:count` joined by spaces.
pub fn breakdown(r: &CensusReport) -> String {
    r.links_by_class()
        .iter()
        .map(|((a, b), c)| format!("{a}-{b}:{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

struct Row<'a> {
    rows: &'a mut Vec<ReproRow>,
}

impl Row<'_> {
    fn check(&mut self, name: &str, expected: String, run: impl FnOnce() -> String) {
        let start = Instant::now();
        let observed = run();
        self.rows.push(ReproRow {
            name: name.to_string(),
            pass: observed == expected,
            expected,
            observed,
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
}

fn classes(pairs: &[((usize, usize), usize)]) -> String {
    pairs.iter().map(|((a, b), c)| format!("{a}-{b}:{c}")).collect::<Vec<_>>().join(" ")
}

fn with_total(r: &CensusReport) -> String {
    format!("{} [{}]", r.link_count, breakdown(r))
}

/// Runs the full table. `properties` adds the randomized property checks.
pub fn run(properties: bool) -> ReproTable {
    let mut rows = Vec::new();
    let mut row = Row { rows: &mut rows };
    let exec = Execution::default();

    row.check("canonical book K6", format!("1 [{}]", classes(&[((3, 3), 1)])), || {
        with_total(&run_census(&canonical_book(6), exec))
    });
    row.check("canonical book K7", format!("21 [{}]", classes(&[((3, 3), 7), ((3, 4), 14)])), || {
        with_total(&run_census(&canonical_book(7), exec))
    });
    row.check(
        "canonical book K8 (sequential)",
        format!("305 [{}]", classes(&[((3, 3), 28), ((3, 4), 112), ((3, 5), 112), ((4, 4), 53)])),
        || with_total(&run_census(&canonical_book(8), Execution::Sequential)),
    );
    for n in 6..=8 {
        row.check(&format!("linked triangle pairs in K{n}"), binom(n, 6).to_string(), || {
            run_census(&canonical_book(n), exec).links_of_class(3, 3).to_string()
        });
    }
    for n in 4..=8 {
        let want = 2 * binom(n, 4);
        row.check(&format!("fan K4,{n}"), format!("{want} [{}]", classes(&[((4, 4), want)])), || {
            with_total(&run_census(&fan_embedding(4, n).expect("valid sizes"), exec))
        });
    }
    row.check("fan K5,5", format!("150 [{}]", classes(&[((4, 4), 50), ((4, 6), 100)])), || {
        with_total(&run_census(&fan_embedding(5, 5).expect("valid sizes"), exec))
    });

    for (file, text) in BUNDLED_LEMMAS {
        row.check(&format!("lemma {file} (GF(2), exhaustive)"), "pass".into(), || {
            let stmt = parse_lemma(text).expect("bundled lemma parses");
            let r = verify_parity_lemma(&stmt).expect("lemma host is connected");
            if r.passed() { "pass" } else { "fail" }.into()
        });
    }
    row.check(&format!("lemma pyramid.lemma (integer, window {DEFAULT_WINDOW})"), "pass".into(), || {
        let stmt = parse_lemma(BUNDLED_LEMMAS[1].1).expect("bundled lemma parses");
        let r = verify_integer_lemma(&stmt, DEFAULT_WINDOW).expect("valid window");
        if r.passed() { "pass" } else { "fail" }.into()
    });

    for (host, pattern, want) in [("8", "6", 28), ("8", "7", 8), ("8", "4,4", 35), ("4,3,1", "3,3,1", 4)] {
        let h: PartiteSpec = host.parse().expect("literal spec");
        let p: PartiteSpec = pattern.parse().expect("literal spec");
        row.check(&format!("copies of {p} in {h}"), want.to_string(), || count_subgraph_copies(&h, &p).to_string());
    }

    if properties {
        row.check("lk frame independence (100 frames)", "0 mismatches".into(), || {
            format!("{} mismatches", frame_mismatches(100))
        });
        row.check("lk antisymmetry and symmetry", "0 violations".into(), || {
            format!("{} violations", symmetry_violations())
        });
        row.check("GF(2) linearity of lk(C, -) (1000 K7 trials)", "0 failures".into(), || {
            format!("{} failures", linearity_failures(7, 1000))
        });
        row.check("crossings >= 2|lk| on every censused pair", "0 violations".into(), || {
            let mut bad = 0;
            for sg in [canonical_book(8), fan_embedding(5, 5).expect("valid sizes")] {
                let r = run_census(&sg, exec);
                bad += r.per_pair.iter().filter(|p| (p.crossings as i64) < 2 * p.lk.abs()).count();
            }
            format!("{bad} violations")
        });
    }
    ReproTable { rows }
}

/// A random straight-line embedding of `K_n` with integer coordinates.
pub fn random_straight_line(n: usize, rng: &mut impl Rng) -> SpatialGraph {
    let g = build_complete_multipartite(&PartiteSpec::complete(n).expect("n >= 1"));
    loop {
        let coords = (0..n)
            .map(|_| Point3::from_ints(rng.gen_range(-40..=40), rng.gen_range(-40..=40), rng.gen_range(-40..=40)))
            .collect();
        if let Ok(sg) = straight_line_embedding(g.clone(), coords) {
            return sg;
        }
    }
}

fn frame_mismatches(frames: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sg = random_straight_line(7, &mut rng);
    let mut bad = 0;
    for (a, b) in enumerate_disjoint_cycle_pairs(sg.graph()).iter().step_by(23) {
        let lk = tally_walks(&sg, a.vertices(), b.vertices()).expect("valid pair").lk;
        let mut generic = 0;
        while generic < frames {
            if let Ok(v) = linking_number_in_frame(&sg, a.vertices(), b.vertices(), &random_frame(&mut rng)) {
                generic += 1;
                bad += usize::from(v != lk);
            }
        }
    }
    bad
}

fn symmetry_violations() -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let sg = random_straight_line(7, &mut rng);
    let mut bad = 0;
    for (a, b) in enumerate_disjoint_cycle_pairs(sg.graph()) {
        let lk = |x: &[usize], y: &[usize]| tally_walks(&sg, x, y).expect("valid pair").lk;
        let v = lk(a.vertices(), b.vertices());
        bad += usize::from(lk(&a.reversed_walk(), b.vertices()) != -v);
        bad += usize::from(lk(b.vertices(), a.vertices()) != v);
    }
    bad
}

/// Random embeddings of `K_n`; C is the triangle 0-1-2 and H the complete
/// graph on the other vertices. Counts cycles of H where lk(C, -) differs
/// from the functional fixed by its values on a cycle basis.
pub fn linearity_failures(n: usize, trials: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let keep: Vec<usize> = (3..n).collect();
    let h = build_complete_multipartite(&PartiteSpec::complete(n - 3).expect("n > 3"));
    let cs = build_cycle_space(&h).expect("complete graphs are connected");
    let cycles = all_cycles(&h);
    let mut bad = 0;
    for _ in 0..trials {
        let sg = random_straight_line(n, &mut rng);
        let engine = LinkingEngine::new(&sg);
        let lk = |w: &[usize]| {
            let lifted: Vec<usize> = w.iter().map(|&v| keep[v]).collect();
            engine.tally(&[0, 1, 2], &lifted).expect("disjoint cycles").lk
        };
        let f = IntegerFunctional(cs.basis_walks().iter().map(|w| lk(w)).collect());
        for c in &cycles {
            let predicted = f.value(&cs.integer_coords(c.vertices()).expect("cycle of H"));
            bad += usize::from((lk(c.vertices()) - predicted) % 2 != 0);
        }
    }
    bad
}
