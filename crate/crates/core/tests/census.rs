use std::collections::BTreeMap;

use linkcensus::book::{book_embedding, canonical_book_layout};
use linkcensus::census::{census, census_diff, census_with, CensusOptions, CensusReport};
use linkcensus::embedding::SpatialGraph;
use linkcensus::fan::fan_embedding;
use linkcensus::graph::{build_complete_multipartite, PartiteSpec};
use linkcensus::par::Execution;

fn canonical(n: usize) -> SpatialGraph {
    let g = build_complete_multipartite(&PartiteSpec::complete(n).unwrap());
    book_embedding(&g, &canonical_book_layout(n).unwrap()).unwrap()
}

fn classes(r: &CensusReport) -> BTreeMap<(usize, usize), usize> {
    r.links_by_class()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn canonical_k7() {
    let r = census(&canonical(7)).unwrap();
    assert_eq!(r.link_count, 21);
    assert_eq!(classes(&r), [((3, 3), 7), ((3, 4), 14)].into());
    assert!(r.is_self_consistent());
}

#[test]
fn canonical_k8() {
    let r = census(&canonical(8)).unwrap();
    assert_eq!(r.link_count, 305);
    assert_eq!(classes(&r), [((3, 3), 28), ((3, 4), 112), ((3, 5), 112), ((4, 4), 53)].into());
    assert_eq!(r.count(4, 4, 2), 1);
}

#[test]
fn triangle_pairs_in_canonical_books() {
    for n in 6..=8 {
        let r = census(&canonical(n)).unwrap();
        assert_eq!(r.links_of_class(3, 3), binom(n, 6), "K{n}");
    }
}

#[test]
fn k7_minus_k6() {
    let d = census_diff(&census(&canonical(7)).unwrap(), &census(&canonical(6)).unwrap());
    assert_eq!(d.total, 20);
}

#[test]
fn deleting_last_spine_vertex_gives_smaller_canonical_book() {
    for n in 7..=8 {
        let sub = canonical(n).induced(&(0..n - 1).collect::<Vec<_>>());
        let a = census(&sub).unwrap();
        let b = census(&canonical(n - 1)).unwrap();
        let strip = |r: &CensusReport| r.per_pair.iter().map(|p| (p.a.clone(), p.b.clone(), p.lk)).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b), "K{n}");
    }
}

#[test]
fn induced_census_is_a_restriction() {
    let sg = canonical(8);
    let full = census(&sg).unwrap();
    let keep = [0, 2, 3, 5, 6, 7, 1];
    let sub = census(&sg.induced(&keep)).unwrap();
    for p in &sub.per_pair {
        let a = p.a.relabel(&keep);
        let b = p.b.relabel(&keep);
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let orig = full
            .per_pair
            .iter()
            .find(|q| q.a == a && q.b == b)
            .expect("pair of the full census");
        assert_eq!(orig.lk.abs(), p.lk.abs());
    }
}

#[test]
fn fan_k4n() {
    for n in 4..=8 {
        let r = census(&fan_embedding(4, n).unwrap()).unwrap();
        assert_eq!(r.link_count, 2 * binom(n, 4), "K4,{n}");
        assert_eq!(classes(&r), [((4, 4), 2 * binom(n, 4))].into());
    }
}

#[test]
fn fan_k55() {
    let r = census(&fan_embedding(5, 5).unwrap()).unwrap();
    assert_eq!(r.link_count, 150);
    assert_eq!(classes(&r), [((4, 4), 50), ((4, 6), 100)].into());
}

#[test]
fn bipartite_censuses_have_even_cycles_only() {
    for (m, n) in [(3, 3), (3, 4), (4, 4), (4, 5)] {
        let r = census(&fan_embedding(m, n).unwrap()).unwrap();
        assert!(r.aggregates.iter().all(|c| c.len_a % 2 == 0 && c.len_b % 2 == 0));
    }
}

#[test]
fn crossings_dominate_linking_numbers() {
    for sg in [canonical(8), fan_embedding(5, 5).unwrap()] {
        let r = census(&sg).unwrap();
        for p in &r.per_pair {
            assert!(p.crossings as i64 >= 2 * p.lk.abs(), "{} / {}", p.a, p.b);
            assert_eq!(p.crossings % 2, 0);
        }
    }
}

#[test]
fn execution_modes_agree_on_k8() {
    let opts = |execution| CensusOptions {
        execution,
        timing: false,
        ..Default::default()
    };
    let sg = canonical(8);
    assert_eq!(
        census_with(&sg, opts(Execution::Sequential)).unwrap(),
        census_with(&sg, opts(Execution::Parallel)).unwrap()
    );
}
