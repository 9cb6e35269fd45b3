//! Exact link censuses of piecewise-linear spatial embeddings of complete
//! multipartite graphs, and exhaustive checks of cycle-space parity lemmas.
//!
//! Every geometric predicate uses exact rational arithmetic. Embeddings are
//! validated for injectivity on construction, linking numbers come from
//! signed crossings in a generic sheared projection, and a census lists
//! the linking number of every pair of vertex-disjoint cycles.
//!
//! ```
//! use linkcensus::{book_embedding, canonical_book_layout, census, build_complete_multipartite, PartiteSpec};
//!
//! let g = build_complete_multipartite(&PartiteSpec::complete(6).unwrap());
//! let sg = book_embedding(&g, &canonical_book_layout(6).unwrap()).unwrap();
//! assert_eq!(census(&sg).unwrap().link_count, 1);
//! ```

pub mod book;
pub mod census;
pub mod copies;
pub mod cycle;
pub mod cycle_space;
pub mod embedding;
pub mod fan;
pub mod format;
pub mod geom;
pub mod graph;
pub mod lemma;
pub mod linking;
pub mod par;
pub mod repro;

pub use book::{book_embedding, canonical_book_layout, BookLayout};
pub use census::{census, census_diff, census_with, CensusOptions, CensusReport};
pub use copies::count_subgraph_copies;
pub use cycle::{enumerate_cycles, enumerate_disjoint_cycle_pairs, Cycle};
pub use cycle_space::{build_cycle_space, CycleSpace};
pub use embedding::{straight_line_embedding, SpatialGraph};
pub use fan::fan_embedding;
pub use graph::{build_complete_multipartite, Edge, Graph, PartiteSpec};
pub use lemma::{parse_lemma, verify_integer_lemma, verify_parity_lemma, LemmaStatement};
pub use linking::{crossing_count, linking_number, ProjectionFrame};
pub use par::Execution;
