//! JSON file formats: embeddings, book layouts, vertex coordinates and
//! census reports. Rationals are always strings `"p/q"` (or `"p"`).
//!
//! An embedding file looks like
//!
//! ```json
//! {
//!   "format": "linkcensus-embedding",
//!   "version": 1,
//!   "generator": "fan 2 2",
//!   "graph": { "parts": [2, 2] },
//!   "vertices": [["1", "0", "0"], ...],
//!   "edges": [{ "ends": [0, 2], "points": [["31/32", "1/32", "1/8"], ...] }, ...]
//! }
//! ```
//!
//! `graph` is either `{"parts": [...]}` for a complete multipartite graph or
//! `{"vertex_count": n, "edges": [[u, v], ...]}`. Each edge lists the interior
//! points of its polyline running from `ends[0]` to `ends[1]`; an edge with no
//! `points` is a straight segment.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::book::{BookLayout, LayoutError};
use crate::census::CensusReport;
use crate::embedding::{EmbeddingError, Polyline, SpatialGraph};
use crate::geom::Point3;
use crate::graph::{build_complete_multipartite, Edge, Graph, GraphError, PartiteSpec};

pub const FORMAT_VERSION: u32 = 1;
pub const EMBEDDING_FORMAT: &str = "linkcensus-embedding";
pub const LAYOUT_FORMAT: &str = "linkcensus-layout";
pub const COORDS_FORMAT: &str = "linkcensus-coords";
pub const CENSUS_FORMAT: &str = "linkcensus-census";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep the bare message
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        FormatError::Json {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

fn field_err(field: impl Into<String>, message: impl ToString) -> FormatError {
    FormatError::Field {
        field: field.into(),
        message: message.to_string(),
    }
}

fn check_header(format: &str, version: u32, expected: &str) -> Result<(), FormatError> {
    if format != expected {
        return Err(field_err("format", format!("expected \"{expected}\", found \"{format}\"")));
    }
    if version != FORMAT_VERSION {
        return Err(field_err("version", format!("unsupported version {version}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GraphSpec {
    Partite { parts: Vec<usize> },
    Explicit { vertex_count: usize, edges: Vec<[usize; 2]> },
}

impl GraphSpec {
    pub fn of(g: &Graph) -> Self {
        match g.spec() {
            Some(s) => GraphSpec::Partite { parts: s.parts().to_vec() },
            None => GraphSpec::Explicit {
                vertex_count: g.vertex_count(),
                edges: g.edges().map(|e| [e.u, e.v]).collect(),
            },
        }
    }

    pub fn build(&self) -> Result<Graph, FormatError> {
        let graph_err = |e: GraphError| field_err("graph", e);
        match self {
            GraphSpec::Partite { parts } => Ok(build_complete_multipartite(&PartiteSpec::new(parts.clone()).map_err(graph_err)?)),
            GraphSpec::Explicit { vertex_count, edges } => {
                Graph::new(*vertex_count, edges.iter().map(|e| (e[0], e[1]))).map_err(graph_err)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub ends: [usize; 2],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Point3>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingFile {
    pub format: String,
    pub version: u32,
    #[serde(default)]
    pub generator: String,
    pub graph: GraphSpec,
    pub vertices: Vec<Point3>,
    pub edges: Vec<EdgeEntry>,
}

impl EmbeddingFile {
    pub fn from_embedding(sg: &SpatialGraph) -> Self {
        EmbeddingFile {
            format: EMBEDDING_FORMAT.to_string(),
            version: FORMAT_VERSION,
            generator: sg.generator().to_string(),
            graph: GraphSpec::of(sg.graph()),
            vertices: sg.positions().to_vec(),
            edges: sg
                .arcs()
                .map(|(e, arc)| {
                    let pts = arc.points();
                    EdgeEntry {
                        ends: [e.u, e.v],
                        points: pts[1..pts.len() - 1].to_vec(),
                    }
                })
                .collect(),
        }
    }

    pub fn to_embedding(&self) -> Result<SpatialGraph, FormatError> {
        check_header(&self.format, self.version, EMBEDDING_FORMAT)?;
        let graph = self.graph.build()?;
        let n = graph.vertex_count();
        if self.vertices.len() != n {
            return Err(field_err("vertices", format!("expected {n} positions, found {}", self.vertices.len())));
        }
        let mut arcs = BTreeMap::new();
        for (i, entry) in self.edges.iter().enumerate() {
            let field = format!("edges[{i}]");
            let [a, b] = entry.ends;
            if a >= n || b >= n || a == b || !graph.has_edge(a, b) {
                return Err(field_err(field, format!("{a}-{b} is not an edge of the graph")));
            }
            let mut pts = Vec::with_capacity(entry.points.len() + 2);
            pts.push(self.vertices[a].clone());
            pts.extend(entry.points.iter().cloned());
            pts.push(self.vertices[b].clone());
            let arc = Polyline::new(pts).ok_or_else(|| field_err(&field, "consecutive points coincide"))?;
            if arcs.insert(Edge::new(a, b), arc).is_some() {
                return Err(field_err(field, format!("edge {a}-{b} listed twice")));
            }
        }
        Ok(SpatialGraph::new(graph, self.vertices.clone(), arcs, self.generator.clone())?)
    }
}

pub fn write_embedding(sg: &SpatialGraph) -> String {
    let mut s = serde_json::to_string_pretty(&EmbeddingFile::from_embedding(sg)).expect("serializable");
    s.push('\n');
    s
}

pub fn read_embedding(text: &str) -> Result<SpatialGraph, FormatError> {
    let file: EmbeddingFile = serde_json::from_str(text)?;
    file.to_embedding()
}

/// A book layout: spine order and the edges of each page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutFile {
    pub format: String,
    pub version: u32,
    pub graph: GraphSpec,
    pub spine_order: Vec<usize>,
    pub pages: Vec<Vec<[usize; 2]>>,
}

impl LayoutFile {
    pub fn from_layout(g: &Graph, layout: &BookLayout) -> Self {
        let mut pages = vec![Vec::new(); layout.page_count];
        for (e, &p) in &layout.page_of {
            pages[p].push([e.u, e.v]);
        }
        LayoutFile {
            format: LAYOUT_FORMAT.to_string(),
            version: FORMAT_VERSION,
            graph: GraphSpec::of(g),
            spine_order: layout.spine_order.clone(),
            pages,
        }
    }

    pub fn to_layout(&self) -> Result<(Graph, BookLayout), FormatError> {
        check_header(&self.format, self.version, LAYOUT_FORMAT)?;
        let graph = self.graph.build()?;
        let mut page_of = BTreeMap::new();
        for (p, edges) in self.pages.iter().enumerate() {
            for (i, &[a, b]) in edges.iter().enumerate() {
                if a == b || a >= graph.vertex_count() || b >= graph.vertex_count() {
                    return Err(field_err(format!("pages[{p}][{i}]"), format!("{a}-{b} is not an edge")));
                }
                if page_of.insert(Edge::new(a, b), p).is_some() {
                    return Err(field_err(format!("pages[{p}][{i}]"), format!("edge {a}-{b} is on two pages")));
                }
            }
        }
        let layout = BookLayout {
            spine_order: self.spine_order.clone(),
            page_of,
            page_count: self.pages.len(),
        };
        layout.validate(&graph)?;
        Ok((graph, layout))
    }
}

pub fn read_layout(text: &str) -> Result<(Graph, BookLayout), FormatError> {
    let file: LayoutFile = serde_json::from_str(text)?;
    file.to_layout()
}

/// Vertex coordinates for a straight-line embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordsFile {
    pub format: String,
    pub version: u32,
    pub graph: GraphSpec,
    pub vertices: Vec<Point3>,
}

pub fn read_coords(text: &str) -> Result<SpatialGraph, FormatError> {
    let file: CoordsFile = serde_json::from_str(text)?;
    check_header(&file.format, file.version, COORDS_FORMAT)?;
    let graph = file.graph.build()?;
    Ok(crate::embedding::straight_line_embedding(graph, file.vertices)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusFile {
    pub format: String,
    pub version: u32,
    #[serde(flatten)]
    pub report: CensusReport,
}

pub fn write_census_json(report: &CensusReport) -> String {
    let file = CensusFile {
        format: CENSUS_FORMAT.to_string(),
        version: FORMAT_VERSION,
        report: report.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn read_census_json(text: &str) -> Result<CensusReport, FormatError> {
    let file: CensusFile = serde_json::from_str(text)?;
    check_header(&file.format, file.version, CENSUS_FORMAT)?;
    Ok(file.report)
}
