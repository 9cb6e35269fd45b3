use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use linkcensus::book::{book_embedding, canonical_book_layout};
use linkcensus::census::{census_diff, census_with, CensusError, CensusOptions, CensusReport};
use linkcensus::copies::count_subgraph_copies;
use linkcensus::embedding::{EmbeddingError, SpatialGraph};
use linkcensus::fan::fan_embedding;
use linkcensus::format::{self, FormatError};
use linkcensus::graph::{build_complete_multipartite, PartiteSpec};
use linkcensus::lemma::{self, parse_lemma, Mode, VerifyOptions, DEFAULT_WINDOW};
use linkcensus::par::Execution;
use linkcensus::repro;

/// Exact link censuses of spatial graph embeddings.
#[derive(Debug, Parser)]
#[command(name = "linkcensus", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write an embedding file.
    Generate {
        #[command(subcommand)]
        kind: Generate,
        /// Output path; standard output if omitted.
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Compute the linking number of every disjoint cycle pair.
    Census {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Unlinked pairs with more crossings than this are listed for a manual check.
        #[arg(long, default_value_t = 4)]
        flag_threshold: usize,
        /// Leave wall-clock time out of the report.
        #[arg(long)]
        no_timing: bool,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Verify a lemma file.
    Verify {
        lemma: PathBuf,
        /// Basis-value window for integer claims.
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: i64,
        /// Re-check every image of each claim under the host's automorphisms.
        #[arg(long)]
        all_images: bool,
        /// Print the reports as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Count the copies of one complete multipartite graph in another.
    Count { host: String, pattern: String },
    /// Link counts of census A minus those of census B, by class.
    Diff { a: PathBuf, b: PathBuf },
    /// Recompute every published count and print a pass/fail table.
    Repro {
        /// Skip the randomized property checks.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
enum Generate {
    /// The fan embedding of K_{m,n}.
    Fan { m: usize, n: usize },
    /// A book embedding: `book N canonical` or `book --layout FILE`.
    Book {
        #[arg(required_unless_present = "layout")]
        n: Option<usize>,
        #[arg(requires = "n")]
        kind: Option<String>,
        #[arg(long, conflicts_with = "n")]
        layout: Option<PathBuf>,
    },
    /// A straight-line embedding from a coordinates file.
    StraightLine {
        #[arg(long)]
        coords: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

const EXIT_LEMMA_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;

impl Failure {
    fn parse(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: EXIT_PARSE,
            error: error.into(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        let code = match &e {
            FormatError::Embedding(inner) | FormatError::Layout(linkcensus::book::LayoutError::Embedding(inner)) => embedding_code(inner),
            _ => EXIT_PARSE,
        };
        Failure { code, error: e.into() }
    }
}

fn embedding_code(e: &EmbeddingError) -> u8 {
    match e {
        EmbeddingError::Degenerate(_) | EmbeddingError::VertexOnArc { .. } | EmbeddingError::CoincidentVertices(..) => EXIT_DEGENERATE,
        _ => EXIT_PARSE,
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        Failure {
            code: EXIT_DEGENERATE,
            error: e.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::parse)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing to standard output"),
    }
    .map_err(Failure::parse)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Generate { kind, out } => {
            let sg = generate(kind)?;
            emit(out.as_deref(), &format::write_embedding(&sg))?;
            Ok(0)
        }
        Command::Census {
            file,
            format,
            flag_threshold,
            no_timing,
            sequential,
        } => {
            let sg = format::read_embedding(&read(&file)?)?;
            let options = CensusOptions {
                flag_threshold,
                execution: if sequential { Execution::Sequential } else { Execution::default() },
                timing: !no_timing,
            };
            let report = census_with(&sg, options)?;
            let text = match format {
                OutputFormat::Json => format::write_census_json(&report),
                OutputFormat::Csv => census_csv(&report).map_err(Failure::parse)?,
            };
            emit(None, &text)?;
            Ok(0)
        }
        Command::Verify {
            lemma,
            window,
            all_images,
            json,
        } => verify(&lemma, window, all_images, json),
        Command::Count { host, pattern } => {
            let parse = |s: &str| s.parse::<PartiteSpec>().map_err(|e| Failure::parse(anyhow!("{s:?}: {e}")));
            let (h, p) = (parse(&host)?, parse(&pattern)?);
            println!("{}", count_subgraph_copies(&h, &p));
            Ok(0)
        }
        Command::Diff { a, b } => {
            let a = format::read_census_json(&read(&a)?)?;
            let b = format::read_census_json(&read(&b)?)?;
            let d = census_diff(&a, &b);
            for c in &d.classes {
                println!("{}-{}\t{:+}", c.len_a, c.len_b, c.delta);
            }
            println!("total\t{:+}", d.total);
            Ok(0)
        }
        Command::Repro { quick, json } => {
            let table = repro::run(!quick);
            if json {
                println!("{}", serde_json::to_string_pretty(&table).expect("serializable"));
            } else {
                println!("{table}");
            }
            Ok(if table.all_pass() { 0 } else { EXIT_LEMMA_FAIL })
        }
    }
}

fn generate(kind: Generate) -> Result<SpatialGraph, Failure> {
    match kind {
        Generate::Fan { m, n } => fan_embedding(m, n).map_err(Failure::parse),
        Generate::Book { n, kind, layout } => {
            if let Some(path) = layout {
                let (g, layout) = format::read_layout(&read(&path)?)?;
                return book_embedding(&g, &layout).map_err(Failure::parse);
            }
            let n = n.expect("clap requires n without --layout");
            match kind.as_deref() {
                Some("canonical") => {}
                other => return Err(Failure::parse(anyhow!("expected `book {n} canonical`, got {other:?}"))),
            }
            let layout = canonical_book_layout(n).map_err(Failure::parse)?;
            let spec = PartiteSpec::complete(n).map_err(Failure::parse)?;
            book_embedding(&build_complete_multipartite(&spec), &layout).map_err(Failure::parse)
        }
        Generate::StraightLine { coords } => Ok(format::read_coords(&read(&coords)?)?),
    }
}

#[derive(Serialize)]
struct CsvRow {
    a: String,
    b: String,
    len_a: usize,
    len_b: usize,
    lk: i64,
    crossings: usize,
    manual_check: bool,
}

fn census_csv(report: &CensusReport) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in &report.per_pair {
        w.serialize(CsvRow {
            a: p.a.to_string(),
            b: p.b.to_string(),
            len_a: p.a.len(),
            len_b: p.b.len(),
            lk: p.lk,
            crossings: p.crossings,
            manual_check: report.flagged.contains(p),
        })?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn verify(path: &Path, window: i64, all_images: bool, json: bool) -> Result<u8, Failure> {
    let stmt = parse_lemma(&read(path)?).map_err(|e| Failure::parse(anyhow!("{}: {e}", path.display())))?;
    let options = VerifyOptions {
        all_images,
        ..Default::default()
    };
    let parity = lemma::verify(&stmt, Mode::Parity, options).map_err(Failure::parse)?;
    let integer = if stmt.claims.iter().any(|c| c.needs_integers()) {
        Some(lemma::verify(&stmt, Mode::Integer { window }, options).map_err(Failure::parse)?)
    } else {
        None
    };
    let passed = parity.passed() && integer.as_ref().is_none_or(|r| r.passed());
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            pass: bool,
            parity: &'a lemma::LemmaReport,
            integer: Option<&'a lemma::LemmaReport>,
        }
        let out = Out {
            pass: passed,
            parity: &parity,
            integer: integer.as_ref(),
        };
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        println!("{parity}");
        if let Some(r) = &integer {
            println!("{r}");
        }
        println!("overall: {}", if passed { "pass" } else { "FAIL" });
    }
    Ok(if passed { 0 } else { EXIT_LEMMA_FAIL })
}
