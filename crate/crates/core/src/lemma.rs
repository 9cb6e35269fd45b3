//! Exhaustive verification of cycle-space parity lemmas.
//!
//! A lemma names a host graph and a list of claims. Each claim has
//! hypotheses on the values of a functional on named cycles and
//! conclusions of the form "at least N cycles of these lengths are odd (or
//! nonzero)". The linking number with a fixed disjoint cycle is such a
//! functional, so a claim that holds for every functional holds for every
//! embedding.
//!
//! Parity claims are checked over all `2^dim` GF(2) functionals, which is
//! a proof. Claims that mention exact zeros or nonzero values need integer
//! functionals and are checked over a window of basis values, which is
//! bounded evidence only.
//!
//! # File format
//!
//! ```text
//! lemma-format 1
//! name pyramid
//! host 2,2,1
//! labels 1 3 2 4 a          # optional: names for vertices 0, 1, 2, ...
//! claim any-face-odd
//!   require odd-any a12 a23 a34 a41 1234
//!   expect odd lengths=3,4,5 at-least=6
//! ```
//!
//! A cycle is written as a vertex sequence: labels or vertex numbers joined
//! by `-`, or run together when every label is a single character.
//! `length=k` stands for every cycle of length `k`. Requirements are
//! `odd-any`, `odd-all`, `even-all`, `zero-all` and `nonzero-any`;
//! expectations are `odd` or `nonzero` with `lengths=`, `at-least=` and an
//! optional `exclude=` list of cycles separated by commas. `#` starts a
//! comment.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cycle::{all_cycles, Cycle};
use crate::cycle_space::{build_cycle_space, CycleSpace, CycleSpaceError, IntegerFunctional, ParityFunctional};
use crate::graph::{Graph, PartiteSpec};
use crate::par::{self, Execution};

pub const LEMMA_FORMAT_VERSION: u32 = 1;
pub const DEFAULT_WINDOW: i64 = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LemmaError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    CycleSpace(#[from] CycleSpaceError),
    #[error("window must be at least 1, got {0}")]
    BadWindow(i64),
}

fn parse_err(line: usize, message: impl Into<String>) -> LemmaError {
    LemmaError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantifier {
    OddAny,
    OddAll,
    EvenAll,
    ZeroAll,
    NonzeroAny,
}

impl Quantifier {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "odd-any" => Quantifier::OddAny,
            "odd-all" => Quantifier::OddAll,
            "even-all" => Quantifier::EvenAll,
            "zero-all" => Quantifier::ZeroAll,
            "nonzero-any" => Quantifier::NonzeroAny,
            _ => return None,
        })
    }

    fn needs_integers(self) -> bool {
        matches!(self, Quantifier::ZeroAll | Quantifier::NonzeroAny)
    }

    fn holds(self, values: impl Iterator<Item = i64>) -> bool {
        let mut values = values;
        match self {
            Quantifier::OddAny => values.any(|v| v % 2 != 0),
            Quantifier::OddAll => values.all(|v| v % 2 != 0),
            Quantifier::EvenAll => values.all(|v| v % 2 == 0),
            Quantifier::ZeroAll => values.all(|v| v == 0),
            Quantifier::NonzeroAny => values.any(|v| v != 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Requirement {
    pub quantifier: Quantifier,
    pub cycles: Vec<Cycle>,
    /// The requirement as written.
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Odd,
    Nonzero,
}

impl Measure {
    fn counts(self, v: i64) -> bool {
        match self {
            Measure::Odd => v % 2 != 0,
            Measure::Nonzero => v != 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub measure: Measure,
    pub lengths: Vec<usize>,
    pub at_least: usize,
    pub exclude: Vec<Cycle>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub name: String,
    pub requires: Vec<Requirement>,
    pub expects: Vec<Expectation>,
}

impl Claim {
    /// Whether the claim talks about exact values rather than parities.
    pub fn needs_integers(&self) -> bool {
        self.requires.iter().any(|r| r.quantifier.needs_integers()) || self.expects.iter().any(|e| e.measure == Measure::Nonzero)
    }

    fn relabel(&self, perm: &[usize]) -> Claim {
        let map = |cs: &[Cycle]| cs.iter().map(|c| c.relabel(perm)).collect();
        Claim {
            name: self.name.clone(),
            requires: self
                .requires
                .iter()
                .map(|r| Requirement {
                    cycles: map(&r.cycles),
                    ..r.clone()
                })
                .collect(),
            expects: self
                .expects
                .iter()
                .map(|e| Expectation {
                    exclude: map(&e.exclude),
                    ..e.clone()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaStatement {
    pub name: String,
    pub host: Graph,
    pub labels: Option<Vec<String>>,
    pub claims: Vec<Claim>,
}

impl LemmaStatement {
    pub fn cycle_name(&self, c: &Cycle) -> String {
        cycle_name(self.labels.as_deref(), c)
    }
}

fn cycle_name(labels: Option<&[String]>, c: &Cycle) -> String {
    match labels {
        Some(labels) if labels.iter().all(|l| l.chars().count() == 1) => c.vertices().iter().map(|&v| labels[v].as_str()).collect(),
        Some(labels) => c.vertices().iter().map(|&v| labels[v].as_str()).collect::<Vec<_>>().join("-"),
        None => c.to_string(),
    }
}

impl std::str::FromStr for LemmaStatement {
    type Err = LemmaError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_lemma(text)
    }
}

pub fn parse_lemma(text: &str) -> Result<LemmaStatement, LemmaError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, l)) if l == format!("lemma-format {LEMMA_FORMAT_VERSION}") => {}
        Some((n, l)) => return Err(parse_err(n, format!("expected `lemma-format {LEMMA_FORMAT_VERSION}`, found `{l}`"))),
        None => return Err(parse_err(1, "empty lemma file")),
    }
    let mut name = None;
    let mut host: Option<Graph> = None;
    let mut labels: Option<Vec<String>> = None;
    let mut all: Option<Vec<Cycle>> = None;
    let mut claims: Vec<Claim> = Vec::new();
    for (n, line) in lines {
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "name" => name = Some(rest.to_string()),
            "host" => {
                let spec: PartiteSpec = rest.parse().map_err(|e| parse_err(n, format!("host: {e}")))?;
                let g = crate::graph::build_complete_multipartite(&spec);
                all = Some(all_cycles(&g));
                host = Some(g);
            }
            "labels" => {
                let g = host.as_ref().ok_or_else(|| parse_err(n, "labels before host"))?;
                let l: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if l.len() != g.vertex_count() {
                    return Err(parse_err(n, format!("{} labels for {} vertices", l.len(), g.vertex_count())));
                }
                let mut sorted = l.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != l.len() {
                    return Err(parse_err(n, "labels must be distinct"));
                }
                labels = Some(l);
            }
            "claim" => {
                if rest.is_empty() {
                    return Err(parse_err(n, "claim needs a name"));
                }
                claims.push(Claim {
                    name: rest.to_string(),
                    requires: Vec::new(),
                    expects: Vec::new(),
                });
            }
            "require" | "expect" => {
                let g = host.as_ref().ok_or_else(|| parse_err(n, format!("{key} before host")))?;
                let cycles = all.as_ref().expect("set with host");
                let claim = claims.last_mut().ok_or_else(|| parse_err(n, format!("{key} outside a claim")))?;
                let ctx = CycleCtx {
                    g,
                    labels: labels.as_deref(),
                    all: cycles,
                    line: n,
                };
                if key == "require" {
                    claim.requires.push(parse_requirement(rest, &ctx)?);
                } else {
                    claim.expects.push(parse_expectation(rest, &ctx)?);
                }
            }
            other => return Err(parse_err(n, format!("unknown directive `{other}`"))),
        }
    }
    let host = host.ok_or_else(|| parse_err(1, "missing `host`"))?;
    if claims.is_empty() {
        return Err(parse_err(1, "no claims"));
    }
    for c in &claims {
        if c.expects.is_empty() {
            return Err(parse_err(1, format!("claim `{}` has no `expect`", c.name)));
        }
    }
    Ok(LemmaStatement {
        name: name.unwrap_or_else(|| "unnamed".to_string()),
        host,
        labels,
        claims,
    })
}

struct CycleCtx<'a> {
    g: &'a Graph,
    labels: Option<&'a [String]>,
    all: &'a [Cycle],
    line: usize,
}

impl CycleCtx<'_> {
    fn vertex(&self, token: &str) -> Result<usize, LemmaError> {
        if let Some(v) = self.labels.and_then(|l| l.iter().position(|x| x == token)) {
            return Ok(v);
        }
        token
            .parse::<usize>()
            .ok()
            .filter(|&v| v < self.g.vertex_count())
            .ok_or_else(|| parse_err(self.line, format!("unknown vertex `{token}`")))
    }

    fn cycle(&self, token: &str) -> Result<Cycle, LemmaError> {
        let parts: Vec<String> = if token.contains('-') {
            token.split('-').map(str::to_string).collect()
        } else {
            token.chars().map(|c| c.to_string()).collect()
        };
        let seq = parts.iter().map(|p| self.vertex(p)).collect::<Result<Vec<_>, _>>()?;
        Cycle::in_graph(self.g, &seq).map_err(|e| parse_err(self.line, format!("cycle `{token}`: {e}")))
    }

    /// One cycle, or every cycle of a length for `length=k`.
    fn cycles(&self, token: &str) -> Result<Vec<Cycle>, LemmaError> {
        match token.strip_prefix("length=") {
            Some(k) => {
                let k: usize = k.parse().map_err(|_| parse_err(self.line, format!("bad length `{k}`")))?;
                let out: Vec<Cycle> = self.all.iter().filter(|c| c.len() == k).cloned().collect();
                if out.is_empty() {
                    return Err(parse_err(self.line, format!("host has no cycles of length {k}")));
                }
                Ok(out)
            }
            None => Ok(vec![self.cycle(token)?]),
        }
    }
}

fn parse_requirement(rest: &str, ctx: &CycleCtx) -> Result<Requirement, LemmaError> {
    let mut tokens = rest.split_whitespace();
    let q = tokens.next().ok_or_else(|| parse_err(ctx.line, "require needs a quantifier"))?;
    let quantifier = Quantifier::parse(q).ok_or_else(|| parse_err(ctx.line, format!("unknown quantifier `{q}`")))?;
    let mut cycles = Vec::new();
    for t in tokens {
        cycles.extend(ctx.cycles(t)?);
    }
    if cycles.is_empty() {
        return Err(parse_err(ctx.line, "require lists no cycles"));
    }
    Ok(Requirement {
        quantifier,
        cycles,
        text: rest.to_string(),
    })
}

fn parse_expectation(rest: &str, ctx: &CycleCtx) -> Result<Expectation, LemmaError> {
    let mut tokens = rest.split_whitespace();
    let measure = match tokens.next() {
        Some("odd") => Measure::Odd,
        Some("nonzero") => Measure::Nonzero,
        other => return Err(parse_err(ctx.line, format!("expected `odd` or `nonzero`, found {other:?}"))),
    };
    let (mut lengths, mut at_least, mut exclude) = (None, None, Vec::new());
    for t in tokens {
        let (k, v) = t.split_once('=').ok_or_else(|| parse_err(ctx.line, format!("expected key=value, found `{t}`")))?;
        match k {
            "lengths" => {
                let ls = v
                    .split(',')
                    .map(|x| x.parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| parse_err(ctx.line, format!("bad lengths `{v}`")))?;
                lengths = Some(ls);
            }
            "at-least" => at_least = Some(v.parse().map_err(|_| parse_err(ctx.line, format!("bad count `{v}`")))?),
            "exclude" => {
                for c in v.split(',') {
                    exclude.push(ctx.cycle(c)?);
                }
            }
            _ => return Err(parse_err(ctx.line, format!("unknown key `{k}`"))),
        }
    }
    Ok(Expectation {
        measure,
        lengths: lengths.ok_or_else(|| parse_err(ctx.line, "expect needs lengths="))?,
        at_least: at_least.ok_or_else(|| parse_err(ctx.line, "expect needs at-least="))?,
        exclude,
        text: rest.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// No functional meets the hypotheses.
    Vacuous,
    Fail,
    /// Integer-only claim skipped by the parity check.
    NotApplicable,
}

impl Status {
    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Vacuous => "pass (vacuous)",
            Status::Fail => "FAIL",
            Status::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mode {
    Parity,
    Integer { window: i64 },
}

/// A functional, shown through the values it takes on the hypothesis cycles
/// and the cycles it counts toward an expectation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Values on the fundamental cycles.
    pub basis_values: Vec<i64>,
    pub hypothesis_values: Vec<(String, i64)>,
    pub counted: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectationOutcome {
    pub expectation: String,
    pub at_least: usize,
    /// Smallest count over functionals meeting the hypotheses.
    pub minimum: Option<usize>,
    /// A functional attaining the minimum; a counterexample when below `at_least`.
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub claim: String,
    pub mode: Mode,
    pub status: Status,
    pub functionals: u64,
    pub satisfying: u64,
    pub expectations: Vec<ExpectationOutcome>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub host: String,
    pub dimension: usize,
    pub claims: Vec<ClaimReport>,
    /// Automorphic images checked per claim (1 = just the statement).
    pub images: usize,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        !self.claims.iter().any(|c| c.status.is_failure())
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lemma {} on {} (cycle space dimension {})", self.lemma, self.host, self.dimension)?;
        if self.images > 1 {
            writeln!(f, "  checked under {} automorphic images", self.images)?;
        }
        for c in &self.claims {
            let mode = match c.mode {
                Mode::Parity => "all GF(2) functionals, exhaustive".to_string(),
                Mode::Integer { window } => format!("integer functionals in [-{window}, {window}], bounded evidence"),
            };
            writeln!(f, "  claim {}: {} ({mode})", c.claim, c.status)?;
            if c.status == Status::NotApplicable {
                continue;
            }
            writeln!(f, "    {} of {} functionals meet the hypotheses", c.satisfying, c.functionals)?;
            for e in &c.expectations {
                let min = e.minimum.map_or("-".to_string(), |m| m.to_string());
                writeln!(f, "    expect {}: minimum {min}", e.expectation)?;
                if let Some(w) = &e.witness {
                    let label = if e.minimum.is_some_and(|m| m < e.at_least) {
                        "counterexample"
                    } else {
                        "minimal witness"
                    };
                    let hyp: Vec<String> = w.hypothesis_values.iter().map(|(c, v)| format!("{c}={v}")).collect();
                    writeln!(f, "      {label}: basis values {:?}", w.basis_values)?;
                    writeln!(f, "        on hypothesis cycles: {}", hyp.join(" "))?;
                    writeln!(f, "        counted: {}", w.counted.join(" "))?;
                }
            }
        }
        write!(f, "result: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Also check every image of each claim under the host's automorphisms.
    pub all_images: bool,
    pub execution: Execution,
}

/// Checks every parity claim against all GF(2) functionals; integer-only
/// claims are reported as not applicable.
pub fn verify_parity_lemma(stmt: &LemmaStatement) -> Result<LemmaReport, LemmaError> {
    verify(stmt, Mode::Parity, VerifyOptions::default())
}

/// Checks every claim against all integer functionals with basis values in
/// `[-window, window]`. Parity conditions are read as parities of the values.
pub fn verify_integer_lemma(stmt: &LemmaStatement, window: i64) -> Result<LemmaReport, LemmaError> {
    verify(stmt, Mode::Integer { window }, VerifyOptions::default())
}

pub fn verify(stmt: &LemmaStatement, mode: Mode, options: VerifyOptions) -> Result<LemmaReport, LemmaError> {
    if let Mode::Integer { window } = mode {
        if window < 1 {
            return Err(LemmaError::BadWindow(window));
        }
    }
    let cs = build_cycle_space(&stmt.host)?;
    let cycles = all_cycles(&stmt.host);
    let images = if options.all_images {
        automorphisms(&stmt.host)
    } else {
        vec![(0..stmt.host.vertex_count()).collect()]
    };
    let mut claims = Vec::new();
    for claim in &stmt.claims {
        if mode == Mode::Parity && claim.needs_integers() {
            claims.push(ClaimReport {
                claim: claim.name.clone(),
                mode,
                status: Status::NotApplicable,
                functionals: 0,
                satisfying: 0,
                expectations: Vec::new(),
            });
            continue;
        }
        // the report for the statement itself, downgraded if an image fails
        let mut report: Option<ClaimReport> = None;
        for perm in &images {
            let image = claim.relabel(perm);
            let r = check_claim(stmt, &cs, &cycles, &image, mode, options.execution)?;
            match &report {
                None => report = Some(r),
                Some(first) if r.status == Status::Fail && first.status != Status::Fail => report = Some(r),
                _ => {}
            }
        }
        claims.push(report.expect("identity image"));
    }
    Ok(LemmaReport {
        lemma: stmt.name.clone(),
        host: stmt.host.spec().map_or_else(|| "custom".to_string(), |s| s.to_string()),
        dimension: cs.dimension(),
        claims,
        images: images.len(),
    })
}

/// Per-functional result: whether the hypotheses hold, and the count for
/// each expectation.
type Evaluation = Option<Vec<usize>>;

fn check_claim(
    stmt: &LemmaStatement,
    cs: &CycleSpace,
    cycles: &[Cycle],
    claim: &Claim,
    mode: Mode,
    exec: Execution,
) -> Result<ClaimReport, LemmaError> {
    let coords = |c: &Cycle| cs.integer_coords(c.vertices());
    let req_coords: Vec<Vec<Vec<i64>>> = claim
        .requires
        .iter()
        .map(|r| r.cycles.iter().map(coords).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    // the cycles each expectation counts over
    let pools: Vec<Vec<(&Cycle, Vec<i64>)>> = claim
        .expects
        .iter()
        .map(|e| {
            cycles
                .iter()
                .filter(|c| e.lengths.contains(&c.len()) && !e.exclude.contains(c))
                .map(|c| coords(c).map(|x| (c, x)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let functionals: Vec<IntegerFunctional> = match mode {
        Mode::Parity => ParityFunctional::all(cs.dimension())
            .map(|f| IntegerFunctional((0..cs.dimension()).map(|i| (f.0 >> i & 1) as i64).collect()))
            .collect(),
        Mode::Integer { window } => IntegerFunctional::window(cs.dimension(), window).collect(),
    };
    let evaluate = |f: &IntegerFunctional| -> Evaluation {
        let ok = claim
            .requires
            .iter()
            .zip(&req_coords)
            .all(|(r, cs)| r.quantifier.holds(cs.iter().map(|c| f.value(c))));
        ok.then(|| {
            claim
                .expects
                .iter()
                .zip(&pools)
                .map(|(e, pool)| pool.iter().filter(|(_, c)| e.measure.counts(f.value(c))).count())
                .collect()
        })
    };
    let results = par::map(&functionals, exec, evaluate);

    let satisfying = results.iter().filter(|r| r.is_some()).count() as u64;
    let mut expectations = Vec::new();
    let mut failed = false;
    for (k, e) in claim.expects.iter().enumerate() {
        let best = results
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|counts| (counts[k], i)))
            .min();
        let witness = best.map(|(_, i)| {
            let f = &functionals[i];
            Witness {
                basis_values: f.0.clone(),
                hypothesis_values: claim
                    .requires
                    .iter()
                    .zip(&req_coords)
                    .flat_map(|(r, cs)| r.cycles.iter().zip(cs).map(|(c, x)| (stmt.cycle_name(c), f.value(x))))
                    .collect(),
                counted: pools[k]
                    .iter()
                    .filter(|(_, c)| e.measure.counts(f.value(c)))
                    .map(|(c, _)| stmt.cycle_name(c))
                    .collect(),
            }
        });
        let minimum = best.map(|(m, _)| m);
        failed |= minimum.is_some_and(|m| m < e.at_least);
        expectations.push(ExpectationOutcome {
            expectation: e.text.clone(),
            at_least: e.at_least,
            minimum,
            witness,
        });
    }
    let status = if failed {
        Status::Fail
    } else if satisfying == 0 {
        Status::Vacuous
    } else {
        Status::Pass
    };
    Ok(ClaimReport {
        claim: claim.name.clone(),
        mode,
        status,
        functionals: functionals.len() as u64,
        satisfying,
        expectations,
    })
}

/// All vertex permutations preserving adjacency, identity first.
pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, perm: &mut Vec<usize>, used: &mut u64, out: &mut Vec<Vec<usize>>) {
        let n = g.vertex_count();
        let v = perm.len();
        if v == n {
            out.push(perm.clone());
            return;
        }
        for w in 0..n {
            if *used >> w & 1 == 1 || g.degree(w) != g.degree(v) {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == g.has_edge(perm[u], w)) {
                perm.push(w);
                *used |= 1 << w;
                extend(g, perm, used, out);
                *used &= !(1 << w);
                perm.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(g, &mut Vec::new(), &mut 0, &mut out);
    out
}
