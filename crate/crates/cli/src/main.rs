//! `sdepth`: Stanley depth of monomial ideals from the command line.
//!
//! Every command prints a single JSON result envelope on stdout (except
//! `kpartite` and `survey` without an output path, which print the artifact
//! itself). Errors go to stderr with distinct exit codes: 2 for parse and
//! usage problems, 3 for exhausted budgets, 4 for posets over the point cap,
//! 5 for invalid partitions, and 1 for failed hard assertions.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sdepth_core::bounds::{
    attempt_decompose, bounds_report, bounds_report_for, min_primes, thm31_lower, BoundReport,
    BoundsError, DecomposedIdeal,
};
use sdepth_core::format::{parse_ideal, partition_from_json, partition_to_json, write_ideal};
use sdepth_core::hypergraph::{build_kpartite, enumerate_kpartite_specs, KPartiteSpec};
use sdepth_core::poset::{char_poset, PosetError, DEFAULT_MAX_POINTS};
use sdepth_core::solver::SolveError;
use sdepth_core::{exact_sdepth, MonomialIdeal, PosetKind, SolverConfig};

#[derive(Parser)]
#[command(
    name = "sdepth",
    version,
    about = "Stanley depth of monomial ideals: exact values, bounds, certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the exact Stanley depth of the ideal (or quotient) in FILE.
    Exact {
        /// Ideal in the text format; "-" reads stdin.
        file: String,
        /// Work with the cyclic quotient S/I instead of I.
        #[arg(long)]
        quotient: bool,
        /// Write the witnessing interval partition to this path as JSON
        /// (otherwise it is embedded in the result envelope).
        #[arg(long, value_name = "PATH")]
        cert: Option<PathBuf>,
        /// Abort after this many search nodes (exit code 3).
        #[arg(long, value_name = "NODES")]
        budget: Option<u64>,
        /// Solver worker threads; defaults to $SDEPTH_THREADS, then 1.
        #[arg(long, value_name = "T")]
        threads: Option<usize>,
    },
    /// Evaluate every bound formula on the ideal in FILE.
    Bounds {
        /// Ideal in the text format; "-" reads stdin.
        file: String,
        #[arg(long)]
        quotient: bool,
        /// Comma-separated 1-based component order for the chain bound.
        #[arg(long, value_name = "i,j,k", conflicts_with = "best_order")]
        order: Option<String>,
        /// Reorder the components to maximize the chain bound.
        #[arg(long)]
        best_order: bool,
    },
    /// Check a partition certificate against the ideal in FILE.
    Verify {
        /// Ideal in the text format; "-" reads stdin.
        file: String,
        /// Partition JSON produced by `exact --cert` or written by hand.
        #[arg(long, value_name = "PATH")]
        partition: PathBuf,
        #[arg(long)]
        quotient: bool,
    },
    /// Emit the complete k-partite ideal with the given part sizes.
    Kpartite {
        /// Comma-separated part sizes, e.g. "2,4".
        sizes: String,
        /// Write the ideal file here instead of stdout.
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// List the minimal primes of the ideal in FILE.
    Minprimes {
        /// Ideal in the text format; "-" reads stdin.
        file: String,
    },
    /// Tabulate exact values against every bound over k-partite specs.
    Survey {
        /// Largest total number of variables to enumerate.
        #[arg(long, value_name = "N")]
        max_n: usize,
        /// Comma-separated part counts to include (default: all).
        #[arg(long, value_name = "LIST")]
        k: Option<String>,
        #[arg(long)]
        quotient: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long, value_name = "CSV")]
        out: Option<PathBuf>,
        /// Lift the default size cap (8 variables, 7 for quotients).
        #[arg(long)]
        force: bool,
    },
}

/// One error type per exit code; messages go to stderr verbatim.
enum CliError {
    /// Unreadable or unparseable input, bad flag values (exit 2).
    Parse(String),
    /// Node or time budget exhausted, minimal-prime cap exceeded (exit 3).
    Budget(String),
    /// Bounding box over the point cap (exit 4).
    Poset(String),
    /// Partition fails to verify (exit 5).
    Partition(String),
    /// A hard assertion failed (exit 1).
    Assertion(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Assertion(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Poset(_) => 4,
            CliError::Partition(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m)
            | CliError::Budget(m)
            | CliError::Poset(m)
            | CliError::Partition(m)
            | CliError::Assertion(m) => m,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Poset(p) => CliError::Poset(p.to_string()),
            SolveError::BudgetExhausted { .. } | SolveError::TimeLimitExceeded { .. } => {
                CliError::Budget(e.to_string())
            }
            SolveError::InconsistentBounds { .. } => CliError::Assertion(e.to_string()),
        }
    }
}

impl From<PosetError> for CliError {
    fn from(e: PosetError) -> Self {
        CliError::Poset(e.to_string())
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::MinPrimesCapExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Parse(other.to_string()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Stats {
    elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<u64>,
}

/// The one output schema shared by all commands; fields a command does not
/// produce are omitted. All numbers are integers.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResultEnvelope {
    command: String,
    argv: Vec<String>,
    version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sdepth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reports: Option<Vec<BoundReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bracket_lower: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bracket_upper: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_primes: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<u64>,
    stats: Stats,
}

impl ResultEnvelope {
    fn new(command: &str, started: Instant) -> Self {
        ResultEnvelope {
            command: command.to_string(),
            argv: std::env::args().collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: None,
            kind: None,
            sdepth: None,
            certificate: None,
            certificate_path: None,
            verified: None,
            reports: None,
            bracket_lower: None,
            bracket_upper: None,
            depth: None,
            min_primes: None,
            output_path: None,
            rows: None,
            stats: Stats {
                elapsed_ms: started.elapsed().as_millis() as u64,
                nodes: None,
            },
        }
    }

    fn finish(mut self, started: Instant) -> Self {
        self.stats.elapsed_ms = started.elapsed().as_millis() as u64;
        self
    }

    fn print(self) {
        println!("{}", serde_json::to_string(&self).expect("envelope serializes"));
    }
}

fn kind_of(quotient: bool) -> PosetKind {
    if quotient {
        PosetKind::Quotient
    } else {
        PosetKind::Ideal
    }
}

fn kind_name(kind: PosetKind) -> &'static str {
    match kind {
        PosetKind::Ideal => "ideal",
        PosetKind::Quotient => "quotient",
    }
}

/// Reads the named file, or stdin when the name is "-". Returns the content
/// and its digest in `sha256:<hex>` form.
fn read_input(file: &str) -> Result<(String, String), CliError> {
    let bytes = if file == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
        buf
    } else {
        fs::read(file).map_err(|e| CliError::Parse(format!("{file}: {e}")))?
    };
    let mut digest = String::with_capacity(71);
    digest.push_str("sha256:");
    for b in Sha256::digest(&bytes) {
        let _ = write!(digest, "{b:02x}");
    }
    let text =
        String::from_utf8(bytes).map_err(|e| CliError::Parse(format!("{file}: {e}")))?;
    Ok((text, digest))
}

/// Parses an ideal file, printing any warnings to stderr.
fn load_ideal(file: &str) -> Result<(MonomialIdeal, String), CliError> {
    let (text, digest) = read_input(file)?;
    let parsed = parse_ideal(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok((parsed.ideal, digest))
}

fn resolve_threads(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(t) = flag {
        return Ok(t.max(1));
    }
    match std::env::var("SDEPTH_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(|t| t.max(1))
            .map_err(|_| {
                CliError::Parse(format!("SDEPTH_THREADS must be a positive integer, got {s:?}"))
            }),
        Err(_) => Ok(1),
    }
}

fn parse_usize_list(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Parse(format!("{what}: {s:?} is not a number")))
        })
        .collect()
}

fn cmd_exact(
    file: &str,
    quotient: bool,
    cert: Option<PathBuf>,
    budget: Option<u64>,
    threads: Option<usize>,
) -> Result<(), CliError> {
    let started = Instant::now();
    let (ideal, digest) = load_ideal(file)?;
    let kind = kind_of(quotient);
    let mut config = SolverConfig::default();
    config.threads = resolve_threads(threads)?;
    config.budget.max_nodes = budget;
    let result = exact_sdepth(&ideal, kind, &config)?;
    let cert_json = partition_to_json(&result.certificate);
    let mut envelope = ResultEnvelope::new("exact", started);
    envelope.input_digest = Some(digest);
    envelope.kind = Some(kind_name(kind).to_string());
    envelope.sdepth = Some(result.value);
    envelope.stats.nodes = Some(result.stats.nodes);
    match cert {
        Some(path) => {
            fs::write(&path, &cert_json)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            envelope.certificate_path = Some(path.display().to_string());
        }
        None => {
            envelope.certificate =
                Some(serde_json::from_str(&cert_json).expect("certificate is valid JSON"));
        }
    }
    envelope.finish(started).print();
    Ok(())
}

/// The component order maximizing the chain bound, tried exhaustively for up
/// to 9 components, by descending height beyond that.
fn best_order(decomp: &DecomposedIdeal) -> Vec<usize> {
    let heights = decomp.heights();
    let k = heights.len();
    let mut order: Vec<usize> = (0..k).collect();
    if k > 9 {
        order.sort_by_key(|&i| std::cmp::Reverse(heights[i]));
        return order;
    }
    let mut best = order.clone();
    let mut best_value = -1i64;
    // Lexicographic permutation walk over component indices.
    loop {
        let permuted: Vec<usize> = order.iter().map(|&i| heights[i]).collect();
        let value = thm31_lower(&permuted).value.unwrap_or(i64::MIN);
        if value > best_value {
            best_value = value;
            best = order.clone();
        }
        let Some(i) = (0..k - 1).rev().find(|&i| order[i] < order[i + 1]) else {
            return best;
        };
        let j = (i + 1..k).rev().find(|&j| order[j] > order[i]).expect("successor exists");
        order.swap(i, j);
        order[i + 1..].reverse();
    }
}

fn cmd_bounds(
    file: &str,
    quotient: bool,
    order: Option<String>,
    want_best: bool,
) -> Result<(), CliError> {
    let started = Instant::now();
    let (ideal, digest) = load_ideal(file)?;
    let kind = kind_of(quotient);
    let auto = attempt_decompose(&ideal);
    let decomp = match (&order, want_best) {
        (Some(spec), _) => {
            let d = auto.ok_or_else(|| {
                CliError::Parse(
                    "--order needs an intersection of irreducible ideals with disjoint supports"
                        .to_string(),
                )
            })?;
            let mut indices = parse_usize_list(spec, "--order")?;
            for i in &mut indices {
                *i = i.checked_sub(1).ok_or_else(|| {
                    CliError::Parse("--order components are numbered from 1".to_string())
                })?;
            }
            Some(d.reordered(&indices)?)
        }
        (None, true) => match auto {
            Some(d) => {
                let order = best_order(&d);
                Some(d.reordered(&order)?)
            }
            None => None,
        },
        (None, false) => auto,
    };
    let summary = bounds_report_for(&ideal, kind, decomp.as_ref());
    let mut envelope = ResultEnvelope::new("bounds", started);
    envelope.input_digest = Some(digest);
    envelope.kind = Some(kind_name(kind).to_string());
    envelope.bracket_lower = summary.bracket_lower;
    envelope.bracket_upper = summary.bracket_upper;
    envelope.depth = summary.depth;
    envelope.reports = Some(summary.reports);
    envelope.finish(started).print();
    Ok(())
}

fn cmd_verify(file: &str, partition_path: &Path, quotient: bool) -> Result<(), CliError> {
    let started = Instant::now();
    let (ideal, digest) = load_ideal(file)?;
    let partition_text = fs::read_to_string(partition_path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", partition_path.display())))?;
    let partition =
        partition_from_json(&partition_text).map_err(|e| CliError::Parse(e.to_string()))?;
    let kind = kind_of(quotient);
    let poset = char_poset(&ideal, kind, DEFAULT_MAX_POINTS)?;
    let value = sdepth_core::partition::partition_sdepth(&poset, &partition)
        .map_err(|e| CliError::Partition(e.to_string()))?;
    let mut envelope = ResultEnvelope::new("verify", started);
    envelope.input_digest = Some(digest);
    envelope.kind = Some(kind_name(kind).to_string());
    envelope.sdepth = Some(value);
    envelope.verified = Some(true);
    envelope.finish(started).print();
    Ok(())
}

fn cmd_kpartite(sizes: &str, output: Option<PathBuf>) -> Result<(), CliError> {
    let started = Instant::now();
    let sizes = parse_usize_list(sizes, "part sizes")?;
    let spec = KPartiteSpec::new(sizes).map_err(|e| CliError::Parse(e.to_string()))?;
    let (_, ideal) = build_kpartite(&spec);
    let text = write_ideal(&ideal);
    match output {
        Some(path) => {
            fs::write(&path, &text)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            let mut envelope = ResultEnvelope::new("kpartite", started);
            envelope.output_path = Some(path.display().to_string());
            envelope.finish(started).print();
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_minprimes(file: &str) -> Result<(), CliError> {
    let started = Instant::now();
    let (ideal, digest) = load_ideal(file)?;
    let primes = min_primes(&ideal)?;
    let mut envelope = ResultEnvelope::new("minprimes", started);
    envelope.input_digest = Some(digest);
    envelope.min_primes = Some(
        primes
            .iter()
            .map(|p| p.vars().iter().map(|&v| v + 1).collect())
            .collect(),
    );
    envelope.finish(started).print();
    Ok(())
}

/// Bound columns of the survey CSV, fixed per poset kind so the header is
/// deterministic; specs where a report is absent or inapplicable leave the
/// cell empty.
fn survey_columns(kind: PosetKind) -> &'static [&'static str] {
    match kind {
        PosetKind::Ideal => &[
            "lem2.4.lower",
            "lem2.4.upper",
            "cor2.5",
            "thm2.6",
            "cor2.8.lower",
            "cor2.8.upper",
            "cor2.9",
            "cor2.10",
            "cor2.12.lower",
            "cor2.12.upper",
            "thm2.13",
        ],
        PosetKind::Quotient => &[
            "thm3.1",
            "thm3.1.best",
            "cor3.4",
            "cor3.5",
            "prop3.8",
            "cor3.9.lower",
            "cor3.9.upper",
        ],
    }
}

fn cmd_survey(
    max_n: usize,
    k_list: Option<String>,
    quotient: bool,
    out: Option<PathBuf>,
    force: bool,
) -> Result<(), CliError> {
    let started = Instant::now();
    let kind = kind_of(quotient);
    let cap = if quotient { 7 } else { 8 };
    if max_n > cap && !force {
        return Err(CliError::Parse(format!(
            "survey caps max-n at {cap} for the {} kind; pass --force to lift the cap",
            kind_name(kind)
        )));
    }
    let ks: Vec<usize> = match k_list {
        Some(list) => parse_usize_list(&list, "--k")?,
        None => (1..=max_n).collect(),
    };
    let columns = survey_columns(kind);
    let mut csv = String::from("part_sizes,n,k,exact");
    for c in columns {
        let _ = write!(csv, ",{c}");
    }
    csv.push_str(",bracket_lower,bracket_upper,tight\n");
    let config = SolverConfig {
        threads: resolve_threads(None)?,
        ..SolverConfig::default()
    };
    let mut rows = 0u64;
    for &k in &ks {
        for spec in enumerate_kpartite_specs(max_n, k) {
            let (_, ideal) = build_kpartite(&spec);
            let exact = exact_sdepth(&ideal, kind, &config)?.value as i64;
            let summary = bounds_report(&ideal, kind);
            let parts = spec
                .part_sizes()
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",");
            if summary.bracket_lower.is_some_and(|lo| exact < lo)
                || summary.bracket_upper.is_some_and(|hi| exact > hi)
            {
                return Err(CliError::Assertion(format!(
                    "spec ({parts}): exact {exact} escapes the bracket [{:?}, {:?}]",
                    summary.bracket_lower, summary.bracket_upper
                )));
            }
            let _ = write!(csv, "\"{parts}\",{},{},{exact}", spec.num_vars(), spec.k());
            for c in columns {
                match summary.reports.iter().find(|r| r.name == *c).and_then(|r| r.value) {
                    Some(v) => {
                        let _ = write!(csv, ",{v}");
                    }
                    None => csv.push(','),
                }
            }
            let tight = summary.bracket_lower == Some(exact) && summary.bracket_upper == Some(exact);
            let _ = writeln!(
                csv,
                ",{},{},{tight}",
                summary.bracket_lower.map(|v| v.to_string()).unwrap_or_default(),
                summary.bracket_upper.map(|v| v.to_string()).unwrap_or_default()
            );
            rows += 1;
        }
    }
    match out {
        Some(path) => {
            fs::write(&path, &csv)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            let mut envelope = ResultEnvelope::new("survey", started);
            envelope.kind = Some(kind_name(kind).to_string());
            envelope.output_path = Some(path.display().to_string());
            envelope.rows = Some(rows);
            envelope.finish(started).print();
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Exact {
            file,
            quotient,
            cert,
            budget,
            threads,
        } => cmd_exact(&file, quotient, cert, budget, threads),
        Command::Bounds {
            file,
            quotient,
            order,
            best_order,
        } => cmd_bounds(&file, quotient, order, best_order),
        Command::Verify {
            file,
            partition,
            quotient,
        } => cmd_verify(&file, &partition, quotient),
        Command::Kpartite { sizes, output } => cmd_kpartite(&sizes, output),
        Command::Minprimes { file } => cmd_minprimes(&file),
        Command::Survey {
            max_n,
            k,
            quotient,
            out,
            force,
        } => cmd_survey(max_n, k, quotient, out, force),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
