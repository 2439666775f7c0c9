//! tubix: build and certify graph associahedra.
//!
//! Subcommands read a graph JSON file (or standard input, so commands
//! compose in pipelines), enumerate its tubes and tubings, realize the
//! polytope with exact integer coordinates, emit the halfspace system, run
//! the exact verification report, sweep all graphs of a given size, and
//! export 3-dimensional instances as OFF meshes.
//!
//! Exit codes: 0 success / verification pass, 1 verification failure,
//! 2 verification incomplete (a capped check was skipped), 64 usage error,
//! 74 input or output error.

mod off;

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tubix_core::graph::{enumerate_graphs, Family, Graph};
use tubix_core::realize::{build_hrep, check_weight_condition, realize, WeightScheme};
use tubix_core::tubing::{enumerate_maximal_tubings, enumerate_tubes, enumerate_tubings, f_vector};
use tubix_core::verify::{full_report, VerificationReport, VerifyCaps};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_INCOMPLETE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(
    name = "tubix",
    version,
    about = "Exact realization and certification of graph associahedra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct GraphSource {
    /// Graph JSON file; standard input is read when omitted
    #[arg(value_name = "GRAPH.json")]
    graph: Option<PathBuf>,
    /// Read the graph from standard input explicitly
    #[arg(long)]
    stdin: bool,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    /// Write output to FILE instead of standard output
    #[arg(short = 'o', value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SchemeOpt {
    /// Weight scheme: power3, loday, or custom:FILE (a JSON array of
    /// decimal-string integers w(1)..w(n))
    #[arg(long, default_value = "power3")]
    scheme: String,
}

#[derive(Args)]
struct LimitOpts {
    /// Refuse enumeration on graphs with more than this many nodes
    #[arg(long, default_value_t = 12, value_name = "N")]
    max_n: usize,
    /// Cap on candidate basic systems for the brute-force vertex oracle
    #[arg(long, default_value_t = 10_000_000, value_name = "N")]
    oracle_cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// List all tubes of the graph in canonical order
    Tubes {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        limits: LimitOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// List tubings (all sizes, one size with -k, or only maximal ones)
    Tubings {
        #[command(flatten)]
        source: GraphSource,
        /// Only tubings with exactly K tubes
        #[arg(short = 'k', value_name = "K")]
        k: Option<usize>,
        /// Only maximal tubings (k = n-1)
        #[arg(long)]
        max_only: bool,
        #[command(flatten)]
        limits: LimitOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Compute exact vertex coordinates for every maximal tubing
    Realize {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        scheme: SchemeOpt,
        #[command(flatten)]
        limits: LimitOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Emit the halfspace description (ambient equality plus one
    /// inequality per tube)
    Hrep {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        scheme: SchemeOpt,
        #[command(flatten)]
        limits: LimitOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Face counts by codimension: [#facets, .., #vertices]
    Fvector {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        limits: LimitOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the full exact verification report for one graph
    Verify {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        scheme: SchemeOpt,
        /// Worker threads for the vertex oracle (defaults to the number
        /// of CPUs)
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
        #[command(flatten)]
        limits: LimitOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Verify every labeled graph on N nodes, one JSON report per line
    Survey {
        /// Number of nodes
        #[arg(long, value_name = "N")]
        n: usize,
        /// Only connected graphs
        #[arg(long)]
        connected_only: bool,
        #[command(flatten)]
        scheme: SchemeOpt,
        /// Worker threads (defaults to the number of CPUs)
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
        #[command(flatten)]
        limits: LimitOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Generate a family graph (path|cycle|complete|star|empty) as JSON
    Family {
        /// Family kind
        #[arg(value_name = "KIND")]
        kind: String,
        /// Number of nodes
        #[arg(value_name = "N")]
        n: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Export a verified 4-node instance as an OFF mesh
    ExportOff {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        scheme: SchemeOpt,
        #[command(flatten)]
        limits: LimitOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Count the elements of a JSON array (or object with a known list
    /// field) read from standard input
    Count,
}

enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("tubix: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Tubes {
            source,
            limits,
            output,
        } => cmd_tubes(&source, &limits, &output),
        Command::Tubings {
            source,
            k,
            max_only,
            limits,
            output,
        } => cmd_tubings(&source, k, max_only, &limits, &output),
        Command::Realize {
            source,
            scheme,
            limits,
            output,
        } => cmd_realize(&source, &scheme, &limits, &output),
        Command::Hrep {
            source,
            scheme,
            limits,
            output,
        } => cmd_hrep(&source, &scheme, &limits, &output),
        Command::Fvector {
            source,
            limits,
            output,
        } => cmd_fvector(&source, &limits, &output),
        Command::Verify {
            source,
            scheme,
            jobs,
            limits,
            output,
        } => cmd_verify(&source, &scheme, jobs, &limits, &output),
        Command::Survey {
            n,
            connected_only,
            scheme,
            jobs,
            limits,
            output,
        } => cmd_survey(n, connected_only, &scheme, jobs, &limits, &output),
        Command::Family { kind, n, output } => cmd_family(&kind, n, &output),
        Command::ExportOff {
            source,
            scheme,
            limits,
            output,
        } => cmd_export_off(&source, &scheme, &limits, &output),
        Command::Count => cmd_count(),
    }
}

fn load_graph(source: &GraphSource, limits: &LimitOpts) -> Result<Graph, CliError> {
    if source.stdin && source.graph.is_some() {
        return Err(CliError::Usage(
            "pass either a graph file or --stdin, not both".to_string(),
        ));
    }
    let text = match &source.graph {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Io(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    let graph = Graph::parse_json(&text).map_err(|e| CliError::Io(e.to_string()))?;
    if graph.node_count() > limits.max_n {
        return Err(CliError::Usage(format!(
            "graph has {} nodes, above the enumeration limit of {} (raise with --max-n)",
            graph.node_count(),
            limits.max_n
        )));
    }
    Ok(graph)
}

/// Display name for a scheme spec without building it.
fn scheme_name(spec: &str) -> &str {
    if spec.starts_with("custom:") {
        "custom"
    } else {
        spec
    }
}

fn make_scheme(spec: &str, n: usize) -> Result<WeightScheme, CliError> {
    match spec {
        "power3" => WeightScheme::power3(n).map_err(|e| CliError::Usage(e.to_string())),
        "loday" => WeightScheme::loday(n).map_err(|e| CliError::Usage(e.to_string())),
        other => {
            let Some(path) = other.strip_prefix("custom:") else {
                return Err(CliError::Usage(format!(
                    "unknown scheme '{other}' (expected power3, loday, or custom:FILE)"
                )));
            };
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))?;
            let scheme = WeightScheme::from_json("custom", &text)
                .map_err(|e| CliError::Io(e.to_string()))?;
            if scheme.max_size() != n {
                return Err(CliError::Io(format!(
                    "custom scheme lists {} weights but the graph has {} nodes",
                    scheme.max_size(),
                    n
                )));
            }
            Ok(scheme)
        }
    }
}

/// A closed downstream pipe (e.g. `| head`) is a normal way to stop early,
/// not an error worth reporting.
fn is_broken_pipe(e: &std::io::Error) -> bool {
    e.kind() == std::io::ErrorKind::BrokenPipe
}

fn emit(output: &OutputOpts, content: &str) -> Result<(), CliError> {
    let mut text = content.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()) {
                Ok(()) => Ok(()),
                Err(e) if is_broken_pipe(&e) => Ok(()),
                Err(e) => Err(CliError::Io(format!("cannot write standard output: {e}"))),
            }
        }
    }
}

fn tube_list(indices: &[usize]) -> String {
    indices
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn tubing_pipe_format(tubing: &tubix_core::Tubing) -> String {
    tubing
        .tubes()
        .iter()
        .map(|t| tube_list(&t.indices()))
        .collect::<Vec<_>>()
        .join("|")
}

fn cmd_tubes(
    source: &GraphSource,
    limits: &LimitOpts,
    output: &OutputOpts,
) -> Result<u8, CliError> {
    let g = load_graph(source, limits)?;
    let tubes = enumerate_tubes(&g);
    let content = match output.output {
        OutputFormat::Json => serde_json::to_string(&tubes).expect("tube serialization"),
        OutputFormat::Csv => {
            let mut s = String::from("tube\n");
            for t in &tubes {
                let _ = writeln!(s, "{}", tube_list(&t.indices()));
            }
            s
        }
        OutputFormat::Text => tubes
            .iter()
            .map(|t| tube_list(&t.indices()))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(output, &content)?;
    Ok(0)
}

fn cmd_tubings(
    source: &GraphSource,
    k: Option<usize>,
    max_only: bool,
    limits: &LimitOpts,
    output: &OutputOpts,
) -> Result<u8, CliError> {
    if max_only && k.is_some() {
        return Err(CliError::Usage(
            "pass either -k or --max-only, not both".to_string(),
        ));
    }
    let g = load_graph(source, limits)?;
    let tubings = if max_only {
        enumerate_maximal_tubings(&g).map_err(|e| CliError::Usage(e.to_string()))?
    } else {
        enumerate_tubings(&g, k).map_err(|e| CliError::Usage(e.to_string()))?
    };
    let content = match output.output {
        OutputFormat::Json => serde_json::to_string(&tubings).expect("tubing serialization"),
        OutputFormat::Csv => {
            let mut s = String::from("tubes\n");
            for t in &tubings {
                let _ = writeln!(s, "{}", tubing_pipe_format(t));
            }
            s
        }
        OutputFormat::Text => tubings
            .iter()
            .map(|t| serde_json::to_string(t).expect("tubing serialization"))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(output, &content)?;
    Ok(0)
}

fn realize_json(
    scheme_label: &str,
    n: usize,
    total: &str,
    vertices: &[tubix_core::RealizedVertex],
) -> Value {
    json!({
        "scheme": scheme_label,
        "n": n,
        "total": total,
        "vertices": vertices
            .iter()
            .map(|v| json!({ "tubing": v.tubing, "point": v.point.decimal_strings() }))
            .collect::<Vec<Value>>(),
    })
}

fn cmd_realize(
    source: &GraphSource,
    scheme: &SchemeOpt,
    limits: &LimitOpts,
    output: &OutputOpts,
) -> Result<u8, CliError> {
    let g = load_graph(source, limits)?;
    let n = g.node_count();
    let label = scheme_name(&scheme.scheme);
    // A single node realizes to the origin; no weights are involved.
    let (vertices, total) = if n == 1 {
        let vertices = vec![tubix_core::RealizedVertex {
            tubing: tubix_core::Tubing::empty(),
            point: tubix_core::Point::new(vec![num_bigint::BigInt::from(0)]),
        }];
        (vertices, "0".to_string())
    } else {
        let s = make_scheme(&scheme.scheme, n)?;
        let vertices = realize(&g, &s).map_err(|e| CliError::Usage(e.to_string()))?;
        let total = s.total().to_string();
        (vertices, total)
    };
    let content = match output.output {
        OutputFormat::Json => realize_json(label, n, &total, &vertices).to_string(),
        OutputFormat::Csv => {
            let mut s = String::from("tubing");
            for i in 0..n {
                let _ = write!(s, ",x{i}");
            }
            s.push('\n');
            for v in &vertices {
                let _ = write!(s, "{}", tubing_pipe_format(&v.tubing));
                for c in v.point.decimal_strings() {
                    let _ = write!(s, ",{c}");
                }
                s.push('\n');
            }
            s
        }
        OutputFormat::Text => vertices
            .iter()
            .map(|v| {
                format!(
                    "{} -> ({})",
                    serde_json::to_string(&v.tubing).expect("tubing serialization"),
                    v.point.decimal_strings().join(", ")
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(output, &content)?;
    Ok(0)
}

fn cmd_hrep(
    source: &GraphSource,
    scheme: &SchemeOpt,
    limits: &LimitOpts,
    output: &OutputOpts,
) -> Result<u8, CliError> {
    let g = load_graph(source, limits)?;
    let s = make_scheme(&scheme.scheme, g.node_count())?;
    let h = build_hrep(&g, &s).map_err(|e| CliError::Usage(e.to_string()))?;
    let content = match output.output {
        OutputFormat::Json => json!({
            "scheme": scheme_name(&scheme.scheme),
            "n": h.n,
            "total": h.total.to_string(),
            "halfspaces": h.halfspaces
                .iter()
                .map(|hs| json!({ "tube": hs.tube, "rhs": hs.rhs.to_string() }))
                .collect::<Vec<Value>>(),
        })
        .to_string(),
        OutputFormat::Csv => {
            let mut out = String::from("kind,support,rhs\n");
            let _ = writeln!(
                out,
                "equality,{},{}",
                tube_list(&(0..h.n).collect::<Vec<_>>()),
                h.total
            );
            for hs in &h.halfspaces {
                let _ = writeln!(
                    out,
                    "halfspace,{},{}",
                    tube_list(&hs.tube.indices()),
                    hs.rhs
                );
            }
            out
        }
        OutputFormat::Text => {
            let mut out = format!("sum(x0..x{}) = {}\n", h.n - 1, h.total);
            for hs in &h.halfspaces {
                let terms = hs
                    .tube
                    .indices()
                    .iter()
                    .map(|i| format!("x{i}"))
                    .collect::<Vec<_>>()
                    .join(" + ");
                let _ = writeln!(out, "{terms} >= {}", hs.rhs);
            }
            out
        }
    };
    emit(output, &content)?;
    Ok(0)
}

fn cmd_fvector(
    source: &GraphSource,
    limits: &LimitOpts,
    output: &OutputOpts,
) -> Result<u8, CliError> {
    let g = load_graph(source, limits)?;
    let f = f_vector(&g);
    let content = match output.output {
        OutputFormat::Json => serde_json::to_string(&f).expect("count serialization"),
        OutputFormat::Csv => {
            let mut s = String::from("k,count\n");
            for (i, c) in f.iter().enumerate() {
                let _ = writeln!(s, "{},{c}", i + 1);
            }
            s
        }
        OutputFormat::Text => f
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" "),
    };
    emit(output, &content)?;
    Ok(0)
}

fn report_exit(report: &VerificationReport) -> u8 {
    if !report.passed() {
        EXIT_VERIFY_FAIL
    } else if report.incomplete() {
        EXIT_INCOMPLETE
    } else {
        0
    }
}

fn report_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    for check in &report.checks {
        let _ = writeln!(out, "{}: {}", check.name, check.status.as_str());
    }
    let _ = write!(
        out,
        "verdict: {}",
        if report.passed() { "pass" } else { "fail" }
    );
    out
}

fn build_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = jobs {
        builder = builder.num_threads(jobs.max(1));
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build worker pool: {e}")))
}

fn cmd_verify(
    source: &GraphSource,
    scheme: &SchemeOpt,
    jobs: Option<usize>,
    limits: &LimitOpts,
    output: &OutputOpts,
) -> Result<u8, CliError> {
    let g = load_graph(source, limits)?;
    let s = make_scheme(&scheme.scheme, g.node_count())?;
    let condition = check_weight_condition(&s);
    if !condition.pass {
        let first = condition
            .first_failure()
            .expect("failing report has a witness");
        eprintln!(
            "tubix: note: scheme '{}' violates the sufficient cut-depth condition at size {} \
             (w({}) = {} is not greater than 2*w({}) = {}); geometric checks decide",
            s.name(),
            first.k,
            first.k,
            first.weight,
            first.k - 1,
            first.bound
        );
    }
    let caps = VerifyCaps {
        oracle_cap: limits.oracle_cap,
    };
    let pool = build_pool(jobs)?;
    let report = pool
        .install(|| full_report(&g, &s, &caps))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let content = match output.output {
        OutputFormat::Json => report.to_json().to_string(),
        OutputFormat::Csv => {
            let mut s = String::from("check,status\n");
            for check in &report.checks {
                let _ = writeln!(s, "{},{}", check.name, check.status.as_str());
            }
            s
        }
        OutputFormat::Text => report_text(&report),
    };
    emit(output, &content)?;
    Ok(report_exit(&report))
}

fn cmd_survey(
    n: usize,
    connected_only: bool,
    scheme: &SchemeOpt,
    jobs: Option<usize>,
    limits: &LimitOpts,
    output: &OutputOpts,
) -> Result<u8, CliError> {
    if n < 2 {
        return Err(CliError::Usage(
            "survey requires --n of at least 2".to_string(),
        ));
    }
    if n > limits.max_n {
        return Err(CliError::Usage(format!(
            "--n {n} is above the enumeration limit of {} (raise with --max-n)",
            limits.max_n
        )));
    }
    if n > 11 {
        return Err(CliError::Usage(
            "survey supports at most 11 nodes (the edge mask must fit in 64 bits)".to_string(),
        ));
    }
    let s = make_scheme(&scheme.scheme, n)?;
    let caps = VerifyCaps {
        oracle_cap: limits.oracle_cap,
    };

    let pool = build_pool(jobs)?;

    let mut sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(
            fs::File::create(path)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
        ),
        None => Box::new(std::io::stdout().lock()),
    };

    let mut pass = 0u64;
    let mut fail = 0u64;
    let mut incomplete = 0u64;

    // Chunked parallel fan-out with in-order streaming output.
    let mut batch: Vec<Graph> = Vec::with_capacity(256);
    let mut graphs = enumerate_graphs(n).filter(|g| !connected_only || g.is_connected());
    loop {
        batch.clear();
        batch.extend(graphs.by_ref().take(256));
        if batch.is_empty() {
            break;
        }
        let reports: Vec<VerificationReport> = pool.install(|| {
            use rayon::prelude::*;
            batch
                .par_iter()
                .map(|g| full_report(g, &s, &caps).expect("n >= 2 and matching scheme"))
                .collect()
        });
        for report in &reports {
            if !report.passed() {
                fail += 1;
            } else if report.incomplete() {
                incomplete += 1;
            } else {
                pass += 1;
            }
            let line = report.to_json().to_string();
            let written = sink
                .write_all(line.as_bytes())
                .and_then(|_| sink.write_all(b"\n"));
            match written {
                Ok(()) => {}
                Err(e) if is_broken_pipe(&e) => return Ok(0),
                Err(e) => return Err(CliError::Io(format!("cannot write output: {e}"))),
            }
        }
    }
    eprintln!(
        "tubix: surveyed {} graphs on {n} nodes: {pass} pass, {fail} fail, {incomplete} incomplete",
        pass + fail + incomplete
    );
    Ok(if fail > 0 {
        EXIT_VERIFY_FAIL
    } else if incomplete > 0 {
        EXIT_INCOMPLETE
    } else {
        0
    })
}

fn cmd_family(kind: &str, n: usize, output: &OutputOpts) -> Result<u8, CliError> {
    let family: Family = kind
        .parse()
        .map_err(|e: tubix_core::GraphError| CliError::Usage(e.to_string()))?;
    let g = Graph::family(family, n).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(output, &g.to_canonical_json())?;
    Ok(0)
}

fn cmd_export_off(
    source: &GraphSource,
    scheme: &SchemeOpt,
    limits: &LimitOpts,
    output: &OutputOpts,
) -> Result<u8, CliError> {
    let g = load_graph(source, limits)?;
    if g.node_count() != 4 {
        return Err(CliError::Usage(format!(
            "export-off requires a 4-node graph (the polytope must be 3-dimensional); got n = {}",
            g.node_count()
        )));
    }
    let s = make_scheme(&scheme.scheme, 4)?;
    let caps = VerifyCaps {
        oracle_cap: limits.oracle_cap,
    };
    let report = full_report(&g, &s, &caps).map_err(|e| CliError::Usage(e.to_string()))?;
    if !report.passed() {
        eprintln!(
            "tubix: verification failed ({}); refusing to export",
            report
                .first_failure()
                .map(|c| c.name)
                .unwrap_or("unknown check")
        );
        return Ok(EXIT_VERIFY_FAIL);
    }
    if report.incomplete() {
        eprintln!("tubix: verification incomplete under the current caps; refusing to export");
        return Ok(EXIT_INCOMPLETE);
    }
    let vertices = realize(&g, &s).map_err(|e| CliError::Usage(e.to_string()))?;
    let h = build_hrep(&g, &s).map_err(|e| CliError::Usage(e.to_string()))?;
    let mesh = off::export_off(&vertices, &h);
    emit(output, &mesh)?;
    Ok(0)
}

fn cmd_count() -> Result<u8, CliError> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| CliError::Io(format!("cannot read standard input: {e}")))?;
    let count = match serde_json::from_str::<Value>(&buf) {
        Ok(Value::Array(items)) => items.len(),
        Ok(Value::Object(map)) => {
            let field = ["vertices", "halfspaces", "checks"]
                .iter()
                .find_map(|k| map.get(*k).and_then(Value::as_array));
            match field {
                Some(items) => items.len(),
                None => {
                    return Err(CliError::Io(
                        "cannot count: JSON object has no known list field".to_string(),
                    ))
                }
            }
        }
        Ok(_) => {
            return Err(CliError::Io(
                "cannot count: expected a JSON array or object".to_string(),
            ))
        }
        // Not JSON: count non-empty lines (text pipelines).
        Err(_) => buf.lines().filter(|l| !l.trim().is_empty()).count(),
    };
    println!("{count}");
    Ok(0)
}
