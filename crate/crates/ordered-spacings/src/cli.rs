//! Command-line front end: distribution tables to CSV, p-values from data
//! files, Monte Carlo sampling, coefficient dumps, and the self-check suite.
//!
//! Exit codes: 0 success, 1 failed check or precision refusal, 2 usage or
//! domain error (one-line diagnostic on stderr). Identical invocations
//! produce byte-identical output; `sample` is deterministic through its
//! seed, which defaults to 0.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::coefficients::CoefficientTable;
use crate::distribution::SpacingDistribution;
use crate::error::{Error, RATIONAL_NMAX_ENV};
use crate::inference::{self, TestResult};
use crate::model::{BoundaryMode, SpacingModel, StatFamily, StatKind};
use crate::montecarlo;
use crate::selfcheck;
use crate::series::{EvalMode, EvalPolicy, EXACT_BUILD_CAP};

#[derive(Parser)]
#[command(
    name = "ordered-spacings",
    version,
    about = "Distributions of ordered gaps between uniform points: tables, p-values, samples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Density over the statistic's support, as `x,value` rows.
    Pdf(GridArgs),
    /// P(X <= x) over the support, as `x,value` rows.
    Cdf(GridArgs),
    /// P(X >= x) over the support, as `x,value` rows.
    Sf(GridArgs),
    /// Invert the CDF at given probabilities, as `p,quantile` rows.
    Quantile(QuantileArgs),
    /// Tail probabilities of a statistic computed from a data file.
    Pvalue(PvalueArgs),
    /// Draw Monte Carlo replications of the statistic.
    Sample(SampleArgs),
    /// Dump the series weights and prefactors for all orders up to k.
    Table(TableArgs),
    /// Run every invariant family at desk scale and report pass counts.
    Selfcheck(OutputArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// k-th smallest gap.
    Kth,
    /// Sum of the k smallest gaps.
    SumMin,
    /// Sum of the k largest gaps.
    SumMax,
}

impl From<FamilyArg> for StatFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Kth => StatFamily::KthSmallest,
            FamilyArg::SumMin => StatFamily::SumSmallest,
            FamilyArg::SumMax => StatFamily::SumLargest,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EdgesArg {
    /// Count the two boundary gaps: n points make n+1 gaps.
    With,
    /// Interior gaps only: n points make n-1 gaps.
    Without,
}

impl From<EdgesArg> for BoundaryMode {
    fn from(e: EdgesArg) -> Self {
        match e {
            EdgesArg::With => BoundaryMode::WithEdges,
            EdgesArg::Without => BoundaryMode::WithoutEdges,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Guarded log-space floats; refuse when too few digits survive.
    Float,
    /// Exact big-rational arithmetic (slow; n capped).
    Rational,
    /// Floats with automatic exact fallback on heavy cancellation.
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct StatArgs {
    /// Number of sample points on the unit interval.
    #[arg(short = 'n', long = "n", value_name = "N")]
    n: u32,
    /// Statistic order within the sorted gaps.
    #[arg(short = 'k', long = "k", value_name = "K")]
    k: u32,
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_enum)]
    edges: EdgesArg,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(short = 'o', long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    stat: StatArgs,
    /// Number of evenly spaced grid points (endpoints included);
    /// analytic breakpoints are added as extra rows.
    #[arg(long, default_value_t = 1000, value_name = "POINTS")]
    grid: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct QuantileArgs {
    #[command(flatten)]
    stat: StatArgs,
    /// Probability to invert; repeatable. Without it, probabilities are
    /// read from FILE (one per line, # comments ignored).
    #[arg(long = "p", value_name = "PROB")]
    p: Vec<f64>,
    /// File of probabilities, one per line.
    #[arg(value_name = "FILE")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct PvalueArgs {
    /// Expected number of points; checked against the file if given.
    #[arg(short = 'n', long = "n", value_name = "N")]
    n: Option<u32>,
    #[arg(short = 'k', long = "k", value_name = "K")]
    k: u32,
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_enum)]
    edges: EdgesArg,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    /// Uniformized data: one value in [0,1] per line, # comments ignored.
    #[arg(value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    stat: StatArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of replications.
    #[arg(long, default_value_t = 1_000_000)]
    count: usize,
    /// csv streams every replication; json emits a summary object.
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct TableArgs {
    /// Number of sample points the prefactors are built for.
    #[arg(short = 'n', long = "n", value_name = "N")]
    n: u32,
    /// Largest order to include.
    #[arg(short = 'k', long = "k", value_name = "K")]
    k: u32,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    #[command(flatten)]
    out: OutputArgs,
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("{}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precision { .. } | Error::Quadrature { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Pdf(args) => grid_command("pdf", args),
        Command::Cdf(args) => grid_command("cdf", args),
        Command::Sf(args) => grid_command("sf", args),
        Command::Quantile(args) => quantile_command(args),
        Command::Pvalue(args) => pvalue_command(args),
        Command::Sample(args) => sample_command(args),
        Command::Table(args) => table_command(args),
        Command::Selfcheck(out) => selfcheck_command(out),
    }
}

fn policy_for(mode: ModeArg) -> Result<EvalPolicy, Failure> {
    let mut policy = EvalPolicy::default();
    policy.mode = match mode {
        ModeArg::Float => EvalMode::FloatLog,
        ModeArg::Rational => EvalMode::Rational,
        ModeArg::Auto => EvalMode::Auto,
    };
    if let Ok(raw) = std::env::var(RATIONAL_NMAX_ENV) {
        policy.rational_n_max = raw.parse().map_err(|_| {
            Failure::usage(format!(
                "{RATIONAL_NMAX_ENV} must be a positive integer, got '{raw}'"
            ))
        })?;
    }
    Ok(policy)
}

fn build_distribution(stat: &StatArgs) -> Result<SpacingDistribution, Failure> {
    let model = SpacingModel::new(stat.n, stat.edges.into())?;
    let kind = StatKind::new(stat.family.into(), stat.k);
    Ok(model.distribution(kind)?)
}

fn emit(out: &OutputArgs, content: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => std::fs::write(path, content)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

/// Two-column CSV: both columns at 17 significant digits.
fn csv_rows(header: &str, rows: &[(f64, f64)]) -> String {
    let mut s = String::with_capacity(rows.len() * 48 + header.len() + 1);
    s.push_str(header);
    s.push('\n');
    for (a, b) in rows {
        s.push_str(&format!("{a:.16e},{b:.16e}\n"));
    }
    s
}

#[derive(serde::Serialize)]
struct GridDocument<'a> {
    command: &'a str,
    family: StatFamily,
    edges: BoundaryMode,
    n: u32,
    k: u32,
    rows: Vec<[f64; 2]>,
}

fn grid_command(which: &str, args: GridArgs) -> Result<(), Failure> {
    if args.grid < 2 {
        return Err(Failure::usage("--grid must be at least 2 points"));
    }
    let policy = policy_for(args.stat.mode)?;
    let dist = build_distribution(&args.stat)?;

    let (lo, hi) = dist.support();
    let steps = (args.grid - 1) as f64;
    let mut xs: Vec<f64> = (0..args.grid)
        .map(|j| {
            if j + 1 == args.grid {
                hi
            } else {
                lo + (hi - lo) * j as f64 / steps
            }
        })
        .collect();
    xs.extend(dist.breakpoints());
    xs.sort_unstable_by(f64::total_cmp);
    xs.dedup();

    let mut rows = Vec::with_capacity(xs.len());
    for x in xs {
        let value = match which {
            "pdf" => dist.pdf(x, &policy)?,
            "cdf" => dist.cdf(x, &policy)?,
            _ => dist.sf(x, &policy)?,
        };
        rows.push((x, value));
    }

    let content = match args.format {
        FormatArg::Csv => csv_rows("x,value", &rows),
        FormatArg::Json => {
            let doc = GridDocument {
                command: which,
                family: dist.kind().family,
                edges: dist.model().mode(),
                n: dist.model().n(),
                k: dist.kind().k,
                rows: rows.iter().map(|&(x, v)| [x, v]).collect(),
            };
            let mut s = serde_json::to_string(&doc).expect("grid document serializes");
            s.push('\n');
            s
        }
    };
    emit(&args.out, &content)
}

fn quantile_command(args: QuantileArgs) -> Result<(), Failure> {
    let policy = policy_for(args.stat.mode)?;
    let dist = build_distribution(&args.stat)?;

    let probabilities = if !args.p.is_empty() {
        args.p.clone()
    } else if let Some(path) = &args.input {
        read_values(path)?
    } else {
        return Err(Failure::usage(
            "quantile needs probabilities: pass --p or an input file",
        ));
    };

    let mut rows = Vec::with_capacity(probabilities.len());
    for p in probabilities {
        rows.push((p, inference::quantile(&dist, p, &policy)?));
    }

    let content = match args.format {
        FormatArg::Csv => csv_rows("p,quantile", &rows),
        FormatArg::Json => {
            let doc = GridDocument {
                command: "quantile",
                family: dist.kind().family,
                edges: dist.model().mode(),
                n: dist.model().n(),
                k: dist.kind().k,
                rows: rows.iter().map(|&(p, q)| [p, q]).collect(),
            };
            let mut s = serde_json::to_string(&doc).expect("quantile document serializes");
            s.push('\n');
            s
        }
    };
    emit(&args.out, &content)
}

fn pvalue_command(args: PvalueArgs) -> Result<(), Failure> {
    let policy = policy_for(args.mode)?;
    let values = read_values(&args.input)?;
    if let Some(expected) = args.n {
        if values.len() != expected as usize {
            return Err(Failure::usage(format!(
                "-n {expected} given but {} holds {} values",
                args.input.display(),
                values.len()
            )));
        }
    }
    let kind = StatKind::new(args.family.into(), args.k);
    let result: TestResult =
        inference::evaluate_data(args.edges.into(), kind, &values, &policy)?;
    let mut content = serde_json::to_string(&result).expect("test result serializes");
    content.push('\n');
    emit(&args.out, &content)
}

fn sample_command(args: SampleArgs) -> Result<(), Failure> {
    let model = SpacingModel::new(args.stat.n, args.stat.edges.into())?;
    let kind = StatKind::new(args.stat.family.into(), args.stat.k);
    let batch = montecarlo::draw_statistic(model, kind, args.seed, args.count)?;
    let content = match args.format {
        FormatArg::Csv => {
            let mut buf = Vec::with_capacity(batch.len() * 32 + 24);
            batch.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("csv is ascii")
        }
        FormatArg::Json => {
            let mut s =
                serde_json::to_string(&batch.summary()).expect("summary serializes");
            s.push('\n');
            s
        }
    };
    emit(&args.out, &content)
}

fn table_command(args: TableArgs) -> Result<(), Failure> {
    let with_exact = match args.mode {
        ModeArg::Rational => true,
        ModeArg::Float => false,
        ModeArg::Auto => args.n <= EXACT_BUILD_CAP,
    };
    let table = CoefficientTable::build(args.n, args.k, with_exact)?;
    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    emit(&args.out, &String::from_utf8(buf).expect("csv is ascii"))
}

fn selfcheck_command(out: OutputArgs) -> Result<(), Failure> {
    let report = selfcheck::run_all();
    emit(&out, &report.to_string())?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: "selfcheck found failing invariants".into(),
        })
    }
}

/// One value per line; `#` starts a comment; blank lines ignored.
fn read_values(path: &Path) -> Result<Vec<f64>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::usage(format!("cannot read {}: {e}", path.display()))
    })?;
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            Failure::usage(format!(
                "{}:{}: not a number: '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        values.push(v);
    }
    Ok(values)
}
