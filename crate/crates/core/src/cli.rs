//! Command-line front end: `density`, `simulate`, `compare` and `selftest`.
//!
//! Exit codes: 0 success, 1 threshold violation, 2 usage or domain error,
//! 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::density::table::{chebyshev_grid, DEFAULT_POINTS};
use crate::density::{DensityTable, GridSpec, Mode, Radial, Route};
use crate::error::Error;
use crate::params::{make_params, ModelParams, Parity, WalkKind};
use crate::selftest::{self, Fault};
use crate::simulate::{scaled_ensemble, with_threads, EnsembleSpec};
use crate::stats::{ks_distance, summarize, EnsembleSummary};

pub const SCHEMA_VERSION: u32 = 1;

/// Default KS threshold of `compare`.
pub const KS_THRESHOLD: f64 = 0.05;
/// Default route-agreement threshold of `compare`, relative to `1 + |value|`.
pub const ROUTE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Model(#[from] Error),
    #[error("threshold violated: {0}")]
    Threshold(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Threshold(_) => 1,
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Model(e) if e.is_domain() => 2,
            CliError::Model(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "levywalk", version, about = "Densities and Monte Carlo ensembles of isotropic Lévy walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the radius or first-coordinate density.
    Density(DensityArgs),
    /// Simulate an ensemble and summarise it against the analytic distribution.
    Simulate(SimulateArgs),
    /// Check a density table against an ensemble.
    Compare(CompareArgs),
    /// Run the built-in oracle checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args, Clone, Copy)]
pub struct ModelArgs {
    #[arg(long, default_value = "standard", value_parser = parse_kind)]
    pub kind: WalkKind,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
}

impl ModelArgs {
    fn params(&self) -> CliResult<ModelParams> {
        Ok(make_params(self.kind, self.alpha, self.dim)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Radius,
    FirstCoord,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Radius => Mode::Radius,
            ModeArg::FirstCoord => Mode::FirstCoord,
        }
    }
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// `start:end:points`; both ends are clamped into the support.
    /// Without it, Chebyshev points on (0, 1), or (0, 10) for the overshoot walk.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
    #[arg(long, default_value = "hyper", value_parser = parse_route)]
    pub route: Route,
    #[arg(long, value_enum, default_value = "radius")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Time horizon `n`; positions are divided by it.
    #[arg(long, default_value_t = 1000.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "LEVYWALK_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// JSON summary, or CSV of the raw rescaled radii.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Density table written by `density` (CSV or JSON, radius mode).
    #[arg(long, requires = "ensemble")]
    pub table: Option<PathBuf>,
    /// Radii written by `simulate --format csv`.
    #[arg(long, requires = "table")]
    pub ensemble: Option<PathBuf>,
    /// Walk kind, used when no files are given.
    #[arg(long, value_parser = parse_kind, conflicts_with = "table")]
    pub kind: Option<WalkKind>,
    #[arg(long, conflicts_with = "table")]
    pub alpha: Option<f64>,
    #[arg(long, conflicts_with = "table")]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 10_000.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = KS_THRESHOLD)]
    pub ks_max: f64,
    #[arg(long, default_value_t = ROUTE_THRESHOLD)]
    pub route_max: f64,
    /// Defaults to 1e-6, or 1e-4 for the overshoot walk.
    #[arg(long)]
    pub mass_max: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Inject a fault to check that the self-test notices it.
    #[arg(long, value_parser = parse_fault)]
    pub fault: Option<Fault>,
}

fn parse_kind(s: &str) -> Result<WalkKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_route(s: &str) -> Result<Route, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_fault(s: &str) -> Result<Fault, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serialises");
    s.push('\n');
    s
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Versioned<'a, T> {
    schema_version: u32,
    #[serde(flatten)]
    body: &'a T,
}

fn density(args: &DensityArgs) -> CliResult<()> {
    let p = args.model.params()?;
    let grid = match args.grid {
        Some(g) => g.abscissae(),
        None => chebyshev_grid(0.0, if p.kind.bounded_support() { 1.0 } else { 10.0 }, DEFAULT_POINTS),
    };
    let table = DensityTable::build(&p, args.mode.into(), args.route, &grid)?;
    let text = match args.format {
        Format::Csv => table.to_csv(),
        Format::Json => to_json(&Versioned { schema_version: SCHEMA_VERSION, body: &table }),
    };
    write_output(args.output.as_deref(), &text)
}

/// JSON document written by `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SimulationReport {
    pub schema_version: u32,
    pub kind: WalkKind,
    pub dim: usize,
    pub alpha: f64,
    pub summary: EnsembleSummary,
    /// `1 - P(R <= 1)` from the analytic distribution.
    pub analytic_beyond_front: f64,
    pub beyond_front_std_err: f64,
    pub runtime: Runtime,
}

/// Everything in the report that may differ between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Runtime {
    pub seconds: f64,
    pub threads: usize,
}

fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let p = args.model.params()?;
    let spec = EnsembleSpec { dim: p.dim, alpha: p.alpha, scale: args.scale, count: args.samples, seed: args.seed };
    let start = Instant::now();
    let (ens, threads) = with_threads(args.threads, || (scaled_ensemble(p.kind, &spec), rayon::current_num_threads()))?;
    let ens = ens?;
    if args.format == Format::Csv {
        let mut s = String::from("radius\n");
        for r in &ens.radii {
            let _ = writeln!(s, "{r:?}");
        }
        return write_output(args.output.as_deref(), &s);
    }
    let rad = Radial::new(&p);
    let cdf = rad.cdf_table()?;
    let coord = rad.coordinate_cdf_table()?;
    let summary = summarize(&ens, |r| cdf.eval(r), |x| coord.eval(x), args.bins)?;
    let beyond = (1.0 - cdf.eval(1.0)).max(0.0);
    let report = SimulationReport {
        schema_version: SCHEMA_VERSION,
        kind: p.kind,
        dim: p.dim,
        alpha: p.alpha,
        summary,
        analytic_beyond_front: beyond,
        beyond_front_std_err: (beyond * (1.0 - beyond) / ens.count() as f64).sqrt(),
        runtime: Runtime { seconds: start.elapsed().as_secs_f64(), threads },
    };
    write_output(args.output.as_deref(), &to_json(&report))
}

/// Output of `compare`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompareReport {
    pub kind: WalkKind,
    pub alpha: f64,
    pub dim: usize,
    pub samples: usize,
    pub ks: f64,
    pub ks_max: f64,
    /// Largest `|a - b| / (1 + |b|)` of each route against the hypergeometric values.
    pub route_agreement: Vec<(Route, f64)>,
    pub route_max: f64,
    pub mass_residual: f64,
    pub mass_max: f64,
    pub passed: bool,
}

/// Parses a CSV table written by `density`. The parameters come from the
/// `route,kind,alpha,dim` columns of the first row.
pub fn parse_table_csv(text: &str) -> CliResult<DensityTable> {
    let bad = |msg: &str| CliError::Usage(format!("malformed density table: {msg}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    let mode = match header.split(',').next() {
        Some("r") => Mode::Radius,
        Some("x") => Mode::FirstCoord,
        _ => return Err(bad("unknown header")),
    };
    let (mut grid, mut values) = (vec![], vec![]);
    let mut meta: Option<(Route, ModelParams)> = None;
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(bad(&format!("expected 6 fields in `{line}`")));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("not a number: `{s}`")));
        grid.push(num(f[0])?);
        values.push(num(f[1])?);
        if meta.is_none() {
            let route: Route = f[2].parse()?;
            let kind: WalkKind = f[3].parse()?;
            let dim: usize = f[5].parse().map_err(|_| bad("dimension"))?;
            meta = Some((route, make_params(kind, num(f[4])?, dim)?));
        }
    }
    let (route, params) = meta.ok_or_else(|| bad("no rows"))?;
    Ok(DensityTable { params, mode, route, clamp_margin: crate::density::table::CLAMP_MARGIN, grid, values })
}

fn read_table(path: &Path) -> CliResult<DensityTable> {
    let text = read_file(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    } else {
        parse_table_csv(&text)
    }
}

/// Reads the `radius` column written by `simulate --format csv`; the result is sorted.
pub fn parse_radii_csv(text: &str) -> CliResult<Vec<f64>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("radius") {
        return Err(CliError::Usage("ensemble file must start with a `radius` header".into()));
    }
    let mut radii = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("not a radius: `{l}`"))))
        .collect::<CliResult<Vec<f64>>>()?;
    if radii.is_empty() {
        return Err(CliError::Usage("ensemble file holds no radii".into()));
    }
    radii.sort_by(f64::total_cmp);
    Ok(radii)
}

fn other_routes(p: &ModelParams) -> Vec<Route> {
    let mut routes = vec![];
    if p.parity == Parity::Odd {
        routes.push(Route::Elementary);
    }
    if p.dim == 3 {
        routes.push(Route::ClosedFormD3);
    }
    routes
}

fn agreement(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / (1.0 + y.abs())).fold(0.0, f64::max)
}

/// Builds the comparison report; `passed` says whether every threshold holds.
pub fn compare_report(table: &DensityTable, radii: &[f64], args: &CompareArgs) -> CliResult<CompareReport> {
    if table.mode != Mode::Radius {
        return Err(CliError::Usage("compare needs a radius-mode table".into()));
    }
    let p = table.params;
    let rad = Radial::new(&p);
    let cdf = rad.cdf_table()?;
    let ks = ks_distance(radii, |r| cdf.eval(r));
    let hyper = DensityTable::build(&p, Mode::Radius, Route::Hypergeometric, &table.grid)?;
    let mut route_agreement = vec![(table.route, agreement(&table.values, &hyper.values))];
    for route in other_routes(&p).into_iter().filter(|&r| r != table.route) {
        let t = DensityTable::build(&p, Mode::Radius, route, &table.grid)?;
        route_agreement.push((route, agreement(&t.values, &hyper.values)));
    }
    let mass_residual = (rad.total_mass()? - 1.0).abs();
    let mass_max = args.mass_max.unwrap_or(if p.kind.bounded_support() { 1e-6 } else { 1e-4 });
    let passed = ks <= args.ks_max && route_agreement.iter().all(|(_, e)| *e <= args.route_max) && mass_residual <= mass_max;
    Ok(CompareReport {
        kind: p.kind,
        alpha: p.alpha,
        dim: p.dim,
        samples: radii.len(),
        ks,
        ks_max: args.ks_max,
        route_agreement,
        route_max: args.route_max,
        mass_residual,
        mass_max,
        passed,
    })
}

fn compare(args: &CompareArgs) -> CliResult<()> {
    let (table, radii) = match (&args.table, &args.ensemble) {
        (Some(t), Some(e)) => {
            let table = read_table(t)?;
            let radii = parse_radii_csv(&read_file(e)?)?;
            (table, radii)
        }
        _ => {
            let (Some(kind), Some(alpha), Some(dim)) = (args.kind, args.alpha, args.dim) else {
                return Err(CliError::Usage("compare needs --table and --ensemble, or --kind, --alpha and --dim".into()));
            };
            let p = make_params(kind, alpha, dim)?;
            let grid = GridSpec { start: 0.01, end: 0.99, points: 99 }.abscissae();
            let table = DensityTable::build(&p, Mode::Radius, Route::Hypergeometric, &grid)?;
            let spec = EnsembleSpec { dim, alpha, scale: args.scale, count: args.samples, seed: args.seed };
            (table, scaled_ensemble(kind, &spec)?.radii)
        }
    };
    let report = compare_report(&table, &radii, args)?;
    write_output(args.output.as_deref(), &to_json(&report))?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Threshold(format!(
            "ks {:.4} (max {}), route gap {:.2e} (max {:e}), mass residual {:.2e} (max {:e})",
            report.ks,
            report.ks_max,
            report.route_agreement.iter().map(|r| r.1).fold(0.0, f64::max),
            report.route_max,
            report.mass_residual,
            report.mass_max
        )))
    }
}

fn selftest_cmd(args: &SelftestArgs) -> CliResult<()> {
    let checks = selftest::run(args.fault);
    print!("{}", selftest::report(&checks));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Threshold(format!("self-test failures: {}", failed.join(", "))))
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Density(a) => density(a),
        Command::Simulate(a) => simulate(a),
        Command::Compare(a) => compare(a),
        Command::Selftest(a) => selftest_cmd(a),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("levywalk: {e}");
            e.exit_code()
        }
    }
}
