//! Command implementations behind the `fracspline` binary.
//!
//! Every command renders its CSV into memory and returns it together with
//! the exit status; `main` only decides where the bytes go.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracspline_core::problems::{default_alpha, default_tension};
use fracspline_core::{
    benchmark_with_alpha, convergence_order, error_norms, growth_factor, heat_flux_at_left, pairwise_orders,
    perturbation_decay_check, pointwise_error, reconstruct, solve, BasisMode, BenchmarkCase, CoefficientHistory,
    Discretization, FluxSign, Metric, ProblemSpec, SlopeSource, TableTarget,
};
use rayon::prelude::*;
use thiserror::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest growth factor tolerated by the stability scan.
pub const GROWTH_LIMIT: f64 = 1.0 + 1e-12;
/// Default relative tolerance for `table --check`.
pub const TABLE_TOLERANCE: f64 = 0.15;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(fracspline_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl From<fracspline_core::Error> for CliError {
    fn from(e: fracspline_core::Error) -> Self {
        use fracspline_core::Error as E;
        match e {
            E::InvalidParameter { .. } | E::UnknownBenchmark(_) | E::TooFewPoints { .. } | E::ZeroTension
            | E::MissingExact => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Stability scan found a growth factor above one.
    Unstable,
    /// `table --check` found an entry outside tolerance.
    Mismatch,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Unstable => 2,
            Status::Mismatch => 3,
        }
    }
}

/// Rendered output of a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub csv: String,
    pub status: Status,
    /// Human-readable lines for stderr.
    pub notes: Vec<String>,
}

#[derive(Debug, Parser)]
#[command(name = "fracspline", version, about = "Exponential B-spline collocation for time-fractional diffusion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce one of the published error tables.
    Table(TableArgs),
    /// Solve one benchmark and print the nodal solution at the final time.
    Run(RunConfig),
    /// Error norms over a list of M or N values, with estimated orders.
    Sweep(SweepArgs),
    /// Growth factors and perturbation amplification over a parameter grid.
    Stability(StabilityArgs),
    /// Left-boundary flux history of the pulse problem.
    Flux(FluxArgs),
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub id: u8,
    #[arg(long)]
    pub out: Option<String>,
    /// Exit with status 3 if any entry deviates from the published value by more than `--tol`.
    #[arg(long)]
    pub check: bool,
    #[arg(long, default_value_t = TABLE_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args, Clone)]
pub struct RunConfig {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub example: u8,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Total number of time steps over [0, T].
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long = "T")]
    pub horizon: Option<f64>,
    /// Use the p -> 0 (cubic) basis instead of the exponential one.
    #[arg(long)]
    pub cubic_limit: bool,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Vary {
    #[value(name = "M", alias = "m")]
    M,
    #[value(name = "N", alias = "n")]
    N,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub base: RunConfig,
    #[arg(long, value_enum)]
    pub vary: Vary,
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Default,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[arg(long, value_enum, default_value_t = Grid::Default)]
    pub grid: Grid,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Fick,
    Plain,
}

#[derive(Debug, Args)]
pub struct FluxArgs {
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u8).range(5..=5))]
    pub example: u8,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = SignArg::Fick)]
    pub sign: SignArg,
    #[arg(long = "M")]
    pub m: Option<usize>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub out: Option<String>,
}

impl Command {
    pub fn out_path(&self) -> Option<&str> {
        match self {
            Command::Table(a) => a.out.as_deref(),
            Command::Run(a) => a.out.as_deref(),
            Command::Sweep(a) => a.base.out.as_deref(),
            Command::Stability(a) => a.out.as_deref(),
            Command::Flux(a) => a.out.as_deref(),
        }
    }
}

pub fn execute(cmd: &Command) -> CliResult<Report> {
    match cmd {
        Command::Table(a) => cmd_table(a.id, a.check, a.tol),
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(&a.base, a.vary, &a.values),
        Command::Stability(a) => cmd_stability(a.trials, a.seed),
        Command::Flux(a) => cmd_flux(a),
    }
}

/// Six significant digits.
pub fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

struct Meta(String);

impl Meta {
    fn new(command: &str) -> Self {
        let mut m = Meta(String::new());
        m.push("command", command);
        m.push("version", VERSION);
        m
    }

    fn push(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.0, "# {key}={value}");
        self
    }

    fn disc(&mut self, spec: &ProblemSpec, disc: &Discretization) -> &mut Self {
        self.push("alpha", spec.alpha)
            .push("kappa", spec.kappa)
            .push("M", disc.m)
            .push("N", disc.n)
            .push("p", disc.p)
            .push("tau", sci(disc.tau))
            .push("h", sci(disc.h))
            .push("T", spec.horizon)
            .push("basis", mode_name(disc.mode))
    }

    fn finish(self, body: Vec<u8>) -> String {
        self.0 + &String::from_utf8(body).expect("csv output is UTF-8")
    }
}

fn mode_name(mode: BasisMode) -> &'static str {
    match mode {
        BasisMode::Exponential => "exponential",
        BasisMode::CubicLimit => "cubic-limit",
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().from_writer(Vec::new())
}

fn into_body(w: csv::Writer<Vec<u8>>) -> CliResult<Vec<u8>> {
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

fn check_alpha(alpha: f64) -> CliResult<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Builds the case and discretization a [`RunConfig`] describes.
pub fn configure(cfg: &RunConfig) -> CliResult<(BenchmarkCase, Discretization)> {
    let alpha = cfg.alpha.unwrap_or(default_alpha(cfg.example)?);
    check_alpha(alpha)?;
    let mut case = benchmark_with_alpha(cfg.example, alpha)?;
    if let Some(t) = cfg.horizon {
        case.spec = case.spec.with_horizon(t);
    }
    let base = case.default_disc;
    let m = cfg.m.unwrap_or(base.m);
    let n = cfg.n.unwrap_or(base.n);
    let p = cfg.p.unwrap_or(default_tension(cfg.example)?);
    let mut disc = Discretization::new(&case.spec, m, n, p)?;
    if cfg.cubic_limit {
        disc = disc.with_mode(BasisMode::CubicLimit)?;
    }
    Ok((case, disc))
}

pub fn cmd_run(cfg: &RunConfig) -> CliResult<Report> {
    let (case, disc) = configure(cfg)?;
    let hist = solve(&case.spec, &disc)?;
    let last = hist.len() - 1;
    let mut meta = Meta::new("run");
    meta.push("example", case.id).disc(&case.spec, &disc).push("t", disc.time(last));
    meta.push("slope_source", slope_name(hist.slope_source()));
    let exact = case.spec.exact.as_ref();
    if exact.is_some() {
        let r = error_norms(&hist, &case.spec, last)?;
        meta.push("l2", sci(r.l2)).push("linf", sci(r.linf));
    }
    let mut w = csv_writer();
    w.write_record(["x", "u_numeric", "u_exact", "abs_error"])?;
    for (j, u) in hist.nodal_values(last)?.iter().enumerate() {
        let x = disc.node(j as isize);
        let (ex, err) = match exact {
            Some(f) => {
                let e = f(x, disc.time(last));
                (sci(e), sci((e - u).abs()))
            }
            None => (String::new(), String::new()),
        };
        w.write_record([sci(x), sci(*u), ex, err])?;
    }
    let mut notes = case.spec.compatibility_warnings();
    if hist.slope_source() == SlopeSource::FiniteDifference {
        notes.push("initial slopes estimated by finite differences".into());
    }
    Ok(Report {
        csv: meta.finish(into_body(w)?),
        status: Status::Ok,
        notes,
    })
}

fn slope_name(s: SlopeSource) -> &'static str {
    match s {
        SlopeSource::Exact => "exact",
        SlopeSource::FiniteDifference => "finite-difference",
    }
}

/// Measured value for a published entry, from an already solved history.
pub fn measure(case: &BenchmarkCase, hist: &CoefficientHistory, target: &TableTarget) -> CliResult<f64> {
    let level = hist.disc().level_at(target.t);
    Ok(match target.metric {
        Metric::Pointwise { x } => pointwise_error(hist, &case.spec, level, x)?,
        Metric::L2 => error_norms(hist, &case.spec, level)?.l2,
        Metric::LInf => error_norms(hist, &case.spec, level)?.linf,
    })
}

/// One table column: a distinct `(alpha, M, N, mode)` run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnKey {
    pub alpha: f64,
    pub m: usize,
    pub n: usize,
    pub mode: BasisMode,
}

/// Distinct columns of table `id`, in table order.
pub fn table_columns(id: u8) -> CliResult<Vec<ColumnKey>> {
    let case = benchmark_with_alpha(id, default_alpha(id)?)?;
    let mut keys: Vec<ColumnKey> = Vec::new();
    for t in &case.table_targets {
        let key = ColumnKey {
            alpha: t.alpha,
            m: t.m,
            n: t.n,
            mode: t.mode,
        };
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    Ok(keys)
}

/// Solves one column of table `id` and measures its published entries.
pub fn measure_column(id: u8, key: ColumnKey) -> CliResult<Vec<(TableTarget, f64)>> {
    let case = benchmark_with_alpha(id, key.alpha)?;
    let disc = case.disc(key.m, key.n)?.with_mode(key.mode)?;
    let hist = solve(&case.spec, &disc)?;
    case.table_targets
        .iter()
        .filter(|t| t.alpha == key.alpha && t.m == key.m && t.n == key.n && t.mode == key.mode)
        .map(|t| Ok((*t, measure(&case, &hist, t)?)))
        .collect()
}

/// Measured values for every published entry of table `id`, in table order.
pub fn reproduce_table(id: u8) -> CliResult<Vec<(TableTarget, f64)>> {
    let columns: Vec<CliResult<Vec<(TableTarget, f64)>>> =
        table_columns(id)?.into_par_iter().map(|key| measure_column(id, key)).collect();
    let mut out = Vec::new();
    for c in columns {
        out.extend(c?);
    }
    Ok(out)
}

fn column_label(t: &TableTarget) -> String {
    let method = match t.mode {
        BasisMode::Exponential => "",
        BasisMode::CubicLimit => "cubic_",
    };
    let metric = match t.metric {
        Metric::Pointwise { .. } => "",
        Metric::L2 => "l2_",
        Metric::LInf => "linf_",
    };
    format!("{method}{metric}a{}_M{}_N{}", t.alpha, t.m, t.n)
}

pub fn cmd_table(id: u8, check: bool, tol: f64) -> CliResult<Report> {
    if !(1..=4).contains(&id) {
        return Err(CliError::Usage(format!("table id must be 1..=4, got {id}")));
    }
    let start = Instant::now();
    let entries = reproduce_table(id)?;
    let mut meta = Meta::new("table");
    meta.push("table", id)
        .push("case", id)
        .push("kappa", benchmark_with_alpha(id, default_alpha(id)?)?.spec.kappa)
        .push("p", default_tension(id)?);
    if id == 3 {
        meta.push("steps", "3N over [0, 3]");
    }

    // Rows are the x positions (tables 1, 2, 4) or the report times (table 3).
    let row_key = |t: &TableTarget| match t.metric {
        Metric::Pointwise { x } => x,
        _ => t.t,
    };
    let mut rows: Vec<f64> = Vec::new();
    let mut cols: Vec<String> = Vec::new();
    for (t, _) in &entries {
        if !rows.contains(&row_key(t)) {
            rows.push(row_key(t));
        }
        let label = column_label(t);
        if !cols.contains(&label) {
            cols.push(label);
        }
    }
    let mut w = csv_writer();
    let mut header = vec![if id == 3 { "t".to_string() } else { "x".to_string() }];
    for c in &cols {
        header.push(c.clone());
        header.push(format!("{c}_published"));
    }
    w.write_record(&header)?;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for r in &rows {
        let mut record = vec![format!("{r}")];
        for c in &cols {
            let hit = entries.iter().find(|(t, _)| row_key(t) == *r && column_label(t) == *c);
            match hit {
                Some((t, v)) => {
                    let dev = ((v - t.expected) / t.expected).abs();
                    if dev > tol {
                        failures.push(format!("{c} at {r}: {} vs published {}", sci(*v), sci(t.expected)));
                    }
                    worst = worst.max(dev);
                    record.push(sci(*v));
                    record.push(sci(t.expected));
                }
                None => {
                    record.push(String::new());
                    record.push(String::new());
                }
            }
        }
        w.write_record(&record)?;
    }
    meta.push("max_rel_deviation", format!("{worst:.4}"));
    let mut notes = vec![format!("table {id}: {:.1} s, max relative deviation {worst:.3}", start.elapsed().as_secs_f64())];
    let status = if check && !failures.is_empty() {
        notes.extend(failures);
        Status::Mismatch
    } else {
        Status::Ok
    };
    Ok(Report {
        csv: meta.finish(into_body(w)?),
        status,
        notes,
    })
}

/// One point of a convergence sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub m: usize,
    pub n: usize,
    pub h: f64,
    pub tau: f64,
    pub l2: f64,
    pub linf: f64,
}

pub fn sweep_points(base: &RunConfig, vary: Vary, values: &[usize]) -> CliResult<Vec<SweepPoint>> {
    if values.len() < 2 {
        return Err(CliError::Usage(format!(
            "a sweep needs at least two values to estimate an order, got {}",
            values.len()
        )));
    }
    values
        .par_iter()
        .map(|&v| {
            let mut cfg = base.clone();
            match vary {
                Vary::M => cfg.m = Some(v),
                Vary::N => cfg.n = Some(v),
            }
            let (case, disc) = configure(&cfg)?;
            let hist = solve(&case.spec, &disc)?;
            let r = error_norms(&hist, &case.spec, hist.len() - 1)?;
            Ok(SweepPoint {
                m: disc.m,
                n: disc.n,
                h: disc.h,
                tau: disc.tau,
                l2: r.l2,
                linf: r.linf,
            })
        })
        .collect()
}

/// Regression order of `linf` against the varied step; `None` for fewer than two points.
pub fn sweep_order(points: &[SweepPoint], vary: Vary, use_l2: bool) -> CliResult<Option<f64>> {
    if points.len() < 2 {
        return Ok(None);
    }
    let pairs: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (step_of(p, vary), if use_l2 { p.l2 } else { p.linf }))
        .collect();
    Ok(Some(convergence_order(&pairs)?))
}

fn step_of(p: &SweepPoint, vary: Vary) -> f64 {
    match vary {
        Vary::M => p.h,
        Vary::N => p.tau,
    }
}

pub fn cmd_sweep(base: &RunConfig, vary: Vary, values: &[usize]) -> CliResult<Report> {
    let points = sweep_points(base, vary, values)?;
    let (case, disc) = configure(base)?;
    let mut meta = Meta::new("sweep");
    meta.push("example", case.id)
        .push("alpha", case.spec.alpha)
        .push("kappa", case.spec.kappa)
        .push("p", disc.p)
        .push("T", case.spec.horizon)
        .push("basis", mode_name(disc.mode))
        .push("vary", if vary == Vary::M { "M" } else { "N" });
    let order_linf = sweep_order(&points, vary, false)?;
    let order_l2 = sweep_order(&points, vary, true)?;
    let fmt = |o: Option<f64>| o.map(|v| format!("{v:.4}")).unwrap_or_default();
    meta.push("order_linf", fmt(order_linf)).push("order_l2", fmt(order_l2));

    let pairwise = if points.len() >= 2 {
        let pairs: Vec<(f64, f64)> = points.iter().map(|p| (step_of(p, vary), p.linf)).collect();
        pairwise_orders(&pairs)?
    } else {
        Vec::new()
    };
    let mut w = csv_writer();
    w.write_record(["M", "N", "h", "tau", "l2", "linf", "log_step", "log_linf", "order_linf"])?;
    for (i, p) in points.iter().enumerate() {
        let order = if i == 0 { String::new() } else { format!("{:.4}", pairwise[i - 1]) };
        w.write_record([
            p.m.to_string(),
            p.n.to_string(),
            sci(p.h),
            sci(p.tau),
            sci(p.l2),
            sci(p.linf),
            sci(step_of(p, vary).ln()),
            sci(p.linf.ln()),
            order,
        ])?;
    }
    Ok(Report {
        csv: meta.finish(into_body(w)?),
        status: Status::Ok,
        notes: vec![format!("order (linf) {}", fmt(order_linf))],
    })
}

pub const GRID_ALPHAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const GRID_TAUS: [f64; 2] = [1.0, 1e-3];
pub const GRID_HS: [f64; 2] = [0.1, 1e-3];
pub const GRID_TENSIONS: [f64; 3] = [0.01, 1.0, 5.0];
pub const GRID_MODES: usize = 16;

/// One growth-factor evaluation of the default grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthSample {
    pub alpha: f64,
    pub tau: f64,
    pub h: f64,
    pub p: f64,
    pub upsilon_h: f64,
    pub g: f64,
}

pub fn growth_grid() -> CliResult<Vec<GrowthSample>> {
    let mut out = Vec::new();
    for &alpha in &GRID_ALPHAS {
        for &tau in &GRID_TAUS {
            for &h in &GRID_HS {
                for &p in &GRID_TENSIONS {
                    // T = 1 with M = 1/h and N = 1/tau steps.
                    let spec = ProblemSpec::new(alpha, 1.0, (0.0, 1.0), 1.0);
                    let disc = Discretization::new(&spec, (1.0 / h).round() as usize, (1.0 / tau).round() as usize, p)?;
                    for k in 0..=GRID_MODES {
                        let upsilon_h = std::f64::consts::PI * k as f64 / GRID_MODES as f64;
                        let g = growth_factor(upsilon_h / disc.h, &disc, &spec)?;
                        out.push(GrowthSample {
                            alpha,
                            tau,
                            h,
                            p,
                            upsilon_h,
                            g,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

pub const DECAY_ALPHAS: [f64; 3] = [0.1, 0.5, 0.9];
pub const DECAY_M: usize = 32;
pub const DECAY_N: usize = 200;

pub fn cmd_stability(trials: usize, seed: u64) -> CliResult<Report> {
    let samples = growth_grid()?;
    let decays: Vec<CliResult<(f64, f64)>> = DECAY_ALPHAS
        .par_iter()
        .map(|&alpha| {
            let spec = ProblemSpec::new(alpha, 1.0, (0.0, 1.0), 1.0);
            let disc = Discretization::new(&spec, DECAY_M, DECAY_N, 1.0)?;
            let r = perturbation_decay_check(&spec, &disc, trials, seed)?;
            Ok((alpha, r.max_ratio()))
        })
        .collect();
    let mut meta = Meta::new("stability");
    meta.push("grid", "default")
        .push("seed", seed)
        .push("trials", trials)
        .push("kappa", 1.0)
        .push("decay_M", DECAY_M)
        .push("decay_N", DECAY_N);
    let mut w = csv_writer();
    w.write_record(["kind", "alpha", "tau", "h", "p", "upsilon_h", "value"])?;
    let mut status = Status::Ok;
    let mut notes = Vec::new();
    for s in &samples {
        if !(s.g > 0.0 && s.g <= GROWTH_LIMIT) {
            status = Status::Unstable;
            notes.push(format!("G = {} at alpha={} tau={} h={} p={} vh={}", s.g, s.alpha, s.tau, s.h, s.p, s.upsilon_h));
        }
        w.write_record([
            "growth".to_string(),
            s.alpha.to_string(),
            sci(s.tau),
            sci(s.h),
            s.p.to_string(),
            sci(s.upsilon_h),
            sci(s.g),
        ])?;
    }
    for d in decays {
        let (alpha, ratio) = d?;
        w.write_record([
            "decay".to_string(),
            alpha.to_string(),
            sci(1.0 / DECAY_N as f64),
            sci(1.0 / DECAY_M as f64),
            "1".to_string(),
            String::new(),
            sci(ratio),
        ])?;
    }
    let max_g = samples.iter().map(|s| s.g).fold(0.0, f64::max);
    notes.push(format!("max growth factor {}", sci(max_g)));
    Ok(Report {
        csv: meta.finish(into_body(w)?),
        status,
        notes,
    })
}

pub fn cmd_flux(args: &FluxArgs) -> CliResult<Report> {
    check_alpha(args.alpha)?;
    let cfg = RunConfig {
        example: args.example,
        alpha: Some(args.alpha),
        m: args.m,
        n: args.n,
        p: None,
        horizon: None,
        cubic_limit: false,
        out: None,
    };
    let (case, disc) = configure(&cfg)?;
    let hist = solve(&case.spec, &disc)?;
    let sign = match args.sign {
        SignArg::Fick => FluxSign::Fick,
        SignArg::Plain => FluxSign::Plain,
    };
    let flux = heat_flux_at_left(&hist, &case.spec, sign)?;
    let mut meta = Meta::new("flux");
    meta.push("example", case.id)
        .disc(&case.spec, &disc)
        .push("sign", if sign == FluxSign::Fick { "-kappa*u_x" } else { "+kappa*u_x" });
    let mut w = csv_writer();
    w.write_record(["t", "q"])?;
    for (t, q) in flux {
        w.write_record([sci(t), sci(q)])?;
    }
    Ok(Report {
        csv: meta.finish(into_body(w)?),
        status: Status::Ok,
        notes: Vec::new(),
    })
}

/// `u_N(x, t)` on a uniform grid of `points` positions; handy for profile plots.
pub fn profile(hist: &CoefficientHistory, level: usize, points: usize) -> CliResult<Vec<(f64, f64)>> {
    let disc = hist.disc();
    let b = disc.a + disc.m as f64 * disc.h;
    (0..points)
        .map(|k| {
            let x = disc.a + (b - disc.a) * k as f64 / (points - 1).max(1) as f64;
            Ok((x, reconstruct(hist, level, x)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("fracspline").chain(args.iter().copied()))
    }

    #[test]
    fn parses_commands() {
        assert!(parse(&["table", "--id", "2"]).is_ok());
        assert!(parse(&["table", "--id", "5"]).is_err());
        assert!(parse(&["run", "--example", "1", "--M", "16", "--N", "20"]).is_ok());
        assert!(parse(&["sweep", "--example", "4", "--vary", "M", "--values", "8,16"]).is_ok());
        assert!(parse(&["sweep", "--example", "4", "--vary", "Q", "--values", "8"]).is_err());
        assert!(parse(&["flux", "--sign", "plain"]).is_ok());
        assert!(parse(&["flux", "--example", "3"]).is_err());
        assert!(parse(&["stability"]).is_ok());
    }

    #[test]
    fn sci_has_six_digits() {
        assert_eq!(sci(1.3817e-5), "1.38170e-5");
        assert_eq!(sci(1.0), "1.00000e0");
    }

    #[test]
    fn run_writes_metadata_and_nodes() {
        let cfg = RunConfig {
            example: 1,
            alpha: Some(0.5),
            m: Some(8),
            n: Some(10),
            p: None,
            horizon: None,
            cubic_limit: false,
            out: None,
        };
        let r = cmd_run(&cfg).unwrap();
        assert!(r.csv.starts_with("# command=run\n# version="));
        assert!(r.csv.contains("# M=8\n") && r.csv.contains("# N=10\n") && r.csv.contains("# tau=1.00000e-1\n"));
        let data: Vec<&str> = r.csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data[0], "x,u_numeric,u_exact,abs_error");
        assert_eq!(data.len(), 10);
    }

    #[test]
    fn usage_errors_map_to_exit_one() {
        let cfg = RunConfig {
            example: 1,
            alpha: Some(1.5),
            m: None,
            n: None,
            p: None,
            horizon: None,
            cubic_limit: false,
            out: None,
        };
        assert_eq!(cmd_run(&cfg).unwrap_err().exit_code(), 1);
        let cfg = RunConfig { alpha: None, m: Some(1), ..cfg };
        assert_eq!(cmd_run(&cfg).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn single_point_sweep_is_a_usage_error() {
        let cfg = RunConfig {
            example: 4,
            alpha: None,
            m: Some(8),
            n: Some(20),
            p: None,
            horizon: None,
            cubic_limit: false,
            out: None,
        };
        assert_eq!(cmd_sweep(&cfg, Vary::M, &[8]).unwrap_err().exit_code(), 1);
        let r = cmd_sweep(&cfg, Vary::M, &[8, 16]).unwrap();
        let first = r.csv.lines().find(|l| l.starts_with("8,")).unwrap();
        assert!(first.ends_with(','));
    }

    #[test]
    fn growth_grid_includes_zero_mode() {
        let g = growth_grid().unwrap();
        assert_eq!(g.len(), 9 * 2 * 2 * 3 * (GRID_MODES + 1));
        assert!(g.iter().filter(|s| s.upsilon_h == 0.0).all(|s| s.g == 1.0));
    }
}
