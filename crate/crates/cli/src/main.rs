//! Command line front end: renders the library's analytic curves,
//! reference tables, compound-walk distributions, and Monte Carlo runs
//! as CSV on stdout or into files.
//!
//! Exit codes: 0 success, 2 bad configuration, 3 numeric failure,
//! 1 output I/O failure. All CSV starts with a header line; metadata
//! rides on '#' comment lines so column parsers can skip it.

use clap::{Parser, Subcommand, ValueEnum};
use renewal_core::compound::{CompoundSnapshot, GaussianJumpLaw};
use renewal_core::processes::{tail_constants, MittagLefflerLaw, PoissonLaw, WrightLaw};
use renewal_core::renewal::WaitingTimeLaw;
use renewal_core::sampling::{ks_distance, sample_waits, simulate_ctrw};
use renewal_core::tfde::TfdeSolution;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "renewal",
    version,
    about = "Renewal processes with heavy-tailed waits: curves, tables, compound walks, simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Survival and waiting-density curves over a time grid
    Curves(CurvesArgs),
    /// Fixed-time comparison tables of all laws (survival and density)
    Tables(TablesArgs),
    /// Compound-walk cdf at chosen times, with its diffusion limit
    Compound(CompoundArgs),
    /// Monte Carlo walkers: event counts, positions, fit statistics
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProcessKind {
    /// Exponential waits (rate --lambda)
    Poisson,
    /// Mittag-Leffler waits of order --beta
    Ml,
    /// One-sided stable waits of order --beta
    Wright,
}

impl ProcessKind {
    fn name(self) -> &'static str {
        match self {
            ProcessKind::Poisson => "poisson",
            ProcessKind::Ml => "ml",
            ProcessKind::Wright => "wright",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GridScale {
    Lin,
    Log,
}

#[derive(clap::Args)]
struct CurvesArgs {
    /// Waiting-time law
    #[arg(long, value_enum)]
    process: ProcessKind,
    /// Order parameter(s) in (0, 1], comma separated; fractional laws
    /// default to 0.25,0.5,0.75,1
    #[arg(long, value_delimiter = ',')]
    beta: Vec<f64>,
    /// Event rate, poisson only (default 1)
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 1e-2)]
    t_min: f64,
    #[arg(long, default_value_t = 1e2)]
    t_max: f64,
    #[arg(long, default_value_t = 81)]
    t_count: usize,
    #[arg(long, value_enum, default_value_t = GridScale::Log)]
    t_scale: GridScale,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TablesArgs {
    /// Output stem; writes <stem>.survival.csv and <stem>.density.csv
    #[arg(long)]
    out: Option<PathBuf>,
    /// Full f64 precision instead of 3 significant figures
    #[arg(long)]
    full: bool,
}

#[derive(clap::Args)]
struct CompoundArgs {
    /// Waiting-time law
    #[arg(long, value_enum)]
    process: ProcessKind,
    /// Order parameter in (0, 1] (default 0.5)
    #[arg(long)]
    beta: Option<f64>,
    /// Event rate, poisson only (default 1)
    #[arg(long)]
    lambda: Option<f64>,
    /// Observation times; default grid is exactly {1, 10}
    #[arg(long, default_value_t = 1.0)]
    t_min: f64,
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
    #[arg(long, default_value_t = 2)]
    t_count: usize,
    #[arg(long, value_enum, default_value_t = GridScale::Lin)]
    t_scale: GridScale,
    #[arg(long, default_value_t = -5.0)]
    x_min: f64,
    #[arg(long, default_value_t = 5.0)]
    x_max: f64,
    #[arg(long, default_value_t = 41)]
    x_count: usize,
    /// Counting-series truncation: unaccounted tail mass per time
    #[arg(long, default_value_t = 1e-10)]
    tail_tol: f64,
    /// Refuse if the counting series needs more terms than this
    #[arg(long, default_value_t = 10_000)]
    k_max: usize,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Waiting-time law
    #[arg(long, value_enum)]
    process: ProcessKind,
    /// Order parameter in (0, 1] (default 0.5)
    #[arg(long)]
    beta: Option<f64>,
    /// Event rate, poisson only (default 1)
    #[arg(long)]
    lambda: Option<f64>,
    /// Simulation horizon
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
    #[arg(long, default_value_t = 10_000)]
    walkers: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Numeric(String),
    Eval(renewal_core::Error),
    Io(std::io::Error),
}

impl From<renewal_core::Error> for Failure {
    fn from(e: renewal_core::Error) -> Self {
        Failure::Eval(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curves(args) => cmd_curves(args),
        Command::Tables(args) => cmd_tables(args),
        Command::Compound(args) => cmd_compound(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Eval(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// One concrete waiting-time law chosen on the command line.
enum Law {
    Poisson(PoissonLaw),
    Ml(MittagLefflerLaw),
    Wright(WrightLaw),
}

impl Law {
    fn survival(&self, t: f64) -> renewal_core::Result<f64> {
        match self {
            Law::Poisson(l) => l.survival(t),
            Law::Ml(l) => l.survival(t),
            Law::Wright(l) => l.survival(t),
        }
    }

    fn density(&self, t: f64) -> renewal_core::Result<f64> {
        match self {
            Law::Poisson(l) => l.density(t),
            Law::Ml(l) => l.density(t),
            Law::Wright(l) => l.density(t),
        }
    }

    fn cdf(&self, t: f64) -> renewal_core::Result<f64> {
        match self {
            Law::Poisson(l) => l.cdf(t),
            Law::Ml(l) => l.cdf(t),
            Law::Wright(l) => l.cdf(t),
        }
    }

    fn renewal_function(&self, t: f64) -> renewal_core::Result<f64> {
        match self {
            Law::Poisson(l) => l.renewal_function(t),
            Law::Ml(l) => l.renewal_function(t),
            Law::Wright(l) => l.renewal_function(t),
        }
    }

    fn label(&self) -> String {
        match self {
            Law::Poisson(l) => format!("poisson lambda={}", l.lambda()),
            Law::Ml(l) => format!("ml beta={}", l.beta()),
            Law::Wright(l) => format!("wright beta={}", l.beta()),
        }
    }
}

fn check_order(beta: f64) -> Result<f64, Failure> {
    if beta.is_finite() && beta > 0.0 && beta <= 1.0 {
        Ok(beta)
    } else {
        Err(usage(format!("--beta must lie in (0, 1], got {beta}")))
    }
}

fn check_rate(lambda: f64) -> Result<f64, Failure> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(lambda)
    } else {
        Err(usage(format!("--lambda must be positive and finite, got {lambda}")))
    }
}

/// Resolve one law from the flag triple, rejecting flags that do not
/// belong to the chosen process.
fn make_law(
    process: ProcessKind,
    beta: Option<f64>,
    lambda: Option<f64>,
) -> Result<Law, Failure> {
    match process {
        ProcessKind::Poisson => {
            if beta.is_some() {
                return Err(usage("--beta does not apply to the poisson process"));
            }
            let lambda = check_rate(lambda.unwrap_or(1.0))?;
            Ok(Law::Poisson(PoissonLaw::new(lambda).map_err(Failure::Eval)?))
        }
        ProcessKind::Ml | ProcessKind::Wright => {
            if lambda.is_some() {
                return Err(usage("--lambda applies only to the poisson process"));
            }
            let beta = check_order(beta.unwrap_or(0.5))?;
            Ok(match process {
                ProcessKind::Ml => Law::Ml(MittagLefflerLaw::new(beta).map_err(Failure::Eval)?),
                _ => Law::Wright(WrightLaw::new(beta).map_err(Failure::Eval)?),
            })
        }
    }
}

/// Evaluation grid with exact endpoints; log spacing needs min > 0.
fn build_grid(min: f64, max: f64, count: usize, scale: GridScale) -> Result<Vec<f64>, Failure> {
    if !min.is_finite() || !max.is_finite() {
        return Err(usage(format!("grid bounds must be finite, got [{min}, {max}]")));
    }
    if count < 2 {
        return Err(usage(format!("grid needs at least 2 points, got {count}")));
    }
    if !(min < max) {
        return Err(usage(format!("grid needs min < max, got [{min}, {max}]")));
    }
    if matches!(scale, GridScale::Log) && min <= 0.0 {
        return Err(usage(format!("log grid needs min > 0, got {min}")));
    }
    let n = count - 1;
    let mut points: Vec<f64> = (0..=n)
        .map(|i| {
            let f = i as f64 / n as f64;
            match scale {
                GridScale::Lin => min + f * (max - min),
                GridScale::Log => (min.ln() + f * (max.ln() - min.ln())).exp(),
            }
        })
        .collect();
    points[0] = min;
    points[n] = max;
    Ok(points)
}

/// Shortest decimal that round-trips the value.
fn full(v: f64) -> String {
    format!("{v}")
}

/// 3 significant figures, scientific.
fn sig3(v: f64) -> String {
    format!("{v:.2e}")
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn cmd_curves(args: CurvesArgs) -> Result<(), Failure> {
    let grid = build_grid(args.t_min, args.t_max, args.t_count, args.t_scale)?;
    let laws: Vec<Law> = match args.process {
        ProcessKind::Poisson => {
            if !args.beta.is_empty() {
                return Err(usage("--beta does not apply to the poisson process"));
            }
            vec![make_law(args.process, None, args.lambda)?]
        }
        _ => {
            let betas = if args.beta.is_empty() {
                vec![0.25, 0.5, 0.75, 1.0]
            } else {
                args.beta.clone()
            };
            betas
                .into_iter()
                .map(|b| make_law(args.process, Some(b), args.lambda))
                .collect::<Result<_, _>>()?
        }
    };

    let mut csv = String::from("process,beta,t,survival,density\n");
    if let Law::Poisson(l) = &laws[0] {
        let _ = writeln!(csv, "# lambda: {}", full(l.lambda()));
    }
    for law in &laws {
        if let Law::Wright(l) = law {
            if l.beta() == 1.0 {
                let _ = writeln!(
                    csv,
                    "# atom: wright beta=1 waits are the unit clock; density mass 1 at t=1"
                );
            }
        }
    }
    for law in &laws {
        let (name, beta_cell) = match law {
            Law::Poisson(_) => (ProcessKind::Poisson.name(), String::new()),
            Law::Ml(l) => (ProcessKind::Ml.name(), full(l.beta())),
            Law::Wright(l) => (ProcessKind::Wright.name(), full(l.beta())),
        };
        for &t in &grid {
            let s = law.survival(t)?;
            let d = match law.density(t) {
                Ok(v) => full(v),
                Err(renewal_core::Error::AtomDensity { at }) => format!("ATOM@{}", full(at)),
                Err(e) => return Err(e.into()),
            };
            let _ = writeln!(csv, "{name},{beta_cell},{},{},{d}", full(t), full(s));
        }
    }
    emit(&args.out, &csv)
}

const TABLE_TIMES: [f64; 9] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0];

fn cmd_tables(args: TablesArgs) -> Result<(), Failure> {
    let fmt = if args.full { full } else { sig3 };
    let tail = tail_constants(0.5)?;
    let ml = MittagLefflerLaw::new(0.5)?;
    let wright = WrightLaw::new(0.5)?;
    let poisson = PoissonLaw::new(1.0)?;

    let mut survival = String::from("t,power_law,mittag_leffler,wright,poisson\n");
    let mut density = survival.clone();
    for &t in &TABLE_TIMES {
        let _ = writeln!(
            survival,
            "{},{},{},{},{}",
            full(t),
            fmt(tail.survival * t.powf(-0.5)),
            fmt(ml.survival(t)?),
            fmt(wright.survival(t)?),
            fmt(poisson.survival(t)?),
        );
        let _ = writeln!(
            density,
            "{},{},{},{},{}",
            full(t),
            fmt(tail.density * t.powf(-1.5)),
            fmt(ml.density(t)?),
            fmt(wright.density(t)?),
            fmt(poisson.density(t)?),
        );
    }

    match &args.out {
        Some(stem) => {
            std::fs::write(stem.with_extension("survival.csv"), &survival)?;
            std::fs::write(stem.with_extension("density.csv"), &density)?;
            Ok(())
        }
        None => {
            let combined = format!("# table: survival\n{survival}# table: density\n{density}");
            emit(&None, &combined)
        }
    }
}

fn cmd_compound(args: CompoundArgs) -> Result<(), Failure> {
    let law = make_law(args.process, args.beta, args.lambda)?;
    let times = build_grid(args.t_min, args.t_max, args.t_count, args.t_scale)?;
    let xs = build_grid(args.x_min, args.x_max, args.x_count, GridScale::Lin)?;
    if !(args.tail_tol > 0.0 && args.tail_tol < 1.0) {
        return Err(usage(format!(
            "--tail-tol must lie in (0, 1), got {}",
            args.tail_tol
        )));
    }
    if args.k_max == 0 {
        return Err(usage("--k-max must be at least 1"));
    }
    for &t in &times {
        if t <= 0.0 {
            return Err(usage(format!("compound observation times must be > 0, got {t}")));
        }
    }

    // The diffusion limit shares the law's order; exponential waits
    // converge to the classical kernel.
    let order = match &law {
        Law::Poisson(_) => 1.0,
        Law::Ml(l) => l.beta(),
        Law::Wright(l) => l.beta(),
    };
    let limit = TfdeSolution::new(order)?;
    let jumps = GaussianJumpLaw;

    let mut csv = String::from("t,x,walk_cdf,tfde_cdf\n");
    let _ = writeln!(csv, "# process: {}", law.label());
    let _ = writeln!(csv, "# jumps: gaussian, variance 2");

    let mut blocks = Vec::new();
    for &t in &times {
        let snap = match &law {
            Law::Poisson(l) => CompoundSnapshot::new(l, &jumps, t, args.tail_tol)?,
            Law::Ml(l) => CompoundSnapshot::new(l, &jumps, t, args.tail_tol)?,
            Law::Wright(l) => CompoundSnapshot::new(l, &jumps, t, args.tail_tol)?,
        };
        let k_used = snap.series().k_max();
        if k_used > args.k_max {
            return Err(Failure::Numeric(format!(
                "counting series needed {k_used} terms at t={t}, over the --k-max limit {}",
                args.k_max
            )));
        }
        let _ = writeln!(csv, "# atom t={}: {}", full(t), full(snap.atom()));
        let _ = writeln!(csv, "# terms t={}: {k_used}", full(t));
        let mut rows = String::new();
        for &x in &xs {
            let walk = snap.cdf(x);
            let diff = limit.cdf(x, t)?;
            let _ = writeln!(rows, "{},{},{},{}", full(t), full(x), full(walk), full(diff));
        }
        blocks.push(rows);
    }
    for b in blocks {
        csv.push_str(&b);
    }
    emit(&args.out, &csv)
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let law = make_law(args.process, args.beta, args.lambda)?;
    if !(args.t_max.is_finite() && args.t_max > 0.0) {
        return Err(usage(format!(
            "--t-max must be positive and finite, got {}",
            args.t_max
        )));
    }
    if args.walkers == 0 {
        return Err(usage("--walkers must be at least 1"));
    }
    let t = args.t_max;
    let jumps = GaussianJumpLaw;
    let batch = match &law {
        Law::Poisson(l) => simulate_ctrw(l, &jumps, t, args.walkers, args.seed)?,
        Law::Ml(l) => simulate_ctrw(l, &jumps, t, args.walkers, args.seed)?,
        Law::Wright(l) => simulate_ctrw(l, &jumps, t, args.walkers, args.seed)?,
    };
    let waits = match &law {
        Law::Poisson(l) => sample_waits(l, args.walkers, args.seed),
        Law::Ml(l) => sample_waits(l, args.walkers, args.seed),
        Law::Wright(l) => sample_waits(l, args.walkers, args.seed),
    };
    if waits.iter().any(|w| !w.is_finite()) {
        return Err(Failure::Numeric("sampled a non-finite waiting time".into()));
    }
    let ks = ks_distance(&waits, |w| law.cdf(w).unwrap_or(f64::NAN))?;
    if !ks.is_finite() {
        return Err(Failure::Numeric("waiting cdf not evaluable on samples".into()));
    }

    let mut csv = String::from("walker,count,position\n");
    let _ = writeln!(csv, "# process: {}", law.label());
    let _ = writeln!(csv, "# jumps: gaussian, variance 2");
    let _ = writeln!(csv, "# t: {}", full(t));
    let _ = writeln!(csv, "# walkers: {}", args.walkers);
    let _ = writeln!(csv, "# seed: {}", args.seed);
    for (i, (n, x)) in batch.counts.iter().zip(&batch.positions).enumerate() {
        let _ = writeln!(csv, "{i},{n},{}", full(*x));
    }
    let _ = writeln!(csv, "# mean_count: {}", full(batch.mean_count()));
    let _ = writeln!(csv, "# renewal_function: {}", full(law.renewal_function(t)?));
    let _ = writeln!(csv, "# ks_waits: {}", full(ks));
    let _ = writeln!(
        csv,
        "# ks_critical_1pct: {}",
        full(1.63 / (args.walkers as f64).sqrt())
    );
    emit(&args.out, &csv)
}
