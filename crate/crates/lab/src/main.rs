use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sigmalab::config::{config_hash, load_run_config, load_sweep_config};
use sigmalab::linear::{linear_decay, LinearDecayRequest, TimeGrid, DECAY_COLUMNS};
use sigmalab::output::{create, series_header, series_rows, write_csv, write_json};
use sigmalab::simulate::simulate;
use sigmalab::sweep::{run_sweep, threads_from_env, write_sweep_csv};
use sigmalab::testfn_check::testfn_check;
use sigmalab::{LabError, Result};
use sigmalab_core::oracle::NormKind;
use sigmalab_core::params::{classify_regime, SystemParams};
use sigmalab_core::profile::RadialProfile;

#[derive(Parser)]
#[command(name = "sigmalab", version, about = "Weakly coupled damped σ-evolution systems: regimes, decay and blow-up")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify (n, σ₁, σ₂, p, q) and print the condition report as JSON.
    Classify(ClassifyArgs),
    /// Tabulate linear norms from the frequency-space oracle.
    LinearDecay(LinearArgs),
    /// Run the spectral solver from a JSON config.
    Simulate(SimulateArgs),
    /// Run a (p, q) phase-diagram sweep from a JSON config.
    Sweep(SweepArgs),
    /// Check the test-function identities for (γ, r, R, n).
    TestfnCheck(TestfnArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    sigma1: f64,
    #[arg(long)]
    sigma2: f64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
}

#[derive(Args)]
struct LinearArgs {
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    n: u32,
    /// l2, dsigma or dt.
    #[arg(long, value_parser = parse_kind)]
    kind: NormKind,
    /// log:lo:hi:count or lin:lo:hi:count.
    #[arg(long = "t")]
    t: TimeGrid,
    #[arg(long, default_value_t = 1.0)]
    u0_amplitude: f64,
    #[arg(long, default_value_t = 1.0)]
    u0_width: f64,
    #[arg(long, default_value_t = 0.0)]
    u1_amplitude: f64,
    #[arg(long, default_value_t = 1.0)]
    u1_width: f64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    config: PathBuf,
    /// Norm-series CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report with fits and events; stderr when absent.
    #[arg(long)]
    events: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    config: PathBuf,
    /// Overrides the config's output path; stdout when neither is set.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TestfnArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    r: f64,
    #[arg(long = "R")]
    big_r: f64,
    #[arg(long)]
    n: u32,
}

fn parse_kind(s: &str) -> Result<NormKind, String> {
    NormKind::parse(s).ok_or_else(|| format!("unknown norm kind {s:?}; expected l2, dsigma or dt"))
}

fn to_out(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            f(&mut w)?;
            w.flush().map_err(sigmalab::output::io(&p.display().to_string()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    to_out(None, |w| writeln!(w, "{text}").map_err(sigmalab::output::io("<stdout>")))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify(a) => {
            let params = SystemParams::new(a.n, a.sigma1, a.sigma2, a.p, a.q, a.eps)?;
            print_json(&classify_regime(&params))
        }
        Command::LinearDecay(a) => {
            let req = LinearDecayRequest {
                sigma: a.sigma,
                n: a.n,
                kind: a.kind,
                grid: a.t,
                u0: RadialProfile::gaussian(a.u0_amplitude, a.u0_width),
                u1: RadialProfile::gaussian(a.u1_amplitude, a.u1_width),
            };
            let (rows, summary) = linear_decay(&req)?;
            let cells: Vec<Vec<String>> = rows.iter().map(|r| r.cells(&req)).collect();
            to_out(a.out.as_deref(), |w| write_csv(w, &config_hash(&req), &DECAY_COLUMNS, &cells))?;
            if let Some(msg) = &summary.warning {
                log::warn!("{msg}");
            }
            eprintln!("{}", serde_json::to_string(&summary)?);
            Ok(())
        }
        Command::Simulate(a) => {
            let cfg = load_run_config(&a.config)?;
            let report = simulate(&cfg)?;
            let rows = series_rows(&report.result.series);
            to_out(a.out.as_deref(), |w| write_csv(w, &report.config_hash, &series_header(), &rows))?;
            match &a.events {
                Some(p) => write_json(p, &report)?,
                None => eprintln!("{}", serde_json::to_string(&(&report.regime, &report.fits, &report.events))?),
            }
            Ok(())
        }
        Command::Sweep(a) => {
            let cfg = load_sweep_config(&a.config)?;
            let cells = run_sweep(&cfg, threads_from_env())?;
            let out = a.out.or_else(|| cfg.output.clone());
            to_out(out.as_deref(), |w| write_sweep_csv(w, &cfg, &cells))
        }
        Command::TestfnCheck(a) => print_json(&testfn_check(a.gamma, a.r, a.big_r, a.n)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 1 } else { 2 })
        }
    }
}

fn broken_pipe(e: &LabError) -> bool {
    let io = match e {
        LabError::Io { source, .. } => Some(source),
        LabError::Csv(c) => match c.kind() {
            csv::ErrorKind::Io(source) => Some(source),
            _ => None,
        },
        _ => None,
    };
    io.is_some_and(|s| s.kind() == std::io::ErrorKind::BrokenPipe)
}
