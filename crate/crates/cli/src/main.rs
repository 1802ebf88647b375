use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gradstep_cli::config::{parse_config, print_config, Experiment};
use gradstep_cli::profile::{performance_profile, write_profile, Metric};
use gradstep_cli::{experiment, CliError, Result};

/// Gradient-method experiments on quadratic and general test problems.
///
/// Worker threads default to the number of cores; set GRADSTEP_WORKERS to
/// override.
#[derive(Parser)]
#[command(name = "gradstep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Three-dimensional termination schedules on diag(1, κ/2, κ).
    Verify3d(RunArgs),
    /// Quadratic benchmark over generated problem sets.
    Quadbench(RunArgs),
    /// General unconstrained benchmark over the built-in function suite.
    Uncbench(RunArgs),
    /// Performance profile from a raw run table.
    Profile(ProfileArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key=value configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Problem sets, comma separated.
    #[arg(long)]
    set: Option<String>,
    /// Dimensions, comma separated.
    #[arg(long)]
    n: Option<String>,
    /// Condition numbers, comma separated.
    #[arg(long)]
    kappa: Option<String>,
    /// Relative (quadratics) or absolute infinity-norm (general) gradient
    /// tolerances, comma separated.
    #[arg(long)]
    eps: Option<String>,
    /// Number of seeds per cell.
    #[arg(long)]
    seeds: Option<u64>,
    /// First seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Methods, comma separated (quadbench: bb,new,bbq; uncbench: alg1,alg1-bbq,bb).
    #[arg(long)]
    methods: Option<String>,
    /// Initial switching threshold τ₁.
    #[arg(long)]
    tau1: Option<f64>,
    /// Threshold update factor γ.
    #[arg(long)]
    gamma: Option<f64>,
    /// Named (τ₁, γ) preset, e.g. table3-set4-new.
    #[arg(long)]
    preset: Option<String>,
    /// Iteration cap per run.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Output directory for runs.csv, aggregate.csv and trace.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-iteration traces.
    #[arg(long)]
    trace: bool,
    /// Write 0 for wall times so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args)]
struct ProfileArgs {
    /// Raw run table (runs.csv).
    #[arg(long)]
    input: PathBuf,
    /// iter or time.
    #[arg(long, default_value = "iter")]
    metric: String,
    #[arg(long, default_value = "profile.csv")]
    out: PathBuf,
}

impl RunArgs {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let mut v = Vec::new();
        let mut add = |k: &'static str, val: Option<String>| {
            if let Some(val) = val {
                v.push((k, val));
            }
        };
        add("set", self.set.clone());
        add("n", self.n.clone());
        add("kappa", self.kappa.clone());
        add("eps", self.eps.clone());
        add("seeds", self.seeds.map(|s| s.to_string()));
        add("seed", self.seed.map(|s| s.to_string()));
        add("methods", self.methods.clone());
        add("preset", self.preset.clone());
        add("tau1", self.tau1.map(|s| s.to_string()));
        add("gamma", self.gamma.map(|s| s.to_string()));
        add("max_iter", self.max_iter.map(|s| s.to_string()));
        add("out", self.out.as_ref().map(|p| p.display().to_string()));
        if self.trace {
            add("trace", Some("true".into()));
        }
        if self.no_timing {
            add("timing", Some("false".into()));
        }
        v
    }
}

fn run_experiment(kind: Experiment, args: &RunArgs) -> Result<()> {
    let text = match &args.config {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|e| CliError::Spec(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let spec = parse_config(kind, text.as_deref(), &args.overrides())?;
    if args.print_config {
        print!("{}", print_config(&spec));
        return Ok(());
    }
    let out = experiment::run(&spec)?;
    for path in experiment::write_outputs(&spec, &out)? {
        eprintln!("wrote {}", path.display());
    }
    let unsolved = out.rows.iter().filter(|r| !r.solved()).count();
    if unsolved > 0 {
        eprintln!("{unsolved} of {} runs did not converge", out.rows.len());
    }
    Ok(())
}

fn run_profile(args: &ProfileArgs) -> Result<()> {
    let metric = Metric::parse(&args.metric)?;
    let rows = experiment::read_runs(&args.input)?;
    let curves = performance_profile(&rows, metric)?;
    write_profile(&args.out, &curves)?;
    eprintln!("wrote {}", args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify3d(a) => run_experiment(Experiment::Verify3d, a),
        Command::Quadbench(a) => run_experiment(Experiment::QuadBench, a),
        Command::Uncbench(a) => run_experiment(Experiment::UncBench, a),
        Command::Profile(a) => run_profile(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gradstep: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
