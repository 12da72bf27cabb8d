//! `fracstep solve|sweep|verify`: single solves, refinement sweeps and the
//! property suite for the space-time Galerkin scheme.

mod commands;
mod settings;

use clap::{Args, Parser, Subcommand};
use settings::Settings;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file or output path.
    Config(String),
    /// The library rejected the problem, plan or budget.
    Core(fracstep::Error),
    /// A property of the verification suite failed.
    Property(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(_) => 3,
            CliError::Property(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Property(m) => write!(f, "{m}"),
        }
    }
}

impl From<fracstep::Error> for CliError {
    fn from(e: fracstep::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "fracstep", version, about = "Space-time Galerkin solver for time-fractional diffusion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one problem and write the final-time nodal values.
    Solve(SolveArgs),
    /// Run a refinement sweep and write the convergence table.
    Sweep(SweepArgs),
    /// Run the seeded property suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Flat key=value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// exp1, exp2, exp3, manufactured or spectral.
    #[arg(long)]
    experiment: Option<String>,
    /// Fractional order in (0, 1).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Spatial exponent of exp1 data.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Initial-value scale of exp2.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Temporal singularity t^-sigma of the exp3 source.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    /// Sine mode of the spectral problem.
    #[arg(long)]
    mode: Option<usize>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    problem: ProblemArgs,
    /// Number of spatial cells.
    #[arg(long)]
    nx: Option<usize>,
    /// Number of time steps.
    #[arg(long)]
    nt: Option<usize>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    problem: ProblemArgs,
    /// Registered plan supplying defaults for every other setting.
    #[arg(long)]
    plan: Option<String>,
    /// space or time.
    #[arg(long)]
    axis: Option<String>,
    /// Cells of the coarsest level.
    #[arg(long)]
    nx: Option<usize>,
    /// Steps of the coarsest level.
    #[arg(long)]
    nt: Option<usize>,
    /// Number of levels, each refining the previous one once along the axis.
    #[arg(long)]
    levels: Option<usize>,
    /// Reference cells.
    #[arg(long = "ref-nx")]
    ref_nx: Option<usize>,
    /// Reference steps.
    #[arg(long = "ref-nt")]
    ref_nt: Option<usize>,
    /// Cap on estimated multiply-adds.
    #[arg(long)]
    budget: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    seed: Option<u64>,
    /// Relative perturbation of one Γ coefficient, for mutation testing.
    #[arg(long = "tamper-gamma", hide = true, allow_hyphen_values = true)]
    tamper_gamma: Option<f64>,
}

fn settings(common: &Common) -> Result<Settings, CliError> {
    let mut s = match &common.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    s.set("output", common.output.as_ref().map(|p| p.display()));
    s.set("format", common.format.as_ref());
    Ok(s)
}

fn apply_problem(s: &mut Settings, p: &ProblemArgs) {
    s.set("experiment", p.experiment.as_ref());
    s.set("alpha", p.alpha);
    s.set("r", p.r);
    s.set("c", p.c);
    s.set("sigma", p.sigma);
    s.set("mode", p.mode);
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(a) => {
            let mut s = settings(&a.common)?;
            apply_problem(&mut s, &a.problem);
            s.set("nx", a.nx);
            s.set("nt", a.nt);
            commands::solve(&s)
        }
        Command::Sweep(a) => {
            let mut s = settings(&a.common)?;
            apply_problem(&mut s, &a.problem);
            s.set("plan", a.plan.as_ref());
            s.set("axis", a.axis.as_ref());
            s.set("nx", a.nx);
            s.set("nt", a.nt);
            s.set("levels", a.levels);
            s.set("ref-nx", a.ref_nx);
            s.set("ref-nt", a.ref_nt);
            s.set("budget", a.budget);
            commands::sweep(&mut s)
        }
        Command::Verify(a) => {
            let mut s = settings(&a.common)?;
            s.set("seed", a.seed);
            commands::verify(&s, a.tamper_gamma.unwrap_or(0.0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracstep: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
