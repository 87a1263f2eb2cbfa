//! Command-line driver: merges flags over an optional JSON config, pins
//! the thread pool, dispatches, and maps failures to the exit-code
//! contract (0 ok, 1 verification failure, 2 config error, 3 solver
//! non-convergence).

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pekar1d::verify::Fault;

use config::{GridConfig, ModelKind, OutputFormat, RunConfig};

/// A failed run, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad configuration or input. Exit 2.
    Config(String),
    /// A verification check failed. Exit 1.
    Verify(String),
    /// The solver stopped without meeting its tolerances. Exit 3.
    NonConvergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Config(_) => 2,
            Failure::NonConvergence(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) | Failure::Verify(m) | Failure::NonConvergence(m) => {
                write!(f, "{m}")
            }
        }
    }
}

const ENV_THREADS: &str = "PEKAR1D_THREADS";

#[derive(Parser)]
#[command(
    name = "pekar1d",
    version,
    about = "Variational runs for 1D effective models of a strongly magnetized hydrogenic polaron"
)]
struct Cli {
    /// JSON run configuration; explicit flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Base path of the artifacts (default: the command name).
    #[arg(long, global = true, value_name = "BASE")]
    output: Option<String>,
    /// Artifact kinds to write where a command has both.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Print the versioned defaults table and exit.
    #[arg(long)]
    show_defaults: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize the pinned quartic model and compare with the closed form.
    Solve(SolveArgs),
    /// Tabulate the averaged and envelope potentials at one field.
    Potential(PotentialArgs),
    /// Minimize the effective model along a field ladder and fit the
    /// strong-field expansion.
    Ladder(LadderArgs),
    /// Run the epsilon-secant derivative experiment for a point
    /// perturbation.
    Perturb(PerturbArgs),
    /// Run the invariant suite and write a machine-readable report.
    Verify(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::Potential(_) => "potential",
            Command::Ladder(_) => "ladder",
            Command::Perturb(_) => "perturb",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Grid half-width (default 160/(alpha + 2 beta)).
    #[arg(long, value_name = "W")]
    grid_half_width: Option<f64>,
    /// Grid node count, odd (default 8193).
    #[arg(long, value_name = "N")]
    grid_nodes: Option<usize>,
    /// Run the alpha = 0 point-well model.
    #[arg(long)]
    delta_well: bool,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    tol_energy: Option<f64>,
    #[arg(long)]
    tol_grad: Option<f64>,
}

#[derive(Args)]
struct PotentialArgs {
    /// Field strength B (must exceed e).
    #[arg(long)]
    field: Option<f64>,
    /// Sample half-width (default 10).
    #[arg(long, value_name = "W")]
    grid_half_width: Option<f64>,
    /// Sample node count, odd (default 2001).
    #[arg(long, value_name = "N")]
    grid_nodes: Option<usize>,
    /// Window half-width L for the footer constants; repeatable
    /// (default 0.1 and 1).
    #[arg(long = "window", value_name = "L")]
    windows: Vec<f64>,
}

#[derive(Args)]
struct LadderArgs {
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Ladder field; repeatable, at least 4
    /// (default 1e6 1e9 1e12 1e18 1e24 1e36).
    #[arg(long = "field", value_name = "B")]
    fields: Vec<f64>,
}

#[derive(Args)]
struct PerturbArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Point mass of W as LOC:WEIGHT; repeatable (default 0:1).
    #[arg(long = "atom", value_name = "LOC:WEIGHT")]
    atoms: Vec<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only the sub-second subset.
    #[arg(long)]
    quick: bool,
    /// Test harness: wire the point term with the wrong sign.
    #[arg(long, hide = true)]
    inject_delta_sign_flip: bool,
}

fn parse_atom(text: &str) -> Result<(f64, f64), Failure> {
    let bad = || {
        Failure::Config(format!(
            "bad atom \"{text}\": expected LOC:WEIGHT with two numbers"
        ))
    };
    let (loc, weight) = text.split_once(':').ok_or_else(bad)?;
    Ok((
        loc.trim().parse().map_err(|_| bad())?,
        weight.trim().parse().map_err(|_| bad())?,
    ))
}

/// Overlay explicitly given flags onto the config-file values.
fn merge(cli: &Cli, cmd: &Command, cfg: &mut RunConfig) -> Result<(), Failure> {
    if let Some(base) = &cli.output {
        cfg.output = Some(base.clone());
    }
    if let Some(f) = cli.format {
        cfg.format = Some(f);
    }

    let grid_override = |hw: Option<f64>, n: Option<usize>, cfg: &mut RunConfig| {
        if hw.is_some() || n.is_some() {
            let current = cfg.grid.unwrap_or(GridConfig {
                half_width: 0.0,
                n: 0,
            });
            cfg.grid = Some(GridConfig {
                half_width: hw.unwrap_or(current.half_width),
                n: n.unwrap_or(current.n),
            });
        }
    };

    match cmd {
        Command::Solve(a) => {
            if a.alpha.is_some() {
                cfg.alpha = a.alpha;
            }
            if a.beta.is_some() {
                cfg.beta = a.beta;
            }
            grid_override(a.grid_half_width, a.grid_nodes, cfg);
            if a.delta_well {
                cfg.delta_well = Some(true);
            }
            if a.max_iter.is_some() {
                cfg.max_iter = a.max_iter;
            }
            if a.tol_energy.is_some() {
                cfg.tol_energy = a.tol_energy;
            }
            if a.tol_grad.is_some() {
                cfg.tol_grad = a.tol_grad;
            }
        }
        Command::Potential(a) => {
            if a.field.is_some() {
                cfg.field = a.field;
            }
            grid_override(a.grid_half_width, a.grid_nodes, cfg);
            if !a.windows.is_empty() {
                cfg.windows = Some(a.windows.clone());
            }
        }
        Command::Ladder(a) => {
            if a.model.is_some() {
                cfg.model = a.model;
            }
            if a.alpha.is_some() {
                cfg.alpha = a.alpha;
            }
            if a.beta.is_some() {
                cfg.beta = a.beta;
            }
            if !a.fields.is_empty() {
                cfg.fields = Some(a.fields.clone());
            }
        }
        Command::Perturb(a) => {
            if a.alpha.is_some() {
                cfg.alpha = a.alpha;
            }
            if a.beta.is_some() {
                cfg.beta = a.beta;
            }
            if !a.atoms.is_empty() {
                let parsed: Result<Vec<_>, _> = a.atoms.iter().map(|s| parse_atom(s)).collect();
                cfg.atoms = Some(parsed?);
            }
        }
        Command::Verify(a) => {
            if a.quick {
                cfg.quick = Some(true);
            }
        }
    }
    Ok(())
}

/// Pin the global pool from the environment; the default is the runtime's
/// available parallelism. Results do not depend on the choice.
fn init_threads() -> Result<(), Failure> {
    if let Ok(text) = std::env::var(ENV_THREADS) {
        let n: usize = text.trim().parse().map_err(|_| {
            Failure::Config(format!("{ENV_THREADS} must be a positive integer, got \"{text}\""))
        })?;
        if n == 0 {
            return Err(Failure::Config(format!(
                "{ENV_THREADS} must be a positive integer, got 0"
            )));
        }
        // Ignore the error when a pool already exists (only tests re-enter).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

const DEFAULTS_TABLE: &str = "\
pekar1d defaults, table v1
  solver.max_iter       600
  solver.tol_energy     1e-12   (relative to 1 + |E|)
  solver.tol_grad       1e-6    (preconditioner metric, relative to 1 + |E|)
  solver.step_init      0.1
  solver.step_shrink    0.5
  solve.grid            half_width 160/(alpha + 2 beta), 8193 nodes
  solve.params          alpha 1, beta 1
  potential.grid        half_width 10, 2001 nodes
  potential.windows     0.1, 1
  ladder.fields         1e6, 1e9, 1e12, 1e18, 1e24, 1e36
  ladder.grid           half_width 40/mu(B), 4097 nodes
  ladder.model          polaron
  perturb.epsilons      1e-2, 1e-3, 1e-4
  perturb.grid          half_width 160/(alpha + 2 beta), 8193 nodes
  perturb.atoms         one unit mass at 0
  output                <command>.csv / <command>.json in the working directory
  threads               PEKAR1D_THREADS, default available parallelism";

fn run(cli: Cli) -> Result<(), Failure> {
    if cli.show_defaults {
        println!("{DEFAULTS_TABLE}");
        return Ok(());
    }

    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };

    // The command comes from the flag line, the config file, or both in
    // agreement.
    let fault = match &cli.command {
        Some(Command::Verify(a)) if a.inject_delta_sign_flip => Fault::DeltaSignFlip,
        _ => Fault::None,
    };
    let name = match (&cli.command, &cfg.command) {
        (Some(c), Some(file_name)) if c.name() != file_name => {
            return Err(Failure::Config(format!(
                "config file says command \"{file_name}\" but the command line says \
                 \"{}\"",
                c.name()
            )));
        }
        (Some(c), _) => c.name().to_string(),
        (None, Some(file_name)) => file_name.clone(),
        (None, None) => {
            return Err(Failure::Config(
                "no command given; pass one of solve, potential, ladder, perturb, \
                 verify, or a config file with a \"command\" key"
                    .into(),
            ));
        }
    };
    if let Some(c) = &cli.command {
        merge(&cli, c, &mut cfg)?;
    } else {
        if let Some(base) = &cli.output {
            cfg.output = Some(base.clone());
        }
        if let Some(f) = cli.format {
            cfg.format = Some(f);
        }
    }
    cfg.command = Some(name.clone());

    init_threads()?;
    match name.as_str() {
        "solve" => commands::solve(&cfg),
        "potential" => commands::potential(&cfg),
        "ladder" => commands::ladder(&cfg),
        "perturb" => commands::perturb(&cfg),
        "verify" => commands::verify(&cfg, fault),
        other => Err(Failure::Config(format!(
            "unknown command \"{other}\"; expected solve, potential, ladder, perturb, \
             or verify"
        ))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
