//! Argument definitions and command dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Agreement};
use crate::error::{CliError, CliResult};
use crate::format::{self, OutputFormat};
use crate::gate::{parse_angle, GateSource, GateSpec, NamedGate};
use crate::verify;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "opent", version, about = "Operator entanglement of two-party quantum evolutions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GateChoice {
    /// Catalog gate: identity, swap, cnot, cz, expzz(θ), controlled-phase(θ).
    /// Angles accept forms such as 0.3, pi/4 or 3*pi/8.
    #[arg(long, value_parser = parse_gate)]
    pub gate: Option<NamedGate>,
    /// Matrix JSON file {"rows", "cols", "entries": [[re, im], ...]}.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GateArgs {
    #[command(flatten)]
    pub choice: GateChoice,
    /// Local dimension d. Catalog gates default to 2; files default to the
    /// square root of the matrix size.
    #[arg(long)]
    pub dim: Option<usize>,
}

impl GateArgs {
    pub fn spec(&self) -> GateSpec {
        let source = match (&self.choice.gate, &self.choice.file) {
            (Some(g), _) => GateSource::Named(*g),
            (None, Some(path)) => GateSource::File(path.clone()),
            (None, None) => unreachable!("clap requires --gate or --file"),
        };
        GateSpec { source, dim: self.dim }
    }
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Seed of the ChaCha8 streams. Falls back to OPENT_SEED, then 42.
    #[arg(long, env = "OPENT_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linear and von Neumann operator entanglement with cross-checks.
    Entanglement {
        #[command(flatten)]
        gate: GateArgs,
        /// Largest allowed deviation between the computation paths.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// E(exp(iθ σz⊗σz)) against sin²(2θ)/2 over an angle grid.
    Sweep {
        /// Gate family; only expzz is available.
        #[arg(long, default_value = "expzz")]
        gate: String,
        #[arg(long, value_parser = parse_angle, default_value = "0", allow_hyphen_values = true)]
        theta_start: f64,
        #[arg(long, value_parser = parse_angle, default_value = "pi/2", allow_hyphen_values = true)]
        theta_end: f64,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        /// Largest allowed absError.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        output: OutputFormat,
    },
    /// Entangling power, optionally with a product-state Monte-Carlo check.
    Epower {
        #[command(flatten)]
        gate: GateArgs,
        /// Product-state samples for the Monte-Carlo check (0 skips it).
        #[arg(long, default_value_t = 0)]
        mc_samples: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Monte-Carlo mean of E over Haar-random unitaries.
    HaarAverage {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Choi operator of a Kraus map.
    Choi {
        /// Kraus JSON file {"d", "trace_preserving", "kraus": [matrix, ...]}.
        #[arg(long)]
        file: PathBuf,
        /// Deviation tolerance of the entanglement cross-checks.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Success probability of the swap-measurement protocol.
    Protocol {
        #[command(flatten)]
        gate: GateArgs,
        /// Also simulate this many Bernoulli trials.
        #[arg(long)]
        shots: Option<u64>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Runs every acceptance check and prints a pass/fail table.
    Verify {
        #[command(flatten)]
        seed: SeedArg,
        /// Machine-readable output instead of the table.
        #[arg(long, value_enum)]
        output: Option<OutputFormat>,
    },
}

fn parse_gate(s: &str) -> Result<NamedGate, String> {
    s.parse()
}

/// Rendered command output and whether every agreement flag holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

fn outcome<R: serde::Serialize + Agreement>(report: &R, output: OutputFormat) -> CliResult<Outcome> {
    Ok(Outcome { text: format::render(report, output)?, ok: report.agrees() })
}

pub fn run(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Entanglement { gate, tol, output } => {
            outcome(&commands::entanglement(&gate.spec().resolve()?, *tol)?, *output)
        }
        Command::Sweep { gate, theta_start, theta_end, steps, tol, output } => {
            if !gate.trim().eq_ignore_ascii_case("expzz") {
                return Err(CliError::argument(format!("sweep supports the expzz family only, got '{gate}'")));
            }
            let rows = commands::sweep(*theta_start, *theta_end, *steps)?;
            Ok(Outcome { text: format::render(&rows, *output)?, ok: commands::sweep_agrees(&rows, *tol) })
        }
        Command::Epower { gate, mc_samples, seed, output } => {
            outcome(&commands::entangling_power(&gate.spec().resolve()?, *mc_samples, seed.seed)?, *output)
        }
        Command::HaarAverage { dim, samples, seed, output } => {
            outcome(&commands::haar_average(*dim, *samples, seed.seed)?, *output)
        }
        Command::Choi { file, tol, output } => outcome(&commands::choi_file(file, *tol)?, *output),
        Command::Protocol { gate, shots, seed, tol, output } => {
            outcome(&commands::protocol_run(&gate.spec().resolve()?, *shots, seed.seed, *tol)?, *output)
        }
        Command::Verify { seed, output } => {
            let results = verify::run(seed.seed);
            let ok = results.iter().all(|r| r.passed);
            let text = match output {
                None => verify::render_table(seed.seed, &results),
                Some(f) => format::render(&results, *f)?,
            };
            Ok(Outcome { text, ok })
        }
    }
}
