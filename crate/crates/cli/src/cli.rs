use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use loop_modes::solver::FreeParameter;
use loop_modes::{ConstantsMode, Model};

use crate::config::{OutputFormat, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "loop-modes", version, about = "Standing-wave modes of closed loops with a tunneling barrier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find every root of the determinant along one free parameter.
    Solve {
        #[arg(value_parser = parse_model)]
        model: Option<Model>,
        #[command(flatten)]
        common: Common,
    },
    /// Follow the two lowest square-loop branches across barrier lengths.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate triangular-loop geometry and determinant on a Θ grid.
    Scan {
        #[command(flatten)]
        common: Common,
    },
    /// Sample ψ and ψ' around the loop at one mode.
    Wavefunction {
        #[arg(value_parser = parse_model)]
        model: Option<Model>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Electron energy (eV).
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<f64>,
    /// Barrier potential, the peak for the triangular loop (V).
    #[arg(long, allow_hyphen_values = true)]
    pub potential: Option<f64>,
    /// Barrier length (nm).
    #[arg(long, allow_hyphen_values = true)]
    pub barrier_length: Option<f64>,
    /// Length of the zero-potential region (nm).
    #[arg(long, allow_hyphen_values = true)]
    pub pre_barrier_length: Option<f64>,
    /// Phase across the zero-potential region (degrees); a comma list for scan.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub theta: Vec<f64>,
    /// Parameter to solve for.
    #[arg(long, value_parser = parse_free)]
    pub free: Option<FreeParameter>,
    /// lo:hi[:step]; degrees for Θ, nm for barrier lengths in sweep.
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    /// Explicit barrier lengths for sweep (nm).
    #[arg(long, value_delimiter = ',')]
    pub b_list: Vec<f64>,
    /// Log-spaced sweep with this many points over --range.
    #[arg(long)]
    pub log_points: Option<usize>,
    /// Wavefunction samples per region.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Which root to trace when the wavefunction is solved for.
    #[arg(long)]
    pub root_index: Option<usize>,
    #[arg(long, value_parser = parse_constants)]
    pub constants: Option<ConstantsMode>,
    #[arg(long, value_parser = parse_format)]
    pub format: Option<OutputFormat>,
    /// JSON file supplying any of these settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Common {
    pub fn to_config(&self, model: Option<Model>) -> RunConfig {
        RunConfig {
            model,
            energy: self.energy,
            potential: self.potential,
            barrier_length: self.barrier_length,
            pre_barrier_length: self.pre_barrier_length,
            theta: self.theta.clone(),
            free: self.free,
            range: self.range.clone(),
            b_list: self.b_list.clone(),
            log_points: self.log_points,
            samples: self.samples,
            root_index: self.root_index,
            constants: self.constants,
            format: self.format,
        }
    }
}

fn parse_model(s: &str) -> Result<Model, String> {
    match s {
        "square" => Ok(Model::Square),
        "triangular" => Ok(Model::Triangular),
        _ => Err(format!("unknown model '{s}' (expected square or triangular)")),
    }
}

fn parse_free(s: &str) -> Result<FreeParameter, String> {
    s.parse().map_err(|e: loop_modes::Error| e.to_string())
}

fn parse_constants(s: &str) -> Result<ConstantsMode, String> {
    match s {
        "si" => Ok(ConstantsMode::Si),
        "paper" => Ok(ConstantsMode::PaperEffective),
        _ => Err(format!("unknown constants mode '{s}' (expected si or paper)")),
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        _ => Err(format!("unknown format '{s}' (expected csv or json)")),
    }
}
