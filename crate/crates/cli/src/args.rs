use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinwork::experiment::DEFAULT_TRIALS;
use spinwork::{Connectivity, GradientMethod, OptimizerConfig, Preset, SpinModel, SweepAxis};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "spinwork", version, about = "Variational work extraction from spin-chain batteries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean energy, ergotropy and spectrum of the all-up state.
    Ergotropy(ErgotropyArgs),
    /// Ensemble of randomly initialised ascents; writes convergence and summary files.
    Optimize(OptimizeArgs),
    /// Efficiency as a function of n, gamma or delta.
    Sweep(SweepArgs),
    /// Two-qubit work landscape and gradient field.
    Landscape(LandscapeArgs),
    /// Built-in self checks.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct ModelArgs {
    /// xxx, xxz, xyz, xx, xy or tfi
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long = "j", default_value_t = spinwork::DEFAULT_COUPLING, allow_negative_numbers = true)]
    pub coupling: f64,
    #[arg(long = "h", default_value_t = spinwork::DEFAULT_FIELD, allow_negative_numbers = true)]
    pub field: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
}

impl ModelArgs {
    pub fn preset(&self) -> Result<Preset, CliError> {
        Ok(self.model.parse::<Preset>()?)
    }

    pub fn build(&self) -> Result<SpinModel, CliError> {
        Ok(SpinModel::from_preset(
            self.preset()?,
            self.n,
            self.coupling,
            self.field,
            self.gamma,
            self.delta,
        )?)
    }

    /// Flags that rebuild this model.
    pub fn echo(&self) -> String {
        let mut s = format!(
            "--model {} --n {} --j {} --h {}",
            self.model.to_ascii_lowercase(),
            self.n,
            self.coupling,
            self.field
        );
        if let Some(g) = self.gamma {
            s += &format!(" --gamma {g}");
        }
        if let Some(d) = self.delta {
            s += &format!(" --delta {d}");
        }
        s
    }
}

#[derive(Clone, Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 0.1)]
    pub step_size: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Consecutive quiet iterations required for convergence.
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    /// parameter-shift or finite-difference
    #[arg(long, default_value = "parameter-shift")]
    pub gradient: String,
}

impl OptimizerArgs {
    pub fn config(&self) -> Result<OptimizerConfig, CliError> {
        let cfg = OptimizerConfig {
            step_size: self.step_size,
            max_iters: self.max_iters,
            convergence_tol: self.tol,
            convergence_window: self.window,
            gradient_method: self.gradient.parse::<GradientMethod>()?,
            ..OptimizerConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn echo(&self) -> String {
        format!(
            "--step-size {} --max-iters {} --tol {:e} --window {} --gradient {}",
            self.step_size, self.max_iters, self.tol, self.window, self.gradient
        )
    }
}

#[derive(Clone, Debug, Args)]
pub struct EnsembleArgs {
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

pub fn parse_connectivities(tags: &[String]) -> Result<Vec<Connectivity>, CliError> {
    if tags.is_empty() {
        return Err(CliError::Usage("at least one --ansatz is required".into()));
    }
    tags.iter()
        .map(|t| t.parse::<Connectivity>().map_err(CliError::from))
        .collect()
}

#[derive(Clone, Debug, Args)]
pub struct ErgotropyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Write the report here instead of only printing it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// nc, lin, ring, ota or ata; repeat for several ansätze
    #[arg(long = "ansatz", required = true)]
    pub ansatz: Vec<String>,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Output directory; receives convergence_<ansatz>.csv and summary_<ansatz>.json
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "ansatz", required = true)]
    pub ansatz: Vec<String>,
    /// n, gamma or delta
    #[arg(long)]
    pub axis: String,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub step: f64,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Output file; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

impl SweepArgs {
    pub fn axis(&self) -> Result<SweepAxis, CliError> {
        Ok(self.axis.parse::<SweepAxis>()?)
    }
}

#[derive(Clone, Debug, Args)]
pub struct LandscapeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "ansatz", default_value = "nc")]
    pub ansatz: String,
    /// Grid points per angle over [0, pi], endpoints included.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Number of optimization trajectories to record.
    #[arg(long, default_value_t = 0)]
    pub trajectories: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Grid CSV; trajectories go to the same path with a .trajectories.csv suffix.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args)]
pub struct ValidateArgs {
    /// Negative control: flips the sign of the field in the Hamiltonian under test.
    #[arg(long, hide = true)]
    pub inject_field_sign_flip: bool,
}
