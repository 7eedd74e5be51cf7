use crate::error::CliError;
use clap::{Args, ValueEnum};
use fbl_core::generators::{DegreeSource, ModelConfig};
use fbl_core::kernel::KernelFunction;
use fbl_core::law::OffspringLaw;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Her,
    Ier,
    Cm,
    Pam,
}

/// A model given either as a JSON file or through flags.
#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,

    /// JSON model description, e.g. `{"model": "her", "lambda": 2}`.
    #[arg(long, conflicts_with = "model")]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub lambda: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,

    /// Degree law for `cm`, e.g. `zeta:3.5`.
    #[arg(long)]
    pub dist: Option<String>,

    /// Explicit degree sequence for `cm`, comma separated.
    #[arg(long, conflicts_with = "dist")]
    pub degrees: Option<String>,

    /// Kernel for `ier`: JSON text, or `@path` to a JSON file.
    #[arg(long)]
    pub kernel: Option<String>,
}

pub fn parse_kernel(text: &str) -> Result<KernelFunction, CliError> {
    let body = match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read kernel file {path}: {e}")))?,
        None => text.to_string(),
    };
    serde_json::from_str(&body).map_err(|e| CliError::Config(format!("bad kernel: {e}")))
}

fn need<T: Copy>(value: Option<T>, flag: &str, model: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Config(format!("model {model} needs --{flag}")))
}

impl ModelArgs {
    pub fn resolve(&self) -> Result<ModelConfig, CliError> {
        let config = if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("bad config: {e}")))?
        } else {
            let kind = self
                .model
                .ok_or_else(|| CliError::Config("give --model or --config".into()))?;
            match kind {
                ModelKind::Her => ModelConfig::Her {
                    lambda: need(self.lambda, "lambda", "her")?,
                },
                ModelKind::Ier => ModelConfig::Ier {
                    lambda: need(self.lambda, "lambda", "ier")?,
                    kernel: parse_kernel(
                        self.kernel
                            .as_deref()
                            .ok_or_else(|| CliError::Config("model ier needs --kernel".into()))?,
                    )?,
                },
                ModelKind::Pam => ModelConfig::Pam {
                    delta: need(self.delta, "delta", "pam")?,
                },
                ModelKind::Cm => {
                    let degrees = match (&self.dist, &self.degrees) {
                        (Some(d), _) => DegreeSource::Law(OffspringLaw::parse_spec(d)?),
                        (None, Some(seq)) => DegreeSource::Sequence {
                            sequence: seq
                                .split(',')
                                .map(|s| s.trim().parse::<u64>())
                                .collect::<Result<_, _>>()
                                .map_err(|e| CliError::Config(format!("bad --degrees: {e}")))?,
                        },
                        (None, None) => {
                            return Err(CliError::Config("model cm needs --dist or --degrees".into()))
                        }
                    };
                    ModelConfig::Cm { degrees }
                }
            }
        };
        config.validate()?;
        Ok(config)
    }
}
