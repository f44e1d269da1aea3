//! Choice of coupling lengths on the command line.

use std::f64::consts::PI;
use std::str::FromStr;

use pinchsec_core::coupling::lengths_for_model;
use pinchsec_core::{CouplingLengths, PowerModel, SystemConfig};

use crate::error::CliError;

/// `flexible`, `equal[:eps]` or `proportional[:length]`. Explicit `l1`/`l2`
/// override whatever the model gives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LengthSpec {
    pub model: ModelChoice,
    pub l1: Option<f64>,
    pub l2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ModelChoice {
    /// `L1 = π/(14κ)`, `L2 = π/(2κ)`.
    #[default]
    Flexible,
    /// Both PAs radiate `eps` (default 0.5).
    Equal(Option<f64>),
    /// Shared length (default `π/(4κ)`).
    Proportional(Option<f64>),
}

impl FromStr for ModelChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let value = arg
            .map(|a| {
                a.parse::<f64>().map_err(|e| CliError::Argument {
                    field: "model",
                    reason: format!("{a}: {e}"),
                })
            })
            .transpose()?;
        match (name, value) {
            ("flexible", None) => Ok(ModelChoice::Flexible),
            ("equal", v) => Ok(ModelChoice::Equal(v)),
            ("proportional", v) => Ok(ModelChoice::Proportional(v)),
            _ => Err(CliError::Argument {
                field: "model",
                reason: format!("unknown model `{s}`"),
            }),
        }
    }
}

impl LengthSpec {
    pub fn resolve(&self, config: &SystemConfig) -> Result<CouplingLengths, CliError> {
        let kappa = config.kappa();
        let model = match self.model {
            ModelChoice::Flexible => {
                PowerModel::Flexible(CouplingLengths::new(PI / (14.0 * kappa), PI / (2.0 * kappa), kappa)?)
            }
            ModelChoice::Equal(eps) => PowerModel::Equal {
                target_eps: eps.unwrap_or(0.5),
            },
            ModelChoice::Proportional(l) => PowerModel::Proportional {
                shared_length: l.unwrap_or(PI / (4.0 * kappa)),
            },
        };
        let base = lengths_for_model(&model, config.efficiency(), kappa)?;
        Ok(CouplingLengths::new(
            self.l1.unwrap_or(base.l1()),
            self.l2.unwrap_or(base.l2()),
            kappa,
        )?)
    }
}
