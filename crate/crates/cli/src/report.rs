//! `key = value` reports for single evaluations.

use pinchsec_core::montecarlo::McEstimate;
use pinchsec_core::optimizer::OptimizerResult;
use pinchsec_core::secrecy::{security_distances, sop_asymptotic, SecurityDistances};
use pinchsec_core::{sop_closed_form, Asymptote, CouplingLengths, SopBreakdown, SystemConfig};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct SopReport {
    pub rho_t_db: f64,
    pub lengths: CouplingLengths,
    pub breakdown: SopBreakdown,
    pub distances: SecurityDistances,
    pub asymptote: Asymptote,
}

impl SopReport {
    pub fn new(config: &SystemConfig, lengths: &CouplingLengths) -> Self {
        let breakdown = sop_closed_form(config, lengths);
        Self {
            rho_t_db: config.link.rho_t_db,
            lengths: *lengths,
            distances: security_distances(&breakdown.omega_set),
            asymptote: sop_asymptotic(config, lengths),
            breakdown,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OptimizeReport {
    pub rho_t_db: f64,
    #[serde(flatten)]
    pub result: OptimizerResult,
}

#[derive(Debug, Serialize)]
pub struct McReport {
    pub rho_t_db: f64,
    pub seed: u64,
    pub lengths: Option<CouplingLengths>,
    /// Closed form at the same lengths, for comparison.
    pub sop_cf: Option<f64>,
    #[serde(flatten)]
    pub estimate: McEstimate,
}

pub fn render<T: Serialize>(value: &T) -> Result<String, CliError> {
    toml::to_string(value).map_err(|e| CliError::Parse(e.to_string()))
}
