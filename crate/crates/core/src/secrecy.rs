//! Closed-form secrecy outage probability.
//!
//! The no-outage event is `ω1 < y1² ≤ ω2` for the eavesdropping user and
//! `y2² ≤ min(ω3, ω4)` for the confidential user, where `y_i` is the user's
//! offset from its cell's axis. With `y_i` uniform on `[−D/2, D/2]` both
//! probabilities are piecewise in the ω's, and
//! `P_sop = 1 − Ω1 Ω2`.
//!
//! Branch boundaries are closed toward the higher-probability branch.

use serde::Serialize;

use crate::config::SystemConfig;
use crate::coupling::{coefficients, CouplingLengths, PowerCoefficients};

/// Squared-distance thresholds in m². Signed: branch selection depends on
/// the sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaSet {
    /// U1 decodes `s2` (eavesdrops) iff `y1² ≤ ω1`.
    pub omega1: f64,
    /// U1 decodes `s1` iff `y1² ≤ ω2`.
    pub omega2: f64,
    /// U2 decodes `s1` iff `y2² ≤ ω3`.
    pub omega3: f64,
    /// U2 decodes `s2` iff `y2² ≤ ω4`.
    pub omega4: f64,
}

impl OmegaSet {
    pub fn min_u2(&self) -> f64 {
        self.omega3.min(self.omega4)
    }
}

/// Which piece of Ω1 applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Omega1Branch {
    /// `ω1 ≤ 0`, `ω2 ≥ D²/4`: the whole cell succeeds.
    Whole,
    /// `ω1 ≤ 0`, `0 < ω2 < D²/4`.
    Inner,
    /// `0 < ω1 < ω2 < D²/4`: a band on either side of the axis.
    Annulus,
    /// `0 < ω1 < D²/4 ≤ ω2`: the cell minus the eavesdropping strip.
    Outer,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Omega2Branch {
    Whole,
    Inner,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SopBreakdown {
    pub coefficients: PowerCoefficients,
    pub omega_set: OmegaSet,
    pub prob_omega1: f64,
    pub prob_omega2: f64,
    pub sop: f64,
    pub branch1: Omega1Branch,
    pub branch2: Omega2Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecurityDistances {
    /// Largest `|y1|` at which U1 still decodes `s2`.
    pub max_eavesdrop_m: f64,
    /// Largest `|y1|` at which U1 decodes `s1`.
    pub max_reliable_u1_m: f64,
    /// Largest `|y2|` at which U2 decodes both streams.
    pub max_reliable_u2_m: f64,
}

pub fn omegas(config: &SystemConfig, eps: &PowerCoefficients) -> OmegaSet {
    let rho_t = config.rho_t();
    let a = config.coeff_a();
    let b = config.coeff_b();
    let d2 = config.height() * config.height();
    let rho1 = rho_t * eps.eps1;
    let rho2 = rho_t * eps.eps2;
    OmegaSet {
        omega1: a * rho1 - d2,
        omega2: b * rho1 - d2,
        omega3: b * rho2 - d2,
        omega4: a * rho2 - d2,
    }
}

/// `Pr[ω1 < y1² ≤ ω2]` for `y1` uniform on `[−side/2, side/2]`.
pub fn prob_omega1(omega1: f64, omega2: f64, side: f64) -> (f64, Omega1Branch) {
    let quarter = side * side / 4.0;
    if omega1 <= 0.0 {
        if omega2 >= quarter {
            (1.0, Omega1Branch::Whole)
        } else if omega2 > 0.0 {
            (2.0 * omega2.sqrt() / side, Omega1Branch::Inner)
        } else {
            (0.0, Omega1Branch::Empty)
        }
    } else if omega1 < quarter {
        if omega2 >= quarter {
            (2.0 * (side / 2.0 - omega1.sqrt()) / side, Omega1Branch::Outer)
        } else if omega2 > omega1 {
            (2.0 * (omega2.sqrt() - omega1.sqrt()) / side, Omega1Branch::Annulus)
        } else {
            (0.0, Omega1Branch::Empty)
        }
    } else {
        (0.0, Omega1Branch::Empty)
    }
}

/// `Pr[y2² ≤ min(ω3, ω4)]` for `y2` uniform on `[−side/2, side/2]`.
pub fn prob_omega2(omega3: f64, omega4: f64, side: f64) -> (f64, Omega2Branch) {
    let m = omega3.min(omega4);
    if m >= side * side / 4.0 {
        (1.0, Omega2Branch::Whole)
    } else if m > 0.0 {
        (2.0 * m.sqrt() / side, Omega2Branch::Inner)
    } else {
        (0.0, Omega2Branch::Empty)
    }
}

pub fn sop_closed_form(config: &SystemConfig, lengths: &CouplingLengths) -> SopBreakdown {
    let eps = coefficients(lengths, config.efficiency(), config.kappa());
    sop_from_coefficients(config, &eps)
}

/// Same as [`sop_closed_form`] for arbitrary `(ε1, ε2)`.
pub fn sop_from_coefficients(config: &SystemConfig, eps: &PowerCoefficients) -> SopBreakdown {
    let omega_set = omegas(config, eps);
    let (p1, branch1) = prob_omega1(omega_set.omega1, omega_set.omega2, config.geometry.cell1_side());
    let (p2, branch2) = prob_omega2(omega_set.omega3, omega_set.omega4, config.geometry.cell2_side());
    SopBreakdown {
        coefficients: *eps,
        omega_set,
        prob_omega1: p1,
        prob_omega2: p2,
        sop: 1.0 - p1 * p2,
        branch1,
        branch2,
    }
}

/// High-SNR behaviour of the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptote {
    /// `lim ρt→∞ P_sop`, always 1.
    pub limit: f64,
    /// Linear `ρt` at which `ω1` reaches `D²/4`; the SOP is exactly 1 from
    /// there on. `None` when PA-1 radiates nothing.
    pub onset_rho_t: Option<f64>,
    /// The same onset on the configured dB axis (offset removed).
    pub onset_rho_t_db: Option<f64>,
}

pub fn sop_asymptotic(config: &SystemConfig, lengths: &CouplingLengths) -> Asymptote {
    let eps = coefficients(lengths, config.efficiency(), config.kappa());
    asymptote_for_eps1(config, eps.eps1)
}

/// Onset of the all-outage regime for a given `ε1`: smallest `ρt` with
/// `A ρt ε1 ≥ d² + D²/4`.
pub fn asymptote_for_eps1(config: &SystemConfig, eps1: f64) -> Asymptote {
    let side = config.geometry.cell1_side();
    let target = config.height().powi(2) + side * side / 4.0;
    let slope = config.coeff_a() * eps1;
    let onset = (slope > 0.0).then(|| target / slope);
    Asymptote {
        limit: 1.0,
        onset_rho_t: onset,
        onset_rho_t_db: onset.map(|r| 10.0 * r.log10() - config.link.noise_floor_offset_db),
    }
}

pub fn security_distances(omega_set: &OmegaSet) -> SecurityDistances {
    SecurityDistances {
        max_eavesdrop_m: omega_set.omega1.max(0.0).sqrt(),
        max_reliable_u1_m: omega_set.omega2.max(0.0).sqrt(),
        max_reliable_u2_m: omega_set.min_u2().max(0.0).sqrt(),
    }
}
