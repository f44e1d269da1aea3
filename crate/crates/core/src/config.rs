//! Scenario parameters, unit conversions and validation.
//!
//! Every other module consumes a [`SystemConfig`]. Defaults reproduce the
//! reference scenario: 28 GHz carrier, waveguide at 3 m, two 10 m cells
//! centred 10 m either side of the origin, `α1 = 0.99`, `γ1 = 10 dB`,
//! `γ2 = 15 dB`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `α1 + α2 = 1`.
pub const ALPHA_SUM_TOLERANCE: f64 = 1e-12;

pub fn db_to_linear(value_db: f64) -> Result<f64> {
    if !value_db.is_finite() {
        return Err(Error::NonFinite("value_db"));
    }
    Ok(10f64.powf(value_db / 10.0))
}

pub fn linear_to_db(value: f64) -> Result<f64> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::NonFinite("value"));
    }
    Ok(10.0 * value.log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalConstants {
    pub carrier_frequency_hz: f64,
    pub light_speed_m_s: f64,
    pub effective_refractive_index: f64,
    /// κ, in 1/m.
    pub coupling_coefficient_per_m: f64,
    /// F, in (0, 1].
    pub coupling_efficiency: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            carrier_frequency_hz: 28e9,
            light_speed_m_s: 3e8,
            effective_refractive_index: 1.4,
            coupling_coefficient_per_m: 100.0,
            coupling_efficiency: 1.0,
        }
    }
}

impl PhysicalConstants {
    /// Free-space wavelength `c / f_c`.
    pub fn wavelength_m(&self) -> f64 {
        self.light_speed_m_s / self.carrier_frequency_hz
    }

    /// In-guide wavelength `λ / n_eff`.
    pub fn guided_wavelength_m(&self) -> f64 {
        self.wavelength_m() / self.effective_refractive_index
    }

    /// Longest admissible coupling length, `π / (2κ)`.
    pub fn max_coupling_length_m(&self) -> f64 {
        PI / (2.0 * self.coupling_coefficient_per_m)
    }
}

/// Free-space reference gain at 1 m, `η = λ² / (16π²)`.
pub fn free_space_factor(constants: &PhysicalConstants) -> f64 {
    let lambda = constants.wavelength_m();
    lambda * lambda / (16.0 * PI * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Geometry {
    /// Waveguide height `d`.
    pub waveguide_height_m: f64,
    /// `D1`: C1 is centred at `(-D1, 0, 0)`.
    pub cell1_center_offset_m: f64,
    /// `D2`: C2 is centred at `(D2, 0, 0)`.
    pub cell2_center_offset_m: f64,
    /// Common cell side `D`.
    pub cell_side_m: f64,
    /// Overrides `D` for C1 only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell1_side_m: Option<f64>,
    /// Overrides `D` for C2 only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell2_side_m: Option<f64>,
    /// x-coordinate of the feed point on the waveguide. Only enters the
    /// in-guide phase of the full channel vector.
    pub bs_x_m: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            waveguide_height_m: 3.0,
            cell1_center_offset_m: 10.0,
            cell2_center_offset_m: 10.0,
            cell_side_m: 10.0,
            cell1_side_m: None,
            cell2_side_m: None,
            bs_x_m: 0.0,
        }
    }
}

impl Geometry {
    pub fn cell1_side(&self) -> f64 {
        self.cell1_side_m.unwrap_or(self.cell_side_m)
    }

    pub fn cell2_side(&self) -> f64 {
        self.cell2_side_m.unwrap_or(self.cell_side_m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NomaAllocation {
    /// Power fraction of the public stream `s1`.
    pub alpha1: f64,
    /// Power fraction of the confidential stream `s2`.
    pub alpha2: f64,
}

impl Default for NomaAllocation {
    fn default() -> Self {
        Self {
            alpha1: 0.99,
            alpha2: 0.01,
        }
    }
}

impl NomaAllocation {
    /// Allocation with `alpha1 = 1 - alpha2`.
    pub fn from_alpha2(alpha2: f64) -> Self {
        Self {
            alpha1: 1.0 - alpha2,
            alpha2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkBudget {
    /// Transmit SNR as plotted, in dB.
    pub rho_t_db: f64,
    /// Added to `rho_t_db` before linearization.
    pub noise_floor_offset_db: f64,
    pub gamma1_db: f64,
    pub gamma2_db: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self {
            rho_t_db: 20.0,
            noise_floor_offset_db: 90.0,
            gamma1_db: 10.0,
            gamma2_db: 15.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub constants: PhysicalConstants,
    pub geometry: Geometry,
    pub allocation: NomaAllocation,
    pub link: LinkBudget,
}

impl SystemConfig {
    pub fn eta(&self) -> f64 {
        free_space_factor(&self.constants)
    }

    /// Linear transmit SNR, offset included.
    pub fn rho_t(&self) -> f64 {
        10f64.powf((self.link.rho_t_db + self.link.noise_floor_offset_db) / 10.0)
    }

    pub fn gamma1(&self) -> f64 {
        10f64.powf(self.link.gamma1_db / 10.0)
    }

    pub fn gamma2(&self) -> f64 {
        10f64.powf(self.link.gamma2_db / 10.0)
    }

    pub fn kappa(&self) -> f64 {
        self.constants.coupling_coefficient_per_m
    }

    pub fn efficiency(&self) -> f64 {
        self.constants.coupling_efficiency
    }

    pub fn height(&self) -> f64 {
        self.geometry.waveguide_height_m
    }

    /// `A = η α2 / γ2`: scales `ρ_i` into the eavesdropping (ω1) and
    /// confidential-decoding (ω4) thresholds.
    pub fn coeff_a(&self) -> f64 {
        self.eta() * self.allocation.alpha2 / self.gamma2()
    }

    /// `B = η (α1/γ1 − α2)`: scales `ρ_i` into the `s1` decoding thresholds.
    pub fn coeff_b(&self) -> f64 {
        self.eta() * (self.allocation.alpha1 / self.gamma1() - self.allocation.alpha2)
    }

    /// Same scenario at a different transmit SNR.
    pub fn with_rho_t_db(mut self, rho_t_db: f64) -> Self {
        self.link.rho_t_db = rho_t_db;
        self
    }

    /// Checks every invariant and reports all violations.
    pub fn validate(&self) -> Validation {
        let mut v = Validation::default();
        let c = &self.constants;
        let g = &self.geometry;
        let a = &self.allocation;
        let l = &self.link;

        let finite = [
            ("constants.carrier_frequency_hz", c.carrier_frequency_hz),
            ("constants.light_speed_m_s", c.light_speed_m_s),
            ("constants.effective_refractive_index", c.effective_refractive_index),
            ("constants.coupling_coefficient_per_m", c.coupling_coefficient_per_m),
            ("constants.coupling_efficiency", c.coupling_efficiency),
            ("geometry.waveguide_height_m", g.waveguide_height_m),
            ("geometry.cell1_center_offset_m", g.cell1_center_offset_m),
            ("geometry.cell2_center_offset_m", g.cell2_center_offset_m),
            ("geometry.cell_side_m", g.cell_side_m),
            ("geometry.cell1_side_m", g.cell1_side()),
            ("geometry.cell2_side_m", g.cell2_side()),
            ("geometry.bs_x_m", g.bs_x_m),
            ("allocation.alpha1", a.alpha1),
            ("allocation.alpha2", a.alpha2),
            ("link.rho_t_db", l.rho_t_db),
            ("link.noise_floor_offset_db", l.noise_floor_offset_db),
            ("link.gamma1_db", l.gamma1_db),
            ("link.gamma2_db", l.gamma2_db),
        ];
        let mut all_finite = true;
        for (field, value) in finite {
            if !value.is_finite() {
                all_finite = false;
                v.error(IssueCode::NonFinite, field);
            }
        }

        if !(c.carrier_frequency_hz > 0.0) {
            v.error(IssueCode::FrequencyOutOfRange, "constants.carrier_frequency_hz");
        }
        if !(c.light_speed_m_s > 0.0) {
            v.error(IssueCode::LightSpeedOutOfRange, "constants.light_speed_m_s");
        }
        if !(c.effective_refractive_index >= 1.0) {
            v.error(
                IssueCode::RefractiveIndexOutOfRange,
                "constants.effective_refractive_index",
            );
        }
        if !(c.coupling_coefficient_per_m > 0.0) {
            v.error(
                IssueCode::CouplingCoefficientOutOfRange,
                "constants.coupling_coefficient_per_m",
            );
        }
        if !(c.coupling_efficiency > 0.0 && c.coupling_efficiency <= 1.0) {
            v.error(
                IssueCode::CouplingEfficiencyOutOfRange,
                "constants.coupling_efficiency",
            );
        }

        if !(g.waveguide_height_m > 0.0) {
            v.error(IssueCode::HeightOutOfRange, "geometry.waveguide_height_m");
        }
        if !(g.cell1_center_offset_m > 0.0) {
            v.error(IssueCode::CellOffsetOutOfRange, "geometry.cell1_center_offset_m");
        }
        if !(g.cell2_center_offset_m > 0.0) {
            v.error(IssueCode::CellOffsetOutOfRange, "geometry.cell2_center_offset_m");
        }
        for (field, side) in [
            ("geometry.cell_side_m", g.cell_side_m),
            ("geometry.cell1_side_m", g.cell1_side()),
            ("geometry.cell2_side_m", g.cell2_side()),
        ] {
            if !(side > 0.0) {
                v.error(IssueCode::CellSideOutOfRange, field);
            }
        }
        // Half-sides must fit between the two centres.
        let half_sum = 0.5 * (g.cell1_side() + g.cell2_side());
        if !(half_sum < g.cell1_center_offset_m + g.cell2_center_offset_m) {
            v.error(IssueCode::OverlappingCells, "geometry.cell_side_m");
        }

        if !((a.alpha1 + a.alpha2 - 1.0).abs() <= ALPHA_SUM_TOLERANCE) {
            v.error(IssueCode::AlphaSum, "allocation.alpha1");
        }
        for (field, alpha) in [("allocation.alpha1", a.alpha1), ("allocation.alpha2", a.alpha2)] {
            if !(alpha > 0.0 && alpha < 1.0) {
                v.error(IssueCode::AlphaOutOfRange, field);
            }
        }

        if all_finite {
            if !(self.rho_t() > 0.0 && self.rho_t().is_finite()) {
                v.error(IssueCode::SnrOutOfRange, "link.rho_t_db");
            }
            for (field, gamma) in [("link.gamma1_db", self.gamma1()), ("link.gamma2_db", self.gamma2())] {
                if !(gamma > 0.0 && gamma.is_finite()) {
                    v.error(IssueCode::ThresholdOutOfRange, field);
                }
            }
            let eta = self.eta();
            if !(eta > 0.0 && eta.is_finite()) {
                v.error(IssueCode::FrequencyOutOfRange, "constants.carrier_frequency_hz");
            }
        }

        if a.alpha1.is_finite() && a.alpha2.is_finite() && a.alpha1 <= a.alpha2 {
            v.warning(IssueCode::AlphaOrder, "allocation.alpha1");
        }
        if a.alpha2 > 0.0 && l.gamma1_db.is_finite() && a.alpha1 / a.alpha2 <= self.gamma1() {
            v.warning(IssueCode::AlphaRatioBelowGamma1, "allocation.alpha1");
        }

        v
    }

    /// Returns the config if it has no validation errors. Warnings pass.
    pub fn validated(self) -> Result<Self> {
        let v = self.validate();
        if v.is_ok() {
            Ok(self)
        } else {
            Err(Error::InvalidConfig(v.errors))
        }
    }
}

/// Machine-readable validation codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueCode {
    NonFinite,
    FrequencyOutOfRange,
    LightSpeedOutOfRange,
    RefractiveIndexOutOfRange,
    CouplingCoefficientOutOfRange,
    CouplingEfficiencyOutOfRange,
    HeightOutOfRange,
    CellOffsetOutOfRange,
    CellSideOutOfRange,
    OverlappingCells,
    AlphaSum,
    AlphaOutOfRange,
    SnrOutOfRange,
    ThresholdOutOfRange,
    /// Warning: `α1 ≤ α2`.
    AlphaOrder,
    /// Warning: `α1/α2 ≤ γ1`, every SOP evaluates to 1.
    AlphaRatioBelowGamma1,
}

impl IssueCode {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::NonFinite => "non-finite",
            IssueCode::FrequencyOutOfRange => "frequency-out-of-range",
            IssueCode::LightSpeedOutOfRange => "light-speed-out-of-range",
            IssueCode::RefractiveIndexOutOfRange => "refractive-index-out-of-range",
            IssueCode::CouplingCoefficientOutOfRange => "coupling-coefficient-out-of-range",
            IssueCode::CouplingEfficiencyOutOfRange => "coupling-efficiency-out-of-range",
            IssueCode::HeightOutOfRange => "height-out-of-range",
            IssueCode::CellOffsetOutOfRange => "cell-offset-out-of-range",
            IssueCode::CellSideOutOfRange => "cell-side-out-of-range",
            IssueCode::OverlappingCells => "overlapping-cells",
            IssueCode::AlphaSum => "alpha-sum",
            IssueCode::AlphaOutOfRange => "alpha-out-of-range",
            IssueCode::SnrOutOfRange => "snr-out-of-range",
            IssueCode::ThresholdOutOfRange => "threshold-out-of-range",
            IssueCode::AlphaOrder => "alpha-order",
            IssueCode::AlphaRatioBelowGamma1 => "alpha-ratio-le-gamma1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub code: IssueCode,
    /// Dotted config key the issue refers to.
    pub field: &'static str,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.code.as_str(), self.field)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Validation {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl Validation {
    fn error(&mut self, code: IssueCode, field: &'static str) {
        self.errors.push(Issue { code, field });
    }

    fn warning(&mut self, code: IssueCode, field: &'static str) {
        self.warnings.push(Issue { code, field });
    }

    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn has_error(&self, code: IssueCode) -> bool {
        self.errors.iter().any(|i| i.code == code)
    }

    pub fn has_warning(&self, code: IssueCode) -> bool {
        self.warnings.iter().any(|i| i.code == code)
    }
}
