//! One-dimensional parameter sweeps.

use std::str::FromStr;

use pinchsec_core::montecarlo::{estimate_sop, estimate_sop_fixed_antenna, McSettings};
use pinchsec_core::{solve_p1, sop_closed_form, CouplingLengths, NomaAllocation, SystemConfig};
use rayon::prelude::*;

use crate::config_file::check;
use crate::csv_out::{opt_sci, sci, Record};
use crate::error::CliError;
use crate::lengths::LengthSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    RhoTDb,
    L1,
    L2,
    CellSideC1,
    CellSideC2,
    /// Sets `alpha1 = 1 − alpha2`.
    Alpha2,
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "rho_t_db" => Axis::RhoTDb,
            "l1" => Axis::L1,
            "l2" => Axis::L2,
            "cell_side_c1" => Axis::CellSideC1,
            "cell_side_c2" => Axis::CellSideC2,
            "alpha2" => Axis::Alpha2,
            _ => {
                return Err(CliError::Sweep {
                    field: "axis",
                    reason: format!("unknown axis `{s}`"),
                })
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    ClosedForm,
    MonteCarlo,
    FixedAntennaMc,
    Optimize,
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "closed_form" => Mode::ClosedForm,
            "monte_carlo" => Mode::MonteCarlo,
            "fixed_antenna_mc" => Mode::FixedAntennaMc,
            "optimize" => Mode::Optimize,
            _ => {
                return Err(CliError::Sweep {
                    field: "modes",
                    reason: format!("unknown mode `{s}`"),
                })
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub modes: Vec<Mode>,
}

impl SweepSpec {
    pub fn new(axis: Axis, start: f64, stop: f64, step: f64, mut modes: Vec<Mode>) -> Result<Self, CliError> {
        let bad = |field, reason: &str| CliError::Sweep {
            field,
            reason: reason.to_string(),
        };
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(bad("start", "need finite start < stop"));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(bad("step", "need step > 0"));
        }
        modes.sort();
        modes.dedup();
        if modes.is_empty() {
            return Err(bad("modes", "at least one mode is required"));
        }
        if modes.contains(&Mode::Optimize) && matches!(axis, Axis::L1 | Axis::L2) {
            return Err(bad("modes", "optimize chooses the lengths itself; sweep another axis"));
        }
        Ok(Self { axis, start, stop, step, modes })
    }

    /// `start + k·step` up to `stop` inclusive, allowing for rounding.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }

    fn has(&self, mode: Mode) -> bool {
        self.modes.contains(&mode)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub axis_value: f64,
    pub l1: f64,
    pub l2: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub omega: [f64; 4],
    pub prob_omega1: f64,
    pub prob_omega2: f64,
    pub sop_cf: Option<f64>,
    pub sop_mc: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub sop_fixed_mc: Option<f64>,
    pub case_tag: Option<&'static str>,
}

impl Record for CsvRow {
    const HEADER: &'static [&'static str] = &[
        "axis_value", "l1", "l2", "eps1", "eps2", "omega1", "omega2", "omega3", "omega4",
        "prob_omega1", "prob_omega2", "sop_cf", "sop_mc", "mc_stderr", "sop_fixed_mc", "case_tag",
    ];

    fn fields(&self) -> Vec<String> {
        let mut f = vec![sci(self.axis_value), sci(self.l1), sci(self.l2), sci(self.eps1), sci(self.eps2)];
        f.extend(self.omega.iter().map(|&w| sci(w)));
        f.extend([
            sci(self.prob_omega1),
            sci(self.prob_omega2),
            opt_sci(self.sop_cf),
            opt_sci(self.sop_mc),
            opt_sci(self.mc_stderr),
            opt_sci(self.sop_fixed_mc),
            self.case_tag.unwrap_or_default().to_string(),
        ]);
        f
    }
}

/// Configuration and lengths at one sweep point.
pub fn point_setup(
    base: &SystemConfig,
    lengths: &LengthSpec,
    axis: Axis,
    value: f64,
) -> Result<(SystemConfig, CouplingLengths), CliError> {
    let mut cfg = *base;
    let mut spec = *lengths;
    match axis {
        Axis::RhoTDb => cfg.link.rho_t_db = value,
        Axis::L1 => spec.l1 = Some(value),
        Axis::L2 => spec.l2 = Some(value),
        Axis::CellSideC1 => cfg.geometry.cell1_side_m = Some(value),
        Axis::CellSideC2 => cfg.geometry.cell2_side_m = Some(value),
        Axis::Alpha2 => cfg.allocation = NomaAllocation::from_alpha2(value),
    }
    let cfg = check_quiet(cfg)?;
    let l = spec.resolve(&cfg)?;
    Ok((cfg, l))
}

fn check_quiet(cfg: SystemConfig) -> Result<SystemConfig, CliError> {
    if cfg.validate().is_ok() {
        Ok(cfg)
    } else {
        check(cfg)
    }
}

/// Evaluates every point; rows come back in axis order.
pub fn run_sweep(
    base: &SystemConfig,
    lengths: &LengthSpec,
    spec: &SweepSpec,
    mc: &McSettings,
) -> Result<Vec<CsvRow>, CliError> {
    spec.points()
        .into_par_iter()
        .map(|value| {
            let (cfg, mut l) = point_setup(base, lengths, spec.axis, value)?;
            let mut case_tag = None;
            if spec.has(Mode::Optimize) {
                let r = solve_p1(&cfg);
                l = r.certified;
                case_tag = Some(r.case_tag.as_str());
            }
            let b = sop_closed_form(&cfg, &l);
            let mc_est = spec.has(Mode::MonteCarlo).then(|| estimate_sop(&cfg, &l, mc));
            let fixed = spec
                .has(Mode::FixedAntennaMc)
                .then(|| estimate_sop_fixed_antenna(&cfg, mc).sop_hat);
            let o = b.omega_set;
            Ok(CsvRow {
                axis_value: value,
                l1: l.l1(),
                l2: l.l2(),
                eps1: b.coefficients.eps1,
                eps2: b.coefficients.eps2,
                omega: [o.omega1, o.omega2, o.omega3, o.omega4],
                prob_omega1: b.prob_omega1,
                prob_omega2: b.prob_omega2,
                sop_cf: (spec.has(Mode::ClosedForm) || spec.has(Mode::Optimize)).then_some(b.sop),
                sop_mc: mc_est.map(|e| e.sop_hat),
                mc_stderr: mc_est.map(|e| e.std_err),
                sop_fixed_mc: fixed,
                case_tag,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_points() {
        let s = SweepSpec::new(Axis::RhoTDb, 15.0, 40.0, 1.0, vec![Mode::ClosedForm]).unwrap();
        let p = s.points();
        assert_eq!(p.len(), 26);
        assert_eq!(*p.last().unwrap(), 40.0);
        let s = SweepSpec::new(Axis::L1, 1e-4, 1e-3, 1e-4, vec![Mode::ClosedForm]).unwrap();
        assert_eq!(s.points().len(), 10);
    }

    #[test]
    fn rejects_bad_specs() {
        let err = SweepSpec::new(Axis::RhoTDb, 5.0, 1.0, 1.0, vec![Mode::ClosedForm]).unwrap_err();
        assert!(err.to_string().contains("start"));
        let err = SweepSpec::new(Axis::RhoTDb, 0.0, 1.0, 0.0, vec![Mode::ClosedForm]).unwrap_err();
        assert!(err.to_string().contains("step"));
        let err = SweepSpec::new(Axis::RhoTDb, 0.0, 1.0, 1.0, vec![]).unwrap_err();
        assert!(err.to_string().contains("modes"));
        assert!(SweepSpec::new(Axis::L1, 1e-4, 1e-3, 1e-4, vec![Mode::Optimize]).is_err());
        assert!("rho".parse::<Axis>().is_err());
        assert!("closed".parse::<Mode>().is_err());
    }

    #[test]
    fn header_order_and_empty_fields() {
        let s = SweepSpec::new(Axis::RhoTDb, 20.0, 21.0, 1.0, vec![Mode::ClosedForm]).unwrap();
        let rows = run_sweep(&SystemConfig::default(), &LengthSpec::default(), &s, &McSettings::new(10, 1)).unwrap();
        assert_eq!(CsvRow::HEADER.len(), 16);
        let f = rows[0].fields();
        assert_eq!(f.len(), 16);
        assert!(f[12].is_empty() && f[13].is_empty() && f[14].is_empty() && f[15].is_empty());
        assert!(!f[11].is_empty());
    }

    #[test]
    fn invalid_point_names_field() {
        let s = SweepSpec::new(Axis::CellSideC1, 10.0, 40.0, 10.0, vec![Mode::ClosedForm]).unwrap();
        let err = run_sweep(&SystemConfig::default(), &LengthSpec::default(), &s, &McSettings::new(10, 1)).unwrap_err();
        assert!(err.to_string().contains("geometry.cell"), "{err}");
    }
}
