//! Optimal-length table and the `sop` versus `L1` landscape.

use pinchsec_core::coupling::max_length;
use pinchsec_core::{solve_p1, sop_closed_form, CouplingLengths, SystemConfig};
use rayon::prelude::*;

use crate::csv_out::{sci, Record};
use crate::error::CliError;

/// Step of the simulated `L1` column.
pub const GRID_STEP_M: f64 = 1e-4;
/// Step of the landscape.
pub const LANDSCAPE_STEP_M: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub rho_t_db: f64,
    pub case_tag: &'static str,
    pub l1_theory_lo: f64,
    pub l1_theory_hi: f64,
    pub l1_grid_lo: f64,
    pub l1_grid_hi: f64,
    pub min_sop: f64,
}

impl Record for Table1Row {
    const HEADER: &'static [&'static str] = &[
        "rho_t_db", "case_tag", "l1_theory_lo", "l1_theory_hi", "l1_grid_lo", "l1_grid_hi", "min_sop",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            format!("{}", self.rho_t_db),
            self.case_tag.to_string(),
            sci(self.l1_theory_lo),
            sci(self.l1_theory_hi),
            sci(self.l1_grid_lo),
            sci(self.l1_grid_hi),
            sci(self.min_sop),
        ]
    }
}

/// `k·step` for `k ≥ 1` up to `π/(2κ)`, the end point included.
pub fn l1_axis(kappa: f64, step: f64) -> Vec<f64> {
    let lmax = max_length(kappa);
    let n = (lmax / step).floor() as usize;
    let mut v: Vec<f64> = (1..=n).map(|k| k as f64 * step).filter(|&l| l <= lmax).collect();
    if v.last().is_none_or(|&l| l < lmax) {
        v.push(lmax);
    }
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandscapePoint {
    pub l1: f64,
    pub l2: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub prob_omega1: f64,
    pub prob_omega2: f64,
    pub sop_cf: f64,
}

impl Record for LandscapePoint {
    const HEADER: &'static [&'static str] = &["l1", "l2", "eps1", "eps2", "prob_omega1", "prob_omega2", "sop_cf"];

    fn fields(&self) -> Vec<String> {
        [self.l1, self.l2, self.eps1, self.eps2, self.prob_omega1, self.prob_omega2, self.sop_cf]
            .iter()
            .map(|&x| sci(x))
            .collect()
    }
}

/// Closed-form SOP along `L1` at fixed `L2`.
pub fn landscape(config: &SystemConfig, l2: f64, step: f64) -> Result<Vec<LandscapePoint>, CliError> {
    let kappa = config.kappa();
    l1_axis(kappa, step)
        .into_par_iter()
        .map(|l1| {
            let b = sop_closed_form(config, &CouplingLengths::new(l1, l2, kappa)?);
            Ok(LandscapePoint {
                l1,
                l2,
                eps1: b.coefficients.eps1,
                eps2: b.coefficients.eps2,
                prob_omega1: b.prob_omega1,
                prob_omega2: b.prob_omega2,
                sop_cf: b.sop,
            })
        })
        .collect()
}

/// Grid `L1` at step [`GRID_STEP_M`] with `L2 = π/(2κ)`: the argmin, or the
/// first and last zero when the SOP reaches 0.
fn grid_l1(config: &SystemConfig) -> Result<(f64, f64), CliError> {
    let pts = landscape(config, max_length(config.kappa()), GRID_STEP_M)?;
    let zeros: Vec<f64> = pts.iter().filter(|p| p.sop_cf == 0.0).map(|p| p.l1).collect();
    if let (Some(&lo), Some(&hi)) = (zeros.first(), zeros.last()) {
        return Ok((lo, hi));
    }
    let mut best = &pts[0];
    for p in &pts[1..] {
        if p.sop_cf < best.sop_cf {
            best = p;
        }
    }
    Ok((best.l1, best.l1))
}

pub fn table1(config: &SystemConfig, rows_db: impl IntoIterator<Item = f64>) -> Result<Vec<Table1Row>, CliError> {
    rows_db
        .into_iter()
        .map(|db| {
            let cfg = config.with_rho_t_db(db);
            let r = solve_p1(&cfg);
            let (lo, hi) = r.l1.bounds();
            let (glo, ghi) = grid_l1(&cfg)?;
            Ok(Table1Row {
                rho_t_db: db,
                case_tag: r.case_tag.as_str(),
                l1_theory_lo: lo,
                l1_theory_hi: hi,
                l1_grid_lo: glo,
                l1_grid_hi: ghi,
                min_sop: r.min_sop,
            })
        })
        .collect()
}

/// Rows of the published table.
pub fn default_rows() -> impl Iterator<Item = f64> {
    (17..=23).map(f64::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_includes_end_point() {
        let a = l1_axis(100.0, 1e-5);
        assert_eq!(a.len(), 1571);
        assert_eq!(*a.last().unwrap(), max_length(100.0));
        assert!((a[0] - 1e-5).abs() < 1e-20);
    }

    #[test]
    fn landscape_ends_in_outage() {
        let cfg = SystemConfig::default();
        let pts = landscape(&cfg, max_length(100.0), LANDSCAPE_STEP_M).unwrap();
        assert_eq!(pts.last().unwrap().sop_cf, 1.0);
    }

    #[test]
    fn row_23() {
        let rows = table1(&SystemConfig::default(), [23.0]).unwrap();
        assert_eq!(rows[0].case_tag, "case1");
        assert!((rows[0].l1_theory_lo - 5.13e-4).abs() / 5.13e-4 < 0.01);
        assert_eq!(rows[0].min_sop, 0.0);
    }
}
