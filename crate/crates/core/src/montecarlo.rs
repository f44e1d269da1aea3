//! Monte Carlo estimate of the secrecy outage probability.
//!
//! Users are dropped uniformly in their square cells and the four SINR
//! tests are evaluated directly, independent of the ω algebra used by the
//! closed form.
//!
//! Samples are grouped into fixed-size blocks. Block `b` draws from a
//! ChaCha8 stream keyed by `(seed, b)`, so the estimate depends only on
//! `(seed, samples)`: neither the chunk count nor the thread schedule can
//! change it.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{gain_simplified, place_pa_for_user, Point3};
use crate::config::{Geometry, SystemConfig};
use crate::coupling::{coefficients, CouplingLengths};
use crate::secrecy::omegas;
use crate::sinr::compute_sinrs;

/// Samples per RNG substream.
pub const BLOCK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McSettings {
    pub samples: u64,
    pub seed: u64,
    /// Work partitions; each is handed to the thread pool as one task.
    pub chunks: usize,
}

impl McSettings {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples: samples.max(1),
            seed,
            chunks: rayon::current_num_threads().max(1),
        }
    }

    pub fn with_chunks(mut self, chunks: usize) -> Self {
        self.chunks = chunks.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub sop_hat: f64,
    pub std_err: f64,
    pub samples_used: u64,
}

impl McEstimate {
    fn from_counts(successes: u64, samples: u64) -> Self {
        let sop_hat = 1.0 - successes as f64 / samples as f64;
        Self {
            sop_hat,
            std_err: (sop_hat * (1.0 - sop_hat) / samples as f64).sqrt(),
            samples_used: samples,
        }
    }
}

/// Random stream for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// One uniform drop per cell: U1 around `(−D1, 0, 0)`, U2 around `(D2, 0, 0)`.
pub fn sample_positions<R: Rng + ?Sized>(rng: &mut R, geometry: &Geometry) -> (Point3, Point3) {
    let s1 = geometry.cell1_side();
    let s2 = geometry.cell2_side();
    let u1 = Point3::new(
        -geometry.cell1_center_offset_m + (rng.random::<f64>() - 0.5) * s1,
        (rng.random::<f64>() - 0.5) * s1,
        0.0,
    );
    let u2 = Point3::new(
        geometry.cell2_center_offset_m + (rng.random::<f64>() - 0.5) * s2,
        (rng.random::<f64>() - 0.5) * s2,
        0.0,
    );
    (u1, u2)
}

/// Thresholds and powers shared by every sample of one run.
#[derive(Debug, Clone, Copy)]
struct EventParams {
    config: SystemConfig,
    eta: f64,
    rho1: f64,
    rho2: f64,
    gamma1: f64,
    gamma2: f64,
}

impl EventParams {
    fn new(config: &SystemConfig, eps1: f64, eps2: f64) -> Self {
        let rho_t = config.rho_t();
        Self {
            config: *config,
            eta: config.eta(),
            rho1: rho_t * eps1,
            rho2: rho_t * eps2,
            gamma1: config.gamma1(),
            gamma2: config.gamma2(),
        }
    }

    fn success(&self, g1: f64, g2: f64) -> bool {
        let s = match compute_sinrs(&self.config.allocation, self.rho1, self.rho2, g1, g2) {
            Ok(s) => s,
            Err(_) => return false,
        };
        s.u1_decodes_s1 >= self.gamma1
            && s.u1_decodes_s2 < self.gamma2
            && s.u2_decodes_s1 >= self.gamma1
            && s.u2_decodes_s2 >= self.gamma2
    }

    fn pinched_success(&self, u1: &Point3, u2: &Point3) -> bool {
        let d = self.config.height();
        let g1 = gain_simplified(u1, &place_pa_for_user(u1, d), self.eta);
        let g2 = gain_simplified(u2, &place_pa_for_user(u2, d), self.eta);
        match (g1, g2) {
            (Ok(g1), Ok(g2)) => self.success(g1, g2),
            _ => false,
        }
    }

    fn fixed_success(&self, u1: &Point3, u2: &Point3) -> bool {
        let antenna = fixed_antenna_position(&self.config);
        let g1 = gain_simplified(u1, &antenna, self.eta);
        let g2 = gain_simplified(u2, &antenna, self.eta);
        match (g1, g2) {
            (Ok(g1), Ok(g2)) => self.success(g1, g2),
            _ => false,
        }
    }
}

/// Baseline antenna: on the waveguide axis midway between the cells.
pub fn fixed_antenna_position(config: &SystemConfig) -> Point3 {
    Point3::new(0.0, 0.0, config.height())
}

/// `true` when no secrecy outage occurs for this drop: U1 decodes `s1` but
/// not `s2`, U2 decodes `s1` then `s2`.
pub fn secrecy_event(u1: &Point3, u2: &Point3, config: &SystemConfig, lengths: &CouplingLengths) -> bool {
    let eps = coefficients(lengths, config.efficiency(), config.kappa());
    EventParams::new(config, eps.eps1, eps.eps2).pinched_success(u1, u2)
}

/// The same event through the squared-distance thresholds.
pub fn omega_rectangle_event(u1: &Point3, u2: &Point3, config: &SystemConfig, lengths: &CouplingLengths) -> bool {
    let eps = coefficients(lengths, config.efficiency(), config.kappa());
    let o = omegas(config, &eps);
    let y1 = u1.y * u1.y;
    let y2 = u2.y * u2.y;
    o.omega1 < y1 && y1 <= o.omega2 && y2 <= o.min_u2()
}

pub fn estimate_sop(config: &SystemConfig, lengths: &CouplingLengths, settings: &McSettings) -> McEstimate {
    let eps = coefficients(lengths, config.efficiency(), config.kappa());
    let params = EventParams::new(config, eps.eps1, eps.eps2);
    run(settings, &config.geometry, |u1, u2| params.pinched_success(u1, u2))
}

/// Both users served at full `ρt` by one antenna at
/// [`fixed_antenna_position`]; gains now depend on x as well as y.
pub fn estimate_sop_fixed_antenna(config: &SystemConfig, settings: &McSettings) -> McEstimate {
    let params = EventParams::new(config, 1.0, 1.0);
    run(settings, &config.geometry, |u1, u2| params.fixed_success(u1, u2))
}

fn run<F>(settings: &McSettings, geometry: &Geometry, success: F) -> McEstimate
where
    F: Fn(&Point3, &Point3) -> bool + Sync,
{
    let samples = settings.samples.max(1);
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let chunks = (settings.chunks.max(1) as u64).min(blocks);
    let per_chunk = blocks / chunks;
    let extra = blocks % chunks;

    let count_block = |block: u64| -> u64 {
        let start = block * BLOCK_SIZE;
        let n = BLOCK_SIZE.min(samples - start);
        let mut rng = block_rng(settings.seed, block);
        let mut hits = 0u64;
        for _ in 0..n {
            let (u1, u2) = sample_positions(&mut rng, geometry);
            hits += success(&u1, &u2) as u64;
        }
        hits
    };

    let per_chunk_hits: Vec<u64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let first = c * per_chunk + c.min(extra);
            let len = per_chunk + u64::from(c < extra);
            (first..first + len).map(count_block).sum()
        })
        .collect();
    let successes: u64 = per_chunk_hits.iter().sum();
    McEstimate::from_counts(successes, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::NomaAllocation;
    use crate::secrecy::sop_closed_form;
    use std::f64::consts::PI;

    fn cfg_lengths(db: f64, l1: f64, l2: f64) -> (SystemConfig, CouplingLengths) {
        let cfg = SystemConfig::default().with_rho_t_db(db);
        let l = CouplingLengths::new(l1, l2, cfg.kappa()).unwrap();
        (cfg, l)
    }

    #[test]
    fn samples_stay_in_cells() {
        let g = Geometry::default();
        let mut rng = block_rng(7, 0);
        for _ in 0..100_000 {
            let (u1, u2) = sample_positions(&mut rng, &g);
            assert!(u1.y.abs() <= 5.0 && (u1.x + 10.0).abs() <= 5.0);
            assert!(u2.y.abs() <= 5.0 && (u2.x - 10.0).abs() <= 5.0);
            assert_eq!(u1.z, 0.0);
        }
    }

    #[test]
    fn sample_mean_centered() {
        let g = Geometry::default();
        let n = 1_000_000;
        let mut rng = block_rng(11, 0);
        let mut sum = 0.0;
        for _ in 0..n {
            sum += sample_positions(&mut rng, &g).0.y;
        }
        let sigma = 10.0 / (12.0 * n as f64).sqrt();
        assert!((sum / n as f64).abs() < 4.0 * sigma);
    }

    #[test]
    fn same_seed_same_stream() {
        let g = Geometry::default();
        let mut a = block_rng(3, 5);
        let mut b = block_rng(3, 5);
        for _ in 0..1000 {
            assert_eq!(sample_positions(&mut a, &g), sample_positions(&mut b, &g));
        }
        let mut c = block_rng(3, 6);
        assert_ne!(sample_positions(&mut a, &g), sample_positions(&mut c, &g));
    }

    #[test]
    fn centred_users_succeed_in_zero_outage_region() {
        let (cfg, l) = cfg_lengths(22.0, 1e-3, PI / 200.0);
        assert_eq!(sop_closed_form(&cfg, &l).sop, 0.0);
        let u1 = Point3::new(-10.0, 0.0, 0.0);
        let u2 = Point3::new(10.0, 0.0, 0.0);
        assert!(secrecy_event(&u1, &u2, &cfg, &l));
    }

    #[test]
    fn low_alpha_ratio_never_succeeds() {
        let (mut cfg, l) = cfg_lengths(22.0, 1e-3, PI / 200.0);
        cfg.allocation = NomaAllocation { alpha1: 0.9, alpha2: 0.1 };
        let mut rng = block_rng(1, 0);
        for _ in 0..10_000 {
            let (u1, u2) = sample_positions(&mut rng, &cfg.geometry);
            assert!(!secrecy_event(&u1, &u2, &cfg, &l));
        }
    }

    #[test]
    fn sinr_event_matches_omega_rectangle() {
        let mut rng = block_rng(99, 0);
        for (db, l1, l2) in [(20.0, 7.3e-4, PI / 200.0), (29.0, PI / 1400.0, PI / 200.0), (17.0, 1e-3, 1e-2)] {
            let (cfg, l) = cfg_lengths(db, l1, l2);
            for _ in 0..100_000 {
                let (u1, u2) = sample_positions(&mut rng, &cfg.geometry);
                assert_eq!(secrecy_event(&u1, &u2, &cfg, &l), omega_rectangle_event(&u1, &u2, &cfg, &l));
            }
        }
    }

    #[test]
    fn extreme_regions_are_exact() {
        let (cfg, l) = cfg_lengths(22.0, 1e-3, PI / 200.0);
        let est = estimate_sop(&cfg, &l, &McSettings::new(200_000, 5));
        assert_eq!(est.sop_hat, 0.0);
        assert_eq!(est.std_err, 0.0);

        let (cfg, l) = cfg_lengths(40.0, PI / 400.0, PI / 200.0);
        assert_eq!(sop_closed_form(&cfg, &l).sop, 1.0);
        assert_eq!(estimate_sop(&cfg, &l, &McSettings::new(200_000, 5)).sop_hat, 1.0);
    }

    #[test]
    fn agrees_with_closed_form() {
        let (cfg, l) = cfg_lengths(20.0, 7.2556e-4, PI / 200.0);
        let cf = sop_closed_form(&cfg, &l).sop;
        let est = estimate_sop(&cfg, &l, &McSettings::new(1_000_000, 2024));
        assert!((est.sop_hat - cf).abs() <= 3.0 * est.std_err, "{} vs {cf}", est.sop_hat);
    }

    #[test]
    fn chunk_count_does_not_change_estimate() {
        let (cfg, l) = cfg_lengths(20.0, 7.2556e-4, PI / 200.0);
        let base = estimate_sop(&cfg, &l, &McSettings::new(300_001, 17).with_chunks(1));
        for chunks in [2, 3, 7, 64] {
            let e = estimate_sop(&cfg, &l, &McSettings::new(300_001, 17).with_chunks(chunks));
            assert_eq!(e.sop_hat.to_bits(), base.sop_hat.to_bits());
        }
        assert_eq!(base.samples_used, 300_001);
    }

    #[test]
    fn fixed_antenna_symmetric_cells_is_at_least_half() {
        let cfg = SystemConfig::default().with_rho_t_db(25.0);
        let est = estimate_sop_fixed_antenna(&cfg, &McSettings::new(200_000, 3));
        assert!(est.sop_hat >= 0.5, "{}", est.sop_hat);
    }

    #[test]
    fn fixed_antenna_no_power_is_outage() {
        let cfg = SystemConfig::default().with_rho_t_db(-80.0);
        assert_eq!(estimate_sop_fixed_antenna(&cfg, &McSettings::new(50_000, 3)).sop_hat, 1.0);
    }
}
