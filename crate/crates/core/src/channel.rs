//! PA placement and free-space channel gains.
//!
//! The secrecy pipeline only needs [`gain_simplified`]. [`channel_vector`]
//! keeps both PAs' complex contributions so the single-PA approximation can
//! be measured.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{free_space_factor, PhysicalConstants};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance_sq(&self, other: &Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dx * dx + dy * dy + dz * dz
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        self.distance_sq(other).sqrt()
    }
}

/// Both PAs and the feed point, all on the waveguide (`y = 0`, `z = d`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaLayout {
    pub pa1: Point3,
    pub pa2: Point3,
    pub bs: Point3,
}

impl PaLayout {
    /// Pinches one PA over each user; feed point at `(bs_x, 0, height)`.
    pub fn pinched(u1: &Point3, u2: &Point3, height: f64, bs_x: f64) -> Self {
        Self {
            pa1: place_pa_for_user(u1, height),
            pa2: place_pa_for_user(u2, height),
            bs: Point3::new(bs_x, 0.0, height),
        }
    }
}

/// The PA shares the user's x-coordinate on the waveguide.
pub fn place_pa_for_user(user: &Point3, height: f64) -> Point3 {
    Point3::new(user.x, 0.0, height)
}

/// `η / ‖u − φ‖²`.
pub fn gain_simplified(user: &Point3, pa: &Point3, eta: f64) -> Result<f64> {
    let dist_sq = user.distance_sq(pa);
    if dist_sq == 0.0 {
        return Err(Error::ZeroDistance);
    }
    Ok(eta / dist_sq)
}

/// Complex channel from both PAs to `user`.
///
/// Entry `n` is `√η / r_n · exp(−j(2π r_n / λ + θ_n))` with `r_n` the
/// PA-to-user distance and `θ_n = 2π ‖φ_bs − φ_n‖ / λ_g` the in-guide phase.
pub fn channel_vector(
    user: &Point3,
    layout: &PaLayout,
    constants: &PhysicalConstants,
) -> Result<[Complex64; 2]> {
    let eta = free_space_factor(constants);
    let lambda = constants.wavelength_m();
    let lambda_g = constants.guided_wavelength_m();
    let entry = |pa: &Point3| -> Result<Complex64> {
        let r = user.distance(pa);
        if r == 0.0 {
            return Err(Error::ZeroDistance);
        }
        let theta = guide_phase(layout.bs.distance(pa), lambda_g);
        let phase = (TAU * r / lambda + theta).rem_euclid(TAU);
        Ok(Complex64::from_polar(eta.sqrt() / r, -phase))
    };
    Ok([entry(&layout.pa1)?, entry(&layout.pa2)?])
}

/// In-guide phase `2π s / λ_g`, reduced to `[0, 2π)`.
pub fn guide_phase(in_guide_distance: f64, guided_wavelength: f64) -> f64 {
    (TAU * in_guide_distance / guided_wavelength).rem_euclid(TAU)
}
