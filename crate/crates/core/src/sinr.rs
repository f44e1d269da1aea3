//! Decoding SINRs of the two-user SIC chain.

use serde::Serialize;

use crate::config::NomaAllocation;
use crate::error::{Error, Result};

/// Linear SINRs, `u{i}_decodes_s{j}` being user `i` decoding stream `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SinrSet {
    pub u1_decodes_s1: f64,
    pub u1_decodes_s2: f64,
    pub u2_decodes_s1: f64,
    pub u2_decodes_s2: f64,
}

/// `rho*` is the per-PA transmit SNR `ρt ε_i`, `g*` the channel gain.
///
/// `s1` is decoded with `s2` as interference; `s2` after `s1` has been
/// cancelled.
pub fn compute_sinrs(
    allocation: &NomaAllocation,
    rho1: f64,
    rho2: f64,
    g1: f64,
    g2: f64,
) -> Result<SinrSet> {
    for (name, v) in [("rho1", rho1), ("rho2", rho2), ("g1", g1), ("g2", g2)] {
        if v.is_nan() {
            return Err(Error::NonFinite(name));
        }
        if v < 0.0 {
            return Err(Error::Negative(name));
        }
    }
    let (first, second) = user_sinrs(allocation, rho1 * g1);
    let (third, fourth) = user_sinrs(allocation, rho2 * g2);
    Ok(SinrSet {
        u1_decodes_s1: first,
        u1_decodes_s2: second,
        u2_decodes_s1: third,
        u2_decodes_s2: fourth,
    })
}

/// `(s1 SINR, s2 SINR)` for one user with received SNR `snr = ρ g`.
#[inline]
pub(crate) fn user_sinrs(allocation: &NomaAllocation, snr: f64) -> (f64, f64) {
    let weak = allocation.alpha2 * snr;
    let strong = if snr.is_infinite() {
        allocation.alpha1 / allocation.alpha2
    } else {
        allocation.alpha1 * snr / (weak + 1.0)
    };
    (strong, weak)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALLOC: NomaAllocation = NomaAllocation { alpha1: 0.99, alpha2: 0.01 };

    #[test]
    fn direct_substitution() {
        let s = compute_sinrs(&ALLOC, 100.0, 1.0, 1.0, 1.0).unwrap();
        assert!((s.u1_decodes_s1 - 49.5).abs() < 1e-12);
        assert!((s.u1_decodes_s2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dead_channel() {
        let s = compute_sinrs(&ALLOC, 100.0, 5.0, 0.0, 1.0).unwrap();
        assert_eq!(s.u1_decodes_s1, 0.0);
        assert_eq!(s.u1_decodes_s2, 0.0);
    }

    #[test]
    fn interference_limited_ceiling() {
        let s = compute_sinrs(&ALLOC, 1.0, 1e300, 1.0, 1.0).unwrap();
        assert!((s.u2_decodes_s1 - 99.0).abs() < 1e-9);
        let s = compute_sinrs(&ALLOC, 1.0, f64::INFINITY, 1.0, 1.0).unwrap();
        assert!((s.u2_decodes_s1 - 99.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_negative() {
        assert_eq!(
            compute_sinrs(&ALLOC, -1.0, 1.0, 1.0, 1.0),
            Err(Error::Negative("rho1"))
        );
        assert!(compute_sinrs(&ALLOC, 1.0, 1.0, f64::NAN, 1.0).is_err());
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn strong_stream_increasing_and_bounded(x in 0.0f64..1e8, dx in 1e-3f64..1e3) {
            let (a, _) = user_sinrs(&ALLOC, x);
            let (b, _) = user_sinrs(&ALLOC, x + dx);
            prop_assert!(b > a);
            prop_assert!(b < 99.0);
        }

        #[test]
        fn weak_stream_linear(rho in 0.0f64..1e6, g in 0.0f64..10.0, k in 0.1f64..10.0) {
            let s = compute_sinrs(&ALLOC, rho, rho, g, g).unwrap();
            let t = compute_sinrs(&ALLOC, rho * k, rho, g, g).unwrap();
            prop_assert!((t.u1_decodes_s2 - k * s.u1_decodes_s2).abs() <= 1e-9 * t.u1_decodes_s2.max(1.0));
            prop_assert!((s.u2_decodes_s2 - ALLOC.alpha2 * rho * g).abs() <= 1e-12 * s.u2_decodes_s2.max(1.0));
        }

        #[test]
        fn swapping_users_swaps_entries(r1 in 0.0f64..1e6, r2 in 0.0f64..1e6, g1 in 0.0f64..1.0, g2 in 0.0f64..1.0) {
            let a = compute_sinrs(&ALLOC, r1, r2, g1, g2).unwrap();
            let b = compute_sinrs(&ALLOC, r2, r1, g2, g1).unwrap();
            prop_assert_eq!(a.u1_decodes_s1, b.u2_decodes_s1);
            prop_assert_eq!(a.u1_decodes_s2, b.u2_decodes_s2);
            prop_assert_eq!(a.u2_decodes_s1, b.u1_decodes_s1);
            prop_assert_eq!(a.u2_decodes_s2, b.u1_decodes_s2);
        }
    }
}
