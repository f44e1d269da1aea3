//! Coupled-mode power splitting between the two PAs.
//!
//! PA-1 sits nearer the feed and radiates `ε1 = F sin²(κ L1)` of the guided
//! power; PA-2 radiates `ε2 = (1 − ε1) F sin²(κ L2)` of what is left.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest admissible coupling length `π / (2κ)`.
pub fn max_length(kappa: f64) -> f64 {
    FRAC_PI_2 / kappa
}

/// Coupling lengths `(L1, L2)`, each in `(0, π/(2κ)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingLengths {
    l1: f64,
    l2: f64,
}

impl CouplingLengths {
    pub fn new(l1: f64, l2: f64, kappa: f64) -> Result<Self> {
        let max = max_length(kappa);
        for value in [l1, l2] {
            if !value.is_finite() {
                return Err(Error::NonFinite("coupling length"));
            }
            if !(value > 0.0 && value <= max) {
                return Err(Error::LengthOutOfRange { value, max });
            }
        }
        Ok(Self { l1, l2 })
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerCoefficients {
    pub eps1: f64,
    pub eps2: f64,
}

pub fn coefficients(lengths: &CouplingLengths, efficiency: f64, kappa: f64) -> PowerCoefficients {
    coefficients_from_fractions(
        fraction(lengths.l1, kappa),
        fraction(lengths.l2, kappa),
        efficiency,
    )
}

/// `sin²(κ L)`, the coupled fraction before the efficiency factor.
pub fn fraction(length: f64, kappa: f64) -> f64 {
    let s = (kappa * length).sin();
    s * s
}

/// Inverse of [`fraction`] on `[0, 1]`.
pub fn length_for_fraction(fraction: f64, kappa: f64) -> f64 {
    fraction.clamp(0.0, 1.0).sqrt().asin() / kappa
}

/// `(ε1, ε2)` from `r = sin²(κL1)` and `t = sin²(κL2)`.
pub fn coefficients_from_fractions(r: f64, t: f64, efficiency: f64) -> PowerCoefficients {
    let eps1 = efficiency * r;
    PowerCoefficients {
        eps1,
        eps2: (1.0 - eps1) * efficiency * t,
    }
}

/// How the two PAs split the guided power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PowerModel {
    /// Both PAs radiate the same fraction `target_eps ≤ 0.5`.
    Equal { target_eps: f64 },
    /// Both PAs share one coupling length.
    Proportional { shared_length: f64 },
    /// Free choice of both lengths.
    Flexible(CouplingLengths),
}

pub fn lengths_for_model(model: &PowerModel, efficiency: f64, kappa: f64) -> Result<CouplingLengths> {
    match *model {
        PowerModel::Equal { target_eps } => {
            if !(target_eps > 0.0 && target_eps <= 0.5) {
                return Err(Error::UnreachableSplit(target_eps));
            }
            let r = target_eps / efficiency;
            let t = target_eps / (efficiency * (1.0 - target_eps));
            if r > 1.0 || t > 1.0 {
                return Err(Error::UnreachableSplit(target_eps));
            }
            CouplingLengths::new(length_for_fraction(r, kappa), length_for_fraction(t, kappa), kappa)
        }
        PowerModel::Proportional { shared_length } => {
            if !(shared_length > 0.0 && shared_length <= max_length(kappa)) {
                return Err(Error::InvalidSharedLength(shared_length));
            }
            CouplingLengths::new(shared_length, shared_length, kappa)
        }
        PowerModel::Flexible(lengths) => Ok(lengths),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const KAPPA: f64 = 100.0;

    fn eps(l1: f64, l2: f64) -> PowerCoefficients {
        coefficients(&CouplingLengths::new(l1, l2, KAPPA).unwrap(), 1.0, KAPPA)
    }

    #[test]
    fn full_coupling_starves_second_pa() {
        let lmax = max_length(KAPPA);
        let e = eps(lmax, 0.3 * lmax);
        assert!((e.eps1 - 1.0).abs() < 1e-15);
        assert!(e.eps2.abs() < 1e-15);
    }

    #[test]
    fn equal_and_proportional_splits() {
        let e = eps(PI / (4.0 * KAPPA), PI / (2.0 * KAPPA));
        assert!((e.eps1 - 0.5).abs() < 1e-15 && (e.eps2 - 0.5).abs() < 1e-15);
        let p = eps(PI / (4.0 * KAPPA), PI / (4.0 * KAPPA));
        assert!((p.eps1 - 0.5).abs() < 1e-15 && (p.eps2 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn length_bounds() {
        assert!(CouplingLengths::new(0.0, 0.01, KAPPA).is_err());
        assert!(CouplingLengths::new(0.01, max_length(KAPPA), KAPPA).is_ok());
        assert!(CouplingLengths::new(0.01, max_length(KAPPA) * 1.0001, KAPPA).is_err());
        assert!(CouplingLengths::new(f64::NAN, 0.01, KAPPA).is_err());
    }

    #[test]
    fn model_lengths() {
        let eq = lengths_for_model(&PowerModel::Equal { target_eps: 0.5 }, 1.0, KAPPA).unwrap();
        assert!((eq.l1() - PI / (4.0 * KAPPA)).abs() < 1e-15);
        assert!((eq.l2() - PI / (2.0 * KAPPA)).abs() < 1e-15);

        let pr = lengths_for_model(
            &PowerModel::Proportional { shared_length: PI / (4.0 * KAPPA) },
            1.0,
            KAPPA,
        )
        .unwrap();
        let e = coefficients(&pr, 1.0, KAPPA);
        assert!((e.eps1 - 0.5).abs() < 1e-15 && (e.eps2 - 0.25).abs() < 1e-15);

        assert!(lengths_for_model(&PowerModel::Equal { target_eps: 0.6 }, 1.0, KAPPA).is_err());
        // 0.45 / (0.8 · 0.55) > 1
        assert!(lengths_for_model(&PowerModel::Equal { target_eps: 0.45 }, 0.8, KAPPA).is_err());
        assert!(lengths_for_model(
            &PowerModel::Proportional { shared_length: 0.02 },
            1.0,
            KAPPA
        )
        .is_err());
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn sum_never_exceeds_one(u in 1e-6f64..1.0, v in 1e-6f64..1.0, f in 1e-3f64..=1.0) {
            let lmax = max_length(KAPPA);
            let e = coefficients(&CouplingLengths::new(u * lmax, v * lmax, KAPPA).unwrap(), f, KAPPA);
            prop_assert!(e.eps1 >= 0.0 && e.eps1 <= 1.0);
            prop_assert!(e.eps2 >= 0.0 && e.eps2 <= 1.0);
            prop_assert!(e.eps1 + e.eps2 <= 1.0 + 1e-15);
        }

        #[test]
        fn monotone_in_lengths(
            u in 1e-4f64..0.99, v in 1e-4f64..0.99, du in 1e-3f64..0.01, f in 1e-2f64..=1.0,
        ) {
            let lmax = max_length(KAPPA);
            let base = coefficients(&CouplingLengths::new(u * lmax, v * lmax, KAPPA).unwrap(), f, KAPPA);
            let more_l1 = coefficients(&CouplingLengths::new((u + du) * lmax, v * lmax, KAPPA).unwrap(), f, KAPPA);
            let more_l2 = coefficients(&CouplingLengths::new(u * lmax, (v + du) * lmax, KAPPA).unwrap(), f, KAPPA);
            prop_assert!(more_l1.eps1 > base.eps1);
            prop_assert!(more_l1.eps2 < base.eps2);
            prop_assert!(more_l2.eps2 > base.eps2);
            prop_assert_eq!(more_l2.eps1, base.eps1);
        }

        #[test]
        fn equal_model_round_trip(e in 1e-3f64..=0.5) {
            let l = lengths_for_model(&PowerModel::Equal { target_eps: e }, 1.0, KAPPA).unwrap();
            let c = coefficients(&l, 1.0, KAPPA);
            prop_assert!((c.eps1 - e).abs() < 1e-12);
            prop_assert!((c.eps2 - e).abs() < 1e-12);
        }
    }
}
