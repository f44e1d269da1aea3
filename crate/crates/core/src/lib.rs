//! Physical-layer secrecy of two-user NOMA served by a pinching-antenna
//! waveguide with coupling-length power control.
//!
//! Start from [`SystemConfig`], pick [`CouplingLengths`] and evaluate the
//! secrecy outage with [`sop_closed_form`], [`estimate_sop`] or minimise it
//! with [`solve_p1`].

// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod coupling;
pub mod error;
pub mod montecarlo;
pub mod optimizer;
pub mod secrecy;
pub mod sinr;

pub use channel::{PaLayout, Point3};
pub use config::{Geometry, LinkBudget, NomaAllocation, PhysicalConstants, SystemConfig};
pub use coupling::{CouplingLengths, PowerCoefficients, PowerModel};
pub use error::{Error, Result};
pub use montecarlo::{estimate_sop, estimate_sop_fixed_antenna, McEstimate, McSettings};
pub use optimizer::{solve_p1, CaseTag, LengthChoice, OptimizerResult};
pub use secrecy::{sop_closed_form, Asymptote, OmegaSet, SopBreakdown};
