//! Explicit quasiaffinities intertwining truncated uniform Jordan operators.
//!
//! * [`solve_norm_preserving`]: norm-preserving preimages under `omega(S(theta))`;
//! * [`build_x`]: the weighted operator `X` on `H(theta) ⊕ (⊕_n H(theta))`;
//! * [`density_sweep`]: approximants showing `X` has dense range on the target;
//! * [`build_y_main`]: the global quasiaffinity assembled through a pairing;
//! * [`compression_intertwiner`]: the induced map between compressions.

mod density;
mod global;
mod intertwiner;
mod schedule;
mod solver;
mod weighted;

use serde::Serialize;

use crate::inner::InnerFunction;
use crate::linalg::{op_norm, CMat, CVec};

pub use density::{density_sweep, DensityStep, DensityTarget};
pub use global::{build_y_main, cantor_pair, cantor_unpair, MainRecord, PairAssignment};
pub use intertwiner::{compression_intertwiner, CompressionIntertwiner};
pub use schedule::{ScheduleKind, ScheduleSpec, WeightSchedule};
pub use solver::solve_norm_preserving;
pub use weighted::build_x;

/// Gate on solver residuals and subspace memberships.
pub const SOLVE_TOL: f64 = 1e-9;
/// Relative gate on intertwining residuals of constructed operators.
pub const INTERTWINE_TOL: f64 = 1e-10;

/// A constructed operator together with its diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct QuasiaffinityRecord {
    #[serde(skip)]
    pub matrix: CMat,
    pub omega_list: Vec<InnerFunction>,
    pub schedule: WeightSchedule,
    pub intertwining_residual: f64,
    pub sigma_min: f64,
    pub norm: f64,
}

impl QuasiaffinityRecord {
    /// `intertwining_residual <= 1e-10 max(1, ||matrix||)` and `sigma_min > 0`.
    pub fn is_valid(&self) -> bool {
        self.intertwining_residual <= INTERTWINE_TOL * self.norm.max(1.0) && self.sigma_min > 0.0
    }
}

/// `||X T - T X||`.
pub fn intertwining_residual(x: &CMat, t: &CMat) -> f64 {
    op_norm(&(x * t - t * x))
}

pub(crate) fn set_block(v: &mut CVec, k: usize, d: usize, value: &CVec) {
    v.rows_mut(k * d, d).copy_from(value);
}
