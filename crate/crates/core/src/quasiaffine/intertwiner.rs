use serde::Serialize;

use crate::error::{Error, Result};
use crate::jordan::compression_matrix;
use crate::jordan::RANK_TOL;
use crate::linalg::{complement_basis, op_norm, singular_values, CMat};
use crate::subspace::{image_closure_into, principal_distance, SubspaceFrame};

/// The map `A = P_{M_2^⊥} X|M_1^⊥` between compressions.
#[derive(Debug, Clone, Serialize)]
pub struct CompressionIntertwiner {
    #[serde(skip)]
    pub matrix: CMat,
    /// `||A C_1 - C_2 A||` for the compressions `C_1`, `C_2`.
    pub residual: f64,
    /// `A` has full row rank, i.e. `ker A^* = 0`.
    pub full_row_rank: bool,
}

/// Builds the induced intertwiner between compressions from an `X` with
/// `X T_1 = T_2 X` mapping `M_1` densely onto `M_2`.
pub fn compression_intertwiner(m1: &SubspaceFrame, m2: &SubspaceFrame, x: &CMat) -> Result<CompressionIntertwiner> {
    let (t1, t2) = (m1.ambient().operator(), m2.ambient().operator());
    if x.nrows() != t2.nrows() || x.ncols() != t1.ncols() {
        return Err(Error::DimensionMismatch { expected: t2.nrows(), found: x.nrows() });
    }
    let scale = op_norm(x).max(1.0);
    let intertwine = op_norm(&(x * t1 - t2 * x));
    if intertwine > 1e-9 * scale {
        return Err(Error::PreconditionViolated(format!("X does not intertwine (residual {intertwine:e})")));
    }
    let image = image_closure_into(x, m1, m2.ambient())?;
    let distance = principal_distance(&image, m2)?;
    if distance > 1e-6 {
        return Err(Error::PreconditionViolated(format!(
            "closure of X M_1 differs from M_2 (distance {distance:e})"
        )));
    }

    let q1 = complement_basis(m1.frame());
    let q2 = complement_basis(m2.frame());
    let a = q2.adjoint() * x * &q1;
    let c1 = compression_matrix(m1)?;
    let c2 = compression_matrix(m2)?;
    let residual = op_norm(&(&a * &c1 - &c2 * &a));
    let values = singular_values(&a);
    let tol = RANK_TOL * values.first().copied().unwrap_or(0.0).max(1.0);
    let full_row_rank = values.iter().filter(|&&s| s > tol).count() == a.nrows();
    Ok(CompressionIntertwiner { matrix: a, residual, full_row_rank })
}
