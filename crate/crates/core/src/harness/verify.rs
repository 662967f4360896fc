//! Orbit verification: Jordan-data gates followed by a truncation sweep of
//! the global quasiaffinity between canonical subspaces.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::jordan::{canonical_subspace_with_len, jordan_data, JordanData, JordanModel};
use crate::linalg::{complement_basis, identity, nullspace, singular_values, CMat};
use crate::quasiaffine::{build_y_main, compression_intertwiner, ScheduleSpec};
use crate::subspace::{image_closure, principal_distance, AmbientSpace, SubspaceFrame};

use super::random::gaussian;

/// Distances at or below this count as converged when checking that the
/// curve decreases.
pub const DISTANCE_FLOOR: f64 = 1e-10;
/// Largest ambient dimension for the direct commutant check.
pub const DIRECT_CHECK_MAX_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Orbit,
    NoOrbit,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub sweep: Vec<usize>,
    pub gate: f64,
    pub schedule: ScheduleSpec,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { sweep: vec![4, 8, 12, 16], gate: 0.05, schedule: ScheduleSpec::Factorial }
    }
}

/// The Jordan data compared by the gates: restriction `phi` and compression
/// `psi` of `M_1`, restriction and compression `tau` of `M_2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitModels {
    pub restriction1: JordanModel,
    pub compression1: JordanModel,
    pub restriction2: JordanModel,
    pub compression2: JordanModel,
}

/// Consistency check run on the constructed operator at the largest
/// truncation: Jordan data re-derived from the canonical subspaces and the
/// induced compression intertwiner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForwardCheck {
    pub truncation: usize,
    pub restriction_models_equal: bool,
    pub compression_divisibility: bool,
    pub intertwiner_full_row_rank: bool,
    pub intertwiner_residual: f64,
}

impl ForwardCheck {
    pub fn holds(&self) -> bool {
        self.restriction_models_equal && self.compression_divisibility && self.intertwiner_full_row_rank
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub restriction_models_equal: bool,
    pub compression_divisibility: bool,
    pub orbit_constructed: bool,
    pub distance_curve: Vec<(usize, f64)>,
    pub verdict: Verdict,
    pub models: OrbitModels,
    /// Truncations skipped because they cannot hold the interleaved models.
    pub skipped_truncations: Vec<usize>,
    /// Direct decision in the original ambient: does a random element of the
    /// admissible commutant subspace turn out invertible?
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct_orbit: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forward_check: Option<ForwardCheck>,
}

/// `true` when consecutive values decrease strictly, values at or below
/// [`DISTANCE_FLOOR`] counting as converged.
pub fn is_decreasing(values: &[f64]) -> bool {
    values
        .windows(2)
        .all(|w| w[1] < w[0] || (w[0] <= DISTANCE_FLOOR && w[1] <= DISTANCE_FLOOR))
}

/// Verdict rule: orbit iff both gates hold, the last three curve points
/// decrease and the final distance is within the gate.
pub fn verdict_for(gates: bool, curve: &[(usize, f64)], gate: f64) -> Verdict {
    if !gates {
        return Verdict::NoOrbit;
    }
    let values: Vec<f64> = curve.iter().map(|&(_, d)| d).collect();
    let tail = &values[values.len().saturating_sub(3)..];
    match values.last() {
        Some(&last) if last <= gate && is_decreasing(tail) => Verdict::Orbit,
        _ => Verdict::Inconclusive,
    }
}

/// Runs the gates and the truncation sweep on Jordan data alone.
pub fn verify_orbit_models(
    theta: &InnerFunction,
    models: OrbitModels,
    options: &VerifyOptions,
) -> Result<VerifyReport> {
    let restriction_equal = models.restriction1 == models.restriction2;
    let divisibility = models.compression2.injects_into(&models.compression1);
    let mut report = VerifyReport {
        restriction_models_equal: restriction_equal,
        compression_divisibility: divisibility,
        orbit_constructed: false,
        distance_curve: Vec::new(),
        verdict: Verdict::NoOrbit,
        models,
        skipped_truncations: Vec::new(),
        direct_orbit: None,
        forward_check: None,
    };
    if !(restriction_equal && divisibility) {
        return Ok(report);
    }
    let (phi, psi, tau) = (&report.models.restriction1, &report.models.compression1, &report.models.compression2);

    let mut last = None;
    for &copies in &options.sweep {
        let interleave = 2 * phi.len().max(psi.len()).max(tau.len());
        if copies < interleave {
            report.skipped_truncations.push(copies);
            continue;
        }
        let ambient = AmbientSpace::new(theta.clone(), copies)?;
        let record = match build_y_main(&ambient, phi, psi, tau, &options.schedule) {
            Ok(r) => r,
            Err(Error::DivisibilityFailure { .. }) => {
                report.compression_divisibility = false;
                report.verdict = Verdict::NoOrbit;
                return Ok(report);
            }
            Err(e) => return Err(e),
        };
        let m1 = canonical_subspace_with_len(&ambient, phi, psi, record.interleave)?;
        let m2 = canonical_subspace_with_len(&ambient, phi, tau, record.interleave)?;
        let image = image_closure(&record.record.matrix, &m1)?;
        let distance = principal_distance(&image, &m2)?;
        report.distance_curve.push((copies, distance));
        report.orbit_constructed = true;
        last = Some((copies, record.record.matrix, m1, m2, distance));
    }

    if let Some((copies, y, m1, m2, distance)) = last {
        if distance <= 1e-6 {
            report.forward_check = Some(forward_check(copies, &y, &m1, &m2)?);
        }
    }
    report.verdict = verdict_for(true, &report.distance_curve, options.gate);
    Ok(report)
}

fn forward_check(copies: usize, y: &CMat, m1: &SubspaceFrame, m2: &SubspaceFrame) -> Result<ForwardCheck> {
    let d1 = jordan_data(m1)?;
    let d2 = jordan_data(m2)?;
    let a = compression_intertwiner(m1, m2, y)?;
    Ok(ForwardCheck {
        truncation: copies,
        restriction_models_equal: d1.restriction == d2.restriction,
        compression_divisibility: d2.compression.injects_into(&d1.compression),
        intertwiner_full_row_rank: a.full_row_rank,
        intertwiner_residual: a.residual,
    })
}

/// Full verification for two invariant subspaces of the same ambient.
pub fn verify_orbit(m1: &SubspaceFrame, m2: &SubspaceFrame, options: &VerifyOptions) -> Result<VerifyReport> {
    if !m1.ambient().compatible(m2.ambient()) {
        return Err(Error::AmbientMismatch);
    }
    let JordanData { restriction: phi1, compression: psi } = jordan_data(m1)?;
    let JordanData { restriction: phi2, compression: tau } = jordan_data(m2)?;
    let models = OrbitModels { restriction1: phi1, compression1: psi, restriction2: phi2, compression2: tau };
    let mut report = verify_orbit_models(m1.ambient().theta(), models, options)?;
    if m1.ambient().total_dim() <= DIRECT_CHECK_MAX_DIM {
        report.direct_orbit = Some(direct_orbit(m1, m2, 0)?);
    }
    Ok(report)
}

/// Decides in the given (finite) ambient whether an invertible `X` commuting
/// with `T` maps `M_1` onto `M_2`: the admissible `X` form the nullspace of
/// `{XT = TX, K_2 X P_1 = 0}` and a random element of it is invertible iff
/// a generic one is (with probability one).
pub fn direct_orbit(m1: &SubspaceFrame, m2: &SubspaceFrame, seed: u64) -> Result<bool> {
    if !m1.ambient().compatible(m2.ambient()) {
        return Err(Error::AmbientMismatch);
    }
    if m1.dim() != m2.dim() {
        return Ok(false);
    }
    let t = m1.ambient().operator();
    let n = t.nrows();
    let basis = admissible_intertwiners(t, t, m1.frame(), m2.frame());
    if basis.is_empty() {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3 {
        let mut x = CMat::zeros(n, n);
        for b in &basis {
            x += b * gaussian(&mut rng);
        }
        let sv = singular_values(&x);
        if sv[n - 1] > 1e-9 * sv[0] {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Basis of `{X : X T_1 = T_2 X, X M_1 ⊆ M_2}` (column-major vectorization).
pub fn admissible_intertwiners(t1: &CMat, t2: &CMat, p1: &CMat, p2: &CMat) -> Vec<CMat> {
    let (n1, n2) = (t1.nrows(), t2.nrows());
    let k2 = complement_basis(p2).adjoint();
    let commute = t1.transpose().kronecker(&identity(n2)) - identity(n1).kronecker(t2);
    let mapping = p1.transpose().kronecker(&k2);
    let unknowns = n1 * n2;
    let mut system = CMat::zeros(commute.nrows() + mapping.nrows(), unknowns);
    system.view_mut((0, 0), commute.shape()).copy_from(&commute);
    system.view_mut((commute.nrows(), 0), mapping.shape()).copy_from(&mapping);
    nullspace(&system, 1e-9)
        .column_iter()
        .map(|v| CMat::from_iterator(n2, n1, v.iter().copied()))
        .collect()
}

/// Verification on an ambient given by the uniform operator over `theta`
/// with canonical subspaces built from explicit models.
pub fn verify_canonical(
    ambient: &Arc<AmbientSpace>,
    phi: &JordanModel,
    psi: &JordanModel,
    tau: &JordanModel,
    options: &VerifyOptions,
) -> Result<VerifyReport> {
    let len = 2 * phi.len().max(psi.len()).max(tau.len());
    let m1 = canonical_subspace_with_len(ambient, phi, psi, len)?;
    let m2 = canonical_subspace_with_len(ambient, phi, tau, len)?;
    verify_orbit(&m1, &m2, options)
}
