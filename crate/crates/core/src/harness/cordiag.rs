//! Orbit verdicts for `T = ⊕_{n<N} T_0` with `T_0 = S S(theta) S^{-1}`,
//! compared against the uniform Jordan ambient through `B = ⊕ S`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::jordan::{canonical_subspace_with_len, jordan_data, JordanData};
use crate::linalg::{repeat_diag, singular_values, CMat};
use crate::quasiaffine::build_y_main;
use crate::subspace::{image_closure_into, principal_distance, AmbientSpace, SubspaceFrame};

use super::random::{random_invariant_subspace, random_orbit_pair, random_similarity};
use super::verify::{verdict_for, verify_orbit, OrbitModels, Verdict, VerifyOptions};

/// Similarities with a larger condition number are rejected.
pub const MAX_SIMILARITY_CONDITION: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CordiagPair {
    pub uniform_verdict: Verdict,
    pub conjugated_verdict: Verdict,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CordiagReport {
    pub similarity_condition: f64,
    pub pairs: Vec<CordiagPair>,
    pub disagreements: usize,
}

/// The ambient `⊕_{n<N} S S(theta) S^{-1}` and the intertwiner `⊕ S`.
pub struct ConjugatedAmbient {
    pub uniform: Arc<AmbientSpace>,
    pub conjugated: Arc<AmbientSpace>,
    pub b: CMat,
    pub b_inv: CMat,
}

impl ConjugatedAmbient {
    pub fn new(theta: &InnerFunction, similarity: &CMat, copies: usize) -> Result<Self> {
        let uniform = AmbientSpace::new(theta.clone(), copies)?;
        let d = uniform.block_dim();
        if similarity.shape() != (d, d) {
            return Err(Error::DimensionMismatch { expected: d, found: similarity.nrows() });
        }
        let sv = singular_values(similarity);
        let condition = if sv[d - 1] > 0.0 { sv[0] / sv[d - 1] } else { f64::INFINITY };
        if condition.is_nan() || condition > MAX_SIMILARITY_CONDITION {
            return Err(Error::IllConditioned { ratio: condition });
        }
        let inverse = similarity.clone().try_inverse().ok_or(Error::IllConditioned { ratio: condition })?;
        let block = similarity * uniform.block() * &inverse;
        let conjugated = AmbientSpace::from_block(theta.clone(), block, copies);
        Ok(Self { b: repeat_diag(similarity, copies), b_inv: repeat_diag(&inverse, copies), uniform, conjugated })
    }

    /// `B M` as a subspace of the conjugated ambient.
    pub fn transport(&self, m: &SubspaceFrame) -> Result<SubspaceFrame> {
        image_closure_into(&self.b, m, &self.conjugated)
    }
}

/// Verdict for two invariant subspaces of the conjugated ambient, computed
/// from their own Jordan data and the transported quasiaffinity `B Y B^{-1}`
/// acting on the transported canonical subspaces.
pub fn conjugated_verdict(
    theta: &InnerFunction,
    similarity: &CMat,
    m1: &SubspaceFrame,
    m2: &SubspaceFrame,
    options: &VerifyOptions,
) -> Result<Verdict> {
    let JordanData { restriction: phi1, compression: psi } = jordan_data(m1)?;
    let JordanData { restriction: phi2, compression: tau } = jordan_data(m2)?;
    let models = OrbitModels { restriction1: phi1, compression1: psi, restriction2: phi2, compression2: tau };
    let gates = models.restriction1 == models.restriction2 && models.compression2.injects_into(&models.compression1);
    if !gates {
        return Ok(Verdict::NoOrbit);
    }
    let (phi, psi, tau) = (&models.restriction1, &models.compression1, &models.compression2);
    let mut curve = Vec::new();
    for &copies in &options.sweep {
        let interleave = 2 * phi.len().max(psi.len()).max(tau.len());
        if copies < interleave {
            continue;
        }
        let amb = ConjugatedAmbient::new(theta, similarity, copies)?;
        let record = build_y_main(&amb.uniform, phi, psi, tau, &options.schedule)?;
        let y = &amb.b * &record.record.matrix * &amb.b_inv;
        let c1 = amb.transport(&canonical_subspace_with_len(&amb.uniform, phi, psi, record.interleave)?)?;
        let c2 = amb.transport(&canonical_subspace_with_len(&amb.uniform, phi, tau, record.interleave)?)?;
        let image = image_closure_into(&y, &c1, &amb.conjugated)?;
        curve.push((copies, principal_distance(&image, &c2)?));
    }
    Ok(verdict_for(true, &curve, options.gate))
}

/// Runs `pairs` random subspace pairs (alternating same-orbit pairs and
/// independent pairs) through both pipelines.
pub fn cordiag_demo(
    theta: &InnerFunction,
    similarity: Option<&CMat>,
    copies: usize,
    pairs: usize,
    seed: u64,
    options: &VerifyOptions,
) -> Result<CordiagReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform = AmbientSpace::new(theta.clone(), copies)?;
    let d = uniform.block_dim();
    let similarity = match similarity {
        Some(s) => s.clone(),
        None => random_similarity(&mut rng, d, 10.0),
    };
    let amb = ConjugatedAmbient::new(theta, &similarity, copies)?;
    let sv = singular_values(&similarity);
    let mut out = Vec::with_capacity(pairs);
    for k in 0..pairs {
        let (m1, m2) = if k % 2 == 0 {
            random_orbit_pair(&mut rng, &uniform)?
        } else {
            (random_invariant_subspace(&mut rng, &uniform)?, random_invariant_subspace(&mut rng, &uniform)?)
        };
        let uniform_verdict = verify_orbit(&m1, &m2, options)?.verdict;
        let conjugated = conjugated_verdict(theta, &similarity, &amb.transport(&m1)?, &amb.transport(&m2)?, options)?;
        out.push(CordiagPair { uniform_verdict, conjugated_verdict: conjugated, agree: uniform_verdict == conjugated });
    }
    let disagreements = out.iter().filter(|p| !p.agree).count();
    Ok(CordiagReport { similarity_condition: sv[0] / sv[sv.len() - 1], pairs: out, disagreements })
}
