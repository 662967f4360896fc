//! Jordan models of restrictions and compressions of `T_N`.
//!
//! Block sizes at each zero `a` of the reference function are read off the
//! rank sequence `rank((A - aI)^k)`; eigenvalue locations always come from
//! the reference zeros, never from a computed spectrum.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inner::{InnerFunction, Zero};
use crate::linalg::{complement_basis, identity, op_norm, singular_values, CMat, C64};
use crate::model::functional_calculus;
use crate::subspace::{AmbientSpace, SubspaceFrame};

/// Precondition gate on `||theta_ref(A)||`.
pub const ANNIHILATION_TOL: f64 = 1e-8;
/// Singular values below `RANK_TOL * max(1, ||M||)` count as zero.
pub const RANK_TOL: f64 = 1e-8;
/// Minimum ratio between the singular values bracketing a rank threshold.
pub const MIN_RANK_GAP: f64 = 1e2;

/// A divisibility chain `phi_0, phi_1, ...` with `phi_{n+1} | phi_n`.
/// Trailing constant entries are trimmed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "JordanModelRepr", into = "JordanModelRepr")]
pub struct JordanModel {
    parts: Vec<InnerFunction>,
}

#[derive(Serialize, Deserialize)]
struct JordanModelRepr {
    parts: Vec<InnerFunction>,
}

impl TryFrom<JordanModelRepr> for JordanModel {
    type Error = Error;

    fn try_from(repr: JordanModelRepr) -> Result<Self> {
        JordanModel::new(repr.parts)
    }
}

impl From<JordanModel> for JordanModelRepr {
    fn from(m: JordanModel) -> Self {
        JordanModelRepr { parts: m.parts }
    }
}

impl JordanModel {
    pub fn new(mut parts: Vec<InnerFunction>) -> Result<Self> {
        while parts.last().is_some_and(InnerFunction::is_one) {
            parts.pop();
        }
        for (n, pair) in parts.windows(2).enumerate() {
            if !pair[1].divides(&pair[0]) {
                return Err(Error::NotAChain { position: n + 1 });
            }
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds the model from block-size partitions at each zero.
    pub fn from_partitions(partitions: &[(C64, Vec<u32>)]) -> Self {
        let len = partitions.iter().map(|(_, p)| p.len()).max().unwrap_or(0);
        let parts = (0..len)
            .map(|n| {
                InnerFunction::new(
                    partitions
                        .iter()
                        .filter_map(|(a, p)| p.get(n).filter(|&&s| s > 0).map(|&s| (*a, s))),
                )
                .expect("zeros come from a valid inner function")
            })
            .collect();
        Self::new(parts).expect("sorted partitions give a chain")
    }

    pub fn parts(&self) -> &[InnerFunction] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `phi_n`, which is the constant 1 past the end.
    pub fn get(&self, n: usize) -> InnerFunction {
        self.parts.get(n).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> u32 {
        self.parts.iter().map(InnerFunction::degree).sum()
    }

    /// Termwise divisibility `self_n | other_n` for all `n`, the criterion for
    /// injecting the operator modelled by `self` into the one modelled by `other`.
    pub fn injects_into(&self, other: &JordanModel) -> bool {
        self.parts.iter().enumerate().all(|(n, p)| p.divides(&other.get(n)))
    }

    /// First index where termwise divisibility fails.
    pub fn first_injection_failure(&self, other: &JordanModel) -> Option<usize> {
        self.parts.iter().enumerate().position(|(n, p)| !p.divides(&other.get(n)))
    }
}

impl fmt::Display for JordanModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Number of blocks of size `>= k` at a zero, for `k = 1..=mult`.
fn block_counts(a: &CMat, point: C64, mult: u32) -> Result<Vec<usize>> {
    let n = a.nrows();
    let shifted = a - identity(n) * point;
    let mut power = identity(n);
    let mut prev_rank = n;
    let mut counts = Vec::with_capacity(mult as usize);
    for _ in 0..mult {
        if prev_rank == 0 {
            counts.push(0);
            continue;
        }
        power = &power * &shifted;
        let values = singular_values(&power);
        let tol = RANK_TOL * values.first().copied().unwrap_or(0.0).max(1.0);
        let rank = values.iter().take_while(|&&s| s > tol).count();
        if rank > 0 && rank < values.len() && values[rank] > 0.0 {
            let ratio = values[rank - 1] / values[rank];
            if ratio < MIN_RANK_GAP {
                return Err(Error::IllConditioned { ratio });
            }
        }
        counts.push(prev_rank.saturating_sub(rank));
        prev_rank = rank;
    }
    Ok(counts)
}

/// Conjugate partition: block sizes in non-increasing order.
fn sizes_from_counts(counts: &[usize]) -> Vec<u32> {
    let blocks = counts.first().copied().unwrap_or(0);
    (0..blocks)
        .map(|i| counts.iter().filter(|&&c| c > i).count() as u32)
        .collect()
}

fn check_annihilated(a: &CMat, theta_ref: &InnerFunction) -> Result<()> {
    let residual = op_norm(&functional_calculus(a, theta_ref)?);
    if residual > ANNIHILATION_TOL {
        return Err(Error::NotAnnihilated { residual });
    }
    Ok(())
}

/// Jordan block partitions at each zero of `theta_ref`.
pub fn partitions(a: &CMat, theta_ref: &InnerFunction) -> Result<Vec<(C64, Vec<u32>)>> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    check_annihilated(a, theta_ref)?;
    theta_ref
        .zeros()
        .iter()
        .map(|&Zero { point, mult }| Ok((point, sizes_from_counts(&block_counts(a, point, mult)?))))
        .collect()
}

/// Jordan model of a matrix annihilated by `theta_ref`.
pub fn jordan_model_of(a: &CMat, theta_ref: &InnerFunction) -> Result<JordanModel> {
    Ok(JordanModel::from_partitions(&partitions(a, theta_ref)?))
}

/// Minimal function: at each zero, the exponent where the rank sequence of
/// `(A - aI)^k` becomes stationary.
pub fn minimal_function(a: &CMat, theta_ref: &InnerFunction) -> Result<InnerFunction> {
    let parts = partitions(a, theta_ref)?;
    InnerFunction::new(
        parts
            .iter()
            .filter_map(|(point, sizes)| sizes.first().map(|&s| (*point, s))),
    )
}

fn require_invariant(m: &SubspaceFrame) -> Result<()> {
    let (ok, residual) = m.is_invariant();
    if ok {
        Ok(())
    } else {
        Err(Error::NotInvariant { residual })
    }
}

/// Matrix of `T|M` in frame coordinates.
pub fn restriction_matrix(m: &SubspaceFrame) -> Result<CMat> {
    require_invariant(m)?;
    let p = m.frame();
    Ok(p.adjoint() * m.ambient().operator() * p)
}

/// Matrix of the compression `P_{M^⊥} T|M^⊥` in complement-frame coordinates.
pub fn compression_matrix(m: &SubspaceFrame) -> Result<CMat> {
    require_invariant(m)?;
    let q = complement_basis(m.frame());
    Ok(q.adjoint() * m.ambient().operator() * q)
}

/// Restriction and compression Jordan models of an invariant subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanData {
    pub restriction: JordanModel,
    pub compression: JordanModel,
}

pub fn jordan_data(m: &SubspaceFrame) -> Result<JordanData> {
    let theta = m.ambient().theta();
    Ok(JordanData {
        restriction: jordan_model_of(&restriction_matrix(m)?, theta)?,
        compression: jordan_model_of(&compression_matrix(m)?, theta)?,
    })
}

/// Outcome of the check `theta | phi_m psi_n` for one index pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub m: usize,
    pub n: usize,
    pub holds: bool,
}

/// Records `theta | phi_m psi_n` for every in-range pair.
pub fn divisibility_table(theta: &InnerFunction, phi: &JordanModel, psi: &JordanModel) -> Vec<PairCheck> {
    let mut out = Vec::with_capacity(phi.len() * psi.len());
    for m in 0..phi.len() {
        for n in 0..psi.len() {
            let holds = theta.divides(&phi.get(m).mul(&psi.get(n)));
            out.push(PairCheck { m, n, holds });
        }
    }
    out
}

/// The interleaved sequence `gamma_{2k} = theta/phi_k`, `gamma_{2k+1} = psi_k`
/// over `interleave` slots, padded with `theta` (zero summands) up to `copies`.
pub fn canonical_gammas(
    theta: &InnerFunction,
    phi: &JordanModel,
    psi: &JordanModel,
    interleave: usize,
    copies: usize,
) -> Result<Vec<InnerFunction>> {
    if interleave > copies {
        return Err(Error::ModelTooLong { needed: interleave, available: copies });
    }
    for f in phi.parts().iter().chain(psi.parts()) {
        if !f.divides(theta) {
            return Err(Error::NotADivisor { divisor: f.to_string(), dividend: theta.to_string() });
        }
    }
    for check in divisibility_table(theta, phi, psi) {
        if !check.holds {
            log::warn!(
                "theta does not divide phi_{} psi_{}; canonical subspace built anyway",
                check.m,
                check.n
            );
        }
    }
    (0..copies)
        .map(|n| {
            if n >= interleave {
                Ok(theta.clone())
            } else if n % 2 == 0 {
                theta.quotient(&phi.get(n / 2))
            } else {
                Ok(psi.get((n - 1) / 2))
            }
        })
        .collect()
}

/// Canonical subspace `⊕_n (gamma_n H^2 ⊖ theta H^2)` for the given models,
/// interleaved over `2 max(len phi, len psi)` copies.
pub fn canonical_subspace(
    ambient: &std::sync::Arc<AmbientSpace>,
    phi: &JordanModel,
    psi: &JordanModel,
) -> Result<SubspaceFrame> {
    let interleave = 2 * phi.len().max(psi.len());
    canonical_subspace_with_len(ambient, phi, psi, interleave)
}

/// As [`canonical_subspace`] with an explicit interleave length.
pub fn canonical_subspace_with_len(
    ambient: &std::sync::Arc<AmbientSpace>,
    phi: &JordanModel,
    psi: &JordanModel,
    interleave: usize,
) -> Result<SubspaceFrame> {
    let gammas = canonical_gammas(ambient.theta(), phi, psi, interleave, ambient.copies())?;
    SubspaceFrame::direct_sum(ambient, &gammas)
}
