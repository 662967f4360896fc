//! Closed subspaces of `⊕_{n<N} H(theta)` as orthonormal column frames.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::linalg::{
    complement_basis, identity, op_norm, range_basis, repeat_diag, svd_sorted, CMat, CVec, C64,
    RANGE_REL_TOL,
};
use crate::model::ModelSpace;

/// Invariance residual gate for [`SubspaceFrame::is_invariant`].
pub const INVARIANCE_TOL: f64 = 1e-9;

/// The ambient space of `T_N = ⊕_{n<N} B` where `B` is a block operator
/// annihilated by `theta`. For uniform Jordan operators `B = S(theta)` and
/// the model space is kept alongside.
#[derive(Debug, Clone)]
pub struct AmbientSpace {
    theta: InnerFunction,
    copies: usize,
    model: Option<ModelSpace>,
    block: CMat,
    operator: CMat,
}

impl AmbientSpace {
    /// `⊕_{n<copies} S(theta)`.
    pub fn new(theta: InnerFunction, copies: usize) -> Result<Arc<Self>> {
        Ok(Self::from_model(ModelSpace::new(theta)?, copies))
    }

    pub fn from_model(model: ModelSpace, copies: usize) -> Arc<Self> {
        let block = model.shift().clone();
        Arc::new(Self {
            theta: model.theta().clone(),
            copies,
            operator: repeat_diag(&block, copies),
            model: Some(model),
            block,
        })
    }

    /// A single copy of a model space.
    pub fn single(model: ModelSpace) -> Arc<Self> {
        Self::from_model(model, 1)
    }

    /// `⊕_{n<copies} block` for an arbitrary square block annihilated by `theta`.
    pub fn from_block(theta: InnerFunction, block: CMat, copies: usize) -> Arc<Self> {
        Arc::new(Self {
            theta,
            copies,
            operator: repeat_diag(&block, copies),
            model: None,
            block,
        })
    }

    pub fn theta(&self) -> &InnerFunction {
        &self.theta
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn model(&self) -> Option<&ModelSpace> {
        self.model.as_ref()
    }

    fn require_model(&self) -> Result<&ModelSpace> {
        self.model.as_ref().ok_or_else(|| {
            Error::PreconditionViolated("ambient is not a uniform Jordan operator".into())
        })
    }

    pub fn block(&self) -> &CMat {
        &self.block
    }

    pub fn block_dim(&self) -> usize {
        self.block.nrows()
    }

    pub fn total_dim(&self) -> usize {
        self.operator.nrows()
    }

    /// Matrix of `T_N`.
    pub fn operator(&self) -> &CMat {
        &self.operator
    }

    /// Whether frames of the two ambients can be compared.
    pub fn compatible(&self, other: &AmbientSpace) -> bool {
        self.copies == other.copies
            && self.theta == other.theta
            && self.total_dim() == other.total_dim()
            && crate::linalg::max_abs_diff(&self.block, &other.block) <= 1e-12
    }

    pub fn spec(&self) -> AmbientSpec {
        AmbientSpec { theta: self.theta.clone(), copies: self.copies }
    }
}

/// Serializable description of a uniform Jordan ambient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbientSpec {
    pub theta: InnerFunction,
    pub copies: usize,
}

impl AmbientSpec {
    pub fn build(&self) -> Result<Arc<AmbientSpace>> {
        if self.copies == 0 {
            return Err(Error::Parse("ambient needs at least one copy".into()));
        }
        AmbientSpace::new(self.theta.clone(), self.copies)
    }
}

/// A closed subspace given by an orthonormal frame (`total_dim x k`).
#[derive(Debug, Clone)]
pub struct SubspaceFrame {
    ambient: Arc<AmbientSpace>,
    frame: CMat,
}

impl SubspaceFrame {
    /// Orthonormal frame for the column space of `columns`.
    pub fn from_spanning(ambient: &Arc<AmbientSpace>, columns: &CMat) -> Result<Self> {
        if columns.nrows() != ambient.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: ambient.total_dim(),
                found: columns.nrows(),
            });
        }
        Ok(Self { ambient: Arc::clone(ambient), frame: range_basis(columns, RANGE_REL_TOL) })
    }

    /// Wraps a frame that is already orthonormal.
    pub(crate) fn from_orthonormal(ambient: &Arc<AmbientSpace>, frame: CMat) -> Self {
        debug_assert_eq!(frame.nrows(), ambient.total_dim());
        Self { ambient: Arc::clone(ambient), frame }
    }

    pub fn zero(ambient: &Arc<AmbientSpace>) -> Self {
        Self::from_orthonormal(ambient, CMat::zeros(ambient.total_dim(), 0))
    }

    pub fn full(ambient: &Arc<AmbientSpace>) -> Self {
        Self::from_orthonormal(ambient, identity(ambient.total_dim()))
    }

    /// `phi H^2 ⊖ theta H^2` placed in copy `block` (zero elsewhere).
    pub fn block_subspace(ambient: &Arc<AmbientSpace>, block: usize, phi: &InnerFunction) -> Result<Self> {
        let mut gammas = vec![ambient.theta().clone(); ambient.copies()];
        gammas[block] = phi.clone();
        Self::direct_sum(ambient, &gammas)
    }

    /// `⊕_n (gamma_n H^2 ⊖ theta H^2)`; copies beyond `gammas.len()` get the
    /// zero summand.
    pub fn direct_sum(ambient: &Arc<AmbientSpace>, gammas: &[InnerFunction]) -> Result<Self> {
        let model = ambient.require_model()?;
        if gammas.len() > ambient.copies() {
            return Err(Error::ModelTooLong { needed: gammas.len(), available: ambient.copies() });
        }
        let d = ambient.block_dim();
        let mut pieces = Vec::with_capacity(gammas.len());
        for gamma in gammas {
            if !gamma.divides(ambient.theta()) {
                return Err(Error::NotADivisor {
                    divisor: gamma.to_string(),
                    dividend: ambient.theta().to_string(),
                });
            }
            pieces.push(model.range_of(gamma)?);
        }
        let k: usize = pieces.iter().map(|p| p.ncols()).sum();
        let mut frame = CMat::zeros(ambient.total_dim(), k);
        let mut col = 0;
        for (n, piece) in pieces.iter().enumerate() {
            frame.view_mut((n * d, col), piece.shape()).copy_from(piece);
            col += piece.ncols();
        }
        Ok(Self::from_orthonormal(ambient, frame))
    }

    /// Closure of the orbit `span{T^k x : k >= 0}`.
    pub fn orbit_closure(ambient: &Arc<AmbientSpace>, x: &CVec) -> Result<Self> {
        Self::orbit_closure_of_many(ambient, std::slice::from_ref(x))
    }

    /// Smallest invariant subspace containing every vector of `xs`.
    pub fn orbit_closure_of_many(ambient: &Arc<AmbientSpace>, xs: &[CVec]) -> Result<Self> {
        let n = ambient.total_dim();
        let mut columns: Vec<CVec> = Vec::new();
        for x in xs {
            if x.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: x.len() });
            }
            // Normalized Krylov sequence; its length never needs to exceed n.
            let mut v = x.clone();
            for _ in 0..n {
                let norm = v.norm();
                if norm <= 1e-300 {
                    break;
                }
                v /= C64::new(norm, 0.0);
                columns.push(v.clone());
                v = ambient.operator() * &v;
            }
        }
        let m = if columns.is_empty() {
            CMat::zeros(n, 0)
        } else {
            CMat::from_columns(&columns)
        };
        Self::from_spanning(ambient, &m)
    }

    /// Closed span of the union of two subspaces.
    pub fn join(&self, other: &SubspaceFrame) -> Result<Self> {
        self.check_ambient(other)?;
        let mut m = CMat::zeros(self.frame.nrows(), self.dim() + other.dim());
        m.columns_mut(0, self.dim()).copy_from(&self.frame);
        m.columns_mut(self.dim(), other.dim()).copy_from(&other.frame);
        Self::from_spanning(&self.ambient, &m)
    }

    pub fn ambient(&self) -> &Arc<AmbientSpace> {
        &self.ambient
    }

    pub fn frame(&self) -> &CMat {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    /// Orthogonal projection `P P^H`.
    pub fn projector(&self) -> CMat {
        &self.frame * self.frame.adjoint()
    }

    /// Returns the invariance verdict and `||(I - PP^H) T P||`.
    pub fn is_invariant(&self) -> (bool, f64) {
        if self.dim() == 0 {
            return (true, 0.0);
        }
        let tp = self.ambient.operator() * &self.frame;
        let residual = op_norm(&(&tp - &self.frame * (self.frame.adjoint() * &tp)));
        (residual <= INVARIANCE_TOL, residual)
    }

    fn check_ambient(&self, other: &SubspaceFrame) -> Result<()> {
        if Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient.compatible(&other.ambient) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// Re-expresses the frame in another (compatible) ambient handle.
    pub fn rebase(&self, ambient: &Arc<AmbientSpace>) -> Result<Self> {
        if !self.ambient.compatible(ambient) {
            return Err(Error::AmbientMismatch);
        }
        Ok(Self::from_orthonormal(ambient, self.frame.clone()))
    }

    pub fn to_file(&self) -> SubspaceFile {
        let frame = self.frame.iter().map(|z| [z.re, z.im]).collect();
        SubspaceFile { ambient: self.ambient.spec(), frame }
    }
}

/// `phi H^2 ⊖ theta H^2 = ran phi(S(theta))` inside a single model space
/// (or the first copy of a larger ambient).
pub fn invariant_subspace_of_block(ambient: &Arc<AmbientSpace>, phi: &InnerFunction) -> Result<SubspaceFrame> {
    SubspaceFrame::block_subspace(ambient, 0, phi)
}

/// Gap `||P_A - P_B||` between the orthogonal projections.
pub fn principal_distance(a: &SubspaceFrame, b: &SubspaceFrame) -> Result<f64> {
    a.check_ambient(b)?;
    if a.dim() != b.dim() {
        return Ok(1.0);
    }
    Ok(op_norm(&(a.projector() - b.projector())))
}

/// One-sided gap `sup_{x in A, |x|=1} dist(x, B) = ||(I - P_B) P_A||`.
pub fn containment_gap(a: &SubspaceFrame, b: &SubspaceFrame) -> Result<f64> {
    a.check_ambient(b)?;
    if a.dim() == 0 {
        return Ok(0.0);
    }
    let pa = a.frame();
    Ok(op_norm(&(pa - b.frame() * (b.frame().adjoint() * pa))))
}

/// Frame of the closure of `X M` in the same ambient.
pub fn image_closure(x: &CMat, m: &SubspaceFrame) -> Result<SubspaceFrame> {
    image_closure_into(x, m, m.ambient())
}

/// Frame of the closure of `X M` inside `target`.
pub fn image_closure_into(x: &CMat, m: &SubspaceFrame, target: &Arc<AmbientSpace>) -> Result<SubspaceFrame> {
    if x.ncols() != m.ambient().total_dim() {
        return Err(Error::DimensionMismatch { expected: m.ambient().total_dim(), found: x.ncols() });
    }
    SubspaceFrame::from_spanning(target, &(x * m.frame()))
}

pub fn orthocomplement(m: &SubspaceFrame) -> SubspaceFrame {
    SubspaceFrame::from_orthonormal(m.ambient(), complement_basis(m.frame()))
}

/// On-disk subspace: the ambient plus the frame entries in column-major
/// order as `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceFile {
    pub ambient: AmbientSpec,
    pub frame: Vec<[f64; 2]>,
}

impl SubspaceFile {
    /// Rebuilds the subspace, re-orthonormalizing the frame. The second value
    /// is the adjustment `max_i |sigma_i - 1|` over the singular values of
    /// the stored frame (dropped directions count with `sigma = 0`).
    pub fn load(&self) -> Result<(SubspaceFrame, f64)> {
        let ambient = self.ambient.build()?;
        self.load_into(&ambient)
    }

    pub fn load_into(&self, ambient: &Arc<AmbientSpace>) -> Result<(SubspaceFrame, f64)> {
        let n = ambient.total_dim();
        if !self.frame.len().is_multiple_of(n) {
            return Err(Error::Parse(format!(
                "frame has {} entries, not a multiple of the ambient dimension {}",
                self.frame.len(),
                n
            )));
        }
        let k = self.frame.len() / n;
        let raw = CMat::from_iterator(n, k, self.frame.iter().map(|&[re, im]| C64::new(re, im)));
        let (values, _) = svd_sorted(&raw, false);
        let sub = SubspaceFrame::from_spanning(ambient, &raw)?;
        let adjustment = values
            .iter()
            .enumerate()
            .map(|(i, s)| if i < sub.dim() { (s - 1.0).abs() } else { 1.0 })
            .fold(0.0, f64::max);
        Ok((sub, adjustment))
    }
}
