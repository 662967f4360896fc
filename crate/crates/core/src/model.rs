//! Model spaces `H(theta) = H^2 ⊖ theta H^2` and the compressed shift.
//!
//! For `theta = z^d` the monomial basis `1, z, ..., z^{d-1}` is used and the
//! compressed shift is the lower nilpotent Jordan block. Otherwise the basis
//! is the Takenaka-Malmquist system
//! `e_k = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} b_{a_j}`,
//! the Gram-Schmidt orthonormalization of the (derivative) Cauchy kernels
//! `k_{a,j}(z) = z^j / (1 - conj(a) z)^{j+1}` up to unimodular factors. The
//! shift matrix in this basis has closed-form entries; the kernel Gram matrix
//! is still formed to reject clustered zeros.

use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::linalg::{identity, leading_range, singular_values, CMat, CVec, C64};

/// Gram matrices with a larger condition number are rejected.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Monomial,
    OrthonormalRational,
}

/// A kernel `k_{a,j}` in the spanning family of a model space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    pub point: C64,
    pub order: u32,
}

#[derive(Debug, Clone)]
pub struct ModelSpace {
    theta: InnerFunction,
    basis_kind: BasisKind,
    shift: CMat,
    kernels: Vec<Kernel>,
}

fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `<k_{b,l}, k_{a,j}>`, i.e. the `j`-th Taylor coefficient of `k_{b,l}` at `a`.
fn kernel_inner(a: &Kernel, b: &Kernel) -> C64 {
    let (j, l) = (a.order, b.order);
    let bc = b.point.conj();
    let denom = C64::new(1.0, 0.0) - bc * a.point;
    (0..=j.min(l))
        .map(|i| {
            let r = j - i;
            let coeff = binomial(l, i) * binomial(l + r, r);
            a.point.powu(l - i) * bc.powu(r) * coeff / denom.powu(l + 1 + r)
        })
        .sum()
}

impl ModelSpace {
    /// Builds `H(theta)` together with the matrix of `S(theta)`.
    pub fn new(theta: InnerFunction) -> Result<Self> {
        let dim = theta.degree() as usize;
        if dim == 0 {
            return Err(Error::ConstantTheta);
        }
        if theta.is_monomial() {
            let mut shift = CMat::zeros(dim, dim);
            for k in 1..dim {
                shift[(k, k - 1)] = C64::new(1.0, 0.0);
            }
            let kernels = (0..dim as u32)
                .map(|order| Kernel { point: C64::new(0.0, 0.0), order })
                .collect();
            return Ok(Self {
                theta,
                basis_kind: BasisKind::Monomial,
                shift,
                kernels,
            });
        }

        let kernels: Vec<Kernel> = theta
            .zeros()
            .iter()
            .flat_map(|z| (0..z.mult).map(move |order| Kernel { point: z.point, order }))
            .collect();
        let gram = CMat::from_fn(dim, dim, |i, j| kernel_inner(&kernels[i], &kernels[j]));
        let sv = singular_values(&gram);
        let condition = sv[0] / sv[dim - 1];
        if condition.is_nan() || condition > MAX_GRAM_CONDITION {
            return Err(Error::DegenerateGram { condition });
        }

        let points: Vec<C64> = kernels.iter().map(|k| k.point).collect();
        Ok(Self { theta, basis_kind: BasisKind::OrthonormalRational, shift: malmquist_shift(&points), kernels })
    }

    pub fn theta(&self) -> &InnerFunction {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.shift.nrows()
    }

    pub fn basis_kind(&self) -> BasisKind {
        self.basis_kind
    }

    /// Matrix of `S(theta)`; column `k` is the image of basis vector `k`.
    pub fn shift(&self) -> &CMat {
        &self.shift
    }

    /// Spanning kernels, in the order used for orthonormalization.
    pub fn kernels(&self) -> &[Kernel] {
        &self.kernels
    }

    /// `u(S(theta))` for an inner `u`.
    pub fn calculus(&self, u: &InnerFunction) -> Result<CMat> {
        functional_calculus(&self.shift, u)
    }

    /// Orthonormal basis of `ran u(S(theta)) = gcd(u, theta) H^2 ⊖ theta H^2`.
    pub fn range_of(&self, u: &InnerFunction) -> Result<CMat> {
        let rank = self.dim() - self.theta.gcd(u).degree() as usize;
        Ok(leading_range(&self.calculus(u)?, rank))
    }

    /// Orthogonal projection of `f` onto `H(theta/d)` sitting inside
    /// `H(theta)`. The subspace is the orthogonal complement of
    /// `ran (theta/d)(S(theta))`, equivalently the kernel of the adjoint of
    /// `(theta/d)(S(theta))`.
    pub fn project_onto_submodel(&self, f: &CVec, d: &InnerFunction) -> Result<CVec> {
        let outer = self.theta.quotient(d)?;
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: f.len() });
        }
        let q = self.range_of(&outer)?;
        Ok(f - &q * (q.adjoint() * f))
    }
}

/// Matrix of `S(theta)` in the Takenaka-Malmquist basis for the zero
/// sequence `a`: lower triangular with `S[i][i] = a_i` and
/// `S[i][j] = sqrt(1-|a_i|^2) sqrt(1-|a_j|^2) prod_{j<k<i} (-conj(a_k))`.
pub fn malmquist_shift(a: &[C64]) -> CMat {
    let n = a.len();
    let weight: Vec<f64> = a.iter().map(|p| (1.0 - p.norm_sqr()).sqrt()).collect();
    let mut shift = CMat::zeros(n, n);
    for j in 0..n {
        shift[(j, j)] = a[j];
        let mut chain = C64::new(1.0, 0.0);
        for i in j + 1..n {
            shift[(i, j)] = chain * weight[i] * weight[j];
            chain *= -a[i].conj();
        }
    }
    shift
}

/// `u(A) = prod ((A - aI)(I - conj(a)A)^{-1})^m` for a square matrix `A`.
pub fn functional_calculus(op: &CMat, u: &InnerFunction) -> Result<CMat> {
    let n = op.nrows();
    let eye = identity(n);
    let mut out = eye.clone();
    for z in u.zeros() {
        let resolvent = (&eye - op * z.point.conj())
            .try_inverse()
            .ok_or(Error::SingularResolvent { re: z.point.re, im: z.point.im })?;
        let factor = (op - &eye * z.point) * resolvent;
        for _ in 0..z.mult {
            out = &out * &factor;
        }
    }
    Ok(out)
}
