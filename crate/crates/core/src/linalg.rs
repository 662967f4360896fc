//! Dense complex linear algebra helpers shared by every module.
//!
//! Everything is built on `nalgebra` matrices of `Complex<f64>`. Ranks are
//! decided from singular values; the helpers here keep the singular values
//! sorted in descending order so callers can inspect the gap around a
//! threshold.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Relative threshold below which singular values count as zero when
/// extracting the column space of a matrix.
pub const RANGE_REL_TOL: f64 = 1e-8;

/// Matrices whose largest singular value is below this are treated as zero.
pub const ZERO_FLOOR: f64 = 1e-14;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Thin singular value decomposition `m = U diag(values) V^H` with the
/// singular values in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub u: CMat,
    pub v: CMat,
}

fn to_faer(m: &CMat) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin SVD computed with `faer`.
pub fn svd(m: &CMat) -> Svd {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Svd { values: Vec::new(), u: CMat::zeros(rows, 0), v: CMat::zeros(cols, 0) };
    }
    let f = to_faer(m).thin_svd().expect("svd iteration converges");
    let values = f.S().column_vector().iter().map(|s| s.re).collect();
    Svd { values, u: from_faer(f.U()), v: from_faer(f.V()) }
}

/// Orthonormal basis of `{x : m x = 0}` with singular values below
/// `rel_tol * max(1, sigma_max)` treated as zero.
pub fn nullspace(m: &CMat, rel_tol: f64) -> CMat {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    if rows == 0 {
        return identity(cols);
    }
    let f = to_faer(m).svd().expect("svd iteration converges");
    let values: Vec<f64> = f.S().column_vector().iter().map(|s| s.re).collect();
    let tol = rel_tol * values.first().copied().unwrap_or(0.0).max(1.0);
    let rank = values.iter().take_while(|&&s| s > tol).count();
    from_faer(f.V()).columns(rank, cols - rank).into_owned()
}

/// Singular values (descending) and, if requested, the matching thin left
/// singular vectors.
pub fn svd_sorted(m: &CMat, want_u: bool) -> (Vec<f64>, Option<CMat>) {
    if !want_u {
        let (rows, cols) = m.shape();
        if rows == 0 || cols == 0 {
            return (Vec::new(), None);
        }
        let values = to_faer(m).singular_values().expect("svd iteration converges");
        return (values, None);
    }
    let s = svd(m);
    (s.values, Some(s.u))
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    svd_sorted(m, false).0
}

/// Operator 2-norm (largest singular value); zero for empty matrices.
pub fn op_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Smallest singular value of a square matrix; zero for a 0x0 matrix.
pub fn sigma_min(m: &CMat) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Numerical rank with threshold `tol` together with the ratio between the
/// singular values that bracket the threshold (`inf` when one side is empty
/// or the lower one is exactly zero).
pub fn rank_with_gap(m: &CMat, tol: f64) -> (usize, f64) {
    let values = singular_values(m);
    let rank = values.iter().take_while(|&&s| s > tol).count();
    let gap = match (rank.checked_sub(1).map(|i| values[i]), values.get(rank)) {
        (Some(above), Some(&below)) if below > 0.0 => above / below,
        _ => f64::INFINITY,
    };
    (rank, gap)
}

/// Orthonormal basis of the column space, using the relative threshold
/// `rel_tol * sigma_max` (and [`ZERO_FLOOR`] as an absolute floor).
pub fn range_basis(m: &CMat, rel_tol: f64) -> CMat {
    let (values, u) = svd_sorted(m, true);
    let u = u.expect("left singular vectors requested");
    let top = values.first().copied().unwrap_or(0.0);
    if top <= ZERO_FLOOR {
        return CMat::zeros(m.nrows(), 0);
    }
    let rank = values.iter().take_while(|&&s| s > rel_tol * top).count();
    u.columns(0, rank).into_owned()
}

/// Orthonormal basis of the first `rank` left singular vectors.
pub fn leading_range(m: &CMat, rank: usize) -> CMat {
    let (_, u) = svd_sorted(m, true);
    let u = u.expect("left singular vectors requested");
    u.columns(0, rank.min(u.ncols())).into_owned()
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `frame`.
pub fn complement_basis(frame: &CMat) -> CMat {
    let n = frame.nrows();
    let k = frame.ncols();
    if k == 0 {
        return identity(n);
    }
    if k >= n {
        return CMat::zeros(n, 0);
    }
    let residual = identity(n) - frame * frame.adjoint();
    leading_range(&residual, n - k)
}

/// Block diagonal matrix from square blocks.
pub fn block_diag(blocks: &[&CMat]) -> CMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(n, m);
    let (mut r, mut cidx) = (0, 0);
    for b in blocks {
        out.view_mut((r, cidx), b.shape()).copy_from(*b);
        r += b.nrows();
        cidx += b.ncols();
    }
    out
}

/// `copies` copies of `block` along the diagonal.
pub fn repeat_diag(block: &CMat, copies: usize) -> CMat {
    let refs: Vec<&CMat> = std::iter::repeat_n(block, copies).collect();
    block_diag(&refs)
}

/// Least-squares solution of `a x = b` through the pseudoinverse, with
/// singular values below `rel_tol * sigma_max` discarded.
pub fn least_squares(a: &CMat, b: &CVec, rel_tol: f64) -> CVec {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return CVec::zeros(cols);
    }
    let s = svd(a);
    let top = s.values.first().copied().unwrap_or(0.0);
    let eps = (rel_tol * top).max(ZERO_FLOOR);
    let rank = s.values.iter().take_while(|&&x| x > eps).count();
    let coeffs = s.u.columns(0, rank).adjoint() * b;
    let scaled = CVec::from_fn(rank, |i, _| coeffs[i] / s.values[i]);
    s.v.columns(0, rank) * scaled
}

/// Maximum absolute entrywise difference.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_gap_on_diagonal() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(2.0, 0.0), c(1e-3, 0.0), c(1e-12, 0.0)]));
        let (rank, gap) = rank_with_gap(&m, 1e-8);
        assert_eq!(rank, 2);
        assert!((gap - 1e9).abs() / 1e9 < 1e-9);
    }

    #[test]
    fn complement_of_line() {
        let frame = CMat::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let comp = complement_basis(&frame);
        assert_eq!(comp.ncols(), 1);
        assert!(comp[(0, 0)].norm() < 1e-14);
        assert!((comp[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn svd_reconstructs_projectors() {
        let v = CVec::from_vec(vec![c(0.3, 0.4), c(-0.5, 0.1), c(0.2, -0.6), c(0.1, 0.2)]);
        let v = &v / c(v.norm(), 0.0);
        let p = identity(4) - &v * v.adjoint();
        let s = svd(&p);
        let recon = &s.u * CMat::from_diagonal(&CVec::from_iterator(s.values.len(), s.values.iter().map(|&x| c(x, 0.0))))
            * s.v.adjoint();
        assert!(op_norm(&(recon - &p)) < 1e-13);
        let q = complement_basis(&CMat::from_columns(std::slice::from_ref(&v)));
        let proj = q.adjoint() * &v;
        assert!(proj.norm() < 1e-13);
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 1.0), c(0.0, 2.0)]);
        let k = nullspace(&m, 1e-12);
        assert_eq!(k.ncols(), 2);
        assert!(op_norm(&(&m * k)) < 1e-13);
    }

    #[test]
    fn empty_matrices_are_harmless() {
        assert_eq!(op_norm(&CMat::zeros(0, 0)), 0.0);
        assert_eq!(range_basis(&CMat::zeros(3, 0), RANGE_REL_TOL).ncols(), 0);
        assert_eq!(range_basis(&CMat::zeros(3, 2), RANGE_REL_TOL).ncols(), 0);
    }
}
