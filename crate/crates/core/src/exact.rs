//! Exact rational arithmetic for nilpotent Jordan operators.
//!
//! For `theta = z^d` every quantity used by the lattice and orbit questions
//! is rational in the monomial basis, so ranks, Jordan partitions and
//! commutant-orbit membership can be decided without floating point error.

use std::fmt;
use std::ops::{Index, IndexMut, Mul, Sub};

use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::inner::InnerFunction;
use crate::jordan::JordanModel;
use crate::linalg::{c, CMat};

pub type Q = BigRational;

/// Largest grid size searched exhaustively when deciding orbit membership.
pub const GRID_LIMIT: usize = 300_000;
/// Random integer points tried before falling back to the grid.
const RANDOM_TRIALS: usize = 8;
const RANDOM_RANGE: i64 = 1_000;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for QMat {
    type Output = Q;

    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &QMat {
    type Output = QMat;

    fn mul(self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = QMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Sub for &QMat {
    type Output = QMat;

    fn sub(self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Row-major integer entries.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self { rows, cols, data: entries.iter().map(|&x| q(x)).collect() }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = m[(row, col)].recip();
            for j in col..m.cols {
                let v = &m[(row, j)] * &inv;
                m[(row, j)] = v;
            }
            for i in 0..m.rows {
                if i == row || m[(i, col)].is_zero() {
                    continue;
                }
                let factor = m[(i, col)].clone();
                for j in col..m.cols {
                    let v = &m[(row, j)] * &factor;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Linearly independent subset of the columns spanning the column space.
    pub fn column_basis(&self) -> QMat {
        let (_, pivots) = self.rref();
        let cols: Vec<Vec<Q>> = pivots.iter().map(|&j| self.column(j)).collect();
        QMat::from_columns(self.rows, &cols)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = QMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Q::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.last().is_some_and(|&p| p >= n) {
            return None;
        }
        let mut inv = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Solves `self * X = b` for a matrix with full column rank and `b` in its
    /// column space; returns `None` otherwise.
    pub fn solve_exact(&self, b: &QMat) -> Option<QMat> {
        assert_eq!(self.rows, b.rows);
        let (n, k) = (self.cols, b.cols);
        let mut aug = QMat::zeros(self.rows, n + k);
        for i in 0..self.rows {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..k {
                aug[(i, n + j)] = b[(i, j)].clone();
            }
        }
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = QMat::zeros(n, k);
        for i in 0..n {
            for j in 0..k {
                x[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(x)
    }

    /// Conversion to a complex floating point matrix.
    pub fn to_cmat(&self) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| c(to_f64(&self[(i, j)]), 0.0))
    }
}

fn to_f64(x: &Q) -> f64 {
    use num::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Nilpotent Jordan matrix with the given block sizes, each block the lower
/// shift `e_i -> e_{i+1}`.
pub fn nilpotent_jordan(blocks: &[usize]) -> QMat {
    let n: usize = blocks.iter().sum();
    let mut t = QMat::zeros(n, n);
    let mut offset = 0;
    for &k in blocks {
        for i in 1..k {
            t[(offset + i, offset + i - 1)] = Q::one();
        }
        offset += k;
    }
    t
}

/// Basis (as independent columns) of the smallest `t`-invariant subspace
/// containing the given vectors.
pub fn krylov_basis(t: &QMat, vectors: &[Vec<Q>]) -> QMat {
    let n = t.rows();
    let mut cols = Vec::new();
    for v in vectors {
        let mut x = v.clone();
        for _ in 0..=n {
            if x.iter().all(Zero::is_zero) {
                break;
            }
            cols.push(x.clone());
            x = t.apply(&x);
        }
    }
    QMat::from_columns(n, &cols).column_basis()
}

/// Whether `span(basis)` is `t`-invariant.
pub fn is_invariant(t: &QMat, basis: &QMat) -> bool {
    let image = t * basis;
    let mut joined = basis.columns();
    joined.extend(image.columns());
    QMat::from_columns(t.rows(), &joined).rank() == basis.rank()
}

/// Matrix of `t` restricted to `span(basis)`, in the coordinates of `basis`
/// (whose columns must be independent and span an invariant subspace).
pub fn restriction(t: &QMat, basis: &QMat) -> QMat {
    basis
        .solve_exact(&(t * basis))
        .expect("basis spans an invariant subspace")
}

/// Matrix of the operator induced by `t` on the quotient by `span(basis)`.
pub fn quotient(t: &QMat, basis: &QMat) -> QMat {
    let n = t.rows();
    let k = basis.cols();
    let mut cols = basis.columns();
    let mut rank = k;
    for i in 0..n {
        if rank == n {
            break;
        }
        let mut e = vec![Q::zero(); n];
        e[i] = Q::one();
        cols.push(e);
        let candidate = QMat::from_columns(n, &cols);
        if candidate.rank() > rank {
            rank += 1;
        } else {
            cols.pop();
        }
    }
    let p = QMat::from_columns(n, &cols);
    let inv = p.inverse().expect("completed basis is invertible");
    let full = &(&inv * t) * &p;
    let mut out = QMat::zeros(n - k, n - k);
    for i in 0..n - k {
        for j in 0..n - k {
            out[(i, j)] = full[(k + i, k + j)].clone();
        }
    }
    out
}

/// Jordan block sizes (non-increasing) of a nilpotent matrix.
pub fn nilpotent_partition(m: &QMat) -> Vec<usize> {
    let n = m.rows();
    let mut ranks = vec![n];
    let mut power = QMat::identity(n);
    while *ranks.last().unwrap() > 0 {
        power = &power * m;
        let r = power.rank();
        assert!(r < *ranks.last().unwrap(), "matrix is not nilpotent");
        ranks.push(r);
    }
    let counts: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let blocks = counts.first().copied().unwrap_or(0);
    (0..blocks).map(|i| counts.iter().filter(|&&c| c > i).count()).collect()
}

/// Jordan model `(z^{s_0}, z^{s_1}, ...)` from a partition.
pub fn model_of_partition(partition: &[usize]) -> JordanModel {
    JordanModel::new(partition.iter().map(|&s| InnerFunction::z_pow(s as u32)).collect())
        .expect("non-increasing partition")
}

/// Restriction and compression partitions of an invariant subspace.
pub fn jordan_partitions(t: &QMat, basis: &QMat) -> (Vec<usize>, Vec<usize>) {
    (nilpotent_partition(&restriction(t, basis)), nilpotent_partition(&quotient(t, basis)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecidedBy {
    /// An explicit invertible commutant element was found.
    Certificate,
    /// The generic determinant vanishes on a full grid, hence identically.
    Grid,
    /// No invertible element found among random integer points.
    Randomized,
    /// The subspaces have different dimensions.
    Dimension,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitDecision {
    pub in_orbit: bool,
    pub decided_by: DecidedBy,
    /// Invertible `X` commuting with `t` with `X M_1 = M_2` when found.
    pub witness: Option<QMat>,
}

/// Decides whether some invertible `X` commuting with `t` maps `span(b1)`
/// onto `span(b2)`.
///
/// The admissible `X` form the linear space `{X t = t X, K_2 X b_1 = 0}`
/// where the rows of `K_2` annihilate `span(b2)`. Its generic element is
/// invertible iff the determinant polynomial on it is nonzero; a nonzero
/// value at a random integer point certifies this, and vanishing on the grid
/// `{0..n}^r` (each variable has degree at most `n`) proves the converse.
pub fn commutant_orbit(t: &QMat, b1: &QMat, b2: &QMat, seed: u64) -> OrbitDecision {
    let n = t.rows();
    let none = |decided_by| OrbitDecision { in_orbit: false, decided_by, witness: None };
    if b1.rank() != b2.rank() {
        return none(DecidedBy::Dimension);
    }
    let k2 = QMat::from_columns(n, &b2.transpose().nullspace()).transpose();
    let k1 = b1.cols();
    let unknowns = n * n;
    let mut equations: Vec<Vec<Q>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![Q::zero(); unknowns];
            for k in 0..n {
                if !t[(k, j)].is_zero() {
                    row[i * n + k] += t[(k, j)].clone();
                }
                if !t[(i, k)].is_zero() {
                    row[k * n + j] -= t[(i, k)].clone();
                }
            }
            equations.push(row);
        }
    }
    for p in 0..k2.rows() {
        for qcol in 0..k1 {
            let mut row = vec![Q::zero(); unknowns];
            for i in 0..n {
                if k2[(p, i)].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !b1[(j, qcol)].is_zero() {
                        row[i * n + j] += &k2[(p, i)] * &b1[(j, qcol)];
                    }
                }
            }
            equations.push(row);
        }
    }
    let mut system = QMat::zeros(equations.len(), unknowns);
    for (r, eq) in equations.iter().enumerate() {
        for (j, x) in eq.iter().enumerate() {
            system[(r, j)] = x.clone();
        }
    }
    let basis: Vec<QMat> = system
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut x = QMat::zeros(n, n);
            for (idx, val) in v.into_iter().enumerate() {
                x[(idx / n, idx % n)] = val;
            }
            x
        })
        .collect();
    let combine = |coeffs: &[i64]| {
        let mut x = QMat::zeros(n, n);
        for (b, &a) in basis.iter().zip(coeffs) {
            if a == 0 {
                continue;
            }
            let a = q(a);
            for (dst, src) in x.data.iter_mut().zip(&b.data) {
                *dst += &a * src;
            }
        }
        x
    };
    let invertible = |x: &QMat| x.rank() == n;

    let r = basis.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<i64> = (0..r).map(|_| rng.random_range(-RANDOM_RANGE..=RANDOM_RANGE)).collect();
        let x = combine(&coeffs);
        if invertible(&x) {
            return OrbitDecision { in_orbit: true, decided_by: DecidedBy::Certificate, witness: Some(x) };
        }
    }
    let side = n + 1;
    let grid_size = (side as f64).powi(r as i32);
    if grid_size > GRID_LIMIT as f64 {
        return none(DecidedBy::Randomized);
    }
    let mut coeffs = vec![0i64; r];
    loop {
        let x = combine(&coeffs);
        if invertible(&x) {
            return OrbitDecision { in_orbit: true, decided_by: DecidedBy::Certificate, witness: Some(x) };
        }
        let mut pos = 0;
        loop {
            if pos == r {
                return none(DecidedBy::Grid);
            }
            coeffs[pos] += 1;
            if coeffs[pos] < side as i64 {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
    }
}

/// Whether `x` maps `span(b1)` exactly onto `span(b2)`.
pub fn maps_onto(x: &QMat, b1: &QMat, b2: &QMat) -> bool {
    let image = x * b1;
    let mut joined = b2.columns();
    joined.extend(image.columns());
    let joint = QMat::from_columns(b2.rows(), &joined).rank();
    image.rank() == b2.rank() && joint == b2.rank()
}

/// Rational vector with integer entries.
pub fn int_vec(entries: &[i64]) -> Vec<Q> {
    entries.iter().map(|&x| q(x)).collect()
}

/// Reduced row echelon form of the column span, a canonical key for subspaces.
pub fn span_key(basis: &QMat) -> Vec<Q> {
    let (r, pivots) = basis.transpose().rref();
    let mut key = Vec::with_capacity(pivots.len() * r.cols());
    for row in 0..pivots.len() {
        for j in 0..r.cols() {
            key.push(r[(row, j)].clone());
        }
    }
    key
}
