//! Seeded generators for inner functions, commutant elements and invariant
//! subspaces.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::inner::InnerFunction;
use crate::linalg::{c, identity, CMat, CVec, C64};
use crate::subspace::{image_closure, AmbientSpace, SubspaceFrame};

/// Generator behind every seeded run.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Zeros are drawn from the disc of this radius.
pub const ZERO_RADIUS: f64 = 0.9;

pub fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vec<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| gaussian(rng))
}

pub fn gaussian_mat<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Uniform point in the disc of radius `radius`.
pub fn disc_point<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Random finite Blaschke product of degree `1..=max_degree` whose distinct
/// zeros are pairwise at least `min_separation` apart.
pub fn random_theta<R: Rng>(rng: &mut R, max_degree: u32, min_separation: f64) -> InnerFunction {
    let degree = rng.random_range(1..=max_degree.max(1));
    let mut zeros: Vec<(C64, u32)> = Vec::new();
    let mut remaining = degree;
    while remaining > 0 {
        let mult = rng.random_range(1..=remaining.min(3));
        let point = loop {
            let p = disc_point(rng, ZERO_RADIUS);
            if zeros.iter().all(|(q, _)| (p - q).norm() >= min_separation) {
                break p;
            }
        };
        zeros.push((point, mult));
        remaining -= mult;
    }
    InnerFunction::new(zeros).expect("separated zeros inside the disc")
}

/// Random inner function of degree `0..=max_degree` with well separated zeros.
pub fn random_inner<R: Rng>(rng: &mut R, max_degree: u32) -> InnerFunction {
    if rng.random_range(0..=max_degree) == 0 {
        return InnerFunction::one();
    }
    random_theta(rng, max_degree, 1e-3)
}

/// Uniformly chosen divisor of `theta`.
pub fn random_divisor<R: Rng>(rng: &mut R, theta: &InnerFunction) -> InnerFunction {
    InnerFunction::new(
        theta
            .zeros()
            .iter()
            .map(|z| (z.point, rng.random_range(0..=z.mult)))
            .filter(|(_, m)| *m > 0),
    )
    .expect("sub-multiset of valid zeros")
}

/// `sum_k a_k B^k` with Gaussian coefficients, an element of the commutant
/// of `B`.
pub fn random_polynomial_in<R: Rng>(rng: &mut R, block: &CMat) -> CMat {
    let d = block.nrows();
    let mut power = identity(d);
    let mut out = CMat::zeros(d, d);
    for _ in 0..d.max(1) {
        out += &power * gaussian(rng);
        power = &power * block;
    }
    out
}

/// Random element of the commutant of `⊕_{n<N} B`: the block matrix with
/// entries `p_ij(B)`. Generically invertible.
pub fn random_commutant<R: Rng>(rng: &mut R, ambient: &AmbientSpace) -> CMat {
    let (d, n) = (ambient.block_dim(), ambient.copies());
    let mut z = CMat::zeros(d * n, d * n);
    for i in 0..n {
        for j in 0..n {
            let p = random_polynomial_in(rng, ambient.block());
            z.view_mut((i * d, j * d), (d, d)).copy_from(&p);
        }
    }
    z
}

/// Random divisor list `gamma_n` of `theta`, one per copy.
pub fn random_gammas<R: Rng>(rng: &mut R, ambient: &AmbientSpace) -> Vec<InnerFunction> {
    (0..ambient.copies()).map(|_| random_divisor(rng, ambient.theta())).collect()
}

/// `Z (⊕_n gamma_n H^2 ⊖ theta H^2)` for random divisors and a random
/// commutant element `Z`. Requires a uniform ambient.
pub fn random_invariant_subspace<R: Rng>(rng: &mut R, ambient: &Arc<AmbientSpace>) -> Result<SubspaceFrame> {
    let gammas = random_gammas(rng, ambient);
    let base = SubspaceFrame::direct_sum(ambient, &gammas)?;
    image_closure(&random_commutant(rng, ambient), &base)
}

/// A pair in the same commutant orbit: `(M, Z M)`.
pub fn random_orbit_pair<R: Rng>(
    rng: &mut R,
    ambient: &Arc<AmbientSpace>,
) -> Result<(SubspaceFrame, SubspaceFrame)> {
    let m = random_invariant_subspace(rng, ambient)?;
    let zm = image_closure(&random_commutant(rng, ambient), &m)?;
    Ok((m, zm))
}

/// Orbit closure of `k` random vectors.
pub fn random_cyclic_subspace<R: Rng>(
    rng: &mut R,
    ambient: &Arc<AmbientSpace>,
    generators: usize,
) -> Result<SubspaceFrame> {
    let vectors: Vec<CVec> = (0..generators)
        .map(|_| {
            let mut v = gaussian_vec(rng, ambient.total_dim());
            // Sparsify so that small subspaces occur as well.
            let mut blocks: Vec<usize> = (0..ambient.copies()).collect();
            blocks.shuffle(rng);
            let keep = rng.random_range(1..=ambient.copies());
            let d = ambient.block_dim();
            for &b in &blocks[keep..] {
                v.rows_mut(b * d, d).fill(c(0.0, 0.0));
            }
            v
        })
        .collect();
    SubspaceFrame::orbit_closure_of_many(ambient, &vectors)
}

/// Random unitary matrix from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    gaussian_mat(rng, n, n).qr().q()
}

/// `U diag(sigma) V^*` with singular values uniform in `[1, max_condition]`
/// (the extremes included when `n >= 2`).
pub fn random_similarity<R: Rng>(rng: &mut R, n: usize, max_condition: f64) -> CMat {
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let sigma: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => 1.0,
            1 => max_condition,
            _ => rng.random_range(1.0..=max_condition),
        })
        .collect();
    let s = CMat::from_diagonal(&CVec::from_iterator(n, sigma.into_iter().map(|x| c(x, 0.0))));
    u * s * v.adjoint()
}
