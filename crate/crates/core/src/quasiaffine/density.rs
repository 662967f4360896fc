use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::linalg::{CMat, CVec, C64};
use crate::model::ModelSpace;

use super::{build_x, set_block, solve_norm_preserving, WeightSchedule, SOLVE_TOL};

/// One row of a density sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityStep {
    pub m: usize,
    pub residual: f64,
    pub bound: f64,
    pub sigma_min: f64,
    pub intertwine: f64,
}

/// A target `G ⊕ (F_n)_{n<N}` with `G ∈ psi_2 H^2 ⊖ theta H^2` and
/// `F_n ∈ (theta/phi_n) H^2 ⊖ theta H^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTarget {
    pub g: CVec,
    pub f: Vec<CVec>,
}

impl DensityTarget {
    pub fn zero(dim: usize, copies: usize) -> Self {
        Self { g: CVec::zeros(dim), f: vec![CVec::zeros(dim); copies] }
    }

    /// Random unit-norm target; `F_n` vanishes for `n >= support`.
    pub fn random<R: Rng>(
        space: &ModelSpace,
        phi_list: &[InnerFunction],
        psi2: &InnerFunction,
        support: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let theta = space.theta();
        let g = random_in(&space.range_of(psi2)?, rng);
        let f = phi_list
            .iter()
            .enumerate()
            .map(|(n, phi)| {
                if n >= support {
                    return Ok(CVec::zeros(space.dim()));
                }
                Ok(random_in(&space.range_of(&theta.quotient(phi)?)?, rng))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut target = Self { g, f };
        let norm = target.stacked().norm();
        if norm > 0.0 {
            let scale = C64::new(1.0 / norm, 0.0);
            target.g *= scale;
            target.f.iter_mut().for_each(|v| *v *= scale);
        }
        Ok(target)
    }

    pub fn stacked(&self) -> CVec {
        let d = self.g.len();
        let mut v = CVec::zeros(d * (self.f.len() + 1));
        set_block(&mut v, 0, d, &self.g);
        for (n, f) in self.f.iter().enumerate() {
            set_block(&mut v, n + 1, d, f);
        }
        v
    }
}

fn random_in<R: Rng>(basis: &CMat, rng: &mut R) -> CVec {
    let k = basis.ncols();
    let coeffs = CVec::from_fn(k, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    basis * coeffs
}

fn membership_residual(space: &ModelSpace, u: &InnerFunction, v: &CVec) -> Result<f64> {
    let q = space.range_of(u)?;
    Ok((v - &q * (q.adjoint() * v)).norm())
}

/// Approximates `target` from `X(N_{psi_1} ⊕ M)` for `m = 1..N-1`, where
/// `X` is built from `omega_n = psi_2/(theta/phi_n)`.
///
/// At step `m`, `h_m` solves `omega_m(S) h_m = (m+1)(G - sum_{n<m} omega_n(S) F_n/((n+1) c_n))`
/// and the approximant is `X(0 ⊕ (F_0/c_0, ..., F_{m-1}/c_{m-1}, h_m, 0, ...))`.
/// The bound is `(m+1) c_m (||G|| + ||F|| S_m^{1/2}) + (sum_{n>=m} ||F_n||^2)^{1/2}`
/// with `S_m = sum_{n<m} 1/((n+1) c_n)^2`.
pub fn density_sweep(
    space: &ModelSpace,
    phi_list: &[InnerFunction],
    psi1: &InnerFunction,
    psi2: &InnerFunction,
    target: &DensityTarget,
    schedule: &WeightSchedule,
) -> Result<Vec<DensityStep>> {
    let copies = phi_list.len();
    if copies < 2 {
        return Err(Error::TruncationTooSmall(format!("density sweep needs N >= 2, got {copies}")));
    }
    if target.f.len() != copies {
        return Err(Error::DimensionMismatch { expected: copies, found: target.f.len() });
    }
    let theta = space.theta();
    let fail = |clause: &str| Err(Error::HypothesisViolated(clause.to_string()));
    if !psi2.divides(psi1) {
        return fail(&format!("(i) psi_2 = {psi2} does not divide psi_1 = {psi1}"));
    }
    if !psi1.divides(theta) {
        return fail(&format!("(ii) psi_1 = {psi1} does not divide theta = {theta}"));
    }
    let mut omega = Vec::with_capacity(copies);
    for (n, phi) in phi_list.iter().enumerate() {
        if !phi.divides(theta) {
            return fail(&format!("(ii) phi_{n} = {phi} does not divide theta = {theta}"));
        }
        if n + 1 < copies && !phi_list[n + 1].divides(phi) {
            return fail(&format!("(iii) phi_{} does not divide phi_{n}", n + 1));
        }
        let outer = theta.quotient(phi)?;
        if !outer.divides(psi2) {
            return fail(&format!("(iv) theta/phi_{n} = {outer} does not divide psi_2 = {psi2}"));
        }
        omega.push(psi2.quotient(&outer)?);
    }
    if membership_residual(space, psi2, &target.g)? > SOLVE_TOL {
        return fail("target G is not in psi_2 H^2 ⊖ theta H^2");
    }
    for (n, (f, phi)) in target.f.iter().zip(phi_list).enumerate() {
        if membership_residual(space, &theta.quotient(phi)?, f)? > SOLVE_TOL {
            return fail(&format!("target F_{n} is not in (theta/phi_{n}) H^2 ⊖ theta H^2"));
        }
    }

    let record = build_x(space, &omega, schedule)?;
    let sigma = record.sigma_min;
    let d = space.dim();
    let stacked = target.stacked();
    let g_norm = target.g.norm();
    let f_norm = target.f.iter().map(|f| f.norm_squared()).sum::<f64>().sqrt();
    let calculus: Vec<CMat> = omega.iter().map(|w| space.calculus(w)).collect::<Result<_>>()?;

    let mut partial = CVec::zeros(d);
    let mut steps = Vec::with_capacity(copies - 1);
    for m in 1..copies {
        let n = m - 1;
        let weight = C64::new(1.0 / ((n + 1) as f64 * schedule.c(n)), 0.0);
        partial += &calculus[n] * &target.f[n] * weight;
        let running = (&target.g - &partial) * C64::new((m + 1) as f64, 0.0);
        let h = solve_norm_preserving(space, &phi_list[m], psi2, &running)?;

        let mut preimage = CVec::zeros(d * (copies + 1));
        for (k, f) in target.f.iter().enumerate().take(m) {
            set_block(&mut preimage, k + 1, d, &(f * C64::new(1.0 / schedule.c(k), 0.0)));
        }
        set_block(&mut preimage, m + 1, d, &h);
        let approximant = &record.matrix * preimage;
        let residual = (&stacked - approximant).norm();

        let tail: f64 = target.f[m..].iter().map(|f| f.norm_squared()).sum::<f64>().sqrt();
        let bound = (m + 1) as f64 * schedule.c(m) * (g_norm + f_norm * schedule.inverse_square_sum(m).sqrt())
            + tail;
        steps.push(DensityStep {
            m,
            residual,
            bound,
            sigma_min: sigma,
            intertwine: record.intertwining_residual,
        });
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(d: u32) -> InnerFunction {
        InnerFunction::z_pow(d)
    }

    #[test]
    fn fixture_residual_drops() {
        let space = ModelSpace::new(z(2)).unwrap();
        let phi = vec![z(1); 12];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let target = DensityTarget::random(&space, &phi, &z(1), 6, &mut rng).unwrap();
        let steps =
            density_sweep(&space, &phi, &z(2), &z(1), &target, &WeightSchedule::factorial(12)).unwrap();
        assert_eq!(steps.len(), 11);
        for s in &steps {
            assert!(s.residual <= s.bound + 1e-9, "{s:?}");
        }
        assert!(steps[10].residual <= 0.05);
        for w in steps[3..].windows(2) {
            assert!(w[1].bound < w[0].bound);
        }
    }

    #[test]
    fn zero_target_is_exact() {
        let space = ModelSpace::new(z(2)).unwrap();
        let phi = vec![z(1); 4];
        let target = DensityTarget::zero(2, 4);
        let steps = density_sweep(&space, &phi, &z(1), &z(1), &target, &WeightSchedule::factorial(4)).unwrap();
        assert!(steps.iter().all(|s| s.residual <= 1e-10));
    }

    #[test]
    fn hypothesis_clauses_are_named() {
        let space = ModelSpace::new(z(2)).unwrap();
        let phi = vec![z(1); 3];
        let target = DensityTarget::zero(2, 3);
        let err = density_sweep(&space, &phi, &z(1), &z(2), &target, &WeightSchedule::factorial(3)).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(ref s) if s.starts_with("(i)")));
        let short = density_sweep(&space, &phi[..1], &z(2), &z(1), &DensityTarget::zero(2, 1), &WeightSchedule::factorial(1));
        assert!(matches!(short, Err(Error::TruncationTooSmall(_))));
    }
}
