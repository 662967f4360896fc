use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::linalg::{identity, op_norm, repeat_diag, CMat, C64};
use crate::model::ModelSpace;

use super::{intertwining_residual, QuasiaffinityRecord, WeightSchedule};

/// The operator `X(g ⊕ (f_n)) = (g + sum_n omega_n(S) f_n/(n+1)) ⊕ (c_n f_n)_n`
/// on `H(theta) ⊕ (⊕_{n<N} H(theta))`, with `N = omega_list.len()`.
pub fn build_x(
    space: &ModelSpace,
    omega_list: &[InnerFunction],
    schedule: &WeightSchedule,
) -> Result<QuasiaffinityRecord> {
    let copies = omega_list.len();
    if copies == 0 {
        return Err(Error::HypothesisViolated("at least one copy is required".into()));
    }
    if schedule.len() < copies {
        return Err(Error::InvalidSchedule(format!(
            "schedule has {} weights, {copies} needed",
            schedule.len()
        )));
    }
    let theta = space.theta();
    if let Some((n, w)) = omega_list.iter().enumerate().find(|(_, w)| !w.divides(theta)) {
        return Err(Error::HypothesisViolated(format!("omega_{n} = {w} does not divide theta = {theta}")));
    }

    let d = space.dim();
    let mut x = CMat::zeros((copies + 1) * d, (copies + 1) * d);
    // Explicit inverse `[[I, -R D^{-1}], [0, D^{-1}]]`: the smallest singular
    // value is taken as `1/||X^{-1}||`, which stays accurate when `c_n` is tiny.
    let mut x_inv = CMat::zeros((copies + 1) * d, (copies + 1) * d);
    x.view_mut((0, 0), (d, d)).copy_from(&identity(d));
    x_inv.view_mut((0, 0), (d, d)).copy_from(&identity(d));
    for (n, w) in omega_list.iter().enumerate() {
        let block = space.calculus(w)? / C64::new((n + 1) as f64, 0.0);
        let cn = schedule.c(n);
        x.view_mut((0, (n + 1) * d), (d, d)).copy_from(&block);
        x_inv.view_mut((0, (n + 1) * d), (d, d)).copy_from(&(-&block / C64::new(cn, 0.0)));
        x.view_mut(((n + 1) * d, (n + 1) * d), (d, d)).copy_from(&(identity(d) * C64::new(cn, 0.0)));
        x_inv.view_mut(((n + 1) * d, (n + 1) * d), (d, d)).copy_from(&(identity(d) * C64::new(1.0 / cn, 0.0)));
    }

    let t = repeat_diag(space.shift(), copies + 1);
    Ok(QuasiaffinityRecord {
        intertwining_residual: intertwining_residual(&x, &t),
        sigma_min: 1.0 / op_norm(&x_inv),
        norm: op_norm(&x),
        omega_list: omega_list.to_vec(),
        schedule: WeightSchedule::custom(schedule.values()[..copies].to_vec())?,
        matrix: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn identity_when_omega_is_theta() {
        let theta = InnerFunction::z_pow(2);
        let space = ModelSpace::new(theta.clone()).unwrap();
        let rec = build_x(&space, &[theta], &WeightSchedule::factorial(1)).unwrap();
        assert!(max_abs_diff(&rec.matrix, &identity(4)) < 1e-15);
        assert!(rec.is_valid());
    }

    #[test]
    fn small_instance_singular_value() {
        let space = ModelSpace::new(InnerFunction::z_pow(2)).unwrap();
        let z = InnerFunction::z_pow(1);
        let rec = build_x(&space, &[z.clone(), z], &WeightSchedule::factorial(2)).unwrap();
        assert_eq!(rec.matrix.nrows(), 6);
        assert!(rec.intertwining_residual <= 1e-10);
        assert!((rec.sigma_min - 0.42086143143284666).abs() < 1e-12);
        assert!(rec.sigma_min >= 0.5 * 0.5);
        assert!((rec.sigma_min - crate::linalg::sigma_min(&rec.matrix)).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_divisors() {
        let space = ModelSpace::new(InnerFunction::z_pow(2)).unwrap();
        let bad = InnerFunction::z_pow(3);
        assert!(matches!(
            build_x(&space, &[bad], &WeightSchedule::factorial(1)),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
