//! Benchmark fixtures shared by the criterion targets.

use quasiorbit::linalg::c;
use quasiorbit::{InnerFunction, JordanModel};

/// Product of `degree` Blaschke factors with zeros spread on the circle of radius 0.6.
pub fn spread_theta(degree: u32) -> InnerFunction {
    InnerFunction::new((0..degree).map(|k| {
        let angle = std::f64::consts::TAU * f64::from(k) / f64::from(degree);
        (c(0.6 * angle.cos(), 0.6 * angle.sin()), 1)
    }))
    .expect("distinct zeros inside the disc")
}

/// `(z, z)` restriction with compression `(z)`: the harness fixture over `z^2`.
pub fn orbit_models() -> (JordanModel, JordanModel) {
    let z = InnerFunction::z_pow(1);
    (JordanModel::new(vec![z.clone(), z.clone()]).unwrap(), JordanModel::new(vec![z]).unwrap())
}
