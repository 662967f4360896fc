use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::linalg::{least_squares, CVec, RANGE_REL_TOL};
use crate::model::ModelSpace;

use super::SOLVE_TOL;

/// Finds `f` in `(theta/phi)H^2 ⊖ theta H^2` with `omega(S) f = g` and
/// `||f|| = ||g||`, where `omega = psi/(theta/phi)`.
///
/// Requires `phi | theta`, `psi | theta`, `(theta/phi) | psi` and
/// `g ∈ psi H^2 ⊖ theta H^2`. The result is the least-squares preimage on
/// the domain, projected onto `H(theta/omega)`.
pub fn solve_norm_preserving(
    space: &ModelSpace,
    phi: &InnerFunction,
    psi: &InnerFunction,
    g: &CVec,
) -> Result<CVec> {
    let theta = space.theta();
    if !phi.divides(theta) {
        return Err(Error::HypothesisViolated(format!("phi = {phi} does not divide theta = {theta}")));
    }
    if !psi.divides(theta) {
        return Err(Error::HypothesisViolated(format!("psi = {psi} does not divide theta = {theta}")));
    }
    let outer = theta.quotient(phi)?;
    if !outer.divides(psi) {
        return Err(Error::HypothesisViolated(format!(
            "theta/phi = {outer} does not divide psi = {psi}"
        )));
    }
    if g.len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: g.len() });
    }
    let omega = psi.quotient(&outer)?;

    let target = space.range_of(psi)?;
    let residual = (g - &target * (target.adjoint() * g)).norm();
    if residual > SOLVE_TOL {
        return Err(Error::NotInSubspace { residual });
    }

    let domain = space.range_of(&outer)?;
    let op = space.calculus(&omega)?;
    let coords = least_squares(&(&op * &domain), g, RANGE_REL_TOL);
    let f0 = &domain * coords;
    space.project_onto_submodel(&f0, &omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn z(d: u32) -> InnerFunction {
        InnerFunction::z_pow(d)
    }

    fn e(k: usize, n: usize) -> CVec {
        let mut v = CVec::zeros(n);
        v[k] = c(1.0, 0.0);
        v
    }

    #[test]
    fn shift_preimage() {
        let space = ModelSpace::new(z(3)).unwrap();
        let f = solve_norm_preserving(&space, &z(2), &z(2), &e(2, 3)).unwrap();
        assert!((f - e(1, 3)).norm() < 1e-12);
    }

    #[test]
    fn identity_case() {
        let theta = z(1).mul(&InnerFunction::blaschke(c(0.4, 0.2)).unwrap());
        let space = ModelSpace::new(theta.clone()).unwrap();
        let g = CVec::from_vec(vec![c(0.3, -0.1), c(0.5, 0.7)]);
        let f = solve_norm_preserving(&space, &theta, &InnerFunction::one(), &g).unwrap();
        assert!((f - g).norm() < 1e-12);
    }

    #[test]
    fn monomial_direct_solve() {
        let space = ModelSpace::new(z(4)).unwrap();
        let g = e(3, 4) * c(0.6, -0.8);
        let f = solve_norm_preserving(&space, &z(2), &z(3), &g).unwrap();
        assert!((f.clone() - e(2, 4) * c(0.6, -0.8)).norm() < 1e-12);
        assert!((f.norm() - g.norm()).abs() < 1e-12);
    }

    #[test]
    fn hypothesis_and_membership_errors() {
        let space = ModelSpace::new(z(4)).unwrap();
        assert!(matches!(
            solve_norm_preserving(&space, &z(1), &z(1), &e(3, 4)),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            solve_norm_preserving(&space, &z(2), &z(3), &e(0, 4)),
            Err(Error::NotInSubspace { .. })
        ));
    }
}
