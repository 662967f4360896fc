use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::jordan::JordanModel;
use crate::linalg::{op_norm, sigma_min, CMat, C64};
use crate::subspace::AmbientSpace;

use super::{build_x, intertwining_residual, QuasiaffinityRecord, ScheduleSpec, WeightSchedule};

/// Cantor pairing `(n, m) -> (n+m)(n+m+1)/2 + m`.
pub fn cantor_pair(n: usize, m: usize) -> usize {
    let s = n + m;
    s * (s + 1) / 2 + m
}

/// Inverse of [`cantor_pair`].
pub fn cantor_unpair(j: usize) -> (usize, usize) {
    let mut s = (((8 * j + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
    while (s + 1) * (s + 2) / 2 <= j {
        s += 1;
    }
    while s * (s + 1) / 2 > j {
        s -= 1;
    }
    let m = j - s * (s + 1) / 2;
    (s - m, m)
}

/// Where restriction slot `j` was placed: row `n`, column `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairAssignment {
    pub slot: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MainRecord {
    pub record: QuasiaffinityRecord,
    /// Number of interleaved copies `2 max(len phi, len psi, len tau)`.
    pub interleave: usize,
    pub assignments: Vec<PairAssignment>,
    /// Restriction slots left as identity: empty summands (`phi_j = 1`) or
    /// pairs where `theta/phi_j` does not divide `tau_n`.
    pub skipped: Vec<usize>,
}

/// Builds `Y = V^T (⊕_n X_n/||X_n|| ⊕ I) V` on `⊕_{k<N} H(theta)`.
///
/// Copies are interleaved as in the canonical subspaces: copy `2j` carries
/// `(theta/phi_j)H^2 ⊖ theta H^2` and copy `2n+1` carries the compression
/// data `psi_n` (for `M_1`) or `tau_n` (for `M_2`). Restriction slot `j` is
/// attached to row `n` at column `m` where `(n, m)` is the Cantor unpairing
/// of `j`; row `n` then carries `X_n` built with
/// `omega_{n,m} = tau_n/(theta/phi_j)`.
pub fn build_y_main(
    ambient: &Arc<AmbientSpace>,
    phi: &JordanModel,
    psi: &JordanModel,
    tau: &JordanModel,
    schedule: &ScheduleSpec,
) -> Result<MainRecord> {
    let space = ambient.model().ok_or_else(|| {
        Error::PreconditionViolated("ambient is not a uniform Jordan operator".into())
    })?;
    let theta = ambient.theta();
    for n in 0..psi.len().max(tau.len()) {
        let (t, p) = (tau.get(n), psi.get(n));
        if !t.divides(&p) {
            return Err(Error::DivisibilityFailure { index: n, tau: t.to_string(), psi: p.to_string() });
        }
    }
    let half = phi.len().max(psi.len()).max(tau.len());
    let interleave = 2 * half;
    let copies = ambient.copies();
    if copies < interleave {
        return Err(Error::TruncationTooSmall(format!(
            "{copies} copies cannot hold {interleave} interleaved slots"
        )));
    }

    let mut rows: Vec<Vec<(usize, InnerFunction)>> = vec![Vec::new(); half];
    let mut assignments = Vec::new();
    let mut skipped = Vec::new();
    for j in 0..half {
        let (row, _) = cantor_unpair(j);
        let phi_j = phi.get(j);
        let outer = theta.quotient(&phi_j)?;
        let tau_n = tau.get(row);
        if phi_j.is_one() || !outer.divides(&tau_n) {
            skipped.push(j);
            continue;
        }
        rows[row].push((j, tau_n.quotient(&outer)?));
        assignments.push(PairAssignment { slot: j, row, col: rows[row].len() - 1 });
    }

    let longest = rows.iter().map(Vec::len).max().unwrap_or(0);
    let weights = WeightSchedule::from_spec(schedule, longest.max(1))?;
    let d = ambient.block_dim();
    let mut y = CMat::identity(d * copies, d * copies);
    let mut omega_list = Vec::new();
    for (n, row) in rows.iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        let omegas: Vec<InnerFunction> = row.iter().map(|(_, w)| w.clone()).collect();
        let x = build_x(space, &omegas, &weights)?;
        let scaled = &x.matrix / C64::new(op_norm(&x.matrix), 0.0);
        let slots: Vec<usize> = std::iter::once(2 * n + 1).chain(row.iter().map(|(j, _)| 2 * j)).collect();
        for (a, &sa) in slots.iter().enumerate() {
            for (b, &sb) in slots.iter().enumerate() {
                y.view_mut((sa * d, sb * d), (d, d))
                    .copy_from(&scaled.view((a * d, b * d), (d, d)));
            }
        }
        omega_list.extend(omegas);
    }

    let t = ambient.operator();
    let record = QuasiaffinityRecord {
        intertwining_residual: intertwining_residual(&y, t),
        sigma_min: sigma_min(&y),
        norm: op_norm(&y),
        omega_list,
        schedule: weights,
        matrix: y,
    };
    Ok(MainRecord { record, interleave, assignments, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::canonical_subspace_with_len;
    use crate::subspace::{image_closure, principal_distance};

    fn z(d: u32) -> InnerFunction {
        InnerFunction::z_pow(d)
    }

    fn model(parts: &[InnerFunction]) -> JordanModel {
        JordanModel::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn cantor_round_trip() {
        for j in 0..500 {
            let (n, m) = cantor_unpair(j);
            assert_eq!(cantor_pair(n, m), j);
        }
        assert_eq!(cantor_unpair(0), (0, 0));
        assert_eq!(cantor_unpair(1), (1, 0));
        assert_eq!(cantor_unpair(2), (0, 1));
    }

    #[test]
    fn equal_compression_data_gives_orbit() {
        let phi = model(&[z(1), z(1)]);
        let psi = model(&[z(1)]);
        for copies in [4, 8] {
            let ambient = AmbientSpace::new(z(2), copies).unwrap();
            let rec = build_y_main(&ambient, &phi, &psi, &psi, &ScheduleSpec::Factorial).unwrap();
            assert!(rec.record.is_valid(), "{:?}", rec.record.intertwining_residual);
            let m1 = canonical_subspace_with_len(&ambient, &phi, &psi, rec.interleave).unwrap();
            let image = image_closure(&rec.record.matrix, &m1).unwrap();
            assert!(principal_distance(&image, &m1).unwrap() < 1e-10);
        }
    }

    #[test]
    fn scalar_case_is_diagonal() {
        let phi = model(&[z(1)]);
        let ambient = AmbientSpace::new(z(1), 2).unwrap();
        let rec = build_y_main(&ambient, &phi, &phi, &phi, &ScheduleSpec::Factorial).unwrap();
        let y = &rec.record.matrix;
        assert!(y[(0, 1)].norm() < 1e-15 && y[(1, 0)].norm() < 1e-15);
        assert!(y[(0, 0)].re > 0.0 && y[(1, 1)].re > 0.0);
    }

    #[test]
    fn divisibility_and_truncation_gates() {
        let ambient = AmbientSpace::new(z(2), 4).unwrap();
        let err = build_y_main(&ambient, &model(&[z(1)]), &model(&[z(1)]), &model(&[z(2)]), &ScheduleSpec::Factorial);
        assert!(matches!(err, Err(Error::DivisibilityFailure { index: 0, .. })));
        let small = AmbientSpace::new(z(2), 2).unwrap();
        let phi = model(&[z(1), z(1)]);
        let err = build_y_main(&small, &phi, &phi, &phi, &ScheduleSpec::Factorial);
        assert!(matches!(err, Err(Error::TruncationTooSmall(_))));
    }
}
