//! Acceptance suite: one PASS/FAIL line per criterion.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasiorbit::exact::{jordan_partitions, krylov_basis, model_of_partition, nilpotent_jordan, Q};
use quasiorbit::harness::random::{
    random_divisor, random_inner, random_invariant_subspace, random_orbit_pair, random_theta,
};
use quasiorbit::harness::{
    cordiag_demo, counterexample_search, verify_orbit, verify_orbit_models, CounterexampleOptions, OrbitModels,
    Verdict, VerifyOptions,
};
use quasiorbit::jordan::jordan_data;
use quasiorbit::linalg::{c, nullspace, op_norm};
use quasiorbit::quasiaffine::{build_x, density_sweep, solve_norm_preserving, DensityTarget, WeightSchedule};
use quasiorbit::{AmbientSpace, CMat, CVec, InnerFunction, JordanModel, ModelSpace, SubspaceFrame};

type Outcome = Result<String, String>;

fn z(d: u32) -> InnerFunction {
    InnerFunction::z_pow(d)
}

fn model(parts: &[InnerFunction]) -> JordanModel {
    JordanModel::new(parts.to_vec()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed <= Duration::from_secs(limit_s), || format!("runtime {elapsed:?} exceeds {limit_s} s"))
}

/// Gap between the orthogonal projections onto the column spans of two
/// orthonormal frames.
fn frame_gap(a: &CMat, b: &CMat) -> f64 {
    if a.ncols() != b.ncols() {
        return 1.0;
    }
    op_norm(&(a * a.adjoint() - b * b.adjoint()))
}

fn random_in(frame: &CMat, rng: &mut ChaCha8Rng) -> CVec {
    let coords = CVec::from_fn(frame.ncols(), |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    frame * coords
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut annihilation, mut norm, mut defect) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..50 {
        let theta = random_theta(&mut rng, 8, 0.05);
        let space = ModelSpace::new(theta.clone()).map_err(|e| e.to_string())?;
        annihilation = annihilation.max(op_norm(&space.calculus(&theta).map_err(|e| e.to_string())?));
        for _ in 0..200 {
            let u = random_inner(&mut rng, 4);
            let v = random_inner(&mut rng, 4);
            let us = space.calculus(&u).map_err(|e| e.to_string())?;
            let vs = space.calculus(&v).map_err(|e| e.to_string())?;
            let uv = space.calculus(&u.mul(&v)).map_err(|e| e.to_string())?;
            norm = norm.max(op_norm(&us));
            defect = defect.max(op_norm(&(uv - &us * &vs)));
        }
    }
    ensure(annihilation <= 1e-10, || format!("max ||theta(S)|| = {annihilation:e}"))?;
    ensure(norm <= 1.0 + 1e-10, || format!("max ||u(S)|| = {norm}"))?;
    ensure(defect <= 1e-9, || format!("homomorphism defect {defect:e}"))?;
    within(start.elapsed(), 10)?;
    Ok(format!("||theta(S)|| <= {annihilation:.1e}, ||u(S)|| <= {norm:.12}, defect {defect:.1e}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst, mut divisors) = (0.0_f64, 0usize);
    for _ in 0..20 {
        let theta = random_theta(&mut rng, 6, 0.05);
        let space = ModelSpace::new(theta.clone()).map_err(|e| e.to_string())?;
        for phi in theta.divisors() {
            let range = space.range_of(&phi).map_err(|e| e.to_string())?;
            let cofactor = theta.quotient(&phi).map_err(|e| e.to_string())?;
            let kernel = nullspace(&space.calculus(&cofactor).map_err(|e| e.to_string())?, 1e-8);
            let gap = frame_gap(&range, &kernel);
            ensure(gap <= 1e-8, || format!("theta = {theta}, phi = {phi}: distance {gap:e}"))?;
            worst = worst.max(gap);
            divisors += 1;
        }
    }
    within(start.elapsed(), 10)?;
    Ok(format!("{divisors} divisors, max distance {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut residual, mut defect) = (0.0_f64, 0.0_f64);
    for _ in 0..100 {
        let theta = random_theta(&mut rng, 6, 0.05);
        let space = ModelSpace::new(theta.clone()).map_err(|e| e.to_string())?;
        let phi = random_divisor(&mut rng, &theta);
        let outer = theta.quotient(&phi).map_err(|e| e.to_string())?;
        let psi = outer.mul(&random_divisor(&mut rng, &phi));
        let omega = psi.quotient(&outer).map_err(|e| e.to_string())?;
        let g = random_in(&space.range_of(&psi).map_err(|e| e.to_string())?, &mut rng);
        let f = solve_norm_preserving(&space, &phi, &psi, &g).map_err(|e| e.to_string())?;
        let image = space.calculus(&omega).map_err(|e| e.to_string())? * &f;
        residual = residual.max((image - &g).norm());
        defect = defect.max((f.norm() - g.norm()).abs());
    }
    ensure(residual <= 1e-9, || format!("solve residual {residual:e}"))?;
    ensure(defect <= 1e-9, || format!("norm defect {defect:e}"))?;
    Ok(format!("solve residual {residual:.1e}, norm defect {defect:.1e}"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut residual, mut ratio) = (0.0_f64, f64::INFINITY);
    for copies in 1..=16 {
        for _ in 0..3 {
            let theta = random_theta(&mut rng, 4, 0.05);
            let space = ModelSpace::new(theta.clone()).map_err(|e| e.to_string())?;
            let omega: Vec<InnerFunction> = (0..copies).map(|_| random_divisor(&mut rng, &theta)).collect();
            let schedule = WeightSchedule::factorial(copies);
            let rec = build_x(&space, &omega, &schedule).map_err(|e| e.to_string())?;
            residual = residual.max(rec.intertwining_residual);
            let r = rec.sigma_min / (0.5 * schedule.min());
            ensure(r >= 1.0, || format!("N = {copies}: sigma_min {:e} below half of min c_n", rec.sigma_min))?;
            ratio = ratio.min(r);
        }
    }
    ensure(residual <= 1e-10, || format!("intertwining residual {residual:e}"))?;
    Ok(format!("intertwining residual {residual:.1e}, min sigma_min/(min c/2) = {ratio:.6}"))
}

fn criterion_5() -> Outcome {
    let k = WeightSchedule::factorial(31).condition_sequence();
    // Oracle: K(m) = (m+1) c_m (sum_{n<m} (n!)^2)^{1/2} with c_m = 1/(m+1)!.
    let oracle = |m: usize| -> f64 {
        let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
        let sum: f64 = (0..m).map(|n| fact(n).powi(2)).sum();
        sum.sqrt() / fact(m)
    };
    ensure((k[1] - 1.0).abs() <= 1e-12, || format!("K(1) = {}", k[1]))?;
    ensure((k[1] - oracle(1)).abs() <= 1e-12, || format!("K(1) oracle {}", oracle(1)))?;
    ensure((k[5] - 0.20716).abs() <= 1e-4, || format!("K(5) = {}", k[5]))?;
    ensure((k[5] - oracle(5)).abs() <= 1e-12, || format!("K(5) oracle {}", oracle(5)))?;
    ensure(k[4..=30].windows(2).all(|w| w[1] < w[0]), || "K(m) not decreasing on 4..=30".into())?;
    let poly = WeightSchedule::polynomial(2.0, 31).map_err(|e| e.to_string())?.condition_sequence();
    ensure(poly[30] > poly[10], || format!("polynomial K(30) = {} <= K(10) = {}", poly[30], poly[10]))?;
    Ok(format!("K(1) = {}, K(5) = {:.12}, polynomial K(10) = {:.4}, K(30) = {:.4}", k[1], k[5], poly[10], poly[30]))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let space = ModelSpace::new(z(2)).map_err(|e| e.to_string())?;
    let phi = vec![z(1); 12];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let target = DensityTarget::random(&space, &phi, &z(1), 6, &mut rng).map_err(|e| e.to_string())?;
    let steps = density_sweep(&space, &phi, &z(2), &z(1), &target, &WeightSchedule::factorial(12))
        .map_err(|e| e.to_string())?;
    for s in &steps {
        ensure(s.residual <= s.bound + 1e-9, || format!("m = {}: residual {} > bound {}", s.m, s.residual, s.bound))?;
    }
    let last = steps.iter().find(|s| s.m == 11).ok_or("no step m = 11")?;
    ensure(last.residual <= 0.05, || format!("residual(11) = {}", last.residual))?;
    within(start.elapsed(), 5)?;
    Ok(format!("residual(11) = {:.3e}, bound(11) = {:.3e}", last.residual, last.bound))
}

fn sweep_options() -> VerifyOptions {
    VerifyOptions { sweep: vec![8, 12, 16], ..VerifyOptions::default() }
}

fn check_positive(report: &quasiorbit::harness::VerifyReport) -> Result<f64, String> {
    ensure(report.verdict == Verdict::Orbit, || format!("verdict {:?}", report.verdict))?;
    let curve: Vec<(usize, f64)> = report.distance_curve.clone();
    let ns: Vec<usize> = curve.iter().map(|p| p.0).collect();
    ensure(ns == [8, 12, 16], || format!("sweep points {ns:?}"))?;
    let d: Vec<f64> = curve.iter().map(|p| p.1).collect();
    ensure(d[2] < 0.05, || format!("distance at N = 16 is {}", d[2]))?;
    ensure(quasiorbit::harness::verify::is_decreasing(&d), || format!("curve {d:?} not decreasing"))?;
    Ok(d[2])
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let options = sweep_options();
    let mut worst = 0.0_f64;
    let mut k = 0;
    while k < 10 {
        let theta = if k % 2 == 0 { z(2) } else { random_theta(&mut rng, 3, 0.1) };
        let ambient = AmbientSpace::new(theta, 2 + k % 2).map_err(|e| e.to_string())?;
        let (m1, m2) = random_orbit_pair(&mut rng, &ambient).map_err(|e| e.to_string())?;
        let d1 = jordan_data(&m1).map_err(|e| e.to_string())?;
        let d2 = jordan_data(&m2).map_err(|e| e.to_string())?;
        ensure(d1.restriction == d2.restriction && d1.compression == d2.compression, || {
            format!("pair {k}: orbit pair with different Jordan data")
        })?;
        let report = verify_orbit(&m1, &m2, &options).map_err(|e| e.to_string())?;
        worst = worst.max(check_positive(&report).map_err(|e| format!("pair {k}: {e}"))?);
        ensure(report.direct_orbit != Some(false), || format!("pair {k}: direct commutant check failed"))?;
        k += 1;
    }
    Ok(format!("10 pairs orbit, max distance at N = 16: {worst:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let options = sweep_options();
    let mut unequal = 0;
    while unequal < 5 {
        let ambient = AmbientSpace::new(z(2), 2).map_err(|e| e.to_string())?;
        let m1 = random_invariant_subspace(&mut rng, &ambient).map_err(|e| e.to_string())?;
        let m2 = random_invariant_subspace(&mut rng, &ambient).map_err(|e| e.to_string())?;
        let d1 = jordan_data(&m1).map_err(|e| e.to_string())?;
        let d2 = jordan_data(&m2).map_err(|e| e.to_string())?;
        if d1.restriction == d2.restriction || !d2.compression.injects_into(&d1.compression) {
            continue;
        }
        let report = verify_orbit(&m1, &m2, &options).map_err(|e| e.to_string())?;
        ensure(report.verdict == Verdict::NoOrbit, || format!("unequal restrictions: {:?}", report.verdict))?;
        ensure(report.direct_orbit != Some(true), || "direct check found an orbit".into())?;
        unequal += 1;
    }
    let b = InnerFunction::blaschke(c(0.3, -0.2)).unwrap();
    let zb = z(1).mul(&b);
    let cases = [
        (z(2), model(&[z(1), z(1)]), model(&[z(1)]), model(&[z(2)])),
        (z(3), model(&[z(2)]), model(&[z(1)]), model(&[z(2)])),
        (z(3), model(&[z(2), z(1)]), model(&[z(2), z(1)]), model(&[z(3), z(1)])),
        (zb.clone(), model(&[z(1)]), model(&[z(1)]), model(std::slice::from_ref(&b))),
        (zb.clone(), model(&[b.clone(), b.clone()]), model(&[z(1)]), model(std::slice::from_ref(&zb))),
    ];
    for (theta, phi, psi, tau) in cases {
        let models = OrbitModels { restriction1: phi.clone(), compression1: psi, restriction2: phi, compression2: tau };
        let report = verify_orbit_models(&theta, models, &options).map_err(|e| e.to_string())?;
        ensure(report.restriction_models_equal && !report.compression_divisibility, || {
            "fixture does not violate exactly the divisibility condition".into()
        })?;
        ensure(report.verdict == Verdict::NoOrbit, || format!("tau does not divide psi: {:?}", report.verdict))?;
    }
    Ok("5 unequal-restriction pairs and 5 non-dividing compression pairs: no-orbit".into())
}

fn random_exact_subspace(rng: &mut ChaCha8Rng, d: usize, copies: usize) -> (quasiorbit::exact::QMat, CMat) {
    let t = nilpotent_jordan(&vec![d; copies]);
    let n = d * copies;
    let generators = rng.random_range(1..=2);
    let vectors: Vec<Vec<Q>> = (0..generators)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let x = if rng.random_bool(0.4) { 0 } else { rng.random_range(-3i64..=3) };
                    Q::from_integer(x.into())
                })
                .collect()
        })
        .collect();
    let basis = krylov_basis(&t, &vectors);
    let float = basis.to_cmat();
    (basis, float)
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut compared = 0;
    while compared < 100 {
        let d = rng.random_range(1..=4usize);
        let copies = rng.random_range(1..=3usize);
        let (basis, float) = random_exact_subspace(&mut rng, d, copies);
        if basis.cols() == 0 {
            continue;
        }
        let t = nilpotent_jordan(&vec![d; copies]);
        let (restriction, compression) = jordan_partitions(&t, &basis);
        let ambient: Arc<AmbientSpace> = AmbientSpace::new(z(d as u32), copies).map_err(|e| e.to_string())?;
        let frame = SubspaceFrame::from_spanning(&ambient, &float).map_err(|e| e.to_string())?;
        let data = jordan_data(&frame).map_err(|e| e.to_string())?;
        let exact = (model_of_partition(&restriction), model_of_partition(&compression));
        ensure(exact == (data.restriction.clone(), data.compression.clone()), || {
            format!(
                "d = {d}, N = {copies}: exact ({}, {}) vs float ({}, {})",
                exact.0, exact.1, data.restriction, data.compression
            )
        })?;
        compared += 1;
    }
    Ok("100 random subspaces, exact and float Jordan models agree".into())
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let report = counterexample_search(&CounterexampleOptions::default()).map_err(|e| e.to_string())?;
    let w = report.witnesses.first().ok_or("no witness for S(z^2) + S(z)")?;
    ensure(w.decided_by != quasiorbit::exact::DecidedBy::Randomized, || "witness decided by sampling".into())?;
    let control = counterexample_search(&CounterexampleOptions {
        blocks: vec![1, 1],
        resolution: 2,
        max_witnesses: usize::MAX,
        ..CounterexampleOptions::default()
    })
    .map_err(|e| e.to_string())?;
    ensure(control.complete, || "negative control did not finish".into())?;
    ensure(control.witnesses.is_empty(), || format!("negative control found {} witnesses", control.witnesses.len()))?;
    within(start.elapsed(), 60)?;
    Ok(format!(
        "witness span{:?} vs span{:?} (restriction {}, decided by {:?}); control: {} pairs, none",
        w.m1, w.m2, w.restriction, w.decided_by, control.pairs_checked
    ))
}

fn criterion_11() -> Outcome {
    let report = cordiag_demo(&z(2), None, 3, 20, 11, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    ensure(report.pairs.len() == 20, || format!("{} pairs", report.pairs.len()))?;
    ensure(report.disagreements == 0, || format!("{} disagreements", report.disagreements))?;
    let orbit = report.pairs.iter().filter(|p| p.uniform_verdict == Verdict::Orbit).count();
    Ok(format!("20 pairs ({orbit} orbit), 0 disagreements, cond(S) = {:.3}", report.similarity_condition))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2}: PASS ({secs:.2} s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2}: FAIL ({secs:.2} s) {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
