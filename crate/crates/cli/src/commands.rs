//! Verb implementations.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use quasiorbit::harness::{
    cordiag_demo as run_cordiag, counterexample_search, round_json, verify_orbit as run_verify, write_density_csv,
    Config, CounterexampleOptions, TargetKind,
};
use quasiorbit::harness::random::seeded;
use quasiorbit::jordan::jordan_data;
use quasiorbit::quasiaffine::{density_sweep as run_density, DensityTarget, ScheduleSpec, WeightSchedule};
use quasiorbit::subspace::{AmbientSpec, SubspaceFile};
use quasiorbit::{AmbientSpace, JordanModel, ModelSpace, SubspaceFrame};

use crate::exit::{CliError, CliResult, BUDGET, INVARIANCE};
use crate::Common;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn load_config(common: &Common) -> CliResult<Option<Config>> {
    match &common.config {
        Some(path) => Config::from_json(&read(path)?)
            .map(Some)
            .map_err(|e| CliError::parse(format!("{}: {e}", path.display()))),
        None => Ok(None),
    }
}

fn require_config(common: &Common) -> CliResult<Config> {
    load_config(common)?.ok_or_else(|| CliError::parse("--config is required"))
}

fn ambient_override(common: &Common) -> CliResult<Option<AmbientSpec>> {
    common.ambient.as_deref().map(read_json).transpose()
}

fn emit(common: &Common, text: &str) -> CliResult<()> {
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::new(crate::exit::INTERNAL, format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::new(crate::exit::INTERNAL, e))
        }
    }
}

fn emit_json<T: Serialize>(common: &Common, value: &T) -> CliResult<()> {
    let mut value = serde_json::to_value(value).map_err(|e| CliError::new(crate::exit::INTERNAL, e))?;
    round_json(&mut value);
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| CliError::new(crate::exit::INTERNAL, e))?;
    text.push('\n');
    emit(common, &text)
}

/// Loads a subspace file into `ambient` (or its own ambient) and checks invariance.
fn load_subspace(path: &Path, ambient: Option<&Arc<AmbientSpace>>) -> CliResult<SubspaceFrame> {
    let file: SubspaceFile = read_json(path)?;
    let (m, adjustment) = match ambient {
        Some(a) => file.load_into(a)?,
        None => file.load()?,
    };
    if adjustment > 1e-6 {
        log::warn!("{}: frame re-orthonormalized (adjustment {adjustment:.3e})", path.display());
    }
    let (invariant, residual) = m.is_invariant();
    if !invariant {
        return Err(CliError::new(
            INVARIANCE,
            format!("{}: subspace is not invariant (residual {residual:.3e})", path.display()),
        ));
    }
    Ok(m)
}

#[derive(Serialize)]
struct JordanModelReport {
    ambient: AmbientSpec,
    dim: usize,
    restriction: String,
    compression: String,
    restriction_model: JordanModel,
    compression_model: JordanModel,
}

pub fn jordan_model(common: &Common) -> CliResult<()> {
    let [input] = common.input.as_slice() else {
        return Err(CliError::parse("jordan-model takes exactly one --input"));
    };
    let ambient = ambient_override(common)?.map(|spec| spec.build()).transpose()?;
    let m = load_subspace(input, ambient.as_ref())?;
    let data = jordan_data(&m)?;
    eprintln!("restriction: {}", data.restriction);
    eprintln!("compression: {}", data.compression);
    emit_json(
        common,
        &JordanModelReport {
            ambient: m.ambient().spec(),
            dim: m.dim(),
            restriction: data.restriction.to_string(),
            compression: data.compression.to_string(),
            restriction_model: data.restriction,
            compression_model: data.compression,
        },
    )
}

pub fn verify_orbit(common: &Common, sweep: Option<Vec<usize>>, gate: Option<f64>) -> CliResult<()> {
    let [first, second] = common.input.as_slice() else {
        return Err(CliError::parse("verify-orbit takes exactly two --input files"));
    };
    let mut options = load_config(common)?.map(|c| c.verify_options()).unwrap_or_default();
    if let Some(sweep) = sweep {
        options.sweep = sweep;
    }
    if let Some(gate) = gate {
        if !(gate.is_finite() && gate > 0.0) {
            return Err(CliError::parse("--gate must be a positive number"));
        }
        options.gate = gate;
    }
    if options.sweep.is_empty() {
        return Err(CliError::parse("the sweep must not be empty"));
    }
    let ambient = match ambient_override(common)? {
        Some(spec) => spec.build()?,
        None => read_json::<SubspaceFile>(first)?.ambient.build()?,
    };
    let m1 = load_subspace(first, Some(&ambient))?;
    let m2 = load_subspace(second, Some(&ambient))?;
    let report = run_verify(&m1, &m2, &options)?;
    eprintln!("verdict: {}", serde_json::to_value(report.verdict).unwrap_or_default());
    emit_json(common, &report)
}

fn config_with_ambient(common: &Common) -> CliResult<Config> {
    let mut config = require_config(common)?;
    if let Some(spec) = ambient_override(common)? {
        config.theta = spec.theta;
        config.copies = spec.copies;
    }
    Ok(config)
}

pub fn density_sweep(common: &Common) -> CliResult<()> {
    let config = config_with_ambient(common)?;
    let copies = config.copies;
    let schedule = WeightSchedule::from_spec(&config.schedule, copies)?;
    if matches!(config.schedule, ScheduleSpec::Polynomial { .. }) || schedule.condition_grows() {
        eprintln!(
            "warning: schedule {:?} violates (m+1) c_m -> 0; the condition sequence K(m) does not decay",
            config.schedule
        );
    }
    let space = ModelSpace::new(config.theta.clone())?;
    let phi = config.phi_list();
    if phi.len() != copies {
        return Err(CliError::parse(format!("phi has {} entries, copies = {copies}", phi.len())));
    }
    let psi1 = config.psi1.clone().unwrap_or_else(|| config.theta.clone());
    let psi2 = config.psi2.clone().unwrap_or_else(|| psi1.clone());
    let target = match config.target {
        TargetKind::Zero => DensityTarget::zero(space.dim(), copies),
        TargetKind::Random => {
            let support = config.target_support.unwrap_or((copies / 2).max(1));
            let mut rng = seeded(config.seed);
            // Membership failures surface as hypothesis violations in the sweep.
            DensityTarget::random(&space, &phi, &psi2, support, &mut rng)?
        }
    };
    let steps = run_density(&space, &phi, &psi1, &psi2, &target, &schedule)?;
    let mut buffer = Vec::new();
    write_density_csv(&mut buffer, &steps, &schedule.condition_sequence())?;
    emit(common, &String::from_utf8_lossy(&buffer))
}

pub fn counterexample(
    common: &Common,
    blocks: Vec<usize>,
    resolution: i64,
    budget: usize,
    max_witnesses: usize,
) -> CliResult<()> {
    let seed = load_config(common)?.map(|c| c.seed).unwrap_or_default();
    let options = CounterexampleOptions { blocks, resolution, budget, max_witnesses, seed };
    let report = counterexample_search(&options)?;
    eprintln!(
        "{} candidates, {} pairs decided, {} witnesses",
        report.candidates,
        report.pairs_checked,
        report.witnesses.len()
    );
    emit_json(common, &report)?;
    if !report.complete && report.witnesses.is_empty() {
        return Err(CliError::new(BUDGET, format!("budget of {budget} pairs exhausted without a witness")));
    }
    Ok(())
}

pub fn cordiag_demo(common: &Common) -> CliResult<()> {
    let config = config_with_ambient(common)?;
    let similarity = config.similarity_matrix()?;
    let report = run_cordiag(
        &config.theta,
        similarity.as_ref(),
        config.copies,
        config.pairs.unwrap_or(20),
        config.seed,
        &config.verify_options(),
    )?;
    eprintln!("{} pairs, {} disagreements", report.pairs.len(), report.disagreements);
    emit_json(common, &report)
}
