//! Run configuration documents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::linalg::{CMat, C64};
use crate::quasiaffine::ScheduleSpec;

use super::verify::VerifyOptions;

/// Target used by the density sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    /// Random unit vector; `F_n` supported on `n < target_support`.
    #[default]
    Random,
    /// The zero vector.
    Zero,
}

fn default_sweep() -> Vec<usize> {
    vec![4, 8, 12, 16]
}

fn default_gate() -> f64 {
    0.05
}

/// One JSON document per run. `theta`, `copies`, `schedule`, `sweep`, `gate`
/// and `seed` are shared by all commands; the remaining keys are optional and
/// command specific.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub theta: InnerFunction,
    pub copies: usize,
    #[serde(default)]
    pub schedule: ScheduleSpec,
    #[serde(default = "default_sweep")]
    pub sweep: Vec<usize>,
    #[serde(default = "default_gate")]
    pub gate: f64,
    #[serde(default)]
    pub seed: u64,
    /// Density sweep: restriction list `phi_n` (default: `theta` repeated,
    /// i.e. the whole space in every copy).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<InnerFunction>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi1: Option<InnerFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi2: Option<InnerFunction>,
    #[serde(default)]
    pub target: TargetKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_support: Option<usize>,
    /// Cordiag demo: similarity as rows of `[re, im]` pairs (random when absent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub similarity: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Config = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if config.copies == 0 {
            return Err(Error::Parse("copies must be positive".into()));
        }
        if !(config.gate.is_finite() && config.gate > 0.0) {
            return Err(Error::Parse("gate must be a positive number".into()));
        }
        Ok(config)
    }

    pub fn verify_options(&self) -> VerifyOptions {
        VerifyOptions { sweep: self.sweep.clone(), gate: self.gate, schedule: self.schedule.clone() }
    }

    pub fn phi_list(&self) -> Vec<InnerFunction> {
        self.phi.clone().unwrap_or_else(|| vec![self.theta.clone(); self.copies])
    }

    pub fn similarity_matrix(&self) -> Result<Option<CMat>> {
        let Some(rows) = &self.similarity else {
            return Ok(None);
        };
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("similarity must be a square matrix".into()));
        }
        Ok(Some(CMat::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1]))))
    }
}
