//! Weight schedules `c_n` and the condition sequence
//! `K(m) = (m+1) c_m (sum_{n<m} 1/((n+1) c_n)^2)^{1/2}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a schedule is specified in configuration files.
///
/// JSON forms: `"factorial"`, `{"polynomial": {"alpha": 2.0}}`,
/// `{"custom": {"values": [1.0, 0.5, ...]}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleSpec {
    /// `c_n = 1/(n+1)!`
    #[default]
    Factorial,
    /// `c_n = (n+1)^{-alpha}`
    Polynomial { alpha: f64 },
    /// Explicit values.
    Custom { values: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Factorial,
    Custom,
}

/// A materialized weight schedule `c_0, ..., c_{len-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSchedule {
    kind: ScheduleKind,
    values: Vec<f64>,
}

impl WeightSchedule {
    pub fn factorial(len: usize) -> Self {
        let mut values = Vec::with_capacity(len);
        let mut c = 1.0;
        for n in 0..len {
            c /= (n + 1) as f64;
            values.push(c);
        }
        Self { kind: ScheduleKind::Factorial, values }
    }

    pub fn polynomial(alpha: f64, len: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidSchedule(format!("polynomial exponent {alpha} must be >= 0")));
        }
        Self::custom((0..len).map(|n| ((n + 1) as f64).powf(-alpha)).collect())
    }

    pub fn custom(values: Vec<f64>) -> Result<Self> {
        if let Some((n, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidSchedule(format!("c_{n} = {v} is not a positive finite weight")));
        }
        Ok(Self { kind: ScheduleKind::Custom, values })
    }

    /// Materializes `spec` to `len` entries.
    pub fn from_spec(spec: &ScheduleSpec, len: usize) -> Result<Self> {
        match spec {
            ScheduleSpec::Factorial => Ok(Self::factorial(len)),
            ScheduleSpec::Polynomial { alpha } => Self::polynomial(*alpha, len),
            ScheduleSpec::Custom { values } => {
                if values.len() < len {
                    return Err(Error::InvalidSchedule(format!(
                        "custom schedule has {} values, {len} needed",
                        values.len()
                    )));
                }
                Self::custom(values[..len].to_vec())
            }
        }
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn c(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `sum_{n<m} 1/((n+1) c_n)^2`.
    pub fn inverse_square_sum(&self, m: usize) -> f64 {
        self.values[..m]
            .iter()
            .enumerate()
            .map(|(n, c)| ((n + 1) as f64 * c).powi(-2))
            .sum()
    }

    /// `K(m)`; `K(0) = 0` since the sum is empty.
    pub fn condition(&self, m: usize) -> f64 {
        (m + 1) as f64 * self.values[m] * self.inverse_square_sum(m).sqrt()
    }

    /// `K(m)` for every materialized `m`.
    pub fn condition_sequence(&self) -> Vec<f64> {
        let mut sum = 0.0_f64;
        let mut out = Vec::with_capacity(self.len());
        for (m, c) in self.values.iter().enumerate() {
            out.push((m + 1) as f64 * c * sum.sqrt());
            sum += ((m + 1) as f64 * c).powi(-2);
        }
        out
    }

    /// Heuristic divergence check: the last condition value exceeds the one
    /// at the midpoint of the materialized range.
    pub fn condition_grows(&self) -> bool {
        let k = self.condition_sequence();
        k.len() >= 4 && k[k.len() - 1] > k[(k.len() - 1) / 2]
    }
}
