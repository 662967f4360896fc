//! Number formatting shared by CSV and JSON writers.

use std::io::Write;

use crate::error::{Error, Result};
use crate::quasiaffine::DensityStep;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style formatting: 12 significant digits, trailing zeros removed,
/// scientific notation outside `[1e-4, 1e12)`.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Rounds to 12 significant digits, for JSON output.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Recursively rounds every float in a JSON value to 12 significant digits.
pub fn round_json(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_json),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Column header of density sweep CSV files.
pub const DENSITY_HEADER: [&str; 6] = ["m", "residual", "bound", "sigma_min", "intertwine", "condition"];

/// Writes density sweep rows with the condition column `K(m)`.
pub fn write_density_csv<W: Write>(out: W, steps: &[DensityStep], condition: &[f64]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Parse(format!("csv output failed: {e}"));
    writer.write_record(DENSITY_HEADER).map_err(io)?;
    for s in steps {
        writer
            .write_record([
                s.m.to_string(),
                fmt_sig(s.residual),
                fmt_sig(s.bound),
                fmt_sig(s.sigma_min),
                fmt_sig(s.intertwine),
                fmt_sig(condition[s.m]),
            ])
            .map_err(io)?;
    }
    writer.flush().map_err(|e| Error::Parse(format!("csv output failed: {e}")))?;
    Ok(())
}
