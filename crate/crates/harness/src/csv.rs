//! CSV emission: fixed column set, decimal notation with nine significant
//! digits, LF newlines. Values round-trip through parsing to the printed
//! precision.

use crate::metrics::RunMetrics;
use crate::runner::{Row, RunRecord};
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse failure in {path} line {line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
}

pub const RUN_COLUMNS: &[&str] = &[
    "t", "btil_x", "btil_y", "btil_z", "vtil_x", "vtil_y", "vtil_z", "phi_Q", "omega_norm",
    "eb_x", "eb_y", "eb_z", "ev_x", "ev_y", "ev_z", "ephi_x", "ephi_y", "ephi_z", "phi_ER",
    "eom_x", "eom_y", "eom_z", "etau_x", "etau_y", "etau_z", "f", "tau_x", "tau_y", "tau_z",
    "V_T", "V_A",
];

/// Decimal notation with nine significant digits (no exponent), `NaN` for
/// undefined values.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        return "NaN".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if v == 0.0 {
        return "0.00000000".to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (8 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

fn row_values(row: &Row) -> [f64; 31] {
    [
        row.t,
        row.position_err.x,
        row.position_err.y,
        row.position_err.z,
        row.velocity_err.x,
        row.velocity_err.y,
        row.velocity_err.z,
        row.phi_q,
        row.omega_err_norm,
        row.e_position.x,
        row.e_position.y,
        row.e_position.z,
        row.e_velocity.x,
        row.e_velocity.y,
        row.e_velocity.z,
        row.e_force.x,
        row.e_force.y,
        row.e_force.z,
        row.phi_er,
        row.e_angular.x,
        row.e_angular.y,
        row.e_angular.z,
        row.e_torque.x,
        row.e_torque.y,
        row.e_torque.z,
        row.thrust,
        row.torque.x,
        row.torque.y,
        row.torque.z,
        row.lyap_translational,
        row.lyap_attitude,
    ]
}

/// Serializes a record (header plus one line per row).
pub fn render_csv(record: &RunRecord) -> String {
    let mut out = String::with_capacity(64 * (record.rows.len() + 1));
    out.push_str(&RUN_COLUMNS.join(","));
    out.push('\n');
    for row in &record.rows {
        let values = row_values(row);
        let mut first = true;
        for v in values {
            if !first {
                out.push(',');
            }
            out.push_str(&format_value(v));
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(record: &RunRecord, path: &Path) -> Result<(), CsvError> {
    let text = render_csv(record);
    write_text(path, &text)
}

fn write_text(path: &Path, text: &str) -> Result<(), CsvError> {
    let mut file = std::fs::File::create(path).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(text.as_bytes()).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a file written by [`write_csv`] back into numeric rows.
pub fn parse_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CsvError> {
    let text = std::fs::read_to_string(path).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut lines = text.lines().enumerate();
    let header = match lines.next() {
        Some((_, h)) => h.split(',').map(str::to_string).collect(),
        None => {
            return Err(CsvError::Parse {
                path: path.display().to_string(),
                line: 1,
                reason: "empty file".into(),
            })
        }
    };
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let v = match field {
                "NaN" => f64::NAN,
                "inf" => f64::INFINITY,
                "-inf" => f64::NEG_INFINITY,
                other => other.parse::<f64>().map_err(|e| CsvError::Parse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    reason: e.to_string(),
                })?,
            };
            row.push(v);
        }
        rows.push(row);
    }
    Ok((header, rows))
}

pub const METRIC_COLUMNS: &[&str] = &[
    "run",
    "settle_position",
    "settle_force_est",
    "settle_torque_est",
    "steady_position",
    "steady_attitude",
    "steady_force_est",
    "steady_torque_est",
    "peak_force_est",
    "peak_torque_est",
];

/// Writes the per-run metric summary; settling times that never occur are
/// reported as `NaN`.
pub fn write_metrics(metrics: &[RunMetrics], path: &Path) -> Result<(), CsvError> {
    let mut out = String::new();
    out.push_str(&METRIC_COLUMNS.join(","));
    out.push('\n');
    let opt = |v: Option<f64>| format_value(v.unwrap_or(f64::NAN));
    for m in metrics {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            m.name,
            opt(m.settle_position),
            opt(m.settle_force_est),
            opt(m.settle_torque_est),
            format_value(m.steady_position),
            format_value(m.steady_attitude),
            format_value(m.steady_force_est),
            format_value(m.steady_torque_est),
            format_value(m.peak_force_est),
            format_value(m.peak_torque_est),
        ));
    }
    write_text(path, &out)
}
