//! Scalar summaries of a run: settling times, steady-state means over the
//! last fifth of the horizon, and peak transients.

use crate::runner::RunRecord;

/// Default tolerance band for tracking errors (m / rad).
pub const TRACKING_TOL: f64 = 1e-3;
/// Default tolerance band for estimation errors (N / N·m).
pub const ESTIMATION_TOL: f64 = 1e-4;
/// Fraction of the run used as the steady-state window.
pub const STEADY_FRACTION: f64 = 0.2;

/// Earliest time from which the series stays strictly inside the tolerance
/// band; `None` if it is outside the band at the final sample or re-exits.
pub fn settling_time(series: &[(f64, f64)], tol: f64) -> Option<f64> {
    assert!(tol > 0.0);
    let mut settle: Option<f64> = Some(0.0);
    for (t, v) in series {
        if v.abs() >= tol {
            settle = None;
        } else if settle.is_none() {
            settle = Some(*t);
        }
    }
    settle
}

/// Mean of the last [`STEADY_FRACTION`] of the samples.
pub fn steady_state(series: &[(f64, f64)]) -> f64 {
    if series.is_empty() {
        return f64::NAN;
    }
    let start = series.len() - (series.len() as f64 * STEADY_FRACTION).ceil() as usize;
    let window = &series[start.min(series.len() - 1)..];
    window.iter().map(|(_, v)| v).sum::<f64>() / window.len() as f64
}

/// Largest magnitude over the whole run.
pub fn peak(series: &[(f64, f64)]) -> f64 {
    series.iter().fold(0.0f64, |acc, (_, v)| acc.max(v.abs()))
}

/// Largest magnitude over `t >= from`.
pub fn peak_after(series: &[(f64, f64)], from: f64) -> f64 {
    series
        .iter()
        .filter(|(t, _)| *t >= from)
        .fold(0.0f64, |acc, (_, v)| acc.max(v.abs()))
}

#[derive(Debug, Clone)]
pub struct RunMetrics {
    pub name: String,
    pub settle_position: Option<f64>,
    pub settle_force_est: Option<f64>,
    pub settle_torque_est: Option<f64>,
    pub steady_position: f64,
    pub steady_attitude: f64,
    pub steady_force_est: f64,
    pub steady_torque_est: f64,
    pub peak_force_est: f64,
    pub peak_torque_est: f64,
}

pub fn compute_metrics(record: &RunRecord) -> RunMetrics {
    let pos = record.series(|r| r.position_err.norm());
    let att = record.series(|r| r.phi_q);
    let ef = record.series(|r| r.e_force.norm());
    let et = record.series(|r| r.e_torque.norm());
    RunMetrics {
        name: record.name.clone(),
        settle_position: settling_time(&pos, TRACKING_TOL),
        settle_force_est: settling_time(&ef, ESTIMATION_TOL),
        settle_torque_est: settling_time(&et, ESTIMATION_TOL),
        steady_position: steady_state(&pos),
        steady_attitude: steady_state(&att),
        steady_force_est: steady_state(&ef),
        steady_torque_est: steady_state(&et),
        peak_force_est: peak(&ef),
        peak_torque_est: peak(&et),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn settling_of_all_zero_series_is_zero() {
        let series: Vec<(f64, f64)> = (0..10).map(|k| (k as f64, 0.0)).collect();
        assert_eq!(settling_time(&series, 1e-3), Some(0.0));
    }

    #[test]
    fn settling_finds_last_entry_into_band() {
        let series = vec![(0.0, 1.0), (1.0, 0.5), (2.0, 2e-3), (3.0, 5e-4), (4.0, 1e-4)];
        assert_eq!(settling_time(&series, 1e-3), Some(3.0));
    }

    #[test]
    fn oscillating_series_never_settles() {
        let series: Vec<(f64, f64)> = (0..100)
            .map(|k| (k as f64, if k % 2 == 0 { 1e-4 } else { 2e-3 }))
            .collect();
        assert_eq!(settling_time(&series, 1e-3), None);
    }

    #[test]
    fn steady_state_uses_last_fifth() {
        let series: Vec<(f64, f64)> = (0..10)
            .map(|k| (k as f64, if k < 8 { 100.0 } else { 1.0 }))
            .collect();
        assert_eq!(steady_state(&series), 1.0);
    }

    #[test]
    fn peaks() {
        let series = vec![(0.0, 1.0), (1.0, -3.0), (2.0, 2.0)];
        assert_eq!(peak(&series), 3.0);
        assert_eq!(peak_after(&series, 1.5), 2.0);
    }
}
