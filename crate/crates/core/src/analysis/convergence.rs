use serde::{Deserialize, Serialize};

use crate::dynamics::{PlantParams, State};
use crate::error::{Error, Result};
use crate::integrate::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub converged: bool,
    pub y_final: f64,
    pub k_final: f64,
    pub predicted_limit_k: Option<f64>,
    /// Earliest sample time after which `|y| ≤ band` for the rest of the run.
    pub time_to_band: Option<f64>,
    /// `max |r(t) − r(0)|` about `(0, a/b)`, for averaged-system runs only.
    pub radius_drift: Option<f64>,
}

/// Fraction of trailing samples that must lie inside the band.
pub const TAIL_FRACTION: f64 = 0.1;

pub fn convergence_report(traj: &Trajectory, band: f64, predicted: Option<State>) -> Result<ConvergenceReport> {
    if traj.is_empty() {
        return Err(Error::Precondition("trajectory is empty".into()));
    }
    if !(band > 0.0) {
        return Err(Error::Precondition(format!("band must be positive, got {band}")));
    }
    let n = traj.len();
    let tail = ((n as f64 * TAIL_FRACTION).ceil() as usize).clamp(1, n);
    let inside = |s: &State| s.y.abs() <= band;
    let converged = !traj.diverged() && traj.states[n - tail..].iter().all(inside);
    let first_in = traj.states.iter().rposition(|s| !inside(s)).map_or(Some(0), |i| (i + 1 < n).then_some(i + 1));
    let time_to_band = if traj.diverged() { None } else { first_in.map(|i| traj.times[i]) };

    let radius_drift = match (traj.is_lbs(), traj.meta.a, traj.meta.b) {
        (true, Some(a), Some(b)) => {
            let c0 = PlantParams::new(a, b)?.center();
            let r = |s: &State| s.y.hypot(s.k - c0);
            let r0 = r(&traj.states[0]);
            Some(traj.states.iter().map(|s| (r(s) - r0).abs()).fold(0.0, f64::max))
        }
        _ => None,
    };
    let last = traj.final_state();
    Ok(ConvergenceReport {
        converged,
        y_final: last.y,
        k_final: last.k,
        predicted_limit_k: predicted.map(|s| s.k),
        time_to_band,
        radius_drift,
    })
}
