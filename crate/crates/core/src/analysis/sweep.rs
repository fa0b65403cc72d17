use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{ControllerSpec, PlantParams, State};
use crate::error::{Error, Result};
use crate::integrate::{dither_step, simulate_closed_loop, simulate_lbs, Method, Trajectory};

/// Step of the RK4 reference run of the averaged system.
pub const LBS_REFERENCE_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub omega: f64,
    /// Sup-norm distance between the oscillatory and the averaged run over
    /// their shared sample times; infinite if either run blew up.
    pub error: f64,
}

/// Largest `‖x(t) − x̄(t)‖` over the samples of `full` whose time also
/// appears in `avg`.
pub fn shared_sup_distance(full: &Trajectory, avg: &Trajectory) -> f64 {
    if full.diverged() || avg.diverged() {
        return f64::INFINITY;
    }
    let (t0, n) = (avg.times[0], avg.len());
    let h = if n > 1 { avg.times[1] - t0 } else { 1.0 };
    let mut worst: f64 = 0.0;
    for (t, s) in full.times.iter().zip(&full.states) {
        let j = (((t - t0) / h).round().max(0.0) as usize).min(n - 1);
        let j = if (avg.times[j] - t).abs() <= 1e-9 * t.abs().max(1.0) {
            j
        } else if (avg.final_time() - t).abs() <= 1e-9 * t.abs().max(1.0) {
            n - 1
        } else {
            continue;
        };
        let d = (*s - avg.states[j]).norm();
        worst = if d.is_nan() { f64::INFINITY } else { worst.max(d) };
    }
    worst
}

fn sweep_one(p: &PlantParams, s0: State, tf: f64, omega: f64) -> Result<SweepPoint> {
    let controller = ControllerSpec::proposed(omega)?;
    let h = if tf > 0.0 { dither_step(omega).min(tf) } else { dither_step(omega) };
    // The averaged run refines h by an integer factor so both grids share samples.
    let m = (h / LBS_REFERENCE_STEP).ceil().max(1.0);
    let full = simulate_closed_loop(p, &controller, s0, 0.0, tf, h, Method::Euler)?;
    let avg = simulate_lbs(p, s0, 0.0, tf, h / m, Method::Rk4)?;
    Ok(SweepPoint {
        omega,
        error: shared_sup_distance(&full, &avg),
    })
}

/// Distance between the proposed closed loop (ode1, `h = 2π/(40ω)`) and the
/// averaged system (RK4) from `s0` over `[0, tf]`, one entry per `ω`, in
/// input order.
pub fn approximation_sweep(p: &PlantParams, s0: State, tf: f64, omegas: &[f64]) -> Result<Vec<SweepPoint>> {
    if omegas.is_empty() {
        return Err(Error::Precondition("frequency list is empty".into()));
    }
    if !(tf >= 0.0 && tf.is_finite()) {
        return Err(Error::InvalidSpan { t0: 0.0, tf });
    }
    omegas.par_iter().map(|&w| sweep_one(p, s0, tf, w)).collect()
}

/// Whether the errors strictly decrease along the list.
pub fn strictly_decreasing(points: &[SweepPoint]) -> bool {
    points.windows(2).all(|w| w[1].error < w[0].error)
}

pub fn write_sweep_csv(points: &[SweepPoint], mut w: impl Write) -> Result<()> {
    writeln!(w, "omega,error")?;
    for pt in points {
        writeln!(w, "{},{}", pt.omega, pt.error)?;
    }
    Ok(())
}
