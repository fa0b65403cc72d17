//! Diagnostics on trajectories and gain functions.

mod convergence;
mod lyapunov;
mod nussbaum;
mod sweep;

pub use convergence::{convergence_report, ConvergenceReport, TAIL_FRACTION};
pub use lyapunov::{lbs_limit_point, lyapunov_rate, lyapunov_value, radius, LyapunovParams};
pub use nussbaum::{nussbaum_type_check, Excursions, NussbaumReport, MIN_GRID};
pub use sweep::{
    approximation_sweep, shared_sup_distance, strictly_decreasing, write_sweep_csv, SweepPoint, LBS_REFERENCE_STEP,
};
