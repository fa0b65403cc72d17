//! Fixed-step integration: explicit Euler, classical RK4 and the
//! Chen-Fliess series stepper.

mod chen_fliess;
mod table;
mod trajectory;

use serde::{Deserialize, Serialize};

pub use chen_fliess::{
    chen_fliess_simulate, chen_fliess_step, ChenFliessScheme, ChenFliessTerm, CoefficientSet, Monomial,
    DIVERGENCE_NORM, MAX_ORDER,
};
pub use table::{published_rows, table_errata, IntegralCoeff, LieCoeff, RowMark, TableRow};
pub use trajectory::{Failure, RunMeta, RunStatus, Trajectory};

use crate::dynamics::{ClosedLoop, ControllerSpec, LieBracketSystem, PlantParams, State, VectorField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Explicit Euler ("ode1").
    #[default]
    Euler,
    Rk4,
}

fn checked(s: State) -> Result<State> {
    if s.is_finite() {
        Ok(s)
    } else {
        Err(Error::NonFiniteState { y: s.y, k: s.k })
    }
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidStep(h))
    }
}

pub fn euler_step(rhs: &(impl VectorField + ?Sized), s: State, t: f64, h: f64) -> Result<State> {
    check_step(h)?;
    checked(s + h * rhs.rate(t, s))
}

pub fn rk4_step(rhs: &(impl VectorField + ?Sized), s: State, t: f64, h: f64) -> Result<State> {
    check_step(h)?;
    let k1 = rhs.rate(t, s);
    let k2 = rhs.rate(t + 0.5 * h, s + (0.5 * h) * k1);
    let k3 = rhs.rate(t + 0.5 * h, s + (0.5 * h) * k2);
    let k4 = rhs.rate(t + h, s + h * k3);
    checked(s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}

impl Method {
    pub fn step(self, rhs: &(impl VectorField + ?Sized), s: State, t: f64, h: f64) -> Result<State> {
        match self {
            Method::Euler => euler_step(rhs, s, t, h),
            Method::Rk4 => rk4_step(rhs, s, t, h),
        }
    }
}

/// Slack when deciding whether `(tf − t0)/h` is a whole number of steps.
const STEP_COUNT_SLACK: f64 = 1e-9;

/// Number of steps covering `[t0, tf]` with step `h`, the last possibly shortened.
pub(crate) fn step_count(t0: f64, tf: f64, h: f64) -> usize {
    ((tf - t0) / h - STEP_COUNT_SLACK).ceil().max(0.0) as usize
}

/// Integrates `rhs` from `(t0, s0)` to `tf` with samples at `t0 + i·h`; the
/// final step is shortened to land exactly on `tf`.
///
/// A non-finite state ends the run early: the samples computed so far are
/// kept and [`Trajectory::failure`] records the step that broke.
pub fn simulate(
    rhs: &(impl VectorField + ?Sized),
    s0: State,
    t0: f64,
    tf: f64,
    h: f64,
    method: Method,
) -> Result<Trajectory> {
    if !(t0.is_finite() && tf.is_finite()) || tf < t0 {
        return Err(Error::InvalidSpan { t0, tf });
    }
    check_step(h)?;
    if tf > t0 && h > tf - t0 {
        return Err(Error::InvalidStep(h));
    }
    checked(s0)?;

    let mut meta = RunMeta::new(s0, t0, tf, h);
    meta.method = Some(method);
    let mut traj = Trajectory::start(meta, t0, s0, rhs.input(t0, s0));
    let n = if tf > t0 { step_count(t0, tf, h) } else { 0 };
    let (mut t, mut s) = (t0, s0);
    for i in 1..=n {
        let next_t = if i == n { tf } else { t0 + i as f64 * h };
        match method.step(rhs, s, t, next_t - t) {
            Ok(next) => {
                t = next_t;
                s = next;
                traj.push(t, s, rhs.input(t, s));
            }
            Err(e) => {
                traj.fail(i, next_t, e.to_string());
                break;
            }
        }
    }
    Ok(traj)
}

/// Plant in closed loop with `controller`, labelled for export.
pub fn simulate_closed_loop(
    p: &PlantParams,
    controller: &ControllerSpec,
    s0: State,
    t0: f64,
    tf: f64,
    h: f64,
    method: Method,
) -> Result<Trajectory> {
    controller.validate()?;
    let sys = ClosedLoop::new(*p, controller.clone());
    Ok(simulate(&sys, s0, t0, tf, h, method)?
        .labelled(controller.name(), controller.omega())
        .with_plant(p))
}

/// The averaged (Lie-bracket) system, labelled `lbs`.
pub fn simulate_lbs(p: &PlantParams, s0: State, t0: f64, tf: f64, h: f64, method: Method) -> Result<Trajectory> {
    Ok(simulate(&LieBracketSystem::new(*p), s0, t0, tf, h, method)?
        .labelled("lbs", None)
        .with_plant(p))
}

/// Step width of the standard ode1 runs, `h = 2π/(40ω)`.
pub fn dither_step(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI / (40.0 * omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{NussbaumFn, Sign};

    fn plant(a: f64, b: f64) -> PlantParams {
        PlantParams::new(a, b).unwrap()
    }

    #[test]
    fn zero_field_leaves_state_unchanged() {
        let zero = |_t: f64, _s: State| State::ZERO;
        let s = State::new(0.3, -2.0);
        assert_eq!(euler_step(&zero, s, 0.0, 0.1).unwrap(), s);
        assert_eq!(rk4_step(&zero, s, 0.0, 0.1).unwrap(), s);
    }

    #[test]
    fn euler_step_on_lbs() {
        let lbs = LieBracketSystem::new(plant(1.0, 1.0));
        let s = euler_step(&lbs, State::new(1.0, 0.0), 0.0, 0.1).unwrap();
        assert!((s.y - 1.1).abs() < 1e-15 && (s.k - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rk4_on_exponential() {
        let f = |_t: f64, s: State| State::new(s.y, 0.0);
        let s = rk4_step(&f, State::new(1.0, 0.0), 0.0, 0.1).unwrap();
        assert!((s.y - 0.1_f64.exp()).abs() <= 1e-7);
    }

    #[test]
    fn non_positive_step_is_rejected() {
        let f = |_t: f64, s: State| s;
        assert!(matches!(euler_step(&f, State::ZERO, 0.0, 0.0), Err(Error::InvalidStep(_))));
        assert!(matches!(rk4_step(&f, State::ZERO, 0.0, -1.0), Err(Error::InvalidStep(_))));
    }

    #[test]
    fn degenerate_span_gives_single_sample() {
        let lbs = LieBracketSystem::new(plant(10.0, -2.0));
        let tr = simulate(&lbs, State::new(1.0, 0.0), 2.0, 2.0, 0.1, Method::Euler).unwrap();
        assert_eq!(tr.times, vec![2.0]);
        assert_eq!(tr.states, vec![State::new(1.0, 0.0)]);
    }

    #[test]
    fn bad_spans_and_steps_are_rejected() {
        let lbs = LieBracketSystem::new(plant(10.0, -2.0));
        let s = State::new(1.0, 0.0);
        assert!(matches!(simulate(&lbs, s, 1.0, 0.0, 0.1, Method::Euler), Err(Error::InvalidSpan { .. })));
        assert!(matches!(simulate(&lbs, s, 0.0, 1.0, 2.0, Method::Euler), Err(Error::InvalidStep(_))));
    }

    #[test]
    fn last_step_lands_on_final_time() {
        let lbs = LieBracketSystem::new(plant(1.0, 1.0));
        let tr = simulate(&lbs, State::new(0.1, 0.0), 0.0, 1.05, 0.1, Method::Rk4).unwrap();
        assert_eq!(tr.len(), 12);
        assert_eq!(tr.final_time(), 1.05);
        assert!((tr.times[10] - 1.0).abs() < 1e-15);
        let tr = simulate(&lbs, State::new(0.1, 0.0), 0.0, 1.0, 0.1, Method::Rk4).unwrap();
        assert_eq!(tr.len(), 11);
    }

    #[test]
    fn times_have_constant_step() {
        let h = dither_step(400.0);
        let lbs = LieBracketSystem::new(plant(10.0, -2.0));
        let tr = simulate(&lbs, State::new(1.0, 0.0), 0.0, 3.0, h, Method::Euler).unwrap();
        for w in tr.times.windows(2).take(tr.len() - 2) {
            assert!(((w[1] - w[0]) - h).abs() <= 1e-12 * w[1].max(1.0));
        }
    }

    #[test]
    fn blow_up_truncates_and_records_failure() {
        let f = |_t: f64, s: State| State::new(s.y * s.y, 0.0);
        let tr = simulate(&f, State::new(1.0, 0.0), 0.0, 2.0, 0.01, Method::Euler).unwrap();
        let fail = tr.failure.as_ref().expect("finite-time blow-up");
        assert_eq!(fail.step, tr.len());
        assert_eq!(tr.meta.status, RunStatus::Diverged);
        assert!(tr.states.iter().all(State::is_finite));
    }

    #[test]
    fn closed_loop_records_inputs() {
        let p = plant(10.0, -2.0);
        let c = ControllerSpec::willems_byrnes(Sign::Negative);
        let tr = simulate_closed_loop(&p, &c, State::new(1.0, 0.0), 0.0, 0.01, 1e-3, Method::Euler).unwrap();
        let u = tr.inputs.as_ref().unwrap();
        assert_eq!(u.len(), tr.len());
        assert_eq!(u[0], 0.0);
        assert_eq!(tr.meta.variant, "willems-byrnes");
        let lbs = simulate_lbs(&p, State::new(1.0, 0.0), 0.0, 0.01, 1e-3, Method::Euler).unwrap();
        assert!(lbs.inputs.is_none() && lbs.is_lbs());
    }

    #[test]
    fn rk4_self_convergence_on_lbs() {
        let lbs = LieBracketSystem::new(plant(10.0, -2.0));
        let a = simulate(&lbs, State::new(1.0, 0.0), 0.0, 5.0, 1e-4, Method::Rk4).unwrap().final_state();
        let b = simulate(&lbs, State::new(1.0, 0.0), 0.0, 5.0, 5e-5, Method::Rk4).unwrap().final_state();
        assert!((a - b).max_abs() <= 1e-8, "{a:?} vs {b:?}");
    }

    #[test]
    fn equilibria_are_fixed() {
        let p = plant(3.0, 0.7);
        for m in [Method::Euler, Method::Rk4] {
            let tr = simulate_lbs(&p, State::new(0.0, -4.0), 0.0, 1.0, 0.01, m).unwrap();
            assert!(tr.states.iter().all(|s| *s == State::new(0.0, -4.0)));
        }
    }

    #[test]
    fn standard_runs_settle() {
        let p = plant(10.0, -2.0);
        let s0 = State::new(1.0, 0.0);
        let c = ControllerSpec::proposed(400.0).unwrap();
        let tr = simulate_closed_loop(&p, &c, s0, 0.0, 3.0, dither_step(400.0), Method::Euler).unwrap();
        assert!(tr.final_state().y.abs() < 0.1);
        let c = ControllerSpec::nussbaum(NussbaumFn::SCosS);
        let tr = simulate_closed_loop(&p, &c, s0, 0.0, 3.0, 1e-4, Method::Euler).unwrap();
        assert!(tr.final_state().y.abs() < 0.1);
    }
}
