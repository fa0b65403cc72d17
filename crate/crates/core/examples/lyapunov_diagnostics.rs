//! The `V_p` family along an averaged run, the predicted limit point and a
//! convergence report.

use lieadapt::analysis::{convergence_report, lbs_limit_point, lyapunov_value, LyapunovParams};
use lieadapt::dynamics::{PlantParams, State};
use lieadapt::integrate::{simulate_lbs, Method};

fn main() -> lieadapt::error::Result<()> {
    let plant = PlantParams::new(10.0, -2.0)?;
    let s0 = State::new(1.0, -5.0);
    let tr = simulate_lbs(&plant, s0, 0.0, 50.0, 1e-4, Method::Rk4)?;

    for p in [0.0, 1.0, 5.0] {
        let lp = LyapunovParams::new(&plant, p)?;
        let v: Vec<f64> = tr.states.iter().map(|s| lyapunov_value(&lp, *s)).collect();
        let worst_rise = v.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        println!("p = {p}: V(0) = {:.6}, V(50) = {:.6}, largest step increase {worst_rise:.2e}", v[0], v[v.len() - 1]);
    }

    let limit = lbs_limit_point(&plant, s0)?;
    let report = convergence_report(&tr, 1e-3, Some(limit))?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
