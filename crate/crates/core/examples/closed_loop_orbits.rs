//! Proposed controller on `ẏ = 10y − 2u` from several initial states, next
//! to the averaged system. Prints where each orbit ends up.

use lieadapt::analysis::lbs_limit_point;
use lieadapt::dynamics::{ControllerSpec, PlantParams, State};
use lieadapt::integrate::{dither_step, simulate_closed_loop, simulate_lbs, Method};

fn main() -> lieadapt::error::Result<()> {
    let plant = PlantParams::new(10.0, -2.0)?;
    let omega = 400.0;
    let ctrl = ControllerSpec::proposed(omega)?;
    let starts = [(1.0, 0.0), (-1.0, 0.0), (2.0, -5.0), (-2.0, -8.0), (0.5, 2.0)];

    println!("{:>14} {:>12} {:>12} {:>12} {:>12}", "start", "y(3)", "k(3)", "k̄(3)", "limit k");
    for (y, k) in starts {
        let s0 = State::new(y, k);
        let full = simulate_closed_loop(&plant, &ctrl, s0, 0.0, 3.0, dither_step(omega), Method::Euler)?;
        let avg = simulate_lbs(&plant, s0, 0.0, 3.0, 1e-4, Method::Rk4)?;
        let end = full.final_state();
        println!(
            "{:>14} {:>12.3e} {:>12.5} {:>12.5} {:>12.5}",
            format!("({y}, {k})"),
            end.y,
            end.k,
            avg.final_state().k,
            lbs_limit_point(&plant, s0)?.k
        );
    }
    Ok(())
}
