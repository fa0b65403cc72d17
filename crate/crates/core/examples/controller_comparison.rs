//! The three adaptive laws from `(y, k) = (1, 0)`, each at the step it needs
//! to stay numerically stable.

use lieadapt::dynamics::{ControllerSpec, NussbaumFn, PlantParams, Sign, State};
use lieadapt::integrate::{dither_step, simulate_closed_loop, Method};

fn main() -> lieadapt::error::Result<()> {
    let plant = PlantParams::new(10.0, -2.0)?;
    let s0 = State::new(1.0, 0.0);
    let runs = [
        (ControllerSpec::proposed(400.0)?, dither_step(400.0)),
        (ControllerSpec::nussbaum(NussbaumFn::SCosS), 1e-4),
        (ControllerSpec::willems_byrnes(Sign::Negative), 1e-4),
    ];
    println!("{:<16} {:>10} {:>12} {:>12} {:>10}", "controller", "step", "y(3)", "k(3)", "max|y|");
    for (ctrl, h) in runs {
        let tr = simulate_closed_loop(&plant, &ctrl, s0, 0.0, 3.0, h, Method::Euler)?;
        let peak = tr.states.iter().map(|s| s.y.abs()).fold(0.0, f64::max);
        let end = tr.final_state();
        println!("{:<16} {:>10.3e} {:>12.3e} {:>12.5} {:>10.4}", ctrl.name(), h, end.y, end.k, peak);
    }
    Ok(())
}
