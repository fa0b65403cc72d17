//! Around `(0, a/b)` the averaged system only rotates: the radius is
//! conserved while the closed loop wobbles around it.

use lieadapt::analysis::radius;
use lieadapt::dynamics::{
    from_polar, polar_closed_loop_rhs, polar_lbs_rhs, to_polar, ControllerSpec, PlantParams, State,
};
use lieadapt::integrate::{dither_step, simulate_closed_loop, simulate_lbs, Method};

fn main() -> lieadapt::error::Result<()> {
    let plant = PlantParams::new(10.0, -2.0)?;
    let c0 = plant.center();
    let s0 = State::new(1.0, 0.0);
    let img = to_polar(s0, c0);
    println!("(1, 0) -> r = {:.6}, φ = {:.6}; back: {:?}", img.state.r, img.state.phi, from_polar(img.state, c0));
    println!("polar averaged rate {:?}", polar_lbs_rhs(&plant, img.state));
    println!("polar closed-loop rate at t = 0 {:?}", polar_closed_loop_rhs(&plant, img.state, 0.0, 400.0));

    let avg = simulate_lbs(&plant, s0, 0.0, 50.0, 1e-4, Method::Rk4)?;
    let r0 = radius(&plant, s0);
    let drift = avg.states.iter().map(|s| (radius(&plant, *s) - r0).abs()).fold(0.0, f64::max);
    println!("averaged run, t ∈ [0, 50]: max |r − r0| = {drift:.3e}");

    let ctrl = ControllerSpec::proposed(400.0)?;
    let full = simulate_closed_loop(&plant, &ctrl, s0, 0.0, 3.0, dither_step(400.0), Method::Euler)?;
    let (lo, hi) = full
        .states
        .iter()
        .map(|s| radius(&plant, *s))
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    println!("closed loop, t ∈ [0, 3]: r ∈ [{lo:.4}, {hi:.4}], r0 = {r0:.4}");
    Ok(())
}
