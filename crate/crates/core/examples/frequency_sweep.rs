//! Distance between the dithered loop and its averaged system shrinks as
//! the dither frequency grows.

use lieadapt::analysis::{approximation_sweep, strictly_decreasing, write_sweep_csv};
use lieadapt::dynamics::{PlantParams, State};

fn main() -> lieadapt::error::Result<()> {
    let plant = PlantParams::new(10.0, -2.0)?;
    let omegas = [50.0, 100.0, 200.0, 400.0, 800.0, 1600.0];
    let points = approximation_sweep(&plant, State::new(1.0, 0.0), 2.0, &omegas)?;
    write_sweep_csv(&points, std::io::stdout().lock())?;
    println!("strictly decreasing: {}", strictly_decreasing(&points));
    Ok(())
}
