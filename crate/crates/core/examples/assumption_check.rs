//! Numerical checks of the averaging hypotheses for the proposed design,
//! then the same design with a biased sine dither.

use lieadapt::averaging::{check_assumptions, AffineSystem, DitherSignal, Region};
use lieadapt::dynamics::PlantParams;

fn main() -> lieadapt::error::Result<()> {
    let plant = PlantParams::new(10.0, -2.0)?;
    let region = Region::square(2.0)?;
    let report = check_assumptions(&AffineSystem::proposed(&plant), region);
    println!("proposed design passes: {} (bound M = {:.3})", report.passed, report.bound_m);
    for c in &report.checks {
        println!("  {:<10} {:<5} {:.3e}", c.id, c.passed, c.value);
    }

    let sys = AffineSystem::proposed(&plant);
    let biased = DitherSignal::new("sin + 0.5", |x: f64| x.sin() + 0.5, (1, 1), 0.5)?;
    let sys = AffineSystem::new(sys.drift().clone(), sys.fields().to_vec(), vec![biased, DitherSignal::cos()])?;
    let report = check_assumptions(&sys, region);
    println!("biased dither passes: {}", report.passed);
    for c in report.failures() {
        println!("  failed {} with value {:.3}", c.id, c.value);
    }
    Ok(())
}
