//! Averaging an arbitrary input-affine system: a harmonic oscillator driven
//! by a pair of dithers at twice the base frequency.

use std::sync::Arc;

use lieadapt::averaging::{build_averaged_rhs, AffineSystem, DitherSignal};
use lieadapt::dynamics::{State, VectorField};

fn main() -> lieadapt::error::Result<()> {
    let sin2 = DitherSignal::new("sin 2θ", |x: f64| (2.0 * x).sin(), (2, 1), 0.5)?;
    let cos2 = DitherSignal::new("cos 2θ", |x: f64| (2.0 * x).cos(), (2, 1), 0.5)?;
    let sys = AffineSystem::new(
        Arc::new(|_, x: State| State::new(x.k, -x.y)),
        vec![
            Arc::new(|_, x: State| State::new(x.y * x.k, 0.0)),
            Arc::new(|_, x: State| State::new(0.0, x.y)),
        ],
        vec![sin2, cos2],
    )?;
    let avg = build_averaged_rhs(&sys)?;
    println!("bracket terms: {:?}", avg.terms());
    for x in [State::new(1.0, 0.5), State::new(-0.3, 2.0)] {
        println!("x = {x:?} -> averaged rate {:?}", avg.rate(0.0, x));
    }
    Ok(())
}
