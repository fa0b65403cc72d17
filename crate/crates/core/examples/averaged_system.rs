//! `γ` coefficients of the sine/cosine pair and the averaged vector field of
//! the proposed design, evaluated by quadrature and finite differences.

use lieadapt::averaging::{build_averaged_rhs, gamma_coefficient, lie_bracket, AffineSystem, DitherSignal};
use lieadapt::dynamics::{lie_bracket_rhs, PlantParams, State, VectorField};

fn main() -> lieadapt::error::Result<()> {
    let (sin, cos) = (DitherSignal::sin(), DitherSignal::cos());
    for omega in [1.0, 400.0] {
        println!(
            "ω = {omega:>5}: γ(sin, cos) = {:+.10}, γ(cos, sin) = {:+.10}, γ(sin, sin) = {:+.1e}",
            gamma_coefficient(&sin, &cos, omega)?,
            gamma_coefficient(&cos, &sin, omega)?,
            gamma_coefficient(&sin, &sin, omega)?
        );
    }

    let plant = PlantParams::new(10.0, -2.0)?;
    let sys = AffineSystem::proposed(&plant);
    let f = sys.fields();
    let x = State::new(1.5, 2.0);
    println!("[f1, f2](x) = {:?}", lie_bracket(&*f[0], &*f[1], x, 0.0));

    let avg = build_averaged_rhs(&sys)?;
    println!("terms (i, j, γ): {:?}", avg.terms());
    for x in [State::new(1.0, 0.0), State::new(-2.0, 4.0)] {
        println!("x = {x:?}: averaged {:?}, closed form {:?}", avg.rate(0.0, x), lie_bracket_rhs(&plant, x));
    }
    Ok(())
}
