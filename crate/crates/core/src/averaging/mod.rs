//! First-order Lie-bracket averaging for input-affine systems
//! `ẋ = f0(t, x) + Σ ω^{p_i} f_i(t, x) u_i(k_i ω t)`.

mod assumptions;
mod bracket;
mod dither;
mod system;

pub use assumptions::{check_assumptions, AssumptionReport, CheckEntry, Region, Witness};
pub use bracket::{jacobian, lie_bracket, time_derivative, Jacobian};
pub use dither::{gamma_coefficient, iterated_dither_integral, DitherCheck, DitherSignal};
pub use system::{build_averaged_rhs, AffineSystem, AveragedRhs, Field};
