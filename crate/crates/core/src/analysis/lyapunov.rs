use serde::{Deserialize, Serialize};

use crate::dynamics::{PlantParams, State};
use crate::error::{Error, Result};

/// Member `p ≥ 0` of the Lyapunov family `V_p = ½y² + ½(k − c_p)²`,
/// centered at `(0, c_p)` with `c_p = (a + p)/b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovParams {
    pub p: f64,
    pub c_p: f64,
}

impl LyapunovParams {
    pub fn new(plant: &PlantParams, p: f64) -> Result<Self> {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::Precondition(format!("family index p must be finite and nonnegative, got {p}")));
        }
        Ok(Self {
            p,
            c_p: (plant.a() + p) / plant.b(),
        })
    }

    pub fn center(&self) -> State {
        State::new(0.0, self.c_p)
    }
}

pub fn lyapunov_value(lp: &LyapunovParams, s: State) -> f64 {
    let dk = s.k - lp.c_p;
    0.5 * s.y * s.y + 0.5 * dk * dk
}

/// `V̇_p = −p·y²` along the averaged system.
pub fn lyapunov_rate(lp: &LyapunovParams, _plant: &PlantParams, s: State) -> f64 {
    -lp.p * s.y * s.y
}

/// Distance from `(0, a/b)`, the conserved radius of the averaged system.
pub fn radius(p: &PlantParams, s: State) -> f64 {
    s.y.hypot(s.k - p.center())
}

/// Terminal point of the averaged system from `s0`:
/// `(0, c0 + sign(b)·ρ0)` with `ρ0 = |s0 − (0, c0)|`.
pub fn lbs_limit_point(p: &PlantParams, s0: State) -> Result<State> {
    if s0.y == 0.0 {
        return Err(Error::Precondition("initial state lies on the equilibrium set y = 0".into()));
    }
    Ok(State::new(0.0, p.center() + p.sign_b().value() * radius(p, s0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::lie_bracket_rhs;

    fn plant(a: f64, b: f64) -> PlantParams {
        PlantParams::new(a, b).unwrap()
    }

    #[test]
    fn zero_at_center() {
        let p = plant(10.0, -2.0);
        let lp = LyapunovParams::new(&p, 1.0).unwrap();
        assert_eq!(lyapunov_value(&lp, lp.center()), 0.0);
        assert_eq!(lyapunov_rate(&lp, &p, lp.center()), 0.0);
    }

    #[test]
    fn worked_values() {
        let p = plant(10.0, -2.0);
        let lp = LyapunovParams::new(&p, 1.0).unwrap();
        assert_eq!(lp.c_p, -5.5);
        let s = State::new(1.0, 0.0);
        // ½·1 + ½·5.5² = 15.625
        assert!((lyapunov_value(&lp, s) - 15.625).abs() < 1e-12);
        assert_eq!(lyapunov_rate(&lp, &p, s), -1.0);
    }

    #[test]
    fn rate_is_gradient_along_averaged_flow() {
        let p = plant(3.0, 0.8);
        for pi in [0.0, 0.5, 2.0] {
            let lp = LyapunovParams::new(&p, pi).unwrap();
            for s in [State::new(1.0, -1.0), State::new(-2.5, 4.0), State::new(0.3, 0.0)] {
                let f = lie_bracket_rhs(&p, s);
                let dot = s.y * f.y + (s.k - lp.c_p) * f.k;
                assert!((dot - lyapunov_rate(&lp, &p, s)).abs() <= 1e-12 * (1.0 + dot.abs()));
            }
        }
    }

    #[test]
    fn negative_index_rejected() {
        assert!(LyapunovParams::new(&plant(1.0, 1.0), -0.1).is_err());
    }

    #[test]
    fn limit_points() {
        let l = lbs_limit_point(&plant(10.0, -2.0), State::new(1.0, -5.0)).unwrap();
        assert_eq!(l, State::new(0.0, -6.0));
        let l = lbs_limit_point(&plant(0.0, 1.0), State::new(1.0, 0.0)).unwrap();
        assert_eq!(l, State::new(0.0, 1.0));
        let l = lbs_limit_point(&plant(4.0, 2.0), State::new(-3.0, 2.0)).unwrap();
        assert_eq!(l, State::new(0.0, 5.0));
        assert!(lbs_limit_point(&plant(4.0, 2.0), State::new(0.0, 1.0)).is_err());
    }
}
