//! Plant, closed-loop vector fields, the averaged (Lie-bracket) system and
//! the polar-coordinate forms.
//!
//! The plant is the scalar system `ẏ = a·y + b·u` with unknown `a` and
//! `b ≠ 0`. Every controller computes its input `u` and adaptation rate
//! `k̇` from `(t, y, k)` alone through [`ControllerSpec::act`]; the plant
//! parameters only enter afterwards, when the input is fed into the plant.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The unknown pair `(a, b)`; ground truth for simulation only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlantParams {
    a: f64,
    b: f64,
}

impl PlantParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if b == 0.0 || !b.is_finite() {
            return Err(Error::ZeroInputGain);
        }
        if !a.is_finite() {
            return Err(Error::Precondition(format!("plant pole a must be finite, got {a}")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn sign_b(&self) -> Sign {
        Sign::of(self.b)
    }

    /// Center `c0 = a/b` of the conserved circles of the averaged system.
    pub fn center(&self) -> f64 {
        self.a / self.b
    }

    /// `ẏ = a·y + b·u`.
    #[inline]
    pub fn output_rate(&self, y: f64, u: f64) -> f64 {
        self.a * y + self.b * u
    }
}

/// Closed-loop state `(y, k)`. Also used for state derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State {
    pub y: f64,
    pub k: f64,
}

impl State {
    pub const fn new(y: f64, k: f64) -> Self {
        Self { y, k }
    }

    pub const ZERO: State = State { y: 0.0, k: 0.0 };

    pub fn is_finite(&self) -> bool {
        self.y.is_finite() && self.k.is_finite()
    }

    pub fn norm(&self) -> f64 {
        self.y.hypot(self.k)
    }

    pub fn max_abs(&self) -> f64 {
        self.y.abs().max(self.k.abs())
    }
}

impl Add for State {
    type Output = State;
    fn add(self, rhs: State) -> State {
        State::new(self.y + rhs.y, self.k + rhs.k)
    }
}

impl Sub for State {
    type Output = State;
    fn sub(self, rhs: State) -> State {
        State::new(self.y - rhs.y, self.k - rhs.k)
    }
}

impl Mul<State> for f64 {
    type Output = State;
    fn mul(self, rhs: State) -> State {
        State::new(self * rhs.y, self * rhs.k)
    }
}

impl Neg for State {
    type Output = State;
    fn neg(self) -> State {
        State::new(-self.y, -self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    /// Sign of `x`, with zero mapped to `Positive`.
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Positive => 1.0,
        }
    }
}

/// Gain-reversal function `h` of the Nussbaum controller.
#[derive(Clone, Default)]
pub enum NussbaumFn {
    /// `h(s) = s·cos s`.
    #[default]
    SCosS,
    /// `h(s) = c`; not of Nussbaum type, useful as a negative control.
    Constant(f64),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl NussbaumFn {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        NussbaumFn::Custom(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            NussbaumFn::SCosS => s * s.cos(),
            NussbaumFn::Constant(c) => *c,
            NussbaumFn::Custom(f) => f(s),
        }
    }
}

impl fmt::Debug for NussbaumFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NussbaumFn::SCosS => f.write_str("SCosS"),
            NussbaumFn::Constant(c) => write!(f, "Constant({c})"),
            NussbaumFn::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Default dither frequency, rad/s.
pub const DEFAULT_OMEGA: f64 = 400.0;

/// Choice of control and adaptation law.
#[derive(Debug, Clone)]
pub enum ControllerSpec {
    /// `k̇ = y²√ω cos ωt`, `u = −k·y − y√ω sin ωt`.
    Proposed { omega: f64 },
    /// `k̇ = y√ω cos ωt`, `u = −k·y − 2y²√ω sin ωt`.
    Swapped { omega: f64 },
    /// `k̇ = y²`, `u = h(k)·k·y`.
    Nussbaum { h: NussbaumFn },
    /// `k̇ = sign(b)·y²`, `u = −k·y`. The only law allowed to know `sign(b)`.
    WillemsByrnes { sign_b: Sign },
}

/// Input and adaptation rate produced by a controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Action {
    pub u: f64,
    pub dk: f64,
}

impl ControllerSpec {
    pub fn proposed(omega: f64) -> Result<Self> {
        check_omega(omega)?;
        Ok(ControllerSpec::Proposed { omega })
    }

    pub fn swapped(omega: f64) -> Result<Self> {
        check_omega(omega)?;
        Ok(ControllerSpec::Swapped { omega })
    }

    pub fn nussbaum(h: NussbaumFn) -> Self {
        ControllerSpec::Nussbaum { h }
    }

    pub fn willems_byrnes(sign_b: Sign) -> Self {
        ControllerSpec::WillemsByrnes { sign_b }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ControllerSpec::Proposed { omega } | ControllerSpec::Swapped { omega } => check_omega(*omega),
            _ => Ok(()),
        }
    }

    /// Short identifier used in file names and metadata.
    pub fn name(&self) -> &'static str {
        match self {
            ControllerSpec::Proposed { .. } => "proposed",
            ControllerSpec::Swapped { .. } => "swapped",
            ControllerSpec::Nussbaum { .. } => "nussbaum",
            ControllerSpec::WillemsByrnes { .. } => "willems-byrnes",
        }
    }

    pub fn omega(&self) -> Option<f64> {
        match self {
            ControllerSpec::Proposed { omega } | ControllerSpec::Swapped { omega } => Some(*omega),
            _ => None,
        }
    }

    /// Evaluates the control law. Sees only `(t, y, k)`.
    #[inline]
    pub fn act(&self, t: f64, s: State) -> Action {
        let State { y, k } = s;
        match self {
            ControllerSpec::Proposed { omega } => {
                let (sin, cos) = (omega * t).sin_cos();
                let sw = omega.sqrt();
                Action {
                    u: -k * y - y * sw * sin,
                    dk: y * y * sw * cos,
                }
            }
            ControllerSpec::Swapped { omega } => {
                let (sin, cos) = (omega * t).sin_cos();
                let sw = omega.sqrt();
                Action {
                    u: -k * y - 2.0 * y * y * sw * sin,
                    dk: y * sw * cos,
                }
            }
            ControllerSpec::Nussbaum { h } => Action {
                u: h.eval(k) * k * y,
                dk: y * y,
            },
            ControllerSpec::WillemsByrnes { sign_b } => Action {
                u: -k * y,
                dk: sign_b.value() * y * y,
            },
        }
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidFrequency(omega))
    }
}

/// Right-hand side together with the applied input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlledRate {
    pub rate: State,
    pub u: f64,
}

/// Closed loop of the plant with any controller.
#[inline]
pub fn closed_loop_rhs(p: &PlantParams, controller: &ControllerSpec, t: f64, s: State) -> ControlledRate {
    let Action { u, dk } = controller.act(t, s);
    ControlledRate {
        rate: State::new(p.output_rate(s.y, u), dk),
        u,
    }
}

pub fn proposed_rhs(p: &PlantParams, s: State, t: f64, omega: f64) -> ControlledRate {
    closed_loop_rhs(p, &ControllerSpec::Proposed { omega }, t, s)
}

pub fn swapped_rhs(p: &PlantParams, s: State, t: f64, omega: f64) -> ControlledRate {
    closed_loop_rhs(p, &ControllerSpec::Swapped { omega }, t, s)
}

pub fn nussbaum_rhs(p: &PlantParams, s: State, h: &NussbaumFn) -> ControlledRate {
    closed_loop_rhs(p, &ControllerSpec::Nussbaum { h: h.clone() }, 0.0, s)
}

pub fn willems_byrnes_rhs(p: &PlantParams, s: State, sign_b: Sign) -> ControlledRate {
    closed_loop_rhs(p, &ControllerSpec::WillemsByrnes { sign_b }, 0.0, s)
}

/// Averaged dynamics shared by the proposed and swapped designs:
/// `ȳ' = (a − b·k̄)·ȳ`, `k̄' = b·ȳ²`.
#[inline]
pub fn lie_bracket_rhs(p: &PlantParams, s: State) -> State {
    State::new((p.a - p.b * s.k) * s.y, p.b * s.y * s.y)
}

/// A time-dependent vector field on the `(y, k)` plane.
pub trait VectorField {
    fn rate(&self, t: f64, s: State) -> State;

    /// Applied plant input at `(t, s)`, if the field is a controlled loop.
    fn input(&self, _t: f64, _s: State) -> Option<f64> {
        None
    }
}

impl<F> VectorField for F
where
    F: Fn(f64, State) -> State + ?Sized,
{
    fn rate(&self, t: f64, s: State) -> State {
        self(t, s)
    }
}

/// Plant in feedback with a controller.
#[derive(Debug, Clone)]
pub struct ClosedLoop {
    pub plant: PlantParams,
    pub controller: ControllerSpec,
}

impl ClosedLoop {
    pub fn new(plant: PlantParams, controller: ControllerSpec) -> Self {
        Self { plant, controller }
    }
}

impl VectorField for ClosedLoop {
    fn rate(&self, t: f64, s: State) -> State {
        closed_loop_rhs(&self.plant, &self.controller, t, s).rate
    }

    fn input(&self, t: f64, s: State) -> Option<f64> {
        Some(self.controller.act(t, s).u)
    }
}

/// The averaged system as a [`VectorField`].
#[derive(Debug, Clone, Copy)]
pub struct LieBracketSystem {
    pub plant: PlantParams,
}

impl LieBracketSystem {
    pub fn new(plant: PlantParams) -> Self {
        Self { plant }
    }
}

impl VectorField for LieBracketSystem {
    fn rate(&self, _t: f64, s: State) -> State {
        lie_bracket_rhs(&self.plant, s)
    }
}

/// Polar coordinates `(r, φ)` around the center `(0, c0)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PolarState {
    pub r: f64,
    pub phi: f64,
}

impl PolarState {
    pub const fn new(r: f64, phi: f64) -> Self {
        Self { r, phi }
    }
}

/// Result of [`to_polar`]; `degenerate` marks the center point, where `φ`
/// is undefined and reported as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarImage {
    pub state: PolarState,
    pub degenerate: bool,
}

pub fn to_polar(s: State, c0: f64) -> PolarImage {
    let dk = s.k - c0;
    let r = s.y.hypot(dk);
    if r == 0.0 {
        return PolarImage {
            state: PolarState::new(0.0, 0.0),
            degenerate: true,
        };
    }
    // Same branch as asin(dk/r) for y ≥ 0 and π − asin(dk/r) for y < 0,
    // i.e. φ ∈ [−π/2, 3π/2), without asin's loss of accuracy near ±1.
    let mut phi = dk.atan2(s.y);
    if s.y < 0.0 && phi < -FRAC_PI_2 {
        phi += 2.0 * PI;
    }
    PolarImage {
        state: PolarState::new(r, phi),
        degenerate: false,
    }
}

pub fn from_polar(ps: PolarState, c0: f64) -> State {
    let (sin, cos) = ps.phi.sin_cos();
    State::new(ps.r * cos, ps.r * sin + c0)
}

/// Closed loop of the proposed design in polar coordinates around
/// `c0 = a/b`, for general dither samples `u1 = u1(ωt)` and `u2 = u2(ωt)`.
pub fn polar_closed_loop_rhs_with(p: &PlantParams, ps: PolarState, omega: f64, u1: f64, u2: f64) -> PolarState {
    let PolarState { r, phi } = ps;
    let b = p.b;
    let (s, c) = phi.sin_cos();
    let sw = omega.sqrt();
    let dr = -b * r * r * s * c * c - b * r * c * c * sw * u1 + r * r * s * c * c * sw * u2;
    let dphi = b * r * s * s * c + b * s * c * sw * u1 + r * c * c * c * sw * u2;
    PolarState::new(dr, dphi)
}

/// [`polar_closed_loop_rhs_with`] for `u1 = sin`, `u2 = cos`.
pub fn polar_closed_loop_rhs(p: &PlantParams, ps: PolarState, t: f64, omega: f64) -> PolarState {
    let (sin, cos) = (omega * t).sin_cos();
    polar_closed_loop_rhs_with(p, ps, omega, sin, cos)
}

/// Averaged system in polar coordinates: `r̄' = 0`, `φ̄' = b·r̄·cos φ̄`.
pub fn polar_lbs_rhs(p: &PlantParams, ps: PolarState) -> PolarState {
    PolarState::new(0.0, p.b * ps.r * ps.phi.cos())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plant(a: f64, b: f64) -> PlantParams {
        PlantParams::new(a, b).unwrap()
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
    }

    #[test]
    fn rejects_zero_gain() {
        assert!(matches!(PlantParams::new(1.0, 0.0), Err(Error::ZeroInputGain)));
        assert!(PlantParams::new(1.0, -0.0).is_err());
    }

    #[test]
    fn proposed_examples() {
        let r = proposed_rhs(&plant(10.0, -2.0), State::new(0.0, 3.0), 1.7, 400.0);
        assert_eq!(r.rate, State::ZERO);

        let r = proposed_rhs(&plant(1.0, 1.0), State::new(1.0, 0.0), 0.0, 4.0);
        assert_eq!(r.rate, State::new(1.0, 2.0));
        assert_eq!(r.u, 0.0);

        // ωt = π/2: u = −1 − 20 = −21, dy = 10 + (−2)(−21) = 52
        let omega = 400.0;
        let r = proposed_rhs(&plant(10.0, -2.0), State::new(1.0, 1.0), PI / (2.0 * omega), omega);
        assert!(close(r.u, -21.0, 1e-14));
        assert!(close(r.rate.y, 52.0, 1e-14));
        assert!(r.rate.k.abs() < 1e-13);
    }

    #[test]
    fn swapped_examples() {
        for &(a, b, k, t, w) in &[(1.0, 2.0, 3.0, 0.4, 9.0), (-4.0, -0.5, 0.1, 2.0, 400.0)] {
            let r = swapped_rhs(&plant(a, b), State::new(0.0, k), t, w);
            assert_eq!(r.rate, State::ZERO);
        }
        let r = swapped_rhs(&plant(1.0, 1.0), State::new(1.0, 0.0), 0.0, 4.0);
        assert_eq!(r.rate, State::new(1.0, 2.0));
    }

    #[test]
    fn nussbaum_examples() {
        let h = NussbaumFn::SCosS;
        assert_eq!(nussbaum_rhs(&plant(3.0, 2.0), State::new(0.0, 5.0), &h).rate, State::ZERO);
        assert_eq!(nussbaum_rhs(&plant(1.0, 1.0), State::new(2.0, 0.0), &h).rate, State::new(2.0, 4.0));
        let r = nussbaum_rhs(&plant(10.0, -2.0), State::new(1.0, PI), &h);
        assert!(close(r.rate.y, 10.0 + 2.0 * PI * PI, 1e-14));
        assert!(close(r.rate.y, 29.739_208_802_178_716, 1e-14));
        assert_eq!(r.rate.k, 1.0);
    }

    #[test]
    fn willems_byrnes_examples() {
        let p = plant(10.0, -2.0);
        assert_eq!(willems_byrnes_rhs(&p, State::new(0.0, 4.0), Sign::Negative).rate, State::ZERO);
        assert_eq!(willems_byrnes_rhs(&p, State::new(1.0, 0.0), Sign::Negative).rate, State::new(10.0, -1.0));
    }

    #[test]
    fn lie_bracket_rhs_examples() {
        let p = plant(10.0, -2.0);
        for k in [-100.0, -5.0, 0.0, 3.5, 1e6] {
            assert_eq!(lie_bracket_rhs(&p, State::new(0.0, k)), State::ZERO);
        }
        assert_eq!(lie_bracket_rhs(&p, State::new(1.0, -5.0)), State::new(0.0, -2.0));
        assert_eq!(lie_bracket_rhs(&plant(1.0, 1.0), State::new(2.0, 0.0)), State::new(2.0, 4.0));
    }

    #[test]
    fn lie_bracket_rhs_odd_in_y() {
        let p = plant(2.5, -0.7);
        let s = State::new(1.3, 0.4);
        let f = lie_bracket_rhs(&p, s);
        let g = lie_bracket_rhs(&p, State::new(-s.y, s.k));
        assert_eq!(g, State::new(-f.y, f.k));
    }

    #[test]
    fn controller_only_sees_time_and_state() {
        // same action regardless of the plant it is attached to
        let c = ControllerSpec::proposed(50.0).unwrap();
        let s = State::new(0.7, -1.2);
        let r1 = closed_loop_rhs(&plant(1.0, 2.0), &c, 0.3, s);
        let r2 = closed_loop_rhs(&plant(-7.0, -0.1), &c, 0.3, s);
        assert_eq!(r1.u, r2.u);
        assert_eq!(r1.rate.k, r2.rate.k);
    }

    #[test]
    fn polar_examples() {
        let c0 = -5.0;
        let img = to_polar(State::new(1.0, c0), c0);
        assert_eq!(img.state, PolarState::new(1.0, 0.0));
        assert!(!img.degenerate);
        let img = to_polar(State::new(0.0, c0 + 2.0), c0);
        assert_eq!(img.state.r, 2.0);
        assert!(close(img.state.phi, PI / 2.0, 1e-15));
        let img = to_polar(State::new(-1.0, c0), c0);
        assert_eq!(img.state, PolarState::new(1.0, PI));
    }

    #[test]
    fn polar_center_is_flagged() {
        let img = to_polar(State::new(0.0, 3.0), 3.0);
        assert!(img.degenerate);
        assert_eq!(img.state, PolarState::new(0.0, 0.0));
    }

    #[test]
    fn polar_closed_loop_examples() {
        let p = plant(1.0, 1.0);
        let d = polar_closed_loop_rhs(&p, PolarState::new(1.7, PI / 2.0), 0.37, 9.0);
        assert!(d.r.abs() < 1e-14 && d.phi.abs() < 1e-14);
        // sin 0 = 0 kills the u1 terms, cos 0 = 1 leaves r·cos³φ·√ω
        let d = polar_closed_loop_rhs(&p, PolarState::new(1.0, 0.0), 0.0, 1.0);
        assert_eq!(d, PolarState::new(0.0, 1.0));
    }

    #[test]
    fn polar_lbs_examples() {
        let d = polar_lbs_rhs(&plant(3.0, 1.5), PolarState::new(2.0, 0.3));
        assert_eq!(d.r, 0.0);
        let d = polar_lbs_rhs(&plant(3.0, 1.5), PolarState::new(2.0, PI / 2.0));
        assert_eq!(d.r, 0.0);
        assert!(d.phi.abs() < 1e-15);
        assert_eq!(polar_lbs_rhs(&plant(10.0, -2.0), PolarState::new(1.0, 0.0)), PolarState::new(0.0, -2.0));
    }

    #[test]
    fn omega_must_be_positive() {
        assert!(ControllerSpec::proposed(0.0).is_err());
        assert!(ControllerSpec::swapped(-1.0).is_err());
        assert!(ControllerSpec::proposed(f64::NAN).is_err());
    }
}
