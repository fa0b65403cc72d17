use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Simpson panels per period of the fastest dither.
pub(crate) const PANELS_PER_PERIOD: usize = 4096;

/// Relative tolerance for the γ quadrature error estimate.
pub(crate) const GAMMA_TOLERANCE: f64 = 1e-8;

/// A bounded, 2π-periodic, zero-mean probing signal `u(k·phase)` entering
/// with amplitude `ω^p`.
#[derive(Clone)]
pub struct DitherSignal {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    multiplier: Ratio<i64>,
    exponent: f64,
}

impl fmt::Debug for DitherSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DitherSignal")
            .field("name", &self.name)
            .field("multiplier", &self.multiplier)
            .field("exponent", &self.exponent)
            .finish()
    }
}

/// Outcome of the three pointwise dither checks on a phase grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DitherCheck {
    /// Largest `|u|` on the grid, and the phase where it occurs.
    pub sup: f64,
    pub sup_at: f64,
    /// Largest `|u(φ) − u(φ + 2π)|` on the grid, and its phase.
    pub periodicity_gap: f64,
    pub periodicity_at: f64,
    /// Mean over one period by composite Simpson.
    pub mean: f64,
}

impl DitherCheck {
    pub const GRID: usize = 10_000;
    pub const SUP_SLACK: f64 = 1e-9;
    pub const PERIOD_TOL: f64 = 1e-12;
    pub const MEAN_TOL: f64 = 1e-9;

    pub fn bounded(&self) -> bool {
        self.sup <= 1.0 + Self::SUP_SLACK
    }

    pub fn periodic(&self) -> bool {
        self.periodicity_gap <= Self::PERIOD_TOL
    }

    pub fn zero_mean(&self) -> bool {
        self.mean.abs() <= Self::MEAN_TOL
    }

    pub fn passed(&self) -> bool {
        self.bounded() && self.periodic() && self.zero_mean()
    }
}

impl DitherSignal {
    /// `multiplier` is `k_i` as `numer/denom`; `exponent` is `p_i ∈ (0, 1)`.
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        multiplier: (i64, i64),
        exponent: f64,
    ) -> Result<Self> {
        let (n, d) = multiplier;
        if n <= 0 || d <= 0 {
            return Err(Error::Precondition(format!("dither multiplier must be a positive rational, got {n}/{d}")));
        }
        if !(exponent > 0.0 && exponent < 1.0) {
            return Err(Error::Precondition(format!("dither exponent must lie in (0, 1), got {exponent}")));
        }
        Ok(Self {
            name: name.into(),
            f: Arc::new(f),
            multiplier: Ratio::new(n, d),
            exponent,
        })
    }

    /// `sin`, `k = 1`, `p = ½`.
    pub fn sin() -> Self {
        Self::new("sin", f64::sin, (1, 1), 0.5).expect("valid dither")
    }

    /// `cos`, `k = 1`, `p = ½`.
    pub fn cos() -> Self {
        Self::new("cos", f64::cos, (1, 1), 0.5).expect("valid dither")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn multiplier(&self) -> Ratio<i64> {
        self.multiplier
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    #[inline]
    pub fn eval(&self, phase: f64) -> f64 {
        (self.f)(phase)
    }

    /// `u(k·ω·t)`.
    #[inline]
    pub fn at(&self, omega: f64, t: f64) -> f64 {
        let k = *self.multiplier.numer() as f64 / *self.multiplier.denom() as f64;
        self.eval(k * omega * t)
    }

    pub fn check(&self) -> DitherCheck {
        let n = DitherCheck::GRID;
        let mut sup = 0.0_f64;
        let mut sup_at = 0.0;
        let mut gap = 0.0_f64;
        let mut gap_at = 0.0;
        for i in 0..n {
            let phase = 2.0 * PI * i as f64 / n as f64;
            let v = self.eval(phase);
            if !(v.abs() <= sup) {
                sup = v.abs();
                sup_at = phase;
            }
            let d = (v - self.eval(phase + 2.0 * PI)).abs();
            if !(d <= gap) {
                gap = d;
                gap_at = phase;
            }
        }
        let mean = simpson(|x| self.eval(x), 0.0, 2.0 * PI, PANELS_PER_PERIOD) / (2.0 * PI);
        DitherCheck {
            sup,
            sup_at,
            periodicity_gap: gap,
            periodicity_at: gap_at,
            mean,
        }
    }
}

/// Least common multiple of two positive rationals.
fn lcm_ratio(x: Ratio<i64>, y: Ratio<i64>) -> Ratio<i64> {
    Ratio::new(
        x.numer().lcm(y.numer()),
        x.denom().gcd(y.denom()),
    )
}

/// `LCM(1/k_i, 1/k_j)`, the common period in units of `2π/ω`.
pub(crate) fn common_period_units(ui: &DitherSignal, uj: &DitherSignal) -> Ratio<i64> {
    lcm_ratio(ui.multiplier.recip(), uj.multiplier.recip())
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Composite Simpson over `[a, b]` with an even number of panels.
pub(crate) fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// `∫_0^T ∫_0^θ outer(θ) inner(τ) dτ dθ` on `n` (even) panels: cumulative
/// Simpson for the inner integral, composite Simpson for the outer one.
fn nested_simpson(outer: impl Fn(f64) -> f64, inner: impl Fn(f64) -> f64, period: f64, n: usize) -> f64 {
    debug_assert!(n % 2 == 0);
    let h = period / n as f64;
    let g: Vec<f64> = (0..=n).map(|i| inner(h * i as f64)).collect();
    let mut cum = vec![0.0; n + 1];
    for m in (0..n).step_by(2) {
        let (f0, f1, f2) = (g[m], g[m + 1], g[m + 2]);
        cum[m + 1] = cum[m] + h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2);
        cum[m + 2] = cum[m] + h / 3.0 * (f0 + 4.0 * f1 + f2);
    }
    let mut acc = 0.0;
    for (i, c) in cum.iter().enumerate() {
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * outer(h * i as f64) * c;
    }
    acc * h / 3.0
}

fn panels_for(ui: &DitherSignal, uj: &DitherSignal, units: Ratio<i64>) -> usize {
    // number of periods of the fastest dither inside the common period
    let fastest = if ui.multiplier > uj.multiplier { ui.multiplier } else { uj.multiplier };
    let periods = (ratio_f64(units * fastest)).ceil().max(1.0) as usize;
    PANELS_PER_PERIOD * periods
}

/// Raw iterated integral `∫_0^T ∫_0^θ u_j(k_j ω θ) u_i(k_i ω τ) dτ dθ`
/// over the common period `T`.
pub fn iterated_dither_integral(ui: &DitherSignal, uj: &DitherSignal, omega: f64) -> Result<f64> {
    Ok(iterated_with_estimate(ui, uj, omega)?.0)
}

fn iterated_with_estimate(ui: &DitherSignal, uj: &DitherSignal, omega: f64) -> Result<(f64, f64, f64)> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidFrequency(omega));
    }
    let units = common_period_units(ui, uj);
    let period = 2.0 * PI / omega * ratio_f64(units);
    let n = panels_for(ui, uj, units);
    let fine = nested_simpson(|t| uj.at(omega, t), |t| ui.at(omega, t), period, n);
    let coarse = nested_simpson(|t| uj.at(omega, t), |t| ui.at(omega, t), period, n / 2);
    // Richardson estimate for a fourth-order rule
    let estimate = (fine - coarse).abs() / 15.0;
    Ok((fine, estimate, period))
}

/// `γ_ij(ω) = (ω^{p_i+p_j} / T) ∫_0^T ∫_0^θ u_j(k_j ω θ) u_i(k_i ω τ) dτ dθ`.
pub fn gamma_coefficient(ui: &DitherSignal, uj: &DitherSignal, omega: f64) -> Result<f64> {
    let (integral, estimate, period) = iterated_with_estimate(ui, uj, omega)?;
    let scale = omega.powf(ui.exponent + uj.exponent) / period;
    let gamma = scale * integral;
    let err = scale * estimate;
    let tolerance = GAMMA_TOLERANCE * gamma.abs().max(1.0);
    if !(err <= tolerance) {
        return Err(Error::Quadrature {
            estimate: err,
            tolerance,
        });
    }
    Ok(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_cos_gamma_is_minus_half() {
        for omega in [1.0, 400.0] {
            let g = gamma_coefficient(&DitherSignal::sin(), &DitherSignal::cos(), omega).unwrap();
            assert!((g + 0.5).abs() <= 1e-8, "ω = {omega}: {g}");
        }
    }

    #[test]
    fn sin_sin_gamma_vanishes_at_any_omega() {
        let g1 = gamma_coefficient(&DitherSignal::sin(), &DitherSignal::sin(), 1.0).unwrap();
        let g400 = gamma_coefficient(&DitherSignal::sin(), &DitherSignal::sin(), 400.0).unwrap();
        assert!(g1.abs() <= 1e-8 && g400.abs() <= 1e-8);
        assert!((g1 - g400).abs() <= 1e-8);
    }

    #[test]
    fn cos_sin_gamma_is_plus_half() {
        let g = gamma_coefficient(&DitherSignal::cos(), &DitherSignal::sin(), 3.0).unwrap();
        assert!((g - 0.5).abs() <= 1e-8);
    }

    #[test]
    fn gamma_antisymmetric_for_zero_mean_pair() {
        let (s, c) = (DitherSignal::sin(), DitherSignal::cos());
        let g12 = gamma_coefficient(&s, &c, 7.0).unwrap();
        let g21 = gamma_coefficient(&c, &s, 7.0).unwrap();
        assert!((g12 + g21).abs() <= 1e-8);
    }

    #[test]
    fn rational_common_period() {
        let a = DitherSignal::new("a", f64::sin, (2, 1), 0.5).unwrap();
        let b = DitherSignal::new("b", f64::cos, (3, 1), 0.5).unwrap();
        // LCM(1/2, 1/3) = 1
        assert_eq!(common_period_units(&a, &b), Ratio::new(1, 1));
        let c = DitherSignal::new("c", f64::cos, (2, 3), 0.5).unwrap();
        // LCM(1/2, 3/2) = 3/2
        assert_eq!(common_period_units(&a, &c), Ratio::new(3, 2));
    }

    #[test]
    fn distinct_frequencies_average_out() {
        // sin(2φ) against cos(3φ): orthogonal, bracket coefficient vanishes
        let a = DitherSignal::new("a", f64::sin, (2, 1), 0.5).unwrap();
        let b = DitherSignal::new("b", f64::cos, (3, 1), 0.5).unwrap();
        let g = gamma_coefficient(&a, &b, 5.0).unwrap();
        assert!(g.abs() <= 1e-8, "{g}");
    }

    #[test]
    fn dither_checks() {
        assert!(DitherSignal::sin().check().passed());
        assert!(DitherSignal::cos().check().passed());
        let biased = DitherSignal::new("biased", |x: f64| x.sin() + 0.5, (1, 1), 0.5).unwrap();
        let c = biased.check();
        assert!(!c.zero_mean());
        assert!((c.mean - 0.5).abs() < 1e-9);
        assert!(!c.bounded());
        let big = DitherSignal::new("big", |x: f64| 2.0 * x.sin(), (1, 1), 0.5).unwrap();
        assert!(!big.check().bounded());
        let aperiodic = DitherSignal::new("ramp", |x: f64| (x / 10.0).sin(), (1, 1), 0.5).unwrap();
        assert!(!aperiodic.check().periodic());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DitherSignal::new("x", f64::sin, (0, 1), 0.5).is_err());
        assert!(DitherSignal::new("x", f64::sin, (1, 1), 1.0).is_err());
        assert!(gamma_coefficient(&DitherSignal::sin(), &DitherSignal::cos(), 0.0).is_err());
    }
}
