use std::f64::consts::PI;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::table::{published_rows, table_errata, IntegralCoeff, LieCoeff, RowMark};
use super::trajectory::{RunMeta, Trajectory};
use crate::dynamics::{PlantParams, State};
use crate::error::{Error, Result};

/// Highest tabulated truncation order.
pub const MAX_ORDER: usize = 3;

/// A series run is declared divergent once `‖state‖` exceeds this.
pub const DIVERGENCE_NORM: f64 = 1e9;

/// Relative slack when testing that a step spans whole dither periods.
const WHOLE_PERIOD_TOL: f64 = 1e-9;

/// `c·b^p_b·y0^p_y·(a − b·k0)^p_r·T^{twice_p_t/2}·(2π)^{twice_p_2pi/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monomial {
    pub c: Ratio<i64>,
    pub p_b: u32,
    pub p_y: u32,
    pub p_r: u32,
    pub twice_p_t: i32,
    pub twice_p_2pi: i32,
}

fn half_pow(x: f64, twice: i32) -> f64 {
    if twice % 2 == 0 {
        x.powi(twice / 2)
    } else {
        x.sqrt().powi(twice)
    }
}

impl Monomial {
    fn from_parts(l: LieCoeff, i: IntegralCoeff) -> Self {
        Self {
            c: Ratio::new(l.c, 1) * Ratio::new(i.num, i.den),
            p_b: l.p_b,
            p_y: l.p_y,
            p_r: l.p_r,
            twice_p_t: i.twice_p_t,
            twice_p_2pi: i.twice_p_2pi,
        }
    }

    /// Value at `(b, y0, r0 = a − b·k0)` for a step of length `t_step`
    /// spanning `periods` dither periods.
    pub fn eval(&self, b: f64, y0: f64, r0: f64, t_step: f64, periods: u32) -> f64 {
        let c = *self.c.numer() as f64 / *self.c.denom() as f64;
        c * b.powi(self.p_b as i32)
            * y0.powi(self.p_y as i32)
            * r0.powi(self.p_r as i32)
            * half_pow(t_step, self.twice_p_t)
            * half_pow(2.0 * PI * periods as f64, self.twice_p_2pi)
    }
}

/// One table row with Lie coefficient and integral multiplied out.
#[derive(Debug, Clone, PartialEq)]
pub struct ChenFliessTerm {
    pub word: &'static str,
    pub coeff_y: Vec<Monomial>,
    pub coeff_k: Vec<Monomial>,
    pub mark: RowMark,
}

impl ChenFliessTerm {
    pub fn order(&self) -> usize {
        self.word.len() - 1
    }

    fn increment(&self, b: f64, y0: f64, r0: f64, t_step: f64, periods: u32) -> State {
        let sum = |ms: &[Monomial]| ms.iter().map(|m| m.eval(b, y0, r0, t_step, periods)).sum::<f64>();
        State::new(sum(&self.coeff_y), sum(&self.coeff_k))
    }
}

/// Which integral column to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientSet {
    /// The table exactly as printed.
    #[default]
    Published,
    /// The printed table with the rows of [`table_errata`] replaced.
    Corrected,
}

fn build_terms(set: CoefficientSet) -> Vec<ChenFliessTerm> {
    published_rows()
        .iter()
        .map(|row| {
            let mut integral = row.integral;
            let mut mark = row.mark;
            if set == CoefficientSet::Corrected && mark != RowMark::LieZero {
                if let Some((_, fixed)) = table_errata().iter().find(|(w, _)| *w == row.word) {
                    integral = fixed;
                    mark = if fixed.is_empty() {
                        RowMark::IntegralZero
                    } else {
                        RowMark::Contributes
                    };
                }
            }
            let expand = |l: Option<LieCoeff>| match (mark, l) {
                (RowMark::Contributes, Some(l)) => integral.iter().map(|&i| Monomial::from_parts(l, i)).collect(),
                _ => Vec::new(),
            };
            ChenFliessTerm {
                word: row.word,
                coeff_y: expand(row.lie_y),
                coeff_k: expand(row.lie_k),
                mark,
            }
        })
        .collect()
}

impl CoefficientSet {
    pub fn terms(self) -> &'static [ChenFliessTerm] {
        static PUBLISHED: OnceLock<Vec<ChenFliessTerm>> = OnceLock::new();
        static CORRECTED: OnceLock<Vec<ChenFliessTerm>> = OnceLock::new();
        match self {
            CoefficientSet::Published => PUBLISHED.get_or_init(|| build_terms(self)),
            CoefficientSet::Corrected => CORRECTED.get_or_init(|| build_terms(self)),
        }
    }
}

/// Number of whole dither periods spanned by `t_step`.
fn whole_periods(t_step: f64, omega: f64) -> Result<u32> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidFrequency(omega));
    }
    if !(t_step > 0.0 && t_step.is_finite()) {
        return Err(Error::InvalidStep(t_step));
    }
    let period = 2.0 * PI / omega;
    let ratio = t_step / period;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > WHOLE_PERIOD_TOL * n || n > u32::MAX as f64 {
        return Err(Error::NotWholePeriods { step: t_step, period });
    }
    Ok(n as u32)
}

/// Truncated Chen-Fliess expansion of the proposed closed loop used as a
/// one-step integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ChenFliessScheme {
    pub order: usize,
    #[serde(default)]
    pub coefficients: CoefficientSet,
}

impl ChenFliessScheme {
    pub fn new(order: usize, coefficients: CoefficientSet) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(order));
        }
        Ok(Self { order, coefficients })
    }

    /// State after one step of length `t_step`, which must be a whole number
    /// of dither periods `2π/ω`.
    pub fn step(&self, p: &PlantParams, s0: State, t_step: f64, omega: f64) -> Result<State> {
        if self.order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(self.order));
        }
        let periods = whole_periods(t_step, omega)?;
        let (b, y0) = (p.b(), s0.y);
        let r0 = p.a() - b * s0.k;
        Ok(self
            .coefficients
            .terms()
            .iter()
            .filter(|term| term.order() <= self.order && term.mark == RowMark::Contributes)
            .fold(s0, |acc, term| acc + term.increment(b, y0, r0, t_step, periods)))
    }

    /// Iterates [`Self::step`] `n_steps` times with steps of
    /// `periods_per_step` dither periods, starting at `t = 0`.
    pub fn simulate(
        &self,
        p: &PlantParams,
        s0: State,
        omega: f64,
        periods_per_step: u32,
        n_steps: usize,
    ) -> Result<Trajectory> {
        if self.order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(self.order));
        }
        if !s0.is_finite() {
            return Err(Error::NonFiniteState { y: s0.y, k: s0.k });
        }
        let t_step = periods_per_step as f64 * 2.0 * PI / omega;
        whole_periods(t_step, omega)?;
        let mut meta = RunMeta::new(s0, 0.0, n_steps as f64 * t_step, t_step);
        meta.variant = "chen-fliess".into();
        meta.omega = Some(omega);
        meta.order = Some(self.order);
        meta.a = Some(p.a());
        meta.b = Some(p.b());
        let mut traj = Trajectory::start(meta, 0.0, s0, None);
        let mut s = s0;
        for i in 1..=n_steps {
            let t = i as f64 * t_step;
            s = self.step(p, s, t_step, omega)?;
            if !s.is_finite() || s.norm() > DIVERGENCE_NORM {
                traj.fail(i, t, format!("‖state‖ exceeded {DIVERGENCE_NORM:e}"));
                break;
            }
            traj.push(t, s, None);
        }
        Ok(traj)
    }
}

/// One step of the order-`order` expansion with the printed coefficients.
pub fn chen_fliess_step(p: &PlantParams, s0: State, t_step: f64, omega: f64, order: usize) -> Result<State> {
    ChenFliessScheme::new(order, CoefficientSet::Published)?.step(p, s0, t_step, omega)
}

/// `n_steps` steps of the order-`order` expansion with the printed
/// coefficients.
pub fn chen_fliess_simulate(
    p: &PlantParams,
    s0: State,
    omega: f64,
    periods_per_step: u32,
    n_steps: usize,
    order: usize,
) -> Result<Trajectory> {
    ChenFliessScheme::new(order, CoefficientSet::Published)?.simulate(p, s0, omega, periods_per_step, n_steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::lie_bracket_rhs;

    fn plant(a: f64, b: f64) -> PlantParams {
        PlantParams::new(a, b).unwrap()
    }

    #[test]
    fn table_covers_every_word_once() {
        let rows = published_rows();
        assert_eq!(rows.len(), 3 + 9 + 27 + 81);
        let mut words: Vec<&str> = rows.iter().map(|r| r.word).collect();
        words.sort();
        words.dedup();
        assert_eq!(words.len(), rows.len());
        assert!(rows.iter().all(|r| r.word.bytes().all(|c| (b'0'..=b'2').contains(&c))));
    }

    #[test]
    fn marks_agree_with_contents() {
        for r in published_rows() {
            let lie_zero = r.lie_y.is_none() && r.lie_k.is_none();
            match r.mark {
                RowMark::LieZero => assert!(lie_zero, "{}", r.word),
                RowMark::IntegralZero => assert!(!lie_zero && r.integral.is_empty(), "{}", r.word),
                RowMark::Contributes => assert!(!lie_zero && !r.integral.is_empty(), "{}", r.word),
            }
        }
    }

    #[test]
    fn every_lie_coefficient_carries_y() {
        for r in published_rows() {
            for l in r.lie_y.iter().chain(&r.lie_k) {
                assert!(l.p_y >= 1, "{}", r.word);
            }
        }
    }

    #[test]
    fn order_zero_is_drift_times_step() {
        let s = chen_fliess_step(&plant(1.0, 1.0), State::new(1.0, 0.0), 2.0 * PI, 1.0, 0).unwrap();
        assert!((s.y - (1.0 + 2.0 * PI)).abs() < 1e-12);
        assert_eq!(s.k, 0.0);
        let t = 0.01;
        let s = chen_fliess_step(&plant(1.0, 1.0), State::new(1.0, 0.0), t, 2.0 * PI / t, 0).unwrap();
        assert!((s.y - 1.01).abs() < 1e-15 && s.k == 0.0);
    }

    #[test]
    fn order_one_is_second_order_taylor_of_drift_plus_euler_bracket() {
        // Rows 01/10 and 12/21 pair off; row 00 adds the drift's own
        // second-order Taylor term.
        let p = plant(10.0, -2.0);
        let omega = 400.0;
        let t = 2.0 * PI / omega;
        for set in [CoefficientSet::Published, CoefficientSet::Corrected] {
            for s0 in [State::new(1.0, 0.0), State::new(-0.3, 2.5), State::new(2.0, -7.0)] {
                let got = ChenFliessScheme::new(1, set).unwrap().step(&p, s0, t, omega).unwrap();
                let c = p.a() - p.b() * s0.k;
                let euler = s0 + t * lie_bracket_rhs(&p, s0);
                let expect = euler + State::new(0.5 * s0.y * c * c * t * t, 0.0);
                assert!((got - expect).max_abs() <= 1e-12 * (1.0 + expect.max_abs()), "{got:?} vs {expect:?}");
            }
        }
    }

    #[test]
    fn equilibria_are_fixed_at_every_order() {
        let p = plant(10.0, -2.0);
        for set in [CoefficientSet::Published, CoefficientSet::Corrected] {
            for order in 0..=MAX_ORDER {
                let s0 = State::new(0.0, 3.7);
                let s = ChenFliessScheme::new(order, set).unwrap().step(&p, s0, 4.0 * PI / 400.0, 400.0).unwrap();
                assert_eq!(s, s0);
            }
        }
    }

    #[test]
    fn sub_period_steps_are_rejected() {
        let p = plant(10.0, -2.0);
        let r = chen_fliess_step(&p, State::new(1.0, 0.0), 2.0 * PI / (64.0 * 400.0), 400.0, 2);
        assert!(matches!(r, Err(Error::NotWholePeriods { .. })));
        let r = chen_fliess_step(&p, State::new(1.0, 0.0), 1.5 * 2.0 * PI / 400.0, 400.0, 2);
        assert!(matches!(r, Err(Error::NotWholePeriods { .. })));
        assert!(matches!(
            chen_fliess_step(&p, State::new(1.0, 0.0), 2.0 * PI / 400.0, 400.0, 4),
            Err(Error::UnsupportedOrder(4))
        ));
    }

    #[test]
    fn zero_steps_give_single_sample() {
        let tr = chen_fliess_simulate(&plant(10.0, -2.0), State::new(1.0, 0.0), 400.0, 1, 0, 2).unwrap();
        assert_eq!(tr.len(), 1);
        assert!(tr.inputs.is_none());
    }

    #[test]
    fn order_zero_diverges_on_unstable_plant() {
        let tr = chen_fliess_simulate(&plant(10.0, -2.0), State::new(1.0, 0.0), 400.0, 1, 10_000, 0).unwrap();
        assert!(tr.diverged());
        assert!(tr.states.iter().all(|s| s.norm() <= DIVERGENCE_NORM));
    }

    #[test]
    fn corrected_set_changes_only_errata_rows() {
        let (pubd, corr) = (CoefficientSet::Published.terms(), CoefficientSet::Corrected.terms());
        let changed: Vec<&str> = pubd.iter().zip(corr).filter(|(a, b)| a != b).map(|(a, _)| a.word).collect();
        let expected: Vec<&str> = table_errata().iter().map(|(w, _)| *w).collect();
        assert_eq!(changed, expected);
    }
}
