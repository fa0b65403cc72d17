//! Grid-sampled checks of the dither, regularity and first-order conditions
//! under which the averaged system approximates the oscillatory one.
//!
//! Everything here is evaluated on a compact box; the report records the box
//! it sampled and is evidence, not a proof over an open region.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bracket::{fd_step, jacobian, jacobian_with_step, lie_bracket, lie_bracket_with_step, time_derivative};
use super::dither::DitherCheck;
use super::system::{AffineSystem, Field, INTEGRAL_ZERO_TOL};
use super::iterated_dither_integral;
use crate::dynamics::State;
use crate::error::{Error, Result};

pub const STATE_GRID: usize = 50;
pub const TIME_SAMPLES: usize = 20;
/// Pointwise tolerance for "vanishes on the grid".
pub const VANISH_TOL: f64 = 1e-9;
/// Relative step for differentiating finite-difference brackets.
const OUTER_FD_REL_STEP: f64 = 1e-4;

/// Axis-aligned box `[y_min, y_max] × [k_min, k_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub y_min: f64,
    pub y_max: f64,
    pub k_min: f64,
    pub k_max: f64,
}

impl Region {
    pub fn new(y: (f64, f64), k: (f64, f64)) -> Result<Self> {
        let r = Region {
            y_min: y.0,
            y_max: y.1,
            k_min: k.0,
            k_max: k.1,
        };
        if !(r.y_max > r.y_min && r.k_max > r.k_min) || ![y.0, y.1, k.0, k.1].iter().all(|v| v.is_finite()) {
            return Err(Error::Precondition(format!("degenerate region {r:?}")));
        }
        Ok(r)
    }

    /// The square `[-h, h]²`.
    pub fn square(half: f64) -> Result<Self> {
        Self::new((-half, half), (-half, half))
    }

    fn grid(&self) -> Vec<State> {
        let n = STATE_GRID;
        let lin = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| State::new(lin(self.y_min, self.y_max, i), lin(self.k_min, self.k_max, j)))
            .collect()
    }
}

fn time_grid() -> Vec<f64> {
    (0..TIME_SAMPLES).map(|i| 2.0 * PI * i as f64 / TIME_SAMPLES as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Time, or dither phase for A1 checks.
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<State>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub id: String,
    pub passed: bool,
    /// The measured quantity the check thresholds.
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub region: Region,
    /// Estimated bound `M` of the regularity conditions on the sampled box.
    pub bound_m: f64,
    pub checks: Vec<CheckEntry>,
    pub passed: bool,
}

impl AssumptionReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, id: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Maximum of `g` over the state grid × time samples, with its location.
/// Rows are scanned in parallel and reduced in grid order.
fn grid_max(region: &Region, g: impl Fn(f64, State) -> f64 + Sync) -> (f64, Witness) {
    let times = time_grid();
    let points = region.grid();
    let per_point: Vec<(f64, Witness)> = points
        .par_iter()
        .map(|&x| {
            let mut best = (f64::NEG_INFINITY, Witness { t: 0.0, state: Some(x) });
            for &t in &times {
                let v = g(t, x);
                // NaN counts as unbounded
                let v = if v.is_nan() { f64::INFINITY } else { v };
                if v > best.0 {
                    best = (v, Witness { t, state: Some(x) });
                }
            }
            best
        })
        .collect();
    per_point
        .into_iter()
        .fold((f64::NEG_INFINITY, Witness { t: 0.0, state: None }), |acc, cur| {
            if cur.0 > acc.0 {
                cur
            } else {
                acc
            }
        })
}

fn bracket_field<'a>(fi: &'a Field, fj: &'a Field) -> impl Fn(f64, State) -> State + Sync + 'a {
    move |t, x| lie_bracket(&**fi, &**fj, x, t)
}

/// Runs the A1 (dither), A2 (regularity bound) and A3 (first-order)
/// checks on `region`.
pub fn check_assumptions(sys: &AffineSystem, region: Region) -> AssumptionReport {
    let mut checks = Vec::new();

    for (idx, u) in sys.dithers().iter().enumerate() {
        let c = u.check();
        let tag = format!("u{} ({})", idx + 1, u.name());
        checks.push(CheckEntry {
            id: format!("A1.1/u{}", idx + 1),
            passed: c.bounded(),
            value: c.sup,
            witness: Some(Witness { t: c.sup_at, state: None }),
            detail: format!("{tag}: sup |u| = {:.12} (limit 1 + {:e})", c.sup, DitherCheck::SUP_SLACK),
        });
        checks.push(CheckEntry {
            id: format!("A1.2/u{}", idx + 1),
            passed: c.periodic(),
            value: c.periodicity_gap,
            witness: Some(Witness {
                t: c.periodicity_at,
                state: None,
            }),
            detail: format!("{tag}: max |u(φ) − u(φ + 2π)| = {:.3e}", c.periodicity_gap),
        });
        checks.push(CheckEntry {
            id: format!("A1.3/u{}", idx + 1),
            passed: c.zero_mean(),
            value: c.mean,
            witness: None,
            detail: format!("{tag}: mean over one period = {:.3e}", c.mean),
        });
    }

    // A2: five norms for f_i, i ∈ {0..l}, and [f_i, f_j], j ∈ {1..l}
    let mut all: Vec<&Field> = vec![sys.drift()];
    all.extend(sys.fields());
    let mut bound = f64::NEG_INFINITY;
    let mut bound_at = None;
    let mut consider = |(v, w): (f64, Witness)| {
        if v > bound {
            bound = v;
            bound_at = Some(w);
        }
    };
    for f in &all {
        consider(grid_max(&region, |t, x| f(t, x).norm()));
        consider(grid_max(&region, |t, x| time_derivative(&***f, x, t).norm()));
        consider(grid_max(&region, |t, x| jacobian(&***f, x, t).frobenius()));
        for g in sys.fields() {
            let br = bracket_field(f, g);
            consider(grid_max(&region, |t, x| time_derivative(&br, x, t).norm()));
            consider(grid_max(&region, |t, x| {
                jacobian_with_step(&br, x, t, fd_step(x, OUTER_FD_REL_STEP)).frobenius()
            }));
        }
    }
    checks.push(CheckEntry {
        id: "A2.2".into(),
        passed: bound.is_finite(),
        value: bound,
        witness: bound_at,
        detail: format!(
            "M = {bound:.6e}: max over {STATE_GRID}×{STATE_GRID} grid × {TIME_SAMPLES} times of |f_i|, |D_t f_i|, |D_x f_i|, |D_t [f_i,f_j]|, |D_x [f_i,f_j]|"
        ),
    });

    // A3.1: pairs with p_i + p_j > 1
    let l = sys.len();
    let mut a31_pairs = 0;
    for i in 0..l {
        for j in 0..l {
            if i == j {
                continue;
            }
            let (ui, uj) = (&sys.dithers()[i], &sys.dithers()[j]);
            if ui.exponent() + uj.exponent() <= 1.0 {
                continue;
            }
            a31_pairs += 1;
            let id = format!("A3.1/{}{}", i + 1, j + 1);
            let raw = iterated_dither_integral(ui, uj, 1.0);
            let (fi, fj) = (&sys.fields()[i], &sys.fields()[j]);
            let (bmax, w) = grid_max(&region, |t, x| lie_bracket(&**fi, &**fj, x, t).norm());
            let integral_ok = matches!(raw, Ok(v) if v.abs() <= INTEGRAL_ZERO_TOL);
            let bracket_ok = bmax <= VANISH_TOL;
            checks.push(CheckEntry {
                id,
                passed: integral_ok || bracket_ok,
                value: raw.as_ref().map(|v| v.abs()).unwrap_or(f64::INFINITY).min(bmax),
                witness: if integral_ok || bracket_ok { None } else { Some(w) },
                detail: format!(
                    "iterated dither integral {}, max |[f_{},f_{}]| = {bmax:.3e}",
                    match raw {
                        Ok(v) => format!("{v:.3e}"),
                        Err(e) => e.to_string(),
                    },
                    i + 1,
                    j + 1
                ),
            });
        }
    }
    if a31_pairs == 0 {
        checks.push(CheckEntry {
            id: "A3.1".into(),
            passed: true,
            value: 0.0,
            witness: None,
            detail: "vacuous: no pair with p_i + p_j > 1".into(),
        });
    }

    // A3.2: triples with p_i + p_j + p_m ≥ 2
    let mut a32_triples = 0;
    for i in 0..l {
        for j in 0..l {
            for m in 0..l {
                let p = sys.dithers()[i].exponent() + sys.dithers()[j].exponent() + sys.dithers()[m].exponent();
                if p < 2.0 {
                    continue;
                }
                a32_triples += 1;
                let (fi, fj, fm) = (&sys.fields()[i], &sys.fields()[j], &sys.fields()[m]);
                let inner = bracket_field(fm, fj);
                let (v, w) = grid_max(&region, |t, x| {
                    lie_bracket_with_step(&inner, &**fi, x, t, fd_step(x, OUTER_FD_REL_STEP)).norm()
                });
                let ok = v <= VANISH_TOL;
                checks.push(CheckEntry {
                    id: format!("A3.2/{}{}{}", i + 1, j + 1, m + 1),
                    passed: ok,
                    value: v,
                    witness: if ok { None } else { Some(w) },
                    detail: format!("max |[[f_{},f_{}],f_{}]| = {v:.3e}", m + 1, j + 1, i + 1),
                });
            }
        }
    }
    if a32_triples == 0 {
        checks.push(CheckEntry {
            id: "A3.2".into(),
            passed: true,
            value: 0.0,
            witness: None,
            detail: "vacuous: no triple with p_i + p_j + p_m ≥ 2".into(),
        });
    }

    let passed = checks.iter().all(|c| c.passed);
    AssumptionReport {
        region,
        bound_m: bound,
        checks,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::averaging::DitherSignal;
    use crate::dynamics::PlantParams;

    #[test]
    fn region_must_be_nondegenerate() {
        assert!(Region::new((1.0, 1.0), (0.0, 1.0)).is_err());
        assert!(Region::new((0.0, 1.0), (2.0, -1.0)).is_err());
        assert!(Region::square(2.0).is_ok());
    }

    #[test]
    fn proposed_design_passes() {
        let p = PlantParams::new(10.0, -2.0).unwrap();
        let report = check_assumptions(&AffineSystem::proposed(&p), Region::square(2.0).unwrap());
        assert!(report.passed, "{:#?}", report.failures().collect::<Vec<_>>());
        assert!(report.bound_m.is_finite() && report.bound_m > 0.0);
        assert!(report.get("A3.1").unwrap().detail.starts_with("vacuous"));
    }

    #[test]
    fn biased_dither_fails_zero_mean() {
        let biased = DitherSignal::new("biased", |x: f64| x.sin() + 0.5, (1, 1), 0.5).unwrap();
        let sys = AffineSystem::new(
            Arc::new(|_, x: State| State::new(-x.y, 0.0)),
            vec![Arc::new(|_, x: State| State::new(x.k, 0.0))],
            vec![biased],
        )
        .unwrap();
        let report = check_assumptions(&sys, Region::square(1.0).unwrap());
        assert!(!report.passed);
        let a13 = report.get("A1.3/u1").unwrap();
        assert!(!a13.passed);
        assert!((a13.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn high_exponent_pair_needs_vanishing_integral_or_bracket() {
        // p1 + p2 = 1.4 > 1 with sin/cos: integral ≠ 0, bracket ≠ 0 → fail
        let s = DitherSignal::new("sin", f64::sin, (1, 1), 0.7).unwrap();
        let c = DitherSignal::new("cos", f64::cos, (1, 1), 0.7).unwrap();
        let sys = AffineSystem::new(
            Arc::new(|_, _| State::ZERO),
            vec![
                Arc::new(|_, x: State| State::new(x.y, 0.0)),
                Arc::new(|_, x: State| State::new(0.0, x.y * x.y)),
            ],
            vec![s.clone(), c.clone()],
        )
        .unwrap();
        let report = check_assumptions(&sys, Region::square(1.0).unwrap());
        let e = report.get("A3.1/12").unwrap();
        assert!(!e.passed);
        assert!(e.witness.is_some());

        // commuting constant fields: bracket vanishes, A3.1 and A3.2 hold
        let sys = AffineSystem::new(
            Arc::new(|_, _| State::ZERO),
            vec![
                Arc::new(|_, _| State::new(1.0, 0.0)),
                Arc::new(|_, _| State::new(0.0, 1.0)),
            ],
            vec![s, c],
        )
        .unwrap();
        let report = check_assumptions(&sys, Region::square(1.0).unwrap());
        assert!(report.get("A3.1/12").unwrap().passed);
        assert!(report.checks.iter().any(|c| c.id.starts_with("A3.2/")));
        assert!(report.passed, "{:#?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn report_serializes_with_documented_keys() {
        let p = PlantParams::new(1.0, 1.0).unwrap();
        let report = check_assumptions(&AffineSystem::proposed(&p), Region::square(1.0).unwrap());
        let v = serde_json::to_value(&report).unwrap();
        assert!(v.get("bound_m").is_some());
        let first = &v["checks"][0];
        for key in ["id", "passed", "witness", "value"] {
            assert!(first.get(key).is_some(), "missing {key}");
        }
    }
}
