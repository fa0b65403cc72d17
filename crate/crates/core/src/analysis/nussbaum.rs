use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest accepted quadrature grid.
pub const MIN_GRID: usize = 1000;

/// Extremes of `N(k) = 1/(k − k0)·∫_{k0}^{k} h(s)·s ds` over `(k0, k_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Excursions {
    pub k_max: f64,
    pub running_sup: f64,
    pub running_inf: f64,
    pub crossings: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NussbaumReport {
    pub k0: f64,
    pub running_sup: f64,
    pub running_inf: f64,
    pub crossings: usize,
    /// Same scan over a horizon of twice the length.
    pub doubled: Excursions,
    /// Both excursions grew strictly when the horizon doubled.
    pub excursion_growth: bool,
    /// Positive and negative excursions both present and growing.
    pub passed: bool,
}

/// `(k_i, N(k_i))` on the `grid` interior-and-right nodes of `(k0, k_max]`.
pub(crate) fn running_mean(h: &impl Fn(f64) -> f64, k0: f64, k_max: f64, grid: usize) -> Vec<(f64, f64)> {
    let dk = (k_max - k0) / grid as f64;
    let g = |s: f64| h(s) * s;
    let (mut integral, mut prev) = (0.0, g(k0));
    (1..=grid)
        .map(|i| {
            let k = k0 + i as f64 * dk;
            let cur = g(k);
            integral += 0.5 * dk * (prev + cur);
            prev = cur;
            (k, integral / (k - k0))
        })
        .collect()
}

fn scan(h: &impl Fn(f64) -> f64, k0: f64, k_max: f64, grid: usize) -> Excursions {
    let (mut sup, mut inf) = (f64::NEG_INFINITY, f64::INFINITY);
    let (mut crossings, mut last_sign) = (0, 0.0);
    for (_, n) in running_mean(h, k0, k_max, grid) {
        sup = sup.max(n);
        inf = inf.min(n);
        if n != 0.0 {
            let sign = n.signum();
            if last_sign != 0.0 && sign != last_sign {
                crossings += 1;
            }
            last_sign = sign;
        }
    }
    Excursions {
        k_max,
        running_sup: sup,
        running_inf: inf,
        crossings,
    }
}

/// Numerical stand-in for the Nussbaum property of `h`: the running mean
/// `N(k)` must swing both ways, with swings that grow when the horizon
/// `k_max − k0` doubles. Trapezoidal quadrature on `grid` intervals.
pub fn nussbaum_type_check(h: impl Fn(f64) -> f64, k0: f64, k_max: f64, grid: usize) -> Result<NussbaumReport> {
    if !(k_max > k0) || !k0.is_finite() || !k_max.is_finite() {
        return Err(Error::Precondition(format!("need k_max > k0, got k0 = {k0}, k_max = {k_max}")));
    }
    if grid < MIN_GRID {
        return Err(Error::Precondition(format!("grid must be at least {MIN_GRID}, got {grid}")));
    }
    let base = scan(&h, k0, k_max, grid);
    let doubled = scan(&h, k0, k0 + 2.0 * (k_max - k0), 2 * grid);
    let excursion_growth = doubled.running_sup > base.running_sup && doubled.running_inf < base.running_inf;
    Ok(NussbaumReport {
        k0,
        running_sup: base.running_sup,
        running_inf: base.running_inf,
        crossings: base.crossings,
        doubled,
        excursion_growth,
        passed: base.running_sup > 0.0 && base.running_inf < 0.0 && excursion_growth,
    })
}
