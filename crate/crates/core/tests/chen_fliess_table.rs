//! Audits the transcribed coefficient table against an independent oracle:
//! Lie derivatives by polynomial arithmetic, iterated integrals by nested
//! cumulative quadrature.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use lieadapt::integrate::{published_rows, table_errata, IntegralCoeff, LieCoeff, RowMark};

/// Polynomial in `(y, k)`: `(deg_y, deg_k) → coefficient`.
#[derive(Clone, Debug, Default)]
struct Poly(BTreeMap<(u32, u32), f64>);

impl Poly {
    fn var_y() -> Self {
        Poly([((1, 0), 1.0)].into())
    }

    fn var_k() -> Self {
        Poly([((0, 1), 1.0)].into())
    }

    fn d_y(&self) -> Self {
        Poly(self.0.iter().filter(|(e, _)| e.0 > 0).map(|(e, c)| ((e.0 - 1, e.1), c * e.0 as f64)).collect())
    }

    fn d_k(&self) -> Self {
        Poly(self.0.iter().filter(|(e, _)| e.1 > 0).map(|(e, c)| ((e.0, e.1 - 1), c * e.1 as f64)).collect())
    }

    fn mul(&self, o: &Poly) -> Self {
        let mut out = BTreeMap::new();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                *out.entry((e1.0 + e2.0, e1.1 + e2.1)).or_insert(0.0) += c1 * c2;
            }
        }
        Poly(out)
    }

    fn add(&self, o: &Poly) -> Self {
        let mut out = self.0.clone();
        for (e, c) in &o.0 {
            *out.entry(*e).or_insert(0.0) += c;
        }
        Poly(out)
    }

    fn eval(&self, y: f64, k: f64) -> f64 {
        self.0.iter().map(|(e, c)| c * y.powi(e.0 as i32) * k.powi(e.1 as i32)).sum()
    }
}

/// Component polynomials `(f_y, f_k)` of drift (0), sine field (1), cosine field (2).
fn field(i: u8, a: f64, b: f64) -> (Poly, Poly) {
    let zero = Poly::default();
    match i {
        0 => (Poly([((1, 0), a), ((1, 1), -b)].into()), zero),
        1 => (Poly([((1, 0), -b)].into()), zero),
        2 => (zero, Poly([((2, 0), 1.0)].into())),
        _ => unreachable!(),
    }
}

/// `L_{f_{i_d}} ⋯ L_{f_{i_0}} h` for `word = i_0 … i_d`.
fn lie_oracle(word: &str, h: Poly, a: f64, b: f64) -> Poly {
    word.bytes().fold(h, |acc, c| {
        let (fy, fk) = field(c - b'0', a, b);
        acc.d_y().mul(&fy).add(&acc.d_k().mul(&fk))
    })
}

fn lie_table(l: Option<LieCoeff>, a: f64, b: f64, y: f64, k: f64) -> f64 {
    l.map_or(0.0, |l| {
        l.c as f64 * b.powi(l.p_b as i32) * y.powi(l.p_y as i32) * (a - b * k).powi(l.p_r as i32)
    })
}

/// `∫_0^T u_{i0}(τ0) ∫_0^{τ0} u_{i1}(τ1) ⋯ dτ` with `u0 = 1`,
/// `u1 = √ω sin ωτ`, `u2 = √ω cos ωτ`, by cumulative trapezoids on `n`
/// intervals.
fn nested(word: &[u8], omega: f64, t_end: f64, n: usize) -> f64 {
    let h = t_end / n as f64;
    let u = |i: u8, t: f64| match i {
        b'0' => 1.0,
        b'1' => omega.sqrt() * (omega * t).sin(),
        _ => omega.sqrt() * (omega * t).cos(),
    };
    let mut inner = vec![1.0; n + 1];
    for &letter in word.iter().rev() {
        let mut acc = vec![0.0; n + 1];
        let mut prev = u(letter, 0.0) * inner[0];
        for j in 1..=n {
            let cur = u(letter, j as f64 * h) * inner[j];
            acc[j] = acc[j - 1] + 0.5 * h * (prev + cur);
            prev = cur;
        }
        inner = acc;
    }
    inner[n]
}

fn integral_oracle(word: &str, omega: f64, periods: u32) -> f64 {
    let t_end = periods as f64 * 2.0 * PI / omega;
    let n = 1 << 14;
    let coarse = nested(word.as_bytes(), omega, t_end, n * periods as usize);
    let fine = nested(word.as_bytes(), omega, t_end, 2 * n * periods as usize);
    (4.0 * fine - coarse) / 3.0
}

fn integral_table(coeffs: &[IntegralCoeff], t_end: f64, periods: u32) -> f64 {
    coeffs
        .iter()
        .map(|c| {
            c.num as f64 / c.den as f64
                * t_end.sqrt().powi(c.twice_p_t)
                * (2.0 * PI * periods as f64).sqrt().powi(c.twice_p_2pi)
        })
        .sum()
}

const SAMPLES: [(f64, f64, f64, f64); 4] = [(10.0, -2.0, 1.0, 0.0), (0.7, 1.3, -0.4, 2.2), (-3.0, 0.5, 2.0, -1.5), (1.0, 1.0, 0.3, 0.3)];

#[test]
fn lie_column_matches_polynomial_oracle() {
    for row in published_rows() {
        for &(a, b, y, k) in &SAMPLES {
            for (h, l) in [(Poly::var_y(), row.lie_y), (Poly::var_k(), row.lie_k)] {
                let expect = lie_oracle(row.word, h, a, b).eval(y, k);
                let got = lie_table(l, a, b, y, k);
                assert!(
                    (got - expect).abs() <= 1e-10 * (1.0 + expect.abs()),
                    "row {}: table {got}, oracle {expect}",
                    row.word
                );
            }
        }
    }
}

fn integral_mismatches(overlay: bool, omega: f64, periods: u32) -> Vec<&'static str> {
    let t_end = periods as f64 * 2.0 * PI / omega;
    published_rows()
        .iter()
        .filter(|row| row.mark != RowMark::LieZero)
        .filter(|row| {
            let coeffs = if overlay {
                table_errata().iter().find(|(w, _)| *w == row.word).map_or(row.integral, |(_, c)| *c)
            } else {
                row.integral
            };
            let got = integral_table(coeffs, t_end, periods);
            let expect = integral_oracle(row.word, omega, periods);
            (got - expect).abs() > 1e-8 * (1.0 + expect.abs())
        })
        .map(|row| row.word)
        .collect()
}

#[test]
fn printed_integrals_disagree_exactly_on_errata_rows() {
    let errata: Vec<&str> = table_errata().iter().map(|(w, _)| *w).collect();
    assert_eq!(integral_mismatches(false, 1.0, 1), errata);
}

#[test]
fn corrected_integrals_match_oracle() {
    assert!(integral_mismatches(true, 1.0, 1).is_empty());
}

#[test]
fn whole_period_scaling_holds() {
    assert!(integral_mismatches(true, 2.5, 2).is_empty());
    assert!(integral_mismatches(true, 400.0, 3).is_empty());
}

#[test]
fn integral_zero_rows_vanish() {
    for row in published_rows().iter().filter(|r| r.mark == RowMark::IntegralZero) {
        let v = integral_oracle(row.word, 1.0, 1);
        let listed = table_errata().iter().any(|(w, _)| *w == row.word);
        assert_eq!(v.abs() <= 1e-9, !listed, "row {}: {v}", row.word);
    }
}
