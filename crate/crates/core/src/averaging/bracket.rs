use crate::dynamics::{State, VectorField};

/// 2×2 Jacobian, `rows[i][j] = ∂f_i/∂x_j` with `x = (y, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jacobian {
    pub rows: [[f64; 2]; 2],
}

impl Jacobian {
    pub fn apply(&self, v: State) -> State {
        let [[a, b], [c, d]] = self.rows;
        State::new(a * v.y + b * v.k, c * v.y + d * v.k)
    }

    pub fn frobenius(&self) -> f64 {
        self.rows.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub(crate) fn fd_step(x: State, rel: f64) -> f64 {
    rel * (1.0 + x.norm())
}

/// Relative scale of the central-difference step, `h = 1e-6·(1 + ‖x‖)`.
pub const FD_REL_STEP: f64 = 1e-6;

pub(crate) fn jacobian_with_step(f: &(impl VectorField + ?Sized), x: State, t: f64, h: f64) -> Jacobian {
    let dy = State::new(h, 0.0);
    let dk = State::new(0.0, h);
    let cy = (1.0 / (2.0 * h)) * (f.rate(t, x + dy) - f.rate(t, x - dy));
    let ck = (1.0 / (2.0 * h)) * (f.rate(t, x + dk) - f.rate(t, x - dk));
    Jacobian {
        rows: [[cy.y, ck.y], [cy.k, ck.k]],
    }
}

/// Central-difference Jacobian of `f` at `(t, x)`.
pub fn jacobian(f: &(impl VectorField + ?Sized), x: State, t: f64) -> Jacobian {
    jacobian_with_step(f, x, t, fd_step(x, FD_REL_STEP))
}

/// Central-difference `∂f/∂t` at `(t, x)`.
pub fn time_derivative(f: &(impl VectorField + ?Sized), x: State, t: f64) -> State {
    let h = FD_REL_STEP * (1.0 + t.abs());
    (1.0 / (2.0 * h)) * (f.rate(t + h, x) - f.rate(t - h, x))
}

pub(crate) fn lie_bracket_with_step(
    fi: &(impl VectorField + ?Sized),
    fj: &(impl VectorField + ?Sized),
    x: State,
    t: f64,
    h: f64,
) -> State {
    let ji = jacobian_with_step(fi, x, t, h);
    let jj = jacobian_with_step(fj, x, t, h);
    jj.apply(fi.rate(t, x)) - ji.apply(fj.rate(t, x))
}

/// `[f_i, f_j] = ∂f_j/∂x · f_i − ∂f_i/∂x · f_j`, by central differences.
pub fn lie_bracket(fi: &(impl VectorField + ?Sized), fj: &(impl VectorField + ?Sized), x: State, t: f64) -> State {
    lie_bracket_with_step(fi, fj, x, t, fd_step(x, FD_REL_STEP))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: State, b: State, tol: f64) -> bool {
        (a - b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
    }

    #[test]
    fn proposed_fields_bracket() {
        let b = -2.0;
        let f1 = move |_t: f64, x: State| State::new(-b * x.y, 0.0);
        let f2 = |_t: f64, x: State| State::new(0.0, x.y * x.y);
        let br = lie_bracket(&f1, &f2, State::new(3.0, 7.0), 0.0);
        assert!(close(br, State::new(0.0, 36.0), 1e-8), "{br:?}");
    }

    #[test]
    fn self_bracket_vanishes() {
        let f = |t: f64, x: State| State::new(x.y * x.k + t, x.y.sin());
        for x in [State::new(0.3, -1.0), State::new(2.0, 5.0)] {
            assert_eq!(lie_bracket(&f, &f, x, 0.4), State::ZERO);
        }
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let f = |_t: f64, x: State| State::new(x.k, -x.y * x.y);
        let g = |_t: f64, x: State| State::new(x.y.cos(), x.k * x.y);
        let x = State::new(0.8, -0.4);
        assert!(close(lie_bracket(&f, &g, x, 0.0), -lie_bracket(&g, &f, x, 0.0), 1e-12));
    }

    #[test]
    fn jacobian_of_linear_field() {
        let f = |_t: f64, x: State| State::new(2.0 * x.y - 3.0 * x.k, 5.0 * x.k);
        let j = jacobian(&f, State::new(4.0, -2.0), 0.0);
        let expect = [[2.0, -3.0], [0.0, 5.0]];
        for r in 0..2 {
            for c in 0..2 {
                assert!((j.rows[r][c] - expect[r][c]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn time_derivative_of_dither_field() {
        let f = |t: f64, x: State| State::new(x.y * t.sin(), 0.0);
        let d = time_derivative(&f, State::new(2.0, 0.0), 0.5);
        assert!((d.y - 2.0 * 0.5_f64.cos()).abs() < 1e-8);
    }
}
