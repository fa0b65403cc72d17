use std::fmt;
use std::sync::Arc;

use super::bracket::lie_bracket;
use super::dither::{gamma_coefficient, iterated_dither_integral, DitherSignal};
use crate::dynamics::{PlantParams, State, VectorField};
use crate::error::{Error, Result};

/// A shareable time-dependent vector field.
pub type Field = Arc<dyn Fn(f64, State) -> State + Send + Sync>;

/// Input-affine system `ẋ = f0(t, x) + Σ_i ω^{p_i} f_i(t, x) u_i(k_i ω t)`.
#[derive(Clone)]
pub struct AffineSystem {
    drift: Field,
    fields: Vec<Field>,
    dithers: Vec<DitherSignal>,
}

impl fmt::Debug for AffineSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AffineSystem")
            .field("fields", &self.fields.len())
            .field("dithers", &self.dithers)
            .finish()
    }
}

impl AffineSystem {
    pub fn new(drift: Field, fields: Vec<Field>, dithers: Vec<DitherSignal>) -> Result<Self> {
        if fields.is_empty() {
            return Err(Error::Precondition("an affine system needs at least one controlled field".into()));
        }
        if fields.len() != dithers.len() {
            return Err(Error::Precondition(format!(
                "{} controlled fields but {} dithers",
                fields.len(),
                dithers.len()
            )));
        }
        Ok(Self { drift, fields, dithers })
    }

    /// Plant with the proposed controller:
    /// `f0 = ((a − b·k)·y, 0)`, `f1 = (−b·y, 0)` on `sin`, `f2 = (0, y²)` on `cos`.
    pub fn proposed(p: &PlantParams) -> Self {
        let (a, b) = (p.a(), p.b());
        Self::new(
            Arc::new(move |_, x: State| State::new((a - b * x.k) * x.y, 0.0)),
            vec![
                Arc::new(move |_, x: State| State::new(-b * x.y, 0.0)),
                Arc::new(|_, x: State| State::new(0.0, x.y * x.y)),
            ],
            vec![DitherSignal::sin(), DitherSignal::cos()],
        )
        .expect("two fields, two dithers")
    }

    /// Plant with the swapped controller:
    /// `f1 = (−2b·y², 0)` on `sin`, `f2 = (0, y)` on `cos`.
    pub fn swapped(p: &PlantParams) -> Self {
        let (a, b) = (p.a(), p.b());
        Self::new(
            Arc::new(move |_, x: State| State::new((a - b * x.k) * x.y, 0.0)),
            vec![
                Arc::new(move |_, x: State| State::new(-2.0 * b * x.y * x.y, 0.0)),
                Arc::new(|_, x: State| State::new(0.0, x.y)),
            ],
            vec![DitherSignal::sin(), DitherSignal::cos()],
        )
        .expect("two fields, two dithers")
    }

    pub fn drift(&self) -> &Field {
        &self.drift
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn dithers(&self) -> &[DitherSignal] {
        &self.dithers
    }

    /// Number of controlled fields `l`.
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Right-hand side of the oscillatory system at frequency `omega`.
    pub fn rate_at(&self, omega: f64, t: f64, x: State) -> State {
        let mut acc = (self.drift)(t, x);
        for (f, u) in self.fields.iter().zip(&self.dithers) {
            acc = acc + (omega.powf(u.exponent()) * u.at(omega, t)) * f(t, x);
        }
        acc
    }
}

/// `x ↦ f0(t, x) + Σ_{i<j} [f_i, f_j](t, x)·γ_ij`, with the `ω → ∞` limit
/// of each `γ_ij` precomputed.
#[derive(Debug, Clone)]
pub struct AveragedRhs {
    system: AffineSystem,
    terms: Vec<(usize, usize, f64)>,
}

impl AveragedRhs {
    /// Nonzero `(i, j, γ_ij)` bracket terms, zero-based field indices.
    pub fn terms(&self) -> &[(usize, usize, f64)] {
        &self.terms
    }
}

impl VectorField for AveragedRhs {
    fn rate(&self, t: f64, x: State) -> State {
        let f = &self.system.fields;
        self.terms.iter().fold((self.system.drift)(t, x), |acc, &(i, j, g)| {
            acc + g * lie_bracket(&*f[i], &*f[j], x, t)
        })
    }
}

/// Tolerance below which a raw iterated dither integral counts as zero.
pub(crate) const INTEGRAL_ZERO_TOL: f64 = 1e-9;

/// Builds the averaged right-hand side of `sys`.
///
/// `γ_ij(ω)` scales as `ω^{p_i+p_j−1}`: for `p_i + p_j = 1` the limit is the
/// ω-independent value, for `p_i + p_j < 1` it is zero, and for
/// `p_i + p_j > 1` the iterated dither integral must vanish (otherwise the
/// limit does not exist and an error is returned).
pub fn build_averaged_rhs(sys: &AffineSystem) -> Result<AveragedRhs> {
    for u in &sys.dithers {
        let c = u.check();
        if !c.passed() {
            return Err(Error::Assumption {
                id: "A1".into(),
                detail: format!(
                    "dither `{}`: sup {:.3e}, periodicity gap {:.3e}, mean {:.3e}",
                    u.name(),
                    c.sup,
                    c.periodicity_gap,
                    c.mean
                ),
            });
        }
    }
    let mut terms = Vec::new();
    for i in 0..sys.len() {
        for j in (i + 1)..sys.len() {
            let (ui, uj) = (&sys.dithers[i], &sys.dithers[j]);
            let p = ui.exponent() + uj.exponent();
            if (p - 1.0).abs() <= 1e-12 {
                let g = gamma_coefficient(ui, uj, 1.0)?;
                if g != 0.0 {
                    terms.push((i, j, g));
                }
            } else if p > 1.0 {
                let raw = iterated_dither_integral(ui, uj, 1.0)?;
                if raw.abs() > INTEGRAL_ZERO_TOL {
                    return Err(Error::Assumption {
                        id: "A3.1".into(),
                        detail: format!(
                            "p_{} + p_{} = {p} > 1 with nonzero iterated integral {raw:.3e}",
                            i + 1,
                            j + 1
                        ),
                    });
                }
            }
        }
    }
    Ok(AveragedRhs {
        system: sys.clone(),
        terms,
    })
}
