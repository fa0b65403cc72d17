use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::dynamics::{ControllerSpec, NussbaumFn, PlantParams, Sign, State, DEFAULT_OMEGA};
use crate::error::{Error, Result};
use crate::integrate::{dither_step, CoefficientSet, Method};

/// Step used for controllers without a dither under the `standard` policy.
pub const UNDITHERED_STEP: f64 = 1e-4;

/// How a run picks its step width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepPolicy {
    /// `2π/(40ω)` for dithered controllers, [`UNDITHERED_STEP`] otherwise.
    Standard,
    Fixed(f64),
}

impl StepPolicy {
    pub fn resolve(&self, controller: &ControllerSpec) -> f64 {
        match (self, controller.omega()) {
            (StepPolicy::Fixed(h), _) => *h,
            (StepPolicy::Standard, Some(w)) => dither_step(w),
            (StepPolicy::Standard, None) => UNDITHERED_STEP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ControllerRun {
    pub spec: ControllerSpec,
    pub method: Method,
    pub step: StepPolicy,
}

impl ControllerRun {
    pub fn step_width(&self) -> f64 {
        self.step.resolve(&self.spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomBatch {
    pub count: usize,
    pub y: (f64, f64),
    pub k: (f64, f64),
}

impl RandomBatch {
    pub fn draw(&self, seed: u64) -> Vec<State> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.count)
            .map(|_| State::new(rng.gen_range(self.y.0..=self.y.1), rng.gen_range(self.k.0..=self.k.1)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbsConfig {
    pub method: Method,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChenFliessConfig {
    pub orders: Vec<usize>,
    pub periods_per_step: u32,
    pub coefficients: CoefficientSet,
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Half-width of the square region `[−r, r]²` for the assumption checks.
    pub region: f64,
    /// Constant added to the sine dither, to exercise the zero-mean check.
    pub dither_offset: f64,
    pub gain: NussbaumFn,
    pub k0: f64,
    pub k_max: f64,
    pub grid: usize,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub plant: PlantParams,
    pub controller: ControllerRun,
    /// Controllers for `compare`; empty means the primary controller alone.
    pub compare: Vec<ControllerRun>,
    pub initial: Vec<State>,
    pub random_initial: Option<RandomBatch>,
    pub t0: f64,
    pub tf: f64,
    pub lbs: LbsConfig,
    pub out_dir: PathBuf,
    pub sweep_omegas: Vec<f64>,
    pub chen_fliess: ChenFliessConfig,
    pub check: CheckConfig,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_owned() + &span_hint(&e)))?;
        raw.validate()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Explicit initial states followed by the seeded random batch.
    pub fn initial_states(&self, seed: u64) -> Vec<State> {
        let mut out = self.initial.clone();
        if let Some(batch) = &self.random_initial {
            out.extend(batch.draw(seed));
        }
        out
    }

    pub fn compare_runs(&self) -> Vec<ControllerRun> {
        if self.compare.is_empty() {
            vec![self.controller.clone()]
        } else {
            self.compare.clone()
        }
    }
}

fn span_hint(e: &toml::de::Error) -> String {
    e.span().map(|s| format!(" (at byte {})", s.start)).unwrap_or_default()
}

fn missing(field: &str) -> Error {
    Error::Config(format!("missing field `{field}`"))
}

fn invalid(field: &str, why: impl std::fmt::Display) -> Error {
    Error::Config(format!("invalid `{field}`: {why}"))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    plant: Option<RawPlant>,
    controller: Option<RawController>,
    compare: Option<RawCompare>,
    initial: Option<RawInitial>,
    time: Option<RawTime>,
    integrator: Option<RawIntegrator>,
    lbs: Option<RawIntegrator>,
    output: Option<RawOutput>,
    sweep: Option<RawSweep>,
    chen_fliess: Option<RawChenFliess>,
    check: Option<RawCheck>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlant {
    a: Option<f64>,
    b: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawNumberOrName {
    Number(f64),
    Name(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawController {
    kind: Option<String>,
    omega: Option<f64>,
    gain: Option<RawNumberOrName>,
    sign_b: Option<f64>,
    method: Option<Method>,
    step: Option<RawNumberOrName>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompare {
    controllers: Option<Vec<RawController>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    states: Option<Vec<[f64; 2]>>,
    random: Option<RawRandom>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRandom {
    count: Option<usize>,
    y: Option<[f64; 2]>,
    k: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t0: Option<f64>,
    tf: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    method: Option<Method>,
    step: Option<RawNumberOrName>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    omegas: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChenFliess {
    orders: Option<Vec<usize>>,
    periods_per_step: Option<u32>,
    coefficients: Option<CoefficientSet>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCheck {
    region: Option<f64>,
    dither_offset: Option<f64>,
    gain: Option<RawNumberOrName>,
    k0: Option<f64>,
    k_max: Option<f64>,
    grid: Option<usize>,
}

fn step_policy(field: &str, raw: Option<&RawNumberOrName>, default: StepPolicy) -> Result<StepPolicy> {
    match raw {
        None => Ok(default),
        Some(RawNumberOrName::Name(n)) if n == "standard" => Ok(StepPolicy::Standard),
        Some(RawNumberOrName::Name(n)) => Err(invalid(field, format!("expected a number or \"standard\", got \"{n}\""))),
        Some(RawNumberOrName::Number(h)) if *h > 0.0 && h.is_finite() => Ok(StepPolicy::Fixed(*h)),
        Some(RawNumberOrName::Number(h)) => Err(invalid(field, format!("step must be positive, got {h}"))),
    }
}

fn gain(field: &str, raw: Option<&RawNumberOrName>) -> Result<NussbaumFn> {
    match raw {
        None => Ok(NussbaumFn::SCosS),
        Some(RawNumberOrName::Name(n)) if n == "s-cos-s" => Ok(NussbaumFn::SCosS),
        Some(RawNumberOrName::Name(n)) => Err(invalid(field, format!("expected \"s-cos-s\" or a constant, got \"{n}\""))),
        Some(RawNumberOrName::Number(c)) if c.is_finite() => Ok(NussbaumFn::Constant(*c)),
        Some(RawNumberOrName::Number(c)) => Err(invalid(field, c)),
    }
}

fn range(field: &str, r: [f64; 2]) -> Result<(f64, f64)> {
    if r[0].is_finite() && r[1].is_finite() && r[0] <= r[1] {
        Ok((r[0], r[1]))
    } else {
        Err(invalid(field, format!("expected [low, high], got {r:?}")))
    }
}

impl RawController {
    fn validate(&self, path: &str, method: Method, step: StepPolicy) -> Result<ControllerRun> {
        let kind = self.kind.as_deref().unwrap_or("proposed");
        let omega = self.omega.unwrap_or(DEFAULT_OMEGA);
        let bad_omega = |e| match e {
            Error::InvalidFrequency(w) => invalid(&format!("{path}.omega"), format!("must be positive, got {w}")),
            other => other,
        };
        let spec = match kind {
            "proposed" => ControllerSpec::proposed(omega).map_err(bad_omega)?,
            "swapped" => ControllerSpec::swapped(omega).map_err(bad_omega)?,
            "nussbaum" => ControllerSpec::nussbaum(gain(&format!("{path}.gain"), self.gain.as_ref())?),
            "willems-byrnes" => {
                let s = self.sign_b.ok_or_else(|| missing(&format!("{path}.sign_b")))?;
                if s == 0.0 || !s.is_finite() {
                    return Err(invalid(&format!("{path}.sign_b"), "must be +1 or -1"));
                }
                ControllerSpec::willems_byrnes(Sign::of(s))
            }
            other => {
                return Err(invalid(
                    &format!("{path}.kind"),
                    format!("unknown controller \"{other}\" (proposed, swapped, nussbaum, willems-byrnes)"),
                ))
            }
        };
        Ok(ControllerRun {
            spec,
            method: self.method.unwrap_or(method),
            step: step_policy(&format!("{path}.step"), self.step.as_ref(), step)?,
        })
    }
}

impl RawConfig {
    fn validate(self) -> Result<ExperimentConfig> {
        let plant = self.plant.ok_or_else(|| missing("plant"))?;
        let a = plant.a.ok_or_else(|| missing("plant.a"))?;
        let b = plant.b.ok_or_else(|| missing("plant.b"))?;
        let plant = PlantParams::new(a, b).map_err(|e| invalid("plant.b", e))?;

        let integ = self.integrator.unwrap_or(RawIntegrator { method: None, step: None });
        let method = integ.method.unwrap_or_default();
        let step = step_policy("integrator.step", integ.step.as_ref(), StepPolicy::Standard)?;
        let controller = self
            .controller
            .unwrap_or(RawController {
                kind: None,
                omega: None,
                gain: None,
                sign_b: None,
                method: None,
                step: None,
            })
            .validate("controller", method, step)?;
        let compare = match self.compare.and_then(|c| c.controllers) {
            None => Vec::new(),
            Some(list) => list
                .iter()
                .enumerate()
                .map(|(i, c)| c.validate(&format!("compare.controllers[{i}]"), method, StepPolicy::Standard))
                .collect::<Result<_>>()?,
        };

        let (initial, random_initial) = match self.initial {
            None => (vec![State::new(1.0, 0.0)], None),
            Some(init) => {
                let states: Vec<State> = init.states.unwrap_or_default().iter().map(|s| State::new(s[0], s[1])).collect();
                if let Some(s) = states.iter().find(|s| !s.is_finite()) {
                    return Err(invalid("initial.states", format!("non-finite state {s:?}")));
                }
                let random = match init.random {
                    None => None,
                    Some(r) => Some(RandomBatch {
                        count: r.count.ok_or_else(|| missing("initial.random.count"))?,
                        y: range("initial.random.y", r.y.ok_or_else(|| missing("initial.random.y"))?)?,
                        k: range("initial.random.k", r.k.ok_or_else(|| missing("initial.random.k"))?)?,
                    }),
                };
                if states.is_empty() && random.map_or(true, |r| r.count == 0) {
                    return Err(invalid("initial.states", "no initial condition given"));
                }
                (states, random)
            }
        };

        let time = self.time.ok_or_else(|| missing("time"))?;
        let t0 = time.t0.unwrap_or(0.0);
        let tf = time.tf.ok_or_else(|| missing("time.tf"))?;
        if !t0.is_finite() || !tf.is_finite() || tf < t0 {
            return Err(invalid("time.tf", format!("need t0 <= tf, got t0 = {t0}, tf = {tf}")));
        }

        let lbs = match self.lbs {
            None => LbsConfig {
                method: Method::Rk4,
                step: UNDITHERED_STEP,
            },
            Some(l) => LbsConfig {
                method: l.method.unwrap_or(Method::Rk4),
                step: match step_policy("lbs.step", l.step.as_ref(), StepPolicy::Fixed(UNDITHERED_STEP))? {
                    StepPolicy::Fixed(h) => h,
                    StepPolicy::Standard => UNDITHERED_STEP,
                },
            },
        };

        let out_dir = self.output.and_then(|o| o.dir).unwrap_or_else(|| PathBuf::from("out"));
        let sweep_omegas = self.sweep.and_then(|s| s.omegas).unwrap_or_else(|| vec![100.0, 400.0, 1600.0]);
        if let Some(w) = sweep_omegas.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(invalid("sweep.omegas", format!("frequencies must be positive, got {w}")));
        }

        let cf = self.chen_fliess.unwrap_or(RawChenFliess {
            orders: None,
            periods_per_step: None,
            coefficients: None,
        });
        let chen_fliess = ChenFliessConfig {
            orders: cf.orders.unwrap_or_else(|| vec![0, 1, 2]),
            periods_per_step: cf.periods_per_step.unwrap_or(1),
            coefficients: cf.coefficients.unwrap_or_default(),
        };
        if let Some(o) = chen_fliess.orders.iter().find(|o| **o > crate::integrate::MAX_ORDER) {
            return Err(invalid("chen_fliess.orders", format!("order {o} is not tabulated (0..=3)")));
        }
        if chen_fliess.periods_per_step == 0 {
            return Err(invalid("chen_fliess.periods_per_step", "must be at least 1"));
        }

        let ck = self.check.unwrap_or(RawCheck {
            region: None,
            dither_offset: None,
            gain: None,
            k0: None,
            k_max: None,
            grid: None,
        });
        let check = CheckConfig {
            region: ck.region.unwrap_or(2.0),
            dither_offset: ck.dither_offset.unwrap_or(0.0),
            gain: gain("check.gain", ck.gain.as_ref())?,
            k0: ck.k0.unwrap_or(0.0),
            k_max: ck.k_max.unwrap_or(50.0),
            grid: ck.grid.unwrap_or(10_000),
        };
        if !(check.region > 0.0 && check.region.is_finite()) {
            return Err(invalid("check.region", "must be positive"));
        }
        if !check.dither_offset.is_finite() {
            return Err(invalid("check.dither_offset", "must be finite"));
        }

        Ok(ExperimentConfig {
            plant,
            controller,
            compare,
            initial,
            random_initial,
            t0,
            tf,
            lbs,
            out_dir,
            sweep_omegas,
            chen_fliess,
            check,
        })
    }
}

/// Names accepted by `--preset`.
pub const PRESETS: [&str; 4] = ["fig1", "fig2", "fig3", "fig4"];

const COMMON: &str = r#"[plant]
a = 10.0
b = -2.0

[time]
t0 = 0.0
"#;

/// TOML text of a built-in experiment.
pub fn preset_toml(name: &str) -> Option<String> {
    let body = match name {
        "fig1" => {
            r#"tf = 3.0

[controller]
kind = "proposed"
omega = 400.0

[integrator]
method = "euler"
step = "standard"

[lbs]
method = "rk4"
step = 1e-4

[initial]
states = [[1.0, 0.0], [-1.0, 0.0], [2.0, -5.0], [-2.0, -8.0], [0.5, 2.0]]

[sweep]
omegas = [100.0, 400.0, 1600.0]

[output]
dir = "out/fig1"
"#
        }
        "fig2" => {
            r#"tf = 3.0

[controller]
kind = "proposed"
omega = 400.0

[integrator]
method = "euler"
step = "standard"

[compare]
controllers = [
  { kind = "proposed", omega = 400.0, step = "standard" },
  { kind = "nussbaum", gain = "s-cos-s", step = 1e-4 },
  { kind = "willems-byrnes", sign_b = -1.0, step = 1e-4 },
]

[initial]
states = [[1.0, 0.0]]

[check]
gain = "s-cos-s"
k0 = 0.0
k_max = 50.0
grid = 10000

[output]
dir = "out/fig2"
"#
        }
        "fig3" => {
            r#"tf = 3.0

[controller]
kind = "swapped"
omega = 400.0

[integrator]
method = "euler"
step = "standard"

[compare]
controllers = [
  { kind = "proposed", omega = 400.0, step = "standard" },
  { kind = "swapped", omega = 400.0, step = "standard" },
]

[initial]
states = [[1.0, 0.0]]

[output]
dir = "out/fig3"
"#
        }
        "fig4" => {
            r#"tf = 2.0

[controller]
kind = "proposed"
omega = 400.0

[integrator]
method = "euler"
step = "standard"

[lbs]
method = "rk4"
step = 1e-4

[initial]
states = [[1.0, 0.0]]

[chen_fliess]
orders = [0, 1, 2]
periods_per_step = 1
coefficients = "published"

[output]
dir = "out/fig4"
"#
        }
        _ => return None,
    };
    Some(format!("{COMMON}{body}"))
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let text = preset_toml(name)
        .ok_or_else(|| Error::Config(format!("unknown preset \"{name}\" (expected one of {})", PRESETS.join(", "))))?;
    ExperimentConfig::from_toml_str(&text)
}
