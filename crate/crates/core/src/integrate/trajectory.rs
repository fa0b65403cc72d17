use std::io::Write;

use serde::{Deserialize, Serialize};

use super::Method;
use crate::dynamics::{PlantParams, State};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Diverged,
}

/// Run descriptor, serialized as the JSON sidecar of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub variant: String,
    pub omega: Option<f64>,
    pub h: f64,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub y0: f64,
    pub k0: f64,
    pub t0: f64,
    pub tf: f64,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_step: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    /// Chen-Fliess truncation order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

impl RunMeta {
    pub(crate) fn new(s0: State, t0: f64, tf: f64, h: f64) -> Self {
        Self {
            variant: "custom".into(),
            omega: None,
            h,
            a: None,
            b: None,
            y0: s0.y,
            k0: s0.k,
            t0,
            tf,
            status: RunStatus::Ok,
            failure_step: None,
            method: None,
            order: None,
        }
    }
}

/// Where and why a run stopped early.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// Index of the first sample that could not be produced.
    pub step: usize,
    /// Time that sample would have had.
    pub time: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    /// Applied plant input per sample; `None` for averaged and series runs.
    pub inputs: Option<Vec<f64>>,
    pub meta: RunMeta,
    pub failure: Option<Failure>,
}

impl Trajectory {
    pub(crate) fn start(meta: RunMeta, t0: f64, s0: State, u0: Option<f64>) -> Self {
        Self {
            times: vec![t0],
            states: vec![s0],
            inputs: u0.map(|u| vec![u]),
            meta,
            failure: None,
        }
    }

    pub(crate) fn push(&mut self, t: f64, s: State, u: Option<f64>) {
        self.times.push(t);
        self.states.push(s);
        if let (Some(v), Some(u)) = (self.inputs.as_mut(), u) {
            v.push(u);
        }
    }

    pub(crate) fn fail(&mut self, step: usize, time: f64, reason: impl Into<String>) {
        self.meta.status = RunStatus::Diverged;
        self.meta.failure_step = Some(step);
        self.failure = Some(Failure {
            step,
            time,
            reason: reason.into(),
        });
    }

    /// Labels the run with a variant name and dither frequency.
    pub fn labelled(mut self, variant: &str, omega: Option<f64>) -> Self {
        self.meta.variant = variant.into();
        self.meta.omega = omega;
        self
    }

    pub fn with_plant(mut self, p: &PlantParams) -> Self {
        self.meta.a = Some(p.a());
        self.meta.b = Some(p.b());
        self
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn diverged(&self) -> bool {
        self.failure.is_some()
    }

    pub fn is_lbs(&self) -> bool {
        self.meta.variant == "lbs"
    }

    pub fn final_state(&self) -> State {
        *self.states.last().expect("trajectories hold at least the initial sample")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectories hold at least the initial sample")
    }

    /// Writes `t,y,k,u` rows; reals use shortest round-trip formatting.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "t,y,k,u")?;
        for (i, (t, s)) in self.times.iter().zip(&self.states).enumerate() {
            match self.inputs.as_ref().and_then(|u| u.get(i)) {
                Some(u) => writeln!(w, "{t},{},{},{u}", s.y, s.k)?,
                None => writeln!(w, "{t},{},{},", s.y, s.k)?,
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn meta_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.meta)?)
    }
}
