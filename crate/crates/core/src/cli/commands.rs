use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ControllerRun, ExperimentConfig};
use crate::analysis::{approximation_sweep, nussbaum_type_check, strictly_decreasing, write_sweep_csv, NussbaumReport, SweepPoint};
use crate::averaging::{check_assumptions, AffineSystem, AssumptionReport, DitherSignal, Region};
use crate::dynamics::{ControllerSpec, State};
use crate::error::{Error, Result};
use crate::integrate::{simulate_closed_loop, simulate_lbs, ChenFliessScheme, Trajectory};

/// Options that come from the command line rather than the config file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub with_lbs: bool,
    pub seed: u64,
}

impl RunOptions {
    fn out_dir(&self, cfg: &ExperimentConfig) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| cfg.out_dir.clone())
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(path)?))
}

/// Writes `<stem>.csv` and `<stem>.json` under `dir`.
pub fn write_trajectory(dir: &Path, stem: &str, traj: &Trajectory) -> Result<Vec<PathBuf>> {
    let csv = dir.join(format!("{stem}.csv"));
    let json = dir.join(format!("{stem}.json"));
    let mut w = create(&csv)?;
    traj.write_csv(&mut w)?;
    w.flush()?;
    fs::write(&json, traj.meta_json()? + "\n")?;
    Ok(vec![csv, json])
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn numbered(stem: &str, i: usize, n: usize) -> String {
    if n == 1 {
        stem.to_owned()
    } else {
        format!("{stem}_{i}")
    }
}

fn run_controller(cfg: &ExperimentConfig, run: &ControllerRun, s0: State) -> Result<Trajectory> {
    simulate_closed_loop(&cfg.plant, &run.spec, s0, cfg.t0, cfg.tf, run.step_width(), run.method)
}

fn run_lbs(cfg: &ExperimentConfig, s0: State) -> Result<Trajectory> {
    let h = if cfg.tf > cfg.t0 {
        cfg.lbs.step.min(cfg.tf - cfg.t0)
    } else {
        cfg.lbs.step
    };
    simulate_lbs(&cfg.plant, s0, cfg.t0, cfg.tf, h, cfg.lbs.method)
}

fn clamp_step(run: &ControllerRun, cfg: &ExperimentConfig) -> ControllerRun {
    let mut run = run.clone();
    let span = cfg.tf - cfg.t0;
    if span > 0.0 && run.step_width() > span {
        run.step = super::config::StepPolicy::Fixed(span);
    }
    run
}

/// Primary controller from every initial state: `trajectory[_i].csv/json`,
/// plus `lbs[_i].csv/json` when `with_lbs` is set.
pub fn cmd_simulate(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let dir = opts.out_dir(cfg);
    fs::create_dir_all(&dir)?;
    let states = cfg.initial_states(opts.seed);
    let run = clamp_step(&cfg.controller, cfg);
    let runs: Vec<(Trajectory, Option<Trajectory>)> = states
        .par_iter()
        .map(|&s0| {
            let full = run_controller(cfg, &run, s0)?;
            let lbs = if opts.with_lbs { Some(run_lbs(cfg, s0)?) } else { None };
            Ok((full, lbs))
        })
        .collect::<Result<_>>()?;
    let mut written = Vec::new();
    for (i, (full, lbs)) in runs.iter().enumerate() {
        written.extend(write_trajectory(&dir, &numbered("trajectory", i, runs.len()), full)?);
        if let Some(lbs) = lbs {
            written.extend(write_trajectory(&dir, &numbered("lbs", i, runs.len()), lbs)?);
        }
    }
    Ok(written)
}

/// Index of the sample nearest to `t`; ties go to the earlier sample.
pub fn nearest_sample(times: &[f64], t: f64) -> usize {
    let i = times.partition_point(|&x| x < t);
    if i == 0 {
        0
    } else if i == times.len() {
        times.len() - 1
    } else if t - times[i - 1] <= times[i] - t {
        i - 1
    } else {
        i
    }
}

/// Aligns the `y` columns of `runs` on the grid of the run with the largest
/// step. Cells past the end of a truncated run are left empty.
pub fn write_compare_csv(runs: &[(String, Trajectory)], mut w: impl Write) -> Result<()> {
    let Some(coarse) = runs
        .iter()
        .map(|(_, t)| t)
        .reduce(|best, t| if t.meta.h > best.meta.h { t } else { best })
    else {
        return Err(Error::Precondition("nothing to compare".into()));
    };
    write!(w, "t")?;
    for (name, _) in runs {
        write!(w, ",y_{name}")?;
    }
    writeln!(w)?;
    for &t in &coarse.times {
        write!(w, "{t}")?;
        for (_, tr) in runs {
            let j = nearest_sample(&tr.times, t);
            let past_end = tr.diverged() && t > tr.final_time() + 0.5 * tr.meta.h;
            if past_end {
                write!(w, ",")?;
            } else {
                write!(w, ",{}", tr.states[j].y)?;
            }
        }
        writeln!(w)?;
    }
    Ok(())
}

fn column_names(runs: &[ControllerRun]) -> Vec<String> {
    let base: Vec<&str> = runs.iter().map(|r| r.spec.name()).collect();
    base.iter()
        .enumerate()
        .map(|(i, n)| {
            if base.iter().filter(|m| *m == n).count() > 1 {
                format!("{n}_{i}")
            } else {
                (*n).to_owned()
            }
        })
        .collect()
}

/// Every compare controller from the first initial state, each at its own
/// step: one `<name>.csv/json` per controller and an aligned `compare.csv`.
pub fn cmd_compare(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let dir = opts.out_dir(cfg);
    fs::create_dir_all(&dir)?;
    let s0 = cfg.initial_states(opts.seed)[0];
    let runs = cfg.compare_runs();
    let names = column_names(&runs);
    let trajs: Vec<Trajectory> = runs
        .par_iter()
        .map(|r| run_controller(cfg, &clamp_step(r, cfg), s0))
        .collect::<Result<_>>()?;
    let named: Vec<(String, Trajectory)> = names.into_iter().zip(trajs).collect();
    let mut written = Vec::new();
    for (name, tr) in &named {
        written.extend(write_trajectory(&dir, name, tr)?);
    }
    let path = dir.join("compare.csv");
    let mut w = create(&path)?;
    write_compare_csv(&named, &mut w)?;
    w.flush()?;
    written.push(path);
    Ok(written)
}

#[derive(Debug, Serialize)]
struct SweepSummary<'a> {
    omegas: &'a [f64],
    points: &'a [SweepPoint],
    strictly_decreasing: bool,
}

/// `sweep.csv` (`omega,error`) and a `sweep.json` summary.
pub fn cmd_sweep(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    if cfg.sweep_omegas.is_empty() {
        return Err(Error::Config("`sweep.omegas` is empty".into()));
    }
    if cfg.t0 != 0.0 {
        return Err(Error::Config("`time.t0` must be 0 for a sweep".into()));
    }
    let dir = opts.out_dir(cfg);
    fs::create_dir_all(&dir)?;
    let s0 = cfg.initial_states(opts.seed)[0];
    let points = approximation_sweep(&cfg.plant, s0, cfg.tf, &cfg.sweep_omegas)?;
    let csv = dir.join("sweep.csv");
    let mut w = create(&csv)?;
    write_sweep_csv(&points, &mut w)?;
    w.flush()?;
    let json = dir.join("sweep.json");
    write_json(
        &json,
        &SweepSummary {
            omegas: &cfg.sweep_omegas,
            points: &points,
            strictly_decreasing: strictly_decreasing(&points),
        },
    )?;
    Ok(vec![csv, json])
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub design: String,
    pub assumptions: AssumptionReport,
    pub nussbaum: NussbaumReport,
    pub passed: bool,
}

/// The input-affine system behind the configured controller, with the
/// configured offset added to the sine dither.
fn design_system(cfg: &ExperimentConfig) -> Result<(String, AffineSystem)> {
    let (name, sys) = match cfg.controller.spec {
        ControllerSpec::Swapped { .. } => ("swapped", AffineSystem::swapped(&cfg.plant)),
        _ => ("proposed", AffineSystem::proposed(&cfg.plant)),
    };
    let off = cfg.check.dither_offset;
    if off == 0.0 {
        return Ok((name.to_owned(), sys));
    }
    let biased = DitherSignal::new("sin+offset", move |x: f64| x.sin() + off, (1, 1), 0.5)?;
    let mut dithers = sys.dithers().to_vec();
    dithers[0] = biased;
    Ok((
        format!("{name} (sine offset {off})"),
        AffineSystem::new(Arc::clone(sys.drift()), sys.fields().to_vec(), dithers)?,
    ))
}

pub fn check_report(cfg: &ExperimentConfig) -> Result<CheckReport> {
    let (design, sys) = design_system(cfg)?;
    let assumptions = check_assumptions(&sys, Region::square(cfg.check.region)?);
    let gain = cfg.check.gain.clone();
    let nussbaum = nussbaum_type_check(move |s| gain.eval(s), cfg.check.k0, cfg.check.k_max, cfg.check.grid)?;
    Ok(CheckReport {
        design,
        passed: assumptions.passed && nussbaum.passed,
        assumptions,
        nussbaum,
    })
}

/// `check.json`; also returned for printing.
pub fn cmd_check(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<(CheckReport, Vec<PathBuf>)> {
    let dir = opts.out_dir(cfg);
    fs::create_dir_all(&dir)?;
    let report = check_report(cfg)?;
    let path = dir.join("check.json");
    write_json(&path, &report)?;
    Ok((report, vec![path]))
}

/// One `chen_fliess_d<order>.csv/json` per order, the ode1 reference orbit
/// of the proposed loop (`reference.csv/json`) and the averaged system
/// (`lbs.csv/json`).
pub fn cmd_chenfliess(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let omega = match cfg.controller.spec {
        ControllerSpec::Proposed { omega } => omega,
        _ => return Err(Error::Config("`controller.kind` must be \"proposed\" for chenfliess".into())),
    };
    if cfg.t0 != 0.0 {
        return Err(Error::Config("`time.t0` must be 0 for chenfliess".into()));
    }
    let dir = opts.out_dir(cfg);
    fs::create_dir_all(&dir)?;
    let s0 = cfg.initial_states(opts.seed)[0];
    let cf = &cfg.chen_fliess;
    let t_step = cf.periods_per_step as f64 * 2.0 * std::f64::consts::PI / omega;
    let n_steps = ((cfg.tf - cfg.t0) / t_step + 1e-9).floor() as usize;

    let series: Vec<(usize, Trajectory)> = cf
        .orders
        .par_iter()
        .map(|&order| {
            let scheme = ChenFliessScheme::new(order, cf.coefficients)?;
            Ok((order, scheme.simulate(&cfg.plant, s0, omega, cf.periods_per_step, n_steps)?))
        })
        .collect::<Result<_>>()?;
    let reference = run_controller(cfg, &clamp_step(&cfg.controller, cfg), s0)?;
    let lbs = run_lbs(cfg, s0)?;

    let mut written = Vec::new();
    for (order, tr) in &series {
        written.extend(write_trajectory(&dir, &format!("chen_fliess_d{order}"), tr)?);
    }
    written.extend(write_trajectory(&dir, "reference", &reference)?);
    written.extend(write_trajectory(&dir, "lbs", &lbs)?);
    Ok(written)
}
