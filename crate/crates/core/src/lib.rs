//! Universal adaptive stabilization of the scalar plant `ẏ = a·y + b·u`
//! with unknown `a` and unknown-sign `b ≠ 0`, by Lie-bracket approximation.
//!
//! The crate simulates the dithered extremum-seeking style controller
//! `k̇ = y²√ω cos ωt`, `u = −k·y − y√ω sin ωt` next to Nussbaum and
//! Willems-Byrnes baselines, builds the averaged (Lie-bracket) system, and
//! ships the diagnostics that go with it: polar coordinates, Lyapunov
//! family, assumption checkers, frequency sweeps and a Chen-Fliess series
//! stepper.
//!
//! ## Modules
//!
//! - [`dynamics`]: plant, controllers, closed-loop and averaged vector fields, polar form
//! - [`averaging`]: dither signals, `γ` coefficients, finite-difference Lie brackets,
//!   averaged right-hand sides, assumption checks
//! - [`integrate`]: Euler / RK4 drivers, [`integrate::Trajectory`] export, Chen-Fliess stepping
//! - [`analysis`]: Lyapunov values, limit points, frequency sweeps, Nussbaum test, convergence reports
//! - [`cli`]: TOML experiments, presets and the `lieadapt` subcommands
//!
//! ## Examples
//!
//! ```text
//! examples/
//! ├── closed_loop_orbits.rs     # proposed controller from several initial states
//! ├── controller_comparison.rs  # proposed vs. Nussbaum vs. Willems-Byrnes
//! ├── swapped_design.rs         # y² moved from the adaptation law into the input
//! ├── averaged_system.rs        # γ coefficients and the averaged right-hand side
//! ├── custom_dither.rs          # averaging a user-defined input-affine system
//! ├── polar_coordinates.rs      # conserved radius and the polar vector fields
//! ├── lyapunov_diagnostics.rs   # V_p along averaged runs, limit point, reports
//! ├── frequency_sweep.rs        # oscillatory vs. averaged error over ω
//! ├── chen_fliess_stepping.rs   # series stepper of orders 0..=2 vs. ode1
//! ├── assumption_check.rs       # dither and vector-field checks, biased dither
//! ├── nussbaum_gain_check.rs    # running means of candidate gain functions
//! └── experiment_config.rs      # TOML experiments and presets without the binary
//! ```
//!
//! ```bash
//! cargo run --release -p lieadapt --example closed_loop_orbits
//! cargo run --release -p lieadapt --example chen_fliess_stepping
//! ```
//!
//! A minimal run:
//!
//! ```
//! use lieadapt::dynamics::{ControllerSpec, PlantParams, State};
//! use lieadapt::integrate::{dither_step, simulate_closed_loop, Method};
//!
//! let plant = PlantParams::new(10.0, -2.0)?;
//! let ctrl = ControllerSpec::proposed(400.0)?;
//! let tr = simulate_closed_loop(&plant, &ctrl, State::new(1.0, 0.0), 0.0, 1.0, dither_step(400.0), Method::Euler)?;
//! assert!(tr.final_state().y.abs() < 1.0);
//! # Ok::<(), lieadapt::error::Error>(())
//! ```

pub mod analysis;
pub mod averaging;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod integrate;
