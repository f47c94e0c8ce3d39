//! Integrating-factor time stepping.
//!
//! Diffusion (`nu lap u`, `-(1/lambda1) lap d`) is integrated exactly per mode;
//! everything else is explicit. The momentum tendency is Leray-projected at
//! every stage.

use std::fmt;
use std::str::FromStr;

use super::coefficients::LeslieCoefficients;
use super::physics::{evaluate, Evaluation, Form};
use super::state::State;
use crate::energy::EnergyRecord;
use crate::error::{Error, Result};
use crate::spectral::ops::leray_project;
use crate::spectral::{Grid, GridSpec, VectorField2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scheme {
    /// First order: `x+ = E (x + dt N(x))`.
    #[default]
    Imex1,
    /// Second order (Heun): `a = E (x + dt N(x))`,
    /// `x+ = E x + dt/2 (E N(x) + N(a))`.
    Imex2,
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "imex1" | "euler" | "1" => Ok(Scheme::Imex1),
            "imex2" | "rk2" | "heun" | "2" => Ok(Scheme::Imex2),
            other => Err(Error::config(format!("unknown time scheme '{other}'"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Imex1 => "imex1",
            Scheme::Imex2 => "imex2",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub grid: GridSpec,
    pub dt: f64,
    pub t_end: f64,
    pub coefficients: LeslieCoefficients,
    pub scheme: Scheme,
    /// Emit an energy record every this many steps.
    pub trace_every: u64,
    /// Request a snapshot every this many steps.
    pub snapshot_every: Option<u64>,
}

impl SolverConfig {
    pub fn new(grid: GridSpec, dt: f64, t_end: f64, coefficients: LeslieCoefficients) -> Self {
        Self {
            grid,
            dt,
            t_end,
            coefficients,
            scheme: Scheme::Imex1,
            trace_every: 1,
            snapshot_every: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::config(format!("dt = {} must be positive", self.dt)));
        }
        if !self.t_end.is_finite() || self.t_end < 0.0 {
            return Err(Error::config(format!(
                "t_end = {} must be >= 0",
                self.t_end
            )));
        }
        if self.trace_every == 0 || self.snapshot_every == Some(0) {
            return Err(Error::config("cadence must be at least one step"));
        }
        self.coefficients.validate()
    }

    /// Number of steps from `t0` to `t_end`.
    pub fn steps_from(&self, t0: f64) -> u64 {
        if self.t_end <= t0 {
            0
        } else {
            ((self.t_end - t0) / self.dt).round() as u64
        }
    }
}

/// What the run loop hands to its observer.
pub struct Sample<'a> {
    pub step: u64,
    pub state: &'a State,
    pub energy: &'a EnergyRecord,
    /// Trapezoidal `int_0^t D`.
    pub dissipated: f64,
    /// `E(t) + int_0^t D - E(0)`.
    pub residual: f64,
    pub snapshot: bool,
}

#[derive(Clone, Debug, Default)]
pub struct RunSummary {
    pub steps: u64,
    /// `(t, residual)` after every step, starting at `t0`.
    pub residuals: Vec<(f64, f64)>,
    pub initial_energy: f64,
    pub max_div_residual: f64,
}

impl RunSummary {
    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.1)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1.abs()).fold(0.0, f64::max)
    }
}

pub struct Solver {
    config: SolverConfig,
    grid: Grid,
    form: Form,
    e_u: Vec<f64>,
    e_d: Vec<f64>,
    steps: u64,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Result<Self> {
        let grid = Grid::new(config.grid)?;
        Self::with_grid(config, &grid)
    }

    /// Reuse an existing grid (and its FFT plans).
    pub fn with_grid(config: SolverConfig, grid: &Grid) -> Result<Self> {
        config.validate()?;
        if grid.spec() != config.grid {
            return Err(Error::SizeMismatch {
                expected: config.grid.n_modes,
                found: grid.n(),
            });
        }
        let c = &config.coefficients;
        let kappa = c.director_diffusivity();
        let e_u = grid
            .k_sq()
            .iter()
            .map(|k| (-c.nu * k * config.dt).exp())
            .collect();
        let e_d = grid
            .k_sq()
            .iter()
            .map(|k| (-kappa * k * config.dt).exp())
            .collect();
        Ok(Self {
            form: Form::for_coefficients(c),
            config,
            grid: grid.clone(),
            e_u,
            e_d,
            steps: 0,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn form(&self) -> Form {
        self.form
    }

    /// Steps taken so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn evaluate(&self, state: &State) -> Evaluation {
        evaluate(state, &self.config.coefficients, self.form)
    }

    pub fn diagnostics(&self, state: &State) -> EnergyRecord {
        EnergyRecord::from_evaluation(state, &self.evaluate(state))
    }

    fn check(&self, state: &State) -> Result<()> {
        if state.grid() != &self.grid {
            return Err(Error::SizeMismatch {
                expected: self.grid.n(),
                found: state.grid().n(),
            });
        }
        Ok(())
    }

    fn propagate(&self, x: &VectorField2, table: &[f64]) -> VectorField2 {
        x.map(|f| f.apply_multiplier(table))
    }

    /// Advance one step. Returns the evaluation of the state *before* the step.
    pub fn step(&mut self, state: &mut State) -> Result<Evaluation> {
        self.check(state)?;
        let dt = self.config.dt;
        let ev = self.evaluate(state);
        let m1 = leray_project(&ev.momentum);
        let mut u = state.u.clone();
        u.axpy(dt, &m1);
        let mut d = state.d.clone();
        d.axpy(dt, &ev.director);
        let (mut u, mut d) = (self.propagate(&u, &self.e_u), self.propagate(&d, &self.e_d));

        if self.config.scheme == Scheme::Imex2 {
            let stage = State {
                u,
                d,
                t: state.t + dt,
            };
            let ev2 = self.evaluate(&stage);
            let m2 = leray_project(&ev2.momentum);
            let mut un = state.u.clone();
            un.axpy(0.5 * dt, &m1);
            u = self.propagate(&un, &self.e_u);
            u.axpy(0.5 * dt, &m2);
            let mut dn = state.d.clone();
            dn.axpy(0.5 * dt, &ev.director);
            d = self.propagate(&dn, &self.e_d);
            d.axpy(0.5 * dt, &ev2.director);
        }

        self.steps += 1;
        if !u.is_finite() {
            return Err(Error::Divergence {
                step: self.steps,
                what: "non-finite velocity coefficient".into(),
            });
        }
        if !d.is_finite() {
            return Err(Error::Divergence {
                step: self.steps,
                what: "non-finite director coefficient".into(),
            });
        }
        state.u = leray_project(&u);
        state.d = d;
        state.t += dt;
        Ok(ev)
    }

    /// Integrate to `t_end`, calling `observer` at the trace cadence and at the
    /// final step.
    pub fn run<F>(&mut self, state: &mut State, mut observer: F) -> Result<RunSummary>
    where
        F: FnMut(&Sample<'_>) -> Result<()>,
    {
        self.check(state)?;
        let t0 = state.t;
        let n = self.config.steps_from(t0);
        let dt = self.config.dt;
        let mut summary = RunSummary {
            steps: n,
            ..Default::default()
        };
        let mut integral = 0.0;
        let mut prev_d = 0.0;
        let mut e0 = 0.0;
        for k in 0..=n {
            let (before, ev) = if k < n {
                let before = state.clone();
                let ev = self.step(state)?;
                state.t = t0 + (k + 1) as f64 * dt;
                (Some(before), ev)
            } else {
                (None, self.evaluate(state))
            };
            let current = before.as_ref().unwrap_or(state);
            let record = EnergyRecord::from_evaluation(current, &ev);
            if k == 0 {
                e0 = record.e_total;
                summary.initial_energy = e0;
            } else {
                integral += 0.5 * dt * (prev_d + record.d_total);
            }
            prev_d = record.d_total;
            let residual = record.e_total + integral - e0;
            summary.residuals.push((record.t, residual));
            summary.max_div_residual = summary.max_div_residual.max(record.div_residual);
            let trace = k % self.config.trace_every == 0 || k == n;
            let snapshot = self.config.snapshot_every.is_some_and(|s| k % s == 0);
            if trace || snapshot {
                observer(&Sample {
                    step: k,
                    state: current,
                    energy: &record,
                    dissipated: integral,
                    residual,
                    snapshot,
                })?;
            }
        }
        Ok(summary)
    }
}
