//! Experiment configuration: sectioned `key = value` text.
//!
//! ```text
//! [grid]
//! n = 64
//! padding = 2
//!
//! [time]
//! dt = 1e-3
//! t_end = 1
//! scheme = imex1
//!
//! [coefficients]
//! nu = 1
//!
//! [initial]
//! profile = random
//! seed = 7
//! decay = 2
//! amplitude = 1
//!
//! [perturbation]
//! mode = random
//! delta = 1e-6
//!
//! [output]
//! trace_every = 10
//! ```
//!
//! Every section is optional; unknown or repeated sections and unknown keys
//! are rejected.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use ini::{Ini, Properties};

use crate::error::{Error, Result};
use crate::initial::{Perturbation, Profile, RandomSpec};
use crate::leslie::{LeslieCoefficients, Scheme, SolverConfig};
use crate::osgood::{MasterOptions, Modulus, ETA, GAMMA};
use crate::spectral::{GridSpec, Padding};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Run,
    Twin,
    Verify,
    Decompose,
}

/// How the second twin trajectory starts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TwinStart {
    Identical,
    Perturbed(Perturbation),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub trace_every: u64,
    pub snapshot_every: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OsgoodSpec {
    pub modulus: Modulus,
    pub gamma: f64,
    /// Reported only; `gamma` is what enters the inequality.
    pub eta: f64,
    pub tol: f64,
    pub c_cap: Option<f64>,
}

impl OsgoodSpec {
    pub fn master_options(&self) -> MasterOptions {
        MasterOptions {
            modulus: self.modulus,
            tol: self.tol,
            c_cap: self.c_cap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifySpec {
    pub seed: u64,
    pub trials: usize,
    pub decay: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridSpec,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub coefficients: LeslieCoefficients,
    pub initial: Profile,
    pub perturbation: Option<TwinStart>,
    pub output: OutputSpec,
    pub osgood: OsgoodSpec,
    pub verify: VerifySpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec {
                n_modes: 64,
                padding: Padding::Two,
            },
            dt: 1e-3,
            t_end: 1.0,
            scheme: Scheme::Imex1,
            coefficients: LeslieCoefficients::ansatz(1.0).expect("nu = 1 is admissible"),
            initial: Profile::Random(RandomSpec {
                seed: 0,
                decay: 2.0,
                amplitude: 1.0,
            }),
            perturbation: None,
            output: OutputSpec {
                dir: PathBuf::from("out"),
                trace_every: 10,
                snapshot_every: None,
            },
            osgood: OsgoodSpec {
                modulus: Modulus::DoubleLog,
                gamma: GAMMA,
                eta: ETA,
                tol: 0.0,
                c_cap: None,
            },
            verify: VerifySpec {
                seed: 2024,
                trials: 100,
                decay: 2.0,
            },
        }
    }
}

const SECTIONS: [&str; 8] = [
    "grid",
    "time",
    "coefficients",
    "initial",
    "perturbation",
    "output",
    "osgood",
    "verify",
];

/// Typed access to one section, remembering which keys were read.
struct Section<'a> {
    name: &'a str,
    props: Option<&'a Properties>,
    used: HashSet<&'static str>,
}

impl<'a> Section<'a> {
    fn new(ini: &'a Ini, name: &'a str) -> Self {
        Self {
            name,
            props: ini.section(Some(name)),
            used: HashSet::new(),
        }
    }

    fn raw(&mut self, key: &'static str) -> Option<&'a str> {
        self.used.insert(key);
        self.props.and_then(|p| p.get(key)).map(str::trim)
    }

    fn err(&self, key: &str, msg: impl std::fmt::Display) -> Error {
        Error::config(format!("[{}] {key}: {msg}", self.name))
    }

    fn f64(&mut self, key: &'static str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => parse_real(v)
                .map(Some)
                .ok_or_else(|| self.err(key, format!("not a number: '{v}'"))),
        }
    }

    fn u64(&mut self, key: &'static str) -> Result<Option<u64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| self.err(key, format!("not a nonnegative integer: '{v}'"))),
        }
    }

    fn list(&mut self, key: &'static str) -> Result<Option<Vec<f64>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|x| parse_real(x.trim()))
                .collect::<Option<Vec<_>>>()
                .map(Some)
                .ok_or_else(|| {
                    self.err(key, format!("not a comma-separated list of numbers: '{v}'"))
                }),
        }
    }

    fn finish(&self) -> Result<()> {
        if let Some(p) = self.props {
            for (k, _) in p.iter() {
                if !self.used.contains(k) {
                    return Err(self.err(k, "unknown key"));
                }
            }
        }
        Ok(())
    }
}

/// A float, or a fraction `a/b` such as `1/6`.
fn parse_real(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: Some(path.to_path_buf()),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::config(e.to_string()))?;
        for (name, props) in ini.iter() {
            if ini.section_all(name).count() > 1 {
                return Err(Error::config(format!(
                    "section [{}] given twice",
                    name.unwrap_or("")
                )));
            }
            match name {
                Some(n) if SECTIONS.contains(&n) => {}
                Some(n) => return Err(Error::config(format!("unknown section [{n}]"))),
                None if props.is_empty() => {}
                None => return Err(Error::config("keys outside of any section")),
            }
        }
        let mut cfg = Self::default();

        let mut s = Section::new(&ini, "grid");
        let n = s.u64("n")?.map(|n| n as usize).unwrap_or(cfg.grid.n_modes);
        let padding = match s.raw("padding") {
            Some(p) => Padding::parse(p)?,
            None => cfg.grid.padding,
        };
        cfg.grid = GridSpec::new(n, padding)?;
        s.finish()?;

        let mut s = Section::new(&ini, "time");
        cfg.dt = s.f64("dt")?.unwrap_or(cfg.dt);
        cfg.t_end = s.f64("t_end")?.unwrap_or(cfg.t_end);
        if let Some(v) = s.raw("scheme") {
            cfg.scheme = v.parse()?;
        }
        s.finish()?;

        let mut s = Section::new(&ini, "coefficients");
        let nu = s.f64("nu")?;
        let mu = s.list("mu")?;
        let (l1, l2) = (s.f64("lambda1")?, s.f64("lambda2")?);
        cfg.coefficients = match (nu, mu) {
            (Some(_), Some(_)) => return Err(s.err("nu", "give either nu or mu, not both")),
            (Some(nu), None) => {
                if l1.is_some() || l2.is_some() {
                    return Err(s.err("lambda1", "lambdas are fixed by the nu ansatz"));
                }
                LeslieCoefficients::ansatz(nu)?
            }
            (None, Some(mu)) => {
                let mu: [f64; 6] = mu.try_into().map_err(|v: Vec<f64>| {
                    s.err("mu", format!("expected 6 values, got {}", v.len()))
                })?;
                let base = LeslieCoefficients::new(mu)?;
                LeslieCoefficients::with_lambdas(
                    mu,
                    l1.unwrap_or(base.lambda1),
                    l2.unwrap_or(base.lambda2),
                )?
            }
            (None, None) => cfg.coefficients,
        };
        s.finish()?;

        let mut s = Section::new(&ini, "initial");
        let profile = s.raw("profile").unwrap_or("random");
        let amplitude = s.f64("amplitude")?;
        let (seed, decay) = (s.u64("seed")?, s.f64("decay")?);
        let director = s.list("director")?;
        cfg.initial = match profile {
            "random" => Profile::Random(RandomSpec {
                seed: seed.unwrap_or(0),
                decay: decay.unwrap_or(2.0),
                amplitude: amplitude.unwrap_or(1.0),
            }),
            "rest-unit" => Profile::RestUnit,
            "shear" => Profile::Shear {
                amplitude: amplitude.unwrap_or(1.0),
            },
            "uniform" => {
                let d = director
                    .ok_or_else(|| s.err("director", "required for the uniform profile"))?;
                let director: [f64; 2] = d
                    .try_into()
                    .map_err(|_| s.err("director", "expected two components"))?;
                Profile::Uniform { director }
            }
            other => return Err(s.err("profile", format!("unknown profile '{other}'"))),
        };
        cfg.initial.validate()?;
        s.finish()?;

        let mut s = Section::new(&ini, "perturbation");
        if s.props.is_some() {
            let mode = s.raw("mode").unwrap_or("random");
            let p = Perturbation {
                seed: s.u64("seed")?.unwrap_or(1),
                delta: s.f64("delta")?.unwrap_or(0.0),
                decay: s.f64("decay")?.unwrap_or(2.0),
            };
            cfg.perturbation = Some(match mode {
                "identical" => TwinStart::Identical,
                "random" => {
                    p.validate()?;
                    TwinStart::Perturbed(p)
                }
                other => {
                    return Err(s.err(
                        "mode",
                        format!("expected 'identical' or 'random', got '{other}'"),
                    ))
                }
            });
        }
        s.finish()?;

        let mut s = Section::new(&ini, "output");
        if let Some(d) = s.raw("dir") {
            cfg.output.dir = PathBuf::from(d);
        }
        cfg.output.trace_every = s.u64("trace_every")?.unwrap_or(cfg.output.trace_every);
        cfg.output.snapshot_every = match s.u64("snapshot_every")? {
            Some(0) | None => None,
            Some(k) => Some(k),
        };
        s.finish()?;

        let mut s = Section::new(&ini, "osgood");
        if let Some(m) = s.raw("modulus") {
            cfg.osgood.modulus = m.parse()?;
        }
        cfg.osgood.gamma = s.f64("gamma")?.unwrap_or(cfg.osgood.gamma);
        cfg.osgood.eta = s.f64("eta")?.unwrap_or(cfg.osgood.eta);
        cfg.osgood.tol = s.f64("tol")?.unwrap_or(cfg.osgood.tol);
        cfg.osgood.c_cap = s.f64("c_cap")?.or(cfg.osgood.c_cap);
        s.finish()?;

        let mut s = Section::new(&ini, "verify");
        cfg.verify.seed = s.u64("seed")?.unwrap_or(cfg.verify.seed);
        cfg.verify.trials = s
            .u64("trials")?
            .map(|t| t as usize)
            .unwrap_or(cfg.verify.trials);
        cfg.verify.decay = s.f64("decay")?.unwrap_or(cfg.verify.decay);
        s.finish()?;

        cfg.validate()?;
        Ok(cfg)
    }

    /// Replace every configured seed that `--seed` governs.
    pub fn override_seed(&mut self, seed: u64) {
        if let Profile::Random(r) = &mut self.initial {
            r.seed = seed;
        }
        self.verify.seed = seed;
    }

    pub fn validate(&self) -> Result<()> {
        self.solver_config().validate()?;
        self.initial.validate()?;
        if let Some(TwinStart::Perturbed(p)) = &self.perturbation {
            p.validate()?;
        }
        let o = &self.osgood;
        if !(o.gamma > 0.0 && o.gamma < 1.0) {
            return Err(Error::config(format!(
                "[osgood] gamma = {} outside (0, 1)",
                o.gamma
            )));
        }
        if !(o.tol >= 0.0) || !o.tol.is_finite() {
            return Err(Error::config("[osgood] tol must be finite and >= 0"));
        }
        if o.c_cap.is_some_and(|c| !(c >= 1.0)) {
            return Err(Error::config("[osgood] c_cap must be >= 1"));
        }
        if !self.verify.decay.is_finite() {
            return Err(Error::config("[verify] decay must be finite"));
        }
        Ok(())
    }

    /// Mode-specific requirements on top of [`validate`](Self::validate).
    pub fn validate_for(&self, mode: Mode) -> Result<()> {
        self.validate()?;
        match mode {
            Mode::Twin if self.perturbation.is_none() => Err(Error::config(
                "twin mode needs a [perturbation] section (mode = identical, or mode = random with delta)",
            )),
            Mode::Verify if self.verify.trials < crate::harness::EnsembleSpec::MIN_TRIALS => Err(Error::config(
                format!(
                    "[verify] trials = {} below the minimum of {}",
                    self.verify.trials,
                    crate::harness::EnsembleSpec::MIN_TRIALS
                ),
            )),
            _ => Ok(()),
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        let mut c = SolverConfig::new(self.grid, self.dt, self.t_end, self.coefficients);
        c.scheme = self.scheme;
        c.trace_every = self.output.trace_every;
        c.snapshot_every = self.output.snapshot_every;
        c
    }
}
