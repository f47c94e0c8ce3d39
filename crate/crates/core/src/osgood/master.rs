//! Discrete check of `Phi(t) - Phi(0) + gamma int D <= C int F mu(Phi)`.

use super::modulus::Modulus;
use crate::error::{Error, Result};

/// Dissipation fraction used by default.
pub const GAMMA: f64 = 1.0 / 6.0;
/// Splitting parameter the default `GAMMA` comes from.
pub const ETA: f64 = 1.0 / 600.0;

#[derive(Clone, Debug, PartialEq)]
pub struct OsgoodTrace {
    pub t: Vec<f64>,
    pub phi: Vec<f64>,
    pub f: Vec<f64>,
    pub gamma: f64,
}

impl OsgoodTrace {
    pub fn new(t: Vec<f64>, phi: Vec<f64>, f: Vec<f64>, gamma: f64) -> Result<Self> {
        if phi.len() != t.len() || f.len() != t.len() {
            return Err(Error::SizeMismatch {
                expected: t.len(),
                found: if phi.len() != t.len() {
                    phi.len()
                } else {
                    f.len()
                },
            });
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("trace times must be strictly increasing"));
        }
        if phi.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::domain("Phi samples must be finite and >= 0"));
        }
        if f.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::domain("F samples must be finite and >= 0"));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::domain(format!("gamma = {gamma} outside (0, 1)")));
        }
        Ok(Self { t, phi, f, gamma })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MasterOptions {
    pub modulus: Modulus,
    /// Absolute slack on every inequality.
    pub tol: f64,
    /// Largest admissible constant; `None` fits without bound.
    pub c_cap: Option<f64>,
}

impl Default for MasterOptions {
    fn default() -> Self {
        Self {
            modulus: Modulus::DoubleLog,
            tol: 0.0,
            c_cap: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MasterReport {
    pub holds: bool,
    /// Smallest `C >= 1` that works, or the cap when none does.
    pub c_fit: f64,
    /// `max_m lhs_m - C rhs_m - tol`; `<= 0` when the inequality holds.
    pub max_violation: f64,
    pub first_violation: Option<usize>,
    /// `Phi_m - Phi_0 + gamma int_0^{t_m} D`
    pub lhs: Vec<f64>,
    /// `int_0^{t_m} F mu(Phi)`
    pub rhs: Vec<f64>,
}

/// Trapezoidal running integral of `g` sampled at `t`.
fn running_integral(t: &[f64], g: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(t.len());
    for m in 0..t.len() {
        if m > 0 {
            acc += 0.5 * (t[m] - t[m - 1]) * (g[m] + g[m - 1]);
        }
        out.push(acc);
    }
    out
}

pub fn check_master_inequality(
    trace: &OsgoodTrace,
    frak_d: &[f64],
    opts: &MasterOptions,
) -> Result<MasterReport> {
    if frak_d.len() != trace.len() {
        return Err(Error::SizeMismatch {
            expected: trace.len(),
            found: frak_d.len(),
        });
    }
    if frak_d.iter().any(|d| !(*d >= 0.0) || !d.is_finite()) {
        return Err(Error::domain("dissipation samples must be finite and >= 0"));
    }
    if trace.is_empty() {
        return Ok(MasterReport {
            holds: true,
            c_fit: 1.0,
            max_violation: f64::NEG_INFINITY,
            first_violation: None,
            lhs: vec![],
            rhs: vec![],
        });
    }
    let fmu: Vec<f64> = trace
        .f
        .iter()
        .zip(&trace.phi)
        .map(|(f, p)| f * opts.modulus.eval_unchecked(*p))
        .collect();
    let rhs = running_integral(&trace.t, &fmu);
    let diss = running_integral(&trace.t, frak_d);
    let phi0 = trace.phi[0];
    let lhs: Vec<f64> = trace
        .phi
        .iter()
        .zip(&diss)
        .map(|(p, d)| p - phi0 + trace.gamma * d)
        .collect();

    let mut needed: f64 = 1.0;
    for (l, r) in lhs.iter().zip(&rhs) {
        let excess = l - opts.tol;
        if excess > 0.0 {
            needed = needed.max(if *r > 0.0 { excess / r } else { f64::INFINITY });
        }
    }
    let c_fit = match opts.c_cap {
        Some(cap) if needed > cap => cap,
        _ => needed,
    };
    let slack: Vec<f64> = lhs
        .iter()
        .zip(&rhs)
        .map(|(l, r)| {
            let bound = if *r == 0.0 { 0.0 } else { c_fit * r };
            l - bound - opts.tol
        })
        .collect();
    let first_violation = slack.iter().position(|s| *s > 0.0);
    let max_violation = slack.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(MasterReport {
        holds: c_fit.is_finite() && first_violation.is_none(),
        c_fit,
        max_violation,
        first_violation,
        lhs,
        rhs,
    })
}
