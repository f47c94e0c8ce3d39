use super::modulus::Modulus;
use super::quad::integrate;
use crate::error::{Error, Result};

/// `I(eps) = int_eps^1 dr / mu(r)` over a decreasing list of `eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub modulus: Modulus,
    pub eps: Vec<f64>,
    pub integrals: Vec<f64>,
    /// `I(eps_k) - I(eps_{k-1})`; the first entry is `I(eps_0)`.
    pub increments: Vec<f64>,
}

impl Certificate {
    pub fn strictly_increasing(&self) -> bool {
        self.increments.iter().skip(1).all(|d| *d > 0.0)
    }

    /// Decades between the first and last `eps`.
    pub fn decades(&self) -> f64 {
        match (self.eps.first(), self.eps.last()) {
            (Some(a), Some(b)) => (a / b).log10(),
            _ => 0.0,
        }
    }

    pub fn last_increment(&self) -> f64 {
        self.increments.last().copied().unwrap_or(0.0)
    }
}

const ABS_TOL: f64 = 1e-15;
const REL_TOL: f64 = 1e-13;

/// Where the substitution takes over: `r = 1/e`, i.e. `s = 0`.
const SPLIT: f64 = 0.367_879_441_171_442_3;

/// `int_a^b dr/mu(r)` for `1/e <= a <= b <= 1`.
fn outer(m: Modulus, a: f64, b: f64) -> Result<f64> {
    integrate(|r| 1.0 / m.eval_unchecked(r), a, b, ABS_TOL, REL_TOL)
}

/// `int dr/mu` between `r = exp(-exp(s0))` and `exp(-exp(s1))`, `s0 <= s1`,
/// after `r = exp(-exp(s))`, `dr = -r e^s ds`.
fn inner(m: Modulus, s0: f64, s1: f64) -> Result<f64> {
    integrate(|s| s.exp() / m.ratio_log(s.exp()), s0, s1, ABS_TOL, REL_TOL)
}

pub fn divergence_certificate(modulus: Modulus, eps_list: &[f64]) -> Result<Certificate> {
    if eps_list.is_empty() {
        return Err(Error::domain("empty eps list"));
    }
    for (k, &e) in eps_list.iter().enumerate() {
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::domain(format!("eps = {e} outside (0, 1)")));
        }
        if k > 0 && !(e < eps_list[k - 1]) {
            return Err(Error::domain("eps list must be strictly decreasing"));
        }
    }
    let mut integrals = Vec::with_capacity(eps_list.len());
    let mut increments = Vec::with_capacity(eps_list.len());
    let mut total = 0.0;
    let mut prev = 1.0f64;
    for &e in eps_list {
        let mut inc = 0.0;
        if prev > SPLIT {
            inc += outer(modulus, e.max(SPLIT), prev)?;
        }
        if e < SPLIT {
            let s0 = (-prev.min(SPLIT).ln()).ln();
            let s1 = (-e.ln()).ln();
            inc += inner(modulus, s0, s1)?;
        }
        total += inc;
        integrals.push(total);
        increments.push(inc);
        prev = e;
    }
    Ok(Certificate {
        modulus,
        eps: eps_list.to_vec(),
        integrals,
        increments,
    })
}
