//! Nonhomogeneous Besov norms.

use super::partition::DyadicPartition;
use crate::error::{Error, Result};
use crate::spectral::norms::lp_norm;
use crate::spectral::SpectralField;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

impl BesovParams {
    pub fn new(s: f64, p: f64, r: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::domain("Besov regularity must be finite"));
        }
        if !(p >= 1.0) || !(r >= 1.0) {
            return Err(Error::domain(format!(
                "Besov exponents must satisfy p, r >= 1 (got p={p}, r={r})"
            )));
        }
        Ok(Self { s, p, r })
    }
}

/// Which sequence is summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesovVariant {
    /// `2^{qs} ||Delta_q f||_{L^p}`, `q >= -1`.
    Blocks,
    /// `2^{qs} ||S_q f||_{L^p}`, `q >= 0`; only meaningful for `s < 0`.
    LowPass,
}

fn lr_norm(terms: &[f64], r: f64) -> f64 {
    if r.is_infinite() {
        terms.iter().fold(0.0, |m: f64, t| m.max(*t))
    } else {
        terms.iter().map(|t| t.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

pub fn besov_norm(
    part: &DyadicPartition,
    f: &SpectralField,
    params: BesovParams,
    variant: BesovVariant,
) -> Result<f64> {
    let BesovParams { s, p, r } = params;
    match variant {
        BesovVariant::Blocks => {
            let terms: Vec<f64> = part
                .block_indices()
                .map(|q| {
                    let b = part.delta_q(f, q)?;
                    Ok(2f64.powf(q as f64 * s) * lp_norm(&b, p))
                })
                .collect::<Result<_>>()?;
            Ok(lr_norm(&terms, r))
        }
        BesovVariant::LowPass => {
            if s >= 0.0 {
                return Err(Error::domain(format!(
                    "low-pass Besov characterisation needs s < 0 (got s={s})"
                )));
            }
            let top = part.q_max() + 1;
            let mut terms: Vec<f64> = (0..top)
                .map(|q| Ok(2f64.powf(q as f64 * s) * lp_norm(&part.s_q(f, q)?, p)))
                .collect::<Result<_>>()?;
            // S_q f = f for q >= top: the rest is a geometric series.
            let full = lp_norm(f, p);
            let lead = 2f64.powf(top as f64 * s) * full;
            if r.is_infinite() {
                terms.push(lead);
                Ok(lr_norm(&terms, r))
            } else {
                let head: f64 = terms.iter().map(|t| t.powf(r)).sum();
                let tail = lead.powf(r) / (1.0 - 2f64.powf(s * r));
                Ok((head + tail).powf(1.0 / r))
            }
        }
    }
}
