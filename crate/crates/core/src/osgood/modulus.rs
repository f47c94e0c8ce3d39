use crate::error::{Error, Result};

/// Moduli of continuity `mu` with `mu(0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Modulus {
    /// `r (1 + ln(1 + 1/r)) (1 + ln(1 + ln(1 + 1/r)))`
    DoubleLog,
    /// `r`
    Linear,
    /// `r (1 + ln(1 + 1/r))^2`; `int_0 dr/mu` converges.
    LogSquared,
    /// `sqrt(r)`; `int_0 dr/mu` converges.
    Sqrt,
    /// `r^p`
    Power(f64),
}

impl Modulus {
    pub fn name(&self) -> String {
        match self {
            Modulus::DoubleLog => "double-log".into(),
            Modulus::Linear => "linear".into(),
            Modulus::LogSquared => "log-squared".into(),
            Modulus::Sqrt => "sqrt".into(),
            Modulus::Power(p) => format!("power-{p}"),
        }
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::domain(format!("modulus argument {r} must be >= 0")));
        }
        Ok(self.eval_unchecked(r))
    }

    /// `eval` without the domain check; callers guarantee `r >= 0`.
    pub(crate) fn eval_unchecked(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        match self {
            Modulus::Sqrt => r.sqrt(),
            Modulus::Power(p) => r.powf(*p),
            _ => r * self.ratio_from_l(log_one_plus_inv(r)),
        }
    }

    /// `mu(r) / r` as a function of `l = ln(1/r)`, valid far below the
    /// smallest double.
    pub(crate) fn ratio_log(&self, l: f64) -> f64 {
        match self {
            Modulus::Sqrt => (0.5 * l).exp(),
            Modulus::Power(p) => ((1.0 - p) * l).exp(),
            // ln(1 + 1/r) = l + ln(1 + r)
            _ => self.ratio_from_l(l + (-l).exp().ln_1p()),
        }
    }

    fn ratio_from_l(&self, big_l: f64) -> f64 {
        match self {
            Modulus::DoubleLog => (1.0 + big_l) * (1.0 + big_l.ln_1p()),
            Modulus::Linear => 1.0,
            Modulus::LogSquared => (1.0 + big_l) * (1.0 + big_l),
            Modulus::Sqrt | Modulus::Power(_) => unreachable!("handled by the caller"),
        }
    }
}

impl std::str::FromStr for Modulus {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "double-log" | "doublelog" => Ok(Modulus::DoubleLog),
            "linear" => Ok(Modulus::Linear),
            "log-squared" => Ok(Modulus::LogSquared),
            "sqrt" => Ok(Modulus::Sqrt),
            _ => s
                .strip_prefix("power-")
                .and_then(|p| p.parse::<f64>().ok())
                .filter(|p| p.is_finite() && *p > 0.0)
                .map(Modulus::Power)
                .ok_or_else(|| Error::config(format!("unknown modulus '{s}'"))),
        }
    }
}

/// `ln(1 + 1/r)` without overflow for tiny `r` or cancellation for large `r`.
fn log_one_plus_inv(r: f64) -> f64 {
    if r >= 1.0 {
        r.recip().ln_1p()
    } else {
        r.ln_1p() - r.ln()
    }
}

/// The double-logarithmic modulus.
pub fn mu(r: f64) -> Result<f64> {
    Modulus::DoubleLog.eval(r)
}
