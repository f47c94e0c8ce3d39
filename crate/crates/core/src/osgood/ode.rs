//! The comparison equation `y' = C F(t) mu(y)` by Dormand-Prince 5(4).

use super::modulus::Modulus;
use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth minus embedded fourth order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-300;
const BLOW_UP: f64 = 1e300;
const MAX_STEPS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonSolution {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    /// Time after which `y` exceeded the representable range.
    pub blow_up: Option<f64>,
}

/// Solve `y' = c F(t) mu(y)` with `F` piecewise linear through the samples;
/// `y` is reported at every sample time.
pub fn comparison_ode(
    modulus: Modulus,
    times: &[f64],
    f: &[f64],
    y0: f64,
    c: f64,
) -> Result<ComparisonSolution> {
    if times.len() != f.len() {
        return Err(Error::SizeMismatch {
            expected: times.len(),
            found: f.len(),
        });
    }
    if !(y0 >= 0.0) || !y0.is_finite() {
        return Err(Error::domain(format!("y0 = {y0} must be finite and >= 0")));
    }
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::domain(format!(
            "constant {c} must be finite and >= 0"
        )));
    }
    if f.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::domain("F samples must be finite and >= 0"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("sample times must be strictly increasing"));
    }

    let mut y = vec![y0; times.len()];
    let mut blow_up = None;
    let mut cur = y0;
    let mut h = 0.0;
    for k in 1..times.len() {
        if blow_up.is_some() {
            y[k] = f64::INFINITY;
            continue;
        }
        let (t0, t1) = (times[k - 1], times[k]);
        let (f0, f1) = (f[k - 1], f[k]);
        let rhs = |t: f64, v: f64| {
            let w = (t - t0) / (t1 - t0);
            c * (f0 + w * (f1 - f0)) * modulus.eval_unchecked(v.max(0.0))
        };
        if h == 0.0 || h > t1 - t0 {
            h = t1 - t0;
        }
        match integrate_interval(&rhs, t0, t1, cur, &mut h)? {
            Some(v) => cur = v,
            None => {
                blow_up = Some(t0);
                y[k] = f64::INFINITY;
                continue;
            }
        }
        y[k] = cur;
    }
    Ok(ComparisonSolution {
        t: times.to_vec(),
        y,
        blow_up,
    })
}

/// Returns `None` on blow-up.
fn integrate_interval(
    rhs: &impl Fn(f64, f64) -> f64,
    t0: f64,
    t1: f64,
    y0: f64,
    h: &mut f64,
) -> Result<Option<f64>> {
    let mut t = t0;
    let mut y = y0;
    let mut k = [0.0; 7];
    for _ in 0..MAX_STEPS {
        if t >= t1 {
            return Ok(Some(y));
        }
        let last = t + *h >= t1;
        let step = if last { t1 - t } else { *h };
        k[0] = rhs(t, y);
        for s in 1..7 {
            let inc: f64 = (0..s).map(|j| A[s][j] * k[j]).sum();
            k[s] = rhs(t + C[s] * step, y + step * inc);
        }
        let y_new = y + step * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
        let err_abs = step * (0..7).map(|j| E[j] * k[j]).sum::<f64>();
        if !y_new.is_finite() || y_new > BLOW_UP {
            if step < 1e-300 {
                return Ok(None);
            }
            *h = 0.25 * step;
            continue;
        }
        let scale = ATOL + RTOL * y.abs().max(y_new.abs());
        let err = (err_abs / scale).abs();
        if err <= 1.0 {
            t = if last { t1 } else { t + step };
            y = y_new;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        if !last || err > 1.0 {
            *h = step * factor;
        }
        if *h < 1e-14 * (t1 - t0).max(t.abs()) {
            return Ok(None);
        }
    }
    Err(Error::Numeric(
        "comparison ODE exceeded the step budget".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, t_end: f64) -> Vec<f64> {
        (0..=n).map(|i| t_end * i as f64 / n as f64).collect()
    }

    #[test]
    fn zero_stays_zero() {
        let t = grid(10, 1.0);
        let f = vec![3.0; 11];
        let s = comparison_ode(Modulus::DoubleLog, &t, &f, 0.0, 5.0).unwrap();
        assert!(s.y.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn zero_forcing_is_constant() {
        let t = grid(10, 1.0);
        let s = comparison_ode(Modulus::DoubleLog, &t, &[0.0; 11], 0.3, 5.0).unwrap();
        assert!(s.y.iter().all(|v| *v == 0.3));
    }

    #[test]
    fn gronwall_closed_form() {
        let t = grid(20, 2.0);
        let f = vec![1.0; 21];
        let (delta, c) = (1e-6, 1.7);
        let s = comparison_ode(Modulus::Linear, &t, &f, delta, c).unwrap();
        for (ti, yi) in t.iter().zip(&s.y) {
            let exact = delta * (c * ti).exp();
            assert!((yi - exact).abs() <= 1e-8 * exact);
        }
    }

    #[test]
    fn linear_forcing() {
        // F = t: y = y0 exp(c t^2 / 2)
        let t = grid(7, 1.5);
        let s = comparison_ode(Modulus::Linear, &t, &t, 2.0, 1.0).unwrap();
        for (ti, yi) in t.iter().zip(&s.y) {
            let exact = 2.0 * (0.5 * ti * ti).exp();
            assert!((yi - exact).abs() <= 1e-9 * exact);
        }
    }

    #[test]
    fn blow_up_flagged() {
        // y' = y^2, y0 = 1 blows up at t = 1
        let t = grid(4, 2.0);
        let s = comparison_ode(Modulus::Power(2.0), &t, &[1.0; 5], 1.0, 1.0).unwrap();
        let b = s.blow_up.expect("blow-up");
        assert!(b <= 1.0);
        assert!(s.y.last().unwrap().is_infinite());
    }

    #[test]
    fn rejects_bad_input() {
        let t = grid(2, 1.0);
        assert!(comparison_ode(Modulus::Linear, &t, &[1.0; 3], -1.0, 1.0).is_err());
        assert!(comparison_ode(Modulus::Linear, &t, &[1.0, -1.0, 1.0], 1.0, 1.0).is_err());
        assert!(comparison_ode(Modulus::Linear, &t, &[1.0; 2], 1.0, 1.0).is_err());
    }
}
