//! Exact algebraic identities: the `I_3 + J_3` cancellation and the
//! vanishing of symmetric-skew contractions.

use super::{fields, median, EnsembleSpec};
use crate::error::Result;
use crate::leslie::physics::strain_and_vorticity;
use crate::lp::DyadicPartition;
use crate::spectral::ops::{gradient_vector, laplacian_vector};
use crate::spectral::VectorField2;

/// Relative tolerance of the cancellation check.
pub const CANCELLATION_TOL: f64 = 1e-11;
/// Relative tolerance of the skew-symmetry check.
pub const SKEW_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub lemma: String,
    pub trials: usize,
    /// Largest `|residual| / mass` over trials, `mass` being the integral of
    /// the absolute integrand.
    pub max_relative: f64,
    pub median_relative: f64,
    pub max_absolute: f64,
    pub tol: f64,
    pub verdict: bool,
}

impl IdentityReport {
    fn new(lemma: &str, samples: &[(f64, f64)], tol: f64) -> Self {
        let rel: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let max_relative = rel.iter().copied().fold(0.0, f64::max);
        Self {
            lemma: lemma.into(),
            trials: samples.len(),
            max_relative,
            median_relative: if rel.is_empty() { 0.0 } else { median(&rel) },
            max_absolute: samples.iter().map(|s| s.0).fold(0.0, f64::max),
            tol,
            verdict: rel.iter().all(|r| r.is_finite()) && max_relative <= tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CancellationTerms {
    pub i3: f64,
    pub j3: f64,
    /// `sum_q 2^{-q} int |integrand of I_3|`
    pub mass: f64,
}

/// `I_3 = -sum_q 2^{-q} int (Delta_q grad du  S_{q-1} d1) . Delta_q lap dd` and
/// `J_3 = sum_q 2^{-q} int (S_{q-1} d1 (x) Delta_q lap dd) : Delta_q grad^T du`.
pub fn cancellation_terms(
    part: &DyadicPartition,
    du: &VectorField2,
    dd: &VectorField2,
    d1: &VectorField2,
) -> CancellationTerms {
    let grid = part.grid();
    let area = grid.padded_cell_area();
    let grad = gradient_vector(du);
    let lap = laplacian_vector(dd);
    let (mut i3, mut j3, mut mass) = (0.0, 0.0, 0.0);
    for q in 1..=part.q_max() {
        let block = part.block(q);
        let low = part.low_pass(q - 1);
        let g: Vec<_> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(i, j)| grad.get(i, j).apply_multiplier(block))
            .collect();
        let l: Vec<_> = lap.0.iter().map(|f| f.apply_multiplier(block)).collect();
        let s: Vec<_> = d1.0.iter().map(|f| f.apply_multiplier(low)).collect();
        let p = grid.inverse_padded_real(&[
            g[0].coeffs(),
            g[1].coeffs(),
            g[2].coeffs(),
            g[3].coeffs(),
            l[0].coeffs(),
            l[1].coeffs(),
            s[0].coeffs(),
            s[1].coeffs(),
        ]);
        let w = 2f64.powi(-q) * area;
        let (mut a, mut b, mut m) = (0.0, 0.0, 0.0);
        for k in 0..p[0].len() {
            let gm = [[p[0][k], p[1][k]], [p[2][k], p[3][k]]];
            let (lv, sv) = ([p[4][k], p[5][k]], [p[6][k], p[7][k]]);
            // (G s) . l
            let gs = [
                gm[0][0] * sv[0] + gm[0][1] * sv[1],
                gm[1][0] * sv[0] + gm[1][1] * sv[1],
            ];
            let v = gs[0] * lv[0] + gs[1] * lv[1];
            a -= v;
            m += v.abs();
            // (s (x) l) : G^T
            for i in 0..2 {
                for j in 0..2 {
                    b += sv[i] * lv[j] * gm[j][i];
                }
            }
        }
        i3 += w * a;
        j3 += w * b;
        mass += w * m;
    }
    CancellationTerms { i3, j3, mass }
}

pub fn verify_cancellation(spec: &EnsembleSpec) -> Result<IdentityReport> {
    let grid = spec.build_grid()?;
    let part = DyadicPartition::new(&grid);
    let samples: Vec<(f64, f64)> = (0..spec.n_trials)
        .map(|i| {
            let mut rng = spec.trial_rng(i);
            let coherent = i % 2 == 1;
            let du = fields::solenoidal(&grid, &mut rng, spec.decay, coherent);
            let dd = fields::vector(&grid, &mut rng, spec.decay + 1.0, coherent);
            let d1 = fields::vector(&grid, &mut rng, spec.decay + 1.0, coherent);
            let c = cancellation_terms(&part, &du, &dd, &d1);
            let res = (c.i3 + c.j3).abs();
            (res, if c.mass == 0.0 { 0.0 } else { res / c.mass })
        })
        .collect();
    Ok(IdentityReport::new("cancel", &samples, CANCELLATION_TOL))
}

/// For every block `q`: `int (v (x) M w + M w (x) v) : Delta_q dw` with
/// `M = Delta_q dA`. Returns the largest `|integral|` and the matching
/// `int |S| |Omega|`.
pub fn skew_residual(
    part: &DyadicPartition,
    du: &VectorField2,
    v: &VectorField2,
    w: &VectorField2,
) -> (f64, f64) {
    let grid = part.grid();
    let area = grid.padded_cell_area();
    let (a, om) = strain_and_vorticity(du);
    let mut worst = (0.0, 0.0);
    let mut worst_rel = -1.0;
    for q in part.block_indices() {
        let block = part.block(q);
        let m: Vec<_> = [(0, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(i, j)| a.get(i, j).apply_multiplier(block))
            .collect();
        let o: Vec<_> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(i, j)| om.get(i, j).apply_multiplier(block))
            .collect();
        let p = grid.inverse_padded_real(&[
            m[0].coeffs(),
            m[1].coeffs(),
            m[2].coeffs(),
            o[0].coeffs(),
            o[1].coeffs(),
            o[2].coeffs(),
            o[3].coeffs(),
            v.x().coeffs(),
            v.y().coeffs(),
            w.x().coeffs(),
            w.y().coeffs(),
        ]);
        let (mut sum, mut mass) = (0.0, 0.0);
        for k in 0..p[0].len() {
            let mm = [[p[0][k], p[1][k]], [p[1][k], p[2][k]]];
            let omega = [[p[3][k], p[4][k]], [p[5][k], p[6][k]]];
            let vv = [p[7][k], p[8][k]];
            let ww = [p[9][k], p[10][k]];
            let mw = [
                mm[0][0] * ww[0] + mm[0][1] * ww[1],
                mm[1][0] * ww[0] + mm[1][1] * ww[1],
            ];
            let (mut c, mut s2, mut o2) = (0.0, 0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    let s = vv[i] * mw[j] + mw[i] * vv[j];
                    c += s * omega[i][j];
                    s2 += s * s;
                    o2 += omega[i][j] * omega[i][j];
                }
            }
            sum += c;
            mass += (s2 * o2).sqrt();
        }
        let (sum, mass) = ((sum * area).abs(), mass * area);
        let rel = if mass == 0.0 { 0.0 } else { sum / mass };
        if rel > worst_rel {
            worst_rel = rel;
            worst = (sum, mass);
        }
    }
    worst
}

pub fn verify_skew_symmetry(spec: &EnsembleSpec) -> Result<IdentityReport> {
    let grid = spec.build_grid()?;
    let part = DyadicPartition::new(&grid);
    let samples: Vec<(f64, f64)> = (0..spec.n_trials)
        .map(|i| {
            let mut rng = spec.trial_rng(i);
            let coherent = i % 2 == 1;
            let du = fields::solenoidal(&grid, &mut rng, spec.decay, coherent);
            let v = fields::vector(&grid, &mut rng, spec.decay, coherent);
            let w = fields::vector(&grid, &mut rng, spec.decay, coherent);
            let (res, mass) = skew_residual(&part, &du, &v, &w);
            (res, if mass == 0.0 { 0.0 } else { res / mass })
        })
        .collect();
    Ok(IdentityReport::new("skew", &samples, SKEW_TOL))
}
