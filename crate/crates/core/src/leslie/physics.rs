//! Pointwise evaluation of the nonlinear terms on the padded grid.

use num_complex::Complex64;

use super::coefficients::LeslieCoefficients;
use super::state::State;
use crate::error::Result;
use crate::spectral::ops::{derivative, gradient_vector, laplacian, solve_poisson};
use crate::spectral::{Grid, SpectralField, TensorField22, VectorField2};

/// Which algebraic form of the stress, director stretching and dissipation to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// The specialised expressions for the ansatz coefficients.
    Ansatz,
    /// The general Leslie expressions with the corotational flux eliminated.
    General,
}

impl Form {
    pub fn for_coefficients(c: &LeslieCoefficients) -> Self {
        if c.is_ansatz() {
            Form::Ansatz
        } else {
            Form::General
        }
    }
}

/// Padded physical samples of `u`, `grad u`, `d`, `grad d` and `lap d`.
/// Gradients are indexed `[i][j] = d_j f_i`.
pub struct Physical {
    pub u: [Vec<f64>; 2],
    pub grad_u: [[Vec<f64>; 2]; 2],
    pub d: [Vec<f64>; 2],
    pub grad_d: [[Vec<f64>; 2]; 2],
    pub lap_d: [Vec<f64>; 2],
}

impl Physical {
    pub fn new(state: &State) -> Self {
        let grid = state.grid();
        let mut spectral: Vec<SpectralField> = Vec::with_capacity(14);
        for v in [&state.u, &state.d] {
            for c in &v.0 {
                spectral.push(c.clone());
            }
            for c in &v.0 {
                spectral.push(derivative(c, 0));
                spectral.push(derivative(c, 1));
            }
        }
        for c in &state.d.0 {
            spectral.push(laplacian(c));
        }
        let refs: Vec<&[Complex64]> = spectral.iter().map(|f| f.coeffs()).collect();
        let mut s = grid.inverse_padded_real(&refs).into_iter();
        let mut next = || s.next().unwrap();
        let u = [next(), next()];
        let grad_u = [[next(), next()], [next(), next()]];
        let d = [next(), next()];
        let grad_d = [[next(), next()], [next(), next()]];
        let lap_d = [next(), next()];
        Self {
            u,
            grad_u,
            d,
            grad_d,
            lap_d,
        }
    }

    pub fn len(&self) -> usize {
        self.u[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.u[0].is_empty()
    }
}

/// Integrated dissipation. With [`Form::Ansatz`] the terms are
/// `nu|grad u|^2, (d.Ad)^2, 3/2|Ad|^2, 1/2|h|^2, 1/2|Ad + h|^2`, `h = lap d - grad W`;
/// with [`Form::General`] they are `mu4/2|grad u|^2, mu1 (d.Ad)^2,
/// (mu5+mu6)|Ad|^2, -lambda1|N|^2, -(lambda2-mu2-mu3) N.Ad`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dissipation {
    pub form: Form,
    pub terms: [f64; 5],
}

impl Dissipation {
    pub fn total(&self) -> f64 {
        self.terms.iter().sum()
    }
}

/// Output of one padded evaluation.
pub struct Pointwise {
    /// `-u (x) u - grad d (.) grad d + sigma`, entries 00, 01, 10, 11.
    pub flux: [Vec<f64>; 4],
    pub sigma: [Vec<f64>; 4],
    /// Explicit director tendency (advection, stretching, potential).
    pub director: [Vec<f64>; 2],
    pub grad_w: [Vec<f64>; 2],
    pub dissipation: Dissipation,
    /// `int W(d)`.
    pub potential: f64,
}

pub fn pointwise(phys: &Physical, c: &LeslieCoefficients, form: Form, cell_area: f64) -> Pointwise {
    let n = phys.len();
    let vec4 = || [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let (mut flux, mut sigma) = (vec4(), vec4());
    let mut director = [vec![0.0; n], vec![0.0; n]];
    let mut grad_w = [vec![0.0; n], vec![0.0; n]];
    let mut diss = [0.0; 5];
    let mut potential = 0.0;

    let [mu1, mu2, mu3, mu4, mu5, mu6] = c.mu;
    let (l1, l2) = (c.lambda1, c.lambda2);
    let ratio = l2 / l1;
    let inv_l1 = 1.0 / l1;

    for p in 0..n {
        let u = [phys.u[0][p], phys.u[1][p]];
        let g = [
            [phys.grad_u[0][0][p], phys.grad_u[0][1][p]],
            [phys.grad_u[1][0][p], phys.grad_u[1][1][p]],
        ];
        let d = [phys.d[0][p], phys.d[1][p]];
        let gd = [
            [phys.grad_d[0][0][p], phys.grad_d[0][1][p]],
            [phys.grad_d[1][0][p], phys.grad_d[1][1][p]],
        ];
        let lap = [phys.lap_d[0][p], phys.lap_d[1][p]];

        let w = d[0] * d[0] + d[1] * d[1] - 1.0;
        potential += 0.25 * w * w;
        let wp = [w * d[0], w * d[1]];
        let h = [lap[0] - wp[0], lap[1] - wp[1]];
        let a01 = 0.5 * (g[0][1] + g[1][0]);
        let om01 = 0.5 * (g[0][1] - g[1][0]);
        let ad = [g[0][0] * d[0] + a01 * d[1], a01 * d[0] + g[1][1] * d[1]];
        let dad = d[0] * ad[0] + d[1] * ad[1];
        let adv = [
            u[0] * gd[0][0] + u[1] * gd[0][1],
            u[0] * gd[1][0] + u[1] * gd[1][1],
        ];
        let gu2 = g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] + g[1][1] * g[1][1];
        let ad2 = ad[0] * ad[0] + ad[1] * ad[1];

        let mut s = [[0.0; 2]; 2];
        let tend;
        match form {
            Form::Ansatz => {
                for i in 0..2 {
                    for j in 0..2 {
                        s[i][j] = d[i] * d[j] * dad + d[i] * ad[j] + ad[i] * d[j] - h[i] * d[j];
                    }
                }
                let st = |i: usize| {
                    1.5 * (g[i][0] * d[0] + g[i][1] * d[1])
                        + 0.5 * (g[0][i] * d[0] + g[1][i] * d[1])
                };
                tend = [-adv[0] + st(0) - wp[0], -adv[1] + st(1) - wp[1]];
                let adh = [ad[0] + h[0], ad[1] + h[1]];
                diss[0] += c.nu * gu2;
                diss[1] += dad * dad;
                diss[2] += 1.5 * ad2;
                diss[3] += 0.5 * (h[0] * h[0] + h[1] * h[1]);
                diss[4] += 0.5 * (adh[0] * adh[0] + adh[1] * adh[1]);
            }
            Form::General => {
                let nn = [
                    -ratio * ad[0] - inv_l1 * h[0],
                    -ratio * ad[1] - inv_l1 * h[1],
                ];
                for i in 0..2 {
                    for j in 0..2 {
                        s[i][j] = mu1 * d[i] * d[j] * dad
                            + mu2 * nn[i] * d[j]
                            + mu3 * d[i] * nn[j]
                            + mu5 * ad[i] * d[j]
                            + mu6 * d[i] * ad[j];
                    }
                }
                let rot = [om01 * d[1], -om01 * d[0]];
                tend = [
                    -adv[0] + rot[0] - ratio * ad[0] + inv_l1 * wp[0],
                    -adv[1] + rot[1] - ratio * ad[1] + inv_l1 * wp[1],
                ];
                diss[0] += 0.5 * mu4 * gu2;
                diss[1] += mu1 * dad * dad;
                diss[2] += (mu5 + mu6) * ad2;
                diss[3] += -l1 * (nn[0] * nn[0] + nn[1] * nn[1]);
                diss[4] += -(l2 - mu2 - mu3) * (nn[0] * ad[0] + nn[1] * ad[1]);
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                let e = gd[0][i] * gd[0][j] + gd[1][i] * gd[1][j];
                let k = 2 * i + j;
                sigma[k][p] = s[i][j];
                flux[k][p] = -u[i] * u[j] - e + s[i][j];
            }
            director[i][p] = tend[i];
            grad_w[i][p] = wp[i];
        }
    }
    diss.iter_mut().for_each(|v| *v *= cell_area);
    Pointwise {
        flux,
        sigma,
        director,
        grad_w,
        dissipation: Dissipation { form, terms: diss },
        potential: potential * cell_area,
    }
}

/// Explicit tendencies and diagnostics of one state.
pub struct Evaluation {
    /// `div(-u (x) u - grad d (.) grad d + sigma)`, not projected, without `nu lap u`.
    pub momentum: VectorField2,
    /// Director tendency without the diffusion `-(1/lambda1) lap d`.
    pub director: VectorField2,
    pub dissipation: Dissipation,
    pub potential: f64,
}

fn to_spectral(grid: &Grid, samples: &[&[f64]]) -> Vec<SpectralField> {
    grid.forward_padded_real(samples)
        .into_iter()
        .map(|c| SpectralField::from_parts(grid, c, true))
        .collect()
}

pub fn evaluate(state: &State, c: &LeslieCoefficients, form: Form) -> Evaluation {
    let grid = state.grid();
    let phys = Physical::new(state);
    let pw = pointwise(&phys, c, form, grid.padded_cell_area());
    let [f0, f1, f2, f3] = &pw.flux;
    let [n0, n1] = &pw.director;
    let mut out = to_spectral(grid, &[f0, f1, f2, f3, n0, n1]).into_iter();
    let mut next = || out.next().unwrap();
    let (t00, t01, t10, t11) = (next(), next(), next(), next());
    let momentum = VectorField2([
        &derivative(&t00, 0) + &derivative(&t01, 1),
        &derivative(&t10, 0) + &derivative(&t11, 1),
    ]);
    let director = VectorField2([next(), next()]);
    Evaluation {
        momentum,
        director,
        dissipation: pw.dissipation,
        potential: pw.potential,
    }
}

/// `A = (grad u + grad^t u)/2` and `omega = (grad u - grad^t u)/2`.
pub fn strain_and_vorticity(u: &VectorField2) -> (TensorField22, TensorField22) {
    let g = gradient_vector(u);
    let half = |a: &SpectralField, b: &SpectralField, sign: f64| {
        let coeffs = a
            .coeffs()
            .iter()
            .zip(b.coeffs())
            .map(|(x, y)| (x + y * sign) * 0.5)
            .collect();
        SpectralField::from_parts(a.grid(), coeffs, a.is_real() && b.is_real())
    };
    let a = TensorField22::symmetric(
        g.get(0, 0).clone(),
        half(g.get(0, 1), g.get(1, 0), 1.0),
        g.get(1, 1).clone(),
    );
    let zero = SpectralField::zeros(u.grid());
    let w01 = half(g.get(0, 1), g.get(1, 0), -1.0);
    let w10 = -&w01;
    let omega = TensorField22::new([[zero.clone(), w01], [w10, zero]]);
    (a, omega)
}

/// `grad_d W = (|d|^2 - 1) d`, evaluated on the padded grid.
pub fn gl_gradient(d: &VectorField2) -> VectorField2 {
    let grid = d.grid();
    let s = grid.inverse_padded_real(&[d.x().coeffs(), d.y().coeffs()]);
    let (mut a, mut b) = (s[0].clone(), s[1].clone());
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let w = *x * *x + *y * *y - 1.0;
        *x *= w;
        *y *= w;
    }
    let mut out = to_spectral(grid, &[&a, &b]).into_iter();
    VectorField2([out.next().unwrap(), out.next().unwrap()])
}

/// The Leslie stress, in the form selected by the coefficients.
pub fn leslie_stress(state: &State, c: &LeslieCoefficients) -> TensorField22 {
    leslie_stress_with(state, c, Form::for_coefficients(c))
}

pub fn leslie_stress_with(state: &State, c: &LeslieCoefficients, form: Form) -> TensorField22 {
    let grid = state.grid();
    let pw = pointwise(&Physical::new(state), c, form, grid.padded_cell_area());
    let [s0, s1, s2, s3] = &pw.sigma;
    let mut out = to_spectral(grid, &[s0, s1, s2, s3]).into_iter();
    let mut next = || out.next().unwrap();
    TensorField22::new([[next(), next()], [next(), next()]])
}

/// Ericksen stress `(grad d (.) grad d)_ij = d_i d . d_j d`.
pub fn ericksen_stress(d: &VectorField2) -> TensorField22 {
    let grid = d.grid();
    let g = gradient_vector(d);
    let s = grid.inverse_padded_real(&[
        g.get(0, 0).coeffs(),
        g.get(0, 1).coeffs(),
        g.get(1, 0).coeffs(),
        g.get(1, 1).coeffs(),
    ]);
    let n = s[0].len();
    let mut e = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for p in 0..n {
        e[0][p] = s[0][p] * s[0][p] + s[2][p] * s[2][p];
        e[1][p] = s[0][p] * s[1][p] + s[2][p] * s[3][p];
        e[2][p] = s[1][p] * s[1][p] + s[3][p] * s[3][p];
    }
    let mut out = to_spectral(grid, &[&e[0], &e[1], &e[2]]).into_iter();
    let mut next = || out.next().unwrap();
    TensorField22::symmetric(next(), next(), next())
}

/// Full right-hand sides `(du/dt before projection, dd/dt)`.
pub fn rhs(state: &State, c: &LeslieCoefficients) -> Result<(VectorField2, VectorField2)> {
    c.validate()?;
    let ev = evaluate(state, c, Form::for_coefficients(c));
    let kappa = c.director_diffusivity();
    let du = VectorField2([
        &ev.momentum.0[0] + &laplacian(&state.u.0[0]).scale(c.nu),
        &ev.momentum.0[1] + &laplacian(&state.u.0[1]).scale(c.nu),
    ]);
    let dd = VectorField2([
        &ev.director.0[0] + &laplacian(&state.d.0[0]).scale(kappa),
        &ev.director.0[1] + &laplacian(&state.d.0[1]).scale(kappa),
    ]);
    Ok((du, dd))
}

/// Mean-zero pressure with `lap p = div(momentum right-hand side)`.
pub fn recover_pressure(state: &State, c: &LeslieCoefficients) -> Result<SpectralField> {
    let (du, _) = rhs(state, c)?;
    Ok(solve_poisson(&crate::spectral::ops::divergence(&du)))
}
