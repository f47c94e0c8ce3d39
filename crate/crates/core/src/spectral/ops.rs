//! Differential operators as Fourier symbols, and the Leray projection.

use num_complex::Complex64;

use super::field::{SpectralField, TensorField22, VectorField2};

/// `d/dx_axis`: multiplies `f_n` by `i n_axis`.
pub fn derivative(f: &SpectralField, axis: usize) -> SpectralField {
    let k = f.grid().k(axis);
    let coeffs = f
        .coeffs()
        .iter()
        .zip(k)
        .map(|(c, &kn)| Complex64::new(-c.im * kn, c.re * kn))
        .collect();
    SpectralField::from_parts(f.grid(), coeffs, f.is_real())
}

/// `d^a1/dx^a1 d^a2/dy^a2` with the integer symbol formed before it touches
/// the coefficients, so the result does not depend on the order of the axes.
pub fn partial(f: &SpectralField, a1: u32, a2: u32) -> SpectralField {
    let (k1, k2) = (f.grid().k1(), f.grid().k2());
    let unit = Complex64::new(0.0, 1.0).powu(a1 + a2);
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c * (unit * (k1[i].powi(a1 as i32) * k2[i].powi(a2 as i32))))
        .collect();
    SpectralField::from_parts(f.grid(), coeffs, f.is_real())
}

pub fn gradient(f: &SpectralField) -> VectorField2 {
    VectorField2([derivative(f, 0), derivative(f, 1)])
}

pub fn divergence(u: &VectorField2) -> SpectralField {
    &derivative(&u.0[0], 0) + &derivative(&u.0[1], 1)
}

/// Row-wise divergence `(div T)_i = d_j T_ij`.
pub fn divergence_tensor(t: &TensorField22) -> VectorField2 {
    VectorField2([
        &derivative(&t.t[0][0], 0) + &derivative(&t.t[0][1], 1),
        &derivative(&t.t[1][0], 0) + &derivative(&t.t[1][1], 1),
    ])
}

/// Velocity gradient with `(grad u)_ij = d_j u_i`.
pub fn gradient_vector(u: &VectorField2) -> TensorField22 {
    TensorField22::new([
        [derivative(&u.0[0], 0), derivative(&u.0[0], 1)],
        [derivative(&u.0[1], 0), derivative(&u.0[1], 1)],
    ])
}

pub fn laplacian(f: &SpectralField) -> SpectralField {
    let k_sq = f.grid().k_sq();
    f.map_symbol(|i| -k_sq[i])
}

pub fn laplacian_vector(u: &VectorField2) -> VectorField2 {
    u.map(laplacian)
}

/// Orthogonal projection onto divergence-free fields:
/// `P(u)_n = u_n - n (n . u_n) / |n|^2`, the mean mode is left untouched.
pub fn leray_project(u: &VectorField2) -> VectorField2 {
    let grid = u.grid();
    let (k1, k2, k_sq) = (grid.k1(), grid.k2(), grid.k_sq());
    let (a, b) = (u.0[0].coeffs(), u.0[1].coeffs());
    let mut px = Vec::with_capacity(a.len());
    let mut py = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        if k_sq[i] == 0.0 {
            px.push(a[i]);
            py.push(b[i]);
            continue;
        }
        let dot = (a[i] * k1[i] + b[i] * k2[i]) / k_sq[i];
        px.push(a[i] - dot * k1[i]);
        py.push(b[i] - dot * k2[i]);
    }
    VectorField2([
        SpectralField::from_parts(grid, px, u.0[0].is_real()),
        SpectralField::from_parts(grid, py, u.0[1].is_real()),
    ])
}

/// `max_n |n . u_n|`, the spectral divergence residual.
pub fn divergence_residual(u: &VectorField2) -> f64 {
    let grid = u.grid();
    let (k1, k2) = (grid.k1(), grid.k2());
    let (a, b) = (u.0[0].coeffs(), u.0[1].coeffs());
    (0..a.len())
        .map(|i| (a[i] * k1[i] + b[i] * k2[i]).norm())
        .fold(0.0, f64::max)
}

/// Mean-zero solution of `lap p = f`; the mean of `f` is ignored.
pub fn solve_poisson(f: &SpectralField) -> SpectralField {
    let k_sq = f.grid().k_sq();
    f.map_symbol(|i| if k_sq[i] == 0.0 { 0.0 } else { -1.0 / k_sq[i] })
}
