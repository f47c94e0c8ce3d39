//! Periodic fields on `[-pi, pi]^2` in Fourier representation.

pub mod field;
pub mod grid;
pub mod norms;
pub mod ops;
pub mod snapshot;

pub use field::{SpectralField, TensorField22, VectorField2};
pub use grid::{Grid, GridSpec, Padding};
pub use norms::{hs_norm, l2_norm, lp_norm, HsForm};
pub use ops::{derivative, divergence, gradient, laplacian, leray_project};

/// Direction of [`transform`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Unpadded transform between `N x N` samples and coefficients.
pub fn transform(
    grid: &Grid,
    data: &[num_complex::Complex64],
    direction: Direction,
) -> crate::Result<Vec<num_complex::Complex64>> {
    match direction {
        Direction::Forward => grid.forward(data),
        Direction::Inverse => grid.inverse(data),
    }
}
