use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::{snapshot, Grid, SpectralField, VectorField2};

/// Velocity, director and time.
#[derive(Clone, Debug)]
pub struct State {
    pub u: VectorField2,
    pub d: VectorField2,
    pub t: f64,
}

impl State {
    pub fn new(u: VectorField2, d: VectorField2, t: f64) -> Result<Self> {
        if u.grid() != d.grid() {
            return Err(Error::SizeMismatch {
                expected: u.grid().n(),
                found: d.grid().n(),
            });
        }
        if !u.0.iter().chain(&d.0).all(|f| f.is_real()) {
            return Err(Error::domain("state fields must be real-valued"));
        }
        Ok(Self { u, d, t })
    }

    /// `u = 0`, `d = (1, 0)`: a steady state.
    pub fn rest_unit(grid: &Grid) -> Self {
        Self {
            u: VectorField2::zeros(grid),
            d: VectorField2::constant(grid, [1.0, 0.0]),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.d.is_finite() && self.t.is_finite()
    }

    /// Component-wise difference `(u1 - u2, d1 - d2)`.
    pub fn difference(&self, other: &State) -> Result<(VectorField2, VectorField2)> {
        if self.grid() != other.grid() {
            return Err(Error::SizeMismatch {
                expected: self.grid().n(),
                found: other.grid().n(),
            });
        }
        Ok((&self.u - &other.u, &self.d - &other.d))
    }

    /// Bitwise equality of all coefficients.
    pub fn bit_eq(&self, other: &State) -> bool {
        let same = |a: &SpectralField, b: &SpectralField| {
            a.coeffs().len() == b.coeffs().len()
                && a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| {
                    x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()
                })
        };
        self.u.0.iter().zip(&other.u.0).all(|(a, b)| same(a, b))
            && self.d.0.iter().zip(&other.d.0).all(|(a, b)| same(a, b))
    }

    /// Write `u_1, u_2, d_1, d_2` as an LCSF snapshot.
    pub fn save(&self, path: &Path) -> Result<()> {
        let [u1, u2] = &self.u.0;
        let [d1, d2] = &self.d.0;
        snapshot::save(path, &[u1, u2, d1, d2])
    }

    /// Inverse of [`State::save`]; the file carries no time, so it is passed in.
    pub fn load(path: &Path, grid: &Grid, t: f64) -> Result<Self> {
        let fields = snapshot::load(path, grid)?;
        if fields.len() != 4 {
            return Err(Error::Format {
                offset: 12,
                reason: format!("state snapshot needs 4 components, found {}", fields.len()),
            });
        }
        let mut it = fields.into_iter();
        let mut next = || it.next().unwrap();
        let u = VectorField2([next(), next()]);
        let d = VectorField2([next(), next()]);
        Self::new(u, d, t)
    }
}
