use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Fourier coefficients of a scalar field on the torus.
///
/// `real` records whether the field is known to be real-valued; such fields
/// are kept exactly Hermitian (`f_{-n} = conj(f_n)`).
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
    real: bool,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![ZERO; grid.len()],
            real: true,
        }
    }

    /// Wrap raw coefficients. Nyquist entries are discarded.
    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                found: coeffs.len(),
            });
        }
        let mut f = Self {
            grid: grid.clone(),
            coeffs,
            real: false,
        };
        f.zero_inactive();
        Ok(f)
    }

    /// Wrap coefficients of a real field, symmetrising them.
    pub fn from_real_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        let mut f = Self::from_coeffs(grid, coeffs)?;
        f.make_hermitian();
        Ok(f)
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[0] = Complex64::new(c, 0.0);
        f
    }

    /// Single Fourier mode `amp * e^{i n.x}` (complex valued).
    pub fn mode(grid: &Grid, n1: i64, n2: i64, amp: Complex64) -> Result<Self> {
        let idx = grid
            .index_of(n1, n2)
            .ok_or_else(|| Error::domain(format!("mode ({n1},{n2}) not representable")))?;
        let mut f = Self::zeros(grid);
        f.coeffs[idx] = amp;
        f.real = amp.im == 0.0 && n1 == 0 && n2 == 0;
        Ok(f)
    }

    /// Forward transform of `N x N` complex samples.
    pub fn from_samples(grid: &Grid, samples: &[Complex64]) -> Result<Self> {
        let coeffs = grid.forward(samples)?;
        Ok(Self {
            grid: grid.clone(),
            coeffs,
            real: false,
        })
    }

    /// Forward transform of `N x N` real samples.
    pub fn from_real_samples(grid: &Grid, samples: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let coeffs = grid.forward(&c)?;
        Self::from_real_coeffs(grid, coeffs)
    }

    /// Sample `f(x1, x2)` on the unpadded grid and transform.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let xs = grid.coords();
        let mut samples = Vec::with_capacity(grid.len());
        for &x1 in &xs {
            for &x2 in &xs {
                samples.push(f(x1, x2));
            }
        }
        Self::from_real_samples(grid, &samples).expect("sample count matches grid")
    }

    /// Real padded samples from the padded physical grid (products, pointwise maps).
    pub fn from_padded_real(grid: &Grid, samples: &[f64]) -> Self {
        let mut out = grid.forward_padded_real(&[samples]);
        Self {
            grid: grid.clone(),
            coeffs: out.pop().expect("one field"),
            real: true,
        }
    }

    pub(crate) fn from_parts(grid: &Grid, coeffs: Vec<Complex64>, real: bool) -> Self {
        Self {
            grid: grid.clone(),
            coeffs,
            real,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Coefficient of wavevector `(n1, n2)`; zero when not representable.
    pub fn coeff(&self, n1: i64, n2: i64) -> Complex64 {
        self.grid.index_of(n1, n2).map_or(ZERO, |i| self.coeffs[i])
    }

    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Symmetrise to the Hermitian part and flag as real.
    pub fn make_hermitian(&mut self) {
        let mirror = self.grid.mirror().to_vec();
        let old = self.coeffs.clone();
        for (idx, c) in self.coeffs.iter_mut().enumerate() {
            *c = (old[idx] + old[mirror[idx]].conj()) * 0.5;
        }
        self.real = true;
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let mirror = self.grid.mirror();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (c - self.coeffs[mirror[i]].conj()).norm())
            .fold(0.0, f64::max)
    }

    fn zero_inactive(&mut self) {
        for (c, &a) in self.coeffs.iter_mut().zip(self.grid.active()) {
            if !a {
                *c = ZERO;
            }
        }
    }

    pub fn check_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::SizeMismatch {
                expected: self.grid.n(),
                found: other.grid.n(),
            });
        }
        Ok(())
    }

    // ---- physical space ---------------------------------------------------

    /// Samples on the unpadded `N x N` grid.
    pub fn to_samples(&self) -> Vec<Complex64> {
        self.grid
            .inverse(&self.coeffs)
            .expect("coefficient count matches grid")
    }

    pub fn to_real_samples(&self) -> Vec<f64> {
        self.to_samples().iter().map(|c| c.re).collect()
    }

    /// Samples on the padded `M x M` grid.
    pub fn to_padded(&self) -> Vec<Complex64> {
        self.grid.inverse_padded(&self.coeffs)
    }

    pub fn to_padded_real(&self) -> Vec<f64> {
        self.to_padded().iter().map(|c| c.re).collect()
    }

    // ---- spectral multipliers ---------------------------------------------

    /// Multiply every coefficient by a real symbol `m(idx)`.
    pub fn map_symbol(&self, symbol: impl Fn(usize) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * symbol(i))
            .collect();
        Self::from_parts(&self.grid, coeffs, self.real)
    }

    /// Multiply by a real multiplier table.
    pub fn apply_multiplier(&self, table: &[f64]) -> Self {
        debug_assert_eq!(table.len(), self.coeffs.len());
        let coeffs = self.coeffs.iter().zip(table).map(|(c, m)| c * m).collect();
        Self::from_parts(&self.grid, coeffs, self.real)
    }

    /// Dealiased product computed on the padded grid and truncated.
    pub fn mul_field(&self, other: &SpectralField) -> Result<Self> {
        self.check_grid(other)?;
        if self.real && other.real {
            let mut p = self
                .grid
                .inverse_padded_real(&[&self.coeffs, &other.coeffs]);
            let b = p.pop().unwrap();
            let mut a = p.pop().unwrap();
            a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y);
            return Ok(Self::from_padded_real(&self.grid, &a));
        }
        let mut a = self.to_padded();
        let b = other.to_padded();
        a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y);
        let coeffs = self.grid.forward_padded(a);
        Ok(Self::from_parts(&self.grid, coeffs, false))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_symbol(|_| s)
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * s).collect();
        Self::from_parts(&self.grid, coeffs, self.real && s.im == 0.0)
    }

    pub fn conj_field(&self) -> Self {
        // conj(f)(x) has coefficients conj(f_{-n}).
        let mirror = self.grid.mirror();
        let coeffs = (0..self.coeffs.len())
            .map(|i| self.coeffs[mirror[i]].conj())
            .collect();
        Self::from_parts(&self.grid, coeffs, self.real)
    }

    /// `sum |f_n|^2`.
    pub fn coeff_energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn axpy(&mut self, a: f64, x: &SpectralField) {
        debug_assert!(self.grid == x.grid);
        self.coeffs
            .iter_mut()
            .zip(&x.coeffs)
            .for_each(|(y, xv)| *y += xv * a);
        self.real &= x.real;
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        debug_assert!(self.grid == rhs.grid);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        SpectralField::from_parts(&self.grid, coeffs, self.real && rhs.real)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        debug_assert!(self.grid == rhs.grid);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        SpectralField::from_parts(&self.grid, coeffs, self.real && rhs.real)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scale(rhs)
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        self.axpy(1.0, rhs);
    }
}

impl SubAssign<&SpectralField> for SpectralField {
    fn sub_assign(&mut self, rhs: &SpectralField) {
        self.axpy(-1.0, rhs);
    }
}

/// Two components on a shared grid.
#[derive(Clone, Debug)]
pub struct VectorField2(pub [SpectralField; 2]);

impl VectorField2 {
    pub fn new(x: SpectralField, y: SpectralField) -> Result<Self> {
        x.check_grid(&y)?;
        Ok(Self([x, y]))
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self([SpectralField::zeros(grid), SpectralField::zeros(grid)])
    }

    pub fn constant(grid: &Grid, c: [f64; 2]) -> Self {
        Self([
            SpectralField::constant(grid, c[0]),
            SpectralField::constant(grid, c[1]),
        ])
    }

    pub fn from_fns(
        grid: &Grid,
        fx: impl Fn(f64, f64) -> f64,
        fy: impl Fn(f64, f64) -> f64,
    ) -> Self {
        Self([
            SpectralField::from_fn(grid, fx),
            SpectralField::from_fn(grid, fy),
        ])
    }

    pub fn grid(&self) -> &Grid {
        self.0[0].grid()
    }

    pub fn x(&self) -> &SpectralField {
        &self.0[0]
    }

    pub fn y(&self) -> &SpectralField {
        &self.0[1]
    }

    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> Self {
        Self([f(&self.0[0]), f(&self.0[1])])
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn coeff_energy(&self) -> f64 {
        self.0.iter().map(SpectralField::coeff_energy).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(SpectralField::is_finite)
    }

    pub fn axpy(&mut self, a: f64, x: &VectorField2) {
        self.0[0].axpy(a, &x.0[0]);
        self.0[1].axpy(a, &x.0[1]);
    }
}

impl Add for &VectorField2 {
    type Output = VectorField2;
    fn add(self, rhs: &VectorField2) -> VectorField2 {
        VectorField2([&self.0[0] + &rhs.0[0], &self.0[1] + &rhs.0[1]])
    }
}

impl Sub for &VectorField2 {
    type Output = VectorField2;
    fn sub(self, rhs: &VectorField2) -> VectorField2 {
        VectorField2([&self.0[0] - &rhs.0[0], &self.0[1] - &rhs.0[1]])
    }
}

/// 2x2 tensor field, `t[i][j]`. When `symmetric` is set, `t[0][1]` and
/// `t[1][0]` hold identical coefficients.
#[derive(Clone, Debug)]
pub struct TensorField22 {
    pub t: [[SpectralField; 2]; 2],
    pub symmetric: bool,
}

impl TensorField22 {
    pub fn new(t: [[SpectralField; 2]; 2]) -> Self {
        Self {
            t,
            symmetric: false,
        }
    }

    pub fn symmetric(t00: SpectralField, t01: SpectralField, t11: SpectralField) -> Self {
        Self {
            t: [[t00, t01.clone()], [t01, t11]],
            symmetric: true,
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        let z = || SpectralField::zeros(grid);
        Self {
            t: [[z(), z()], [z(), z()]],
            symmetric: true,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &SpectralField {
        &self.t[i][j]
    }

    pub fn grid(&self) -> &Grid {
        self.t[0][0].grid()
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.t.clone();
        Self {
            t: [[a, c], [b, d]],
            symmetric: self.symmetric,
        }
    }

    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> Self {
        Self {
            t: [
                [f(&self.t[0][0]), f(&self.t[0][1])],
                [f(&self.t[1][0]), f(&self.t[1][1])],
            ],
            symmetric: self.symmetric,
        }
    }

    pub fn coeff_energy(&self) -> f64 {
        self.t
            .iter()
            .flatten()
            .map(SpectralField::coeff_energy)
            .sum()
    }
}
