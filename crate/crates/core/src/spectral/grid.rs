//! Discretisation of the torus `[-pi, pi]^2` and the FFT plans attached to it.
//!
//! Coefficient arrays are `N x N`, row-major, in standard FFT ordering: entry
//! `i1 * N + i2` holds the amplitude of the wavevector `(n1, n2)` where `n1`
//! is the signed frequency for array index `i1` (`0, 1, .., N/2-1, -N/2, .., -1`).
//! Physical samples live at `x_j = -pi + 2 pi j / M` on an `M x M` grid, where
//! `M = N` for plain transforms and `M = padding * N` for dealiased products.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Oversampling used when forming products in physical space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Padding {
    None,
    ThreeHalves,
    Two,
}

impl Padding {
    pub fn factor(self) -> f64 {
        match self {
            Padding::None => 1.0,
            Padding::ThreeHalves => 1.5,
            Padding::Two => 2.0,
        }
    }

    fn padded_size(self, n: usize) -> usize {
        match self {
            Padding::None => n,
            Padding::ThreeHalves => 3 * n / 2,
            Padding::Two => 2 * n,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "none" => Ok(Padding::None),
            "3/2" | "1.5" => Ok(Padding::ThreeHalves),
            "2" | "2.0" => Ok(Padding::Two),
            other => Err(Error::config(format!(
                "padding must be one of 1, 3/2, 2 (got {other:?})"
            ))),
        }
    }
}

impl fmt::Display for Padding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Padding::None => write!(f, "1"),
            Padding::ThreeHalves => write!(f, "3/2"),
            Padding::Two => write!(f, "2"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridSpec {
    pub n_modes: usize,
    pub padding: Padding,
}

impl GridSpec {
    pub fn new(n_modes: usize, padding: Padding) -> Result<Self> {
        if n_modes < 8 || n_modes % 2 != 0 {
            return Err(Error::config(format!(
                "grid size must be even and at least 8 (got {n_modes})"
            )));
        }
        Ok(Self { n_modes, padding })
    }
}

struct Plans {
    n_fwd: Arc<dyn Fft<f64>>,
    n_inv: Arc<dyn Fft<f64>>,
    m_fwd: Arc<dyn Fft<f64>>,
    m_inv: Arc<dyn Fft<f64>>,
}

struct GridData {
    spec: GridSpec,
    m: usize,
    plans: Plans,
    /// Signed wavenumbers per coefficient index.
    k1: Vec<f64>,
    k2: Vec<f64>,
    k_sq: Vec<f64>,
    /// False on the unpaired Nyquist row/column.
    active: Vec<bool>,
    /// Index of `-n` for every coefficient index `n`.
    mirror: Vec<usize>,
    /// Position of each coefficient inside the padded `M x M` spectrum.
    pad_index: Vec<usize>,
    /// `(-1)^(n1 + n2)`, the phase from sampling at `-pi + 2 pi j / M`.
    sign: Vec<f64>,
}

/// A shareable grid: spec, wavenumber tables and FFT plans.
#[derive(Clone)]
pub struct Grid(Arc<GridData>);

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n())
            .field("padding", &self.0.spec.padding)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

pub(crate) fn signed_mode(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        let spec = GridSpec::new(spec.n_modes, spec.padding)?;
        let n = spec.n_modes;
        let m = spec.padding.padded_size(n);
        let mut planner = FftPlanner::<f64>::new();
        let plans = Plans {
            n_fwd: planner.plan_fft_forward(n),
            n_inv: planner.plan_fft_inverse(n),
            m_fwd: planner.plan_fft_forward(m),
            m_inv: planner.plan_fft_inverse(m),
        };

        let len = n * n;
        let mut k1 = vec![0.0; len];
        let mut k2 = vec![0.0; len];
        let mut k_sq = vec![0.0; len];
        let mut active = vec![true; len];
        let mut mirror = vec![0; len];
        let mut pad_index = vec![0; len];
        let mut sign = vec![1.0; len];
        let wrap = |v: i64, size: usize| v.rem_euclid(size as i64) as usize;
        for i1 in 0..n {
            let a = signed_mode(i1, n);
            for i2 in 0..n {
                let b = signed_mode(i2, n);
                let idx = i1 * n + i2;
                k1[idx] = a as f64;
                k2[idx] = b as f64;
                k_sq[idx] = (a * a + b * b) as f64;
                active[idx] = i1 != n / 2 && i2 != n / 2;
                mirror[idx] = wrap(-a, n) * n + wrap(-b, n);
                pad_index[idx] = wrap(a, m) * m + wrap(b, m);
                sign[idx] = if (a + b).rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                };
            }
        }
        Ok(Grid(Arc::new(GridData {
            spec,
            m,
            plans,
            k1,
            k2,
            k_sq,
            active,
            mirror,
            pad_index,
            sign,
        })))
    }

    pub fn with_size(n: usize) -> Result<Self> {
        Self::new(GridSpec::new(n, Padding::Two)?)
    }

    pub fn spec(&self) -> GridSpec {
        self.0.spec
    }

    /// Modes per axis.
    pub fn n(&self) -> usize {
        self.0.spec.n_modes
    }

    /// Physical points per axis on the padded grid.
    pub fn m(&self) -> usize {
        self.0.m
    }

    pub fn len(&self) -> usize {
        self.n() * self.n()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn padded_len(&self) -> usize {
        self.0.m * self.0.m
    }

    /// Signed wavevector of a coefficient index.
    pub fn mode(&self, idx: usize) -> (i64, i64) {
        (self.0.k1[idx] as i64, self.0.k2[idx] as i64)
    }

    /// Coefficient index of a wavevector, if it is representable and not Nyquist.
    pub fn index_of(&self, n1: i64, n2: i64) -> Option<usize> {
        let half = (self.n() / 2) as i64;
        if n1.abs() >= half || n2.abs() >= half {
            return None;
        }
        let n = self.n();
        Some(n1.rem_euclid(n as i64) as usize * n + n2.rem_euclid(n as i64) as usize)
    }

    pub fn k1(&self) -> &[f64] {
        &self.0.k1
    }

    pub fn k2(&self) -> &[f64] {
        &self.0.k2
    }

    /// Wavenumber component along `axis` (0 or 1).
    pub fn k(&self, axis: usize) -> &[f64] {
        match axis {
            0 => &self.0.k1,
            _ => &self.0.k2,
        }
    }

    pub fn k_sq(&self) -> &[f64] {
        &self.0.k_sq
    }

    pub fn active(&self) -> &[bool] {
        &self.0.active
    }

    pub fn mirror(&self) -> &[usize] {
        &self.0.mirror
    }

    /// Largest `|n|` among active modes.
    pub fn max_wavenumber(&self) -> f64 {
        let half = (self.n() / 2 - 1) as f64;
        (2.0 * half * half).sqrt()
    }

    /// Sample coordinates along one axis of the unpadded grid.
    pub fn coords(&self) -> Vec<f64> {
        axis_coords(self.n())
    }

    pub fn padded_coords(&self) -> Vec<f64> {
        axis_coords(self.m())
    }

    /// `(2 pi)^2 / M^2`: quadrature weight of one padded sample.
    pub fn padded_cell_area(&self) -> f64 {
        let m = self.m() as f64;
        4.0 * PI * PI / (m * m)
    }

    pub fn cell_area(&self) -> f64 {
        let n = self.n() as f64;
        4.0 * PI * PI / (n * n)
    }

    // ---- transforms -------------------------------------------------------

    /// Forward transform of `N x N` samples: `f_n = (2pi)^-2 \int f e^{-i n x}`.
    pub fn forward(&self, samples: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n();
        check_len(samples.len(), n * n)?;
        let mut buf = samples.to_vec();
        fft2(&self.0.plans.n_fwd, &mut buf, n);
        let scale = 1.0 / (n * n) as f64;
        for (idx, c) in buf.iter_mut().enumerate() {
            *c = if self.0.active[idx] {
                *c * (scale * self.0.sign[idx])
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        Ok(buf)
    }

    /// Evaluate a coefficient array on the unpadded `N x N` grid.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n();
        check_len(coeffs.len(), n * n)?;
        let mut buf: Vec<Complex64> = coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                if self.0.active[idx] {
                    c * self.0.sign[idx]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        fft2(&self.0.plans.n_inv, &mut buf, n);
        Ok(buf)
    }

    /// Evaluate a coefficient array on the padded `M x M` grid.
    pub fn inverse_padded(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(coeffs.len(), self.len());
        let m = self.m();
        let mut buf = vec![Complex64::new(0.0, 0.0); m * m];
        for (idx, c) in coeffs.iter().enumerate() {
            if self.0.active[idx] {
                buf[self.0.pad_index[idx]] = c * self.0.sign[idx];
            }
        }
        fft2(&self.0.plans.m_inv, &mut buf, m);
        buf
    }

    /// Transform padded samples and truncate to the grid's modes.
    pub fn forward_padded(&self, samples: Vec<Complex64>) -> Vec<Complex64> {
        let m = self.m();
        debug_assert_eq!(samples.len(), m * m);
        let mut buf = samples;
        fft2(&self.0.plans.m_fwd, &mut buf, m);
        let scale = 1.0 / (m * m) as f64;
        (0..self.len())
            .map(|idx| {
                if self.0.active[idx] {
                    buf[self.0.pad_index[idx]] * (scale * self.0.sign[idx])
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect()
    }

    /// Two real fields in one complex transform: returns padded samples of `a`
    /// and `b`. Both spectra must be Hermitian.
    pub fn inverse_padded_pair(&self, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        let i = Complex64::new(0.0, 1.0);
        let packed: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x + i * y).collect();
        let z = self.inverse_padded(&packed);
        (
            z.iter().map(|c| c.re).collect(),
            z.iter().map(|c| c.im).collect(),
        )
    }

    /// Inverse of [`Grid::inverse_padded_pair`]: forward-transforms two real
    /// padded sample arrays with one complex FFT.
    pub fn forward_padded_pair(&self, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let packed: Vec<Complex64> = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| Complex64::new(x, y))
            .collect();
        let z = self.forward_padded(packed);
        self.unpack_pair(&z)
    }

    fn unpack_pair(&self, z: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let mirror = &self.0.mirror;
        let mut fa = vec![Complex64::new(0.0, 0.0); z.len()];
        let mut fb = vec![Complex64::new(0.0, 0.0); z.len()];
        for idx in 0..z.len() {
            if !self.0.active[idx] {
                continue;
            }
            let zc = z[mirror[idx]].conj();
            fa[idx] = (z[idx] + zc) * 0.5;
            // (z - conj(z_-n)) / 2i
            let d = (z[idx] - zc) * 0.5;
            fb[idx] = Complex64::new(d.im, -d.re);
        }
        (fa, fb)
    }

    /// Batch evaluation of real fields on the padded grid, two per FFT.
    pub fn inverse_padded_real(&self, fields: &[&[Complex64]]) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(fields.len());
        let mut chunks = fields.chunks_exact(2);
        for pair in &mut chunks {
            let (a, b) = self.inverse_padded_pair(pair[0], pair[1]);
            out.push(a);
            out.push(b);
        }
        if let [last] = chunks.remainder() {
            out.push(self.inverse_padded(last).iter().map(|c| c.re).collect());
        }
        out
    }

    /// Batch forward transform of real padded sample arrays, two per FFT.
    pub fn forward_padded_real(&self, samples: &[&[f64]]) -> Vec<Vec<Complex64>> {
        let mut out = Vec::with_capacity(samples.len());
        let mut chunks = samples.chunks_exact(2);
        for pair in &mut chunks {
            let (a, b) = self.forward_padded_pair(pair[0], pair[1]);
            out.push(a);
            out.push(b);
        }
        if let [last] = chunks.remainder() {
            let z = self.forward_padded(last.iter().map(|&x| Complex64::new(x, 0.0)).collect());
            // Project onto the Hermitian part so the result is exactly real.
            let (re, _) = self.unpack_pair(&z);
            out.push(re);
        }
        out
    }
}

fn axis_coords(size: usize) -> Vec<f64> {
    (0..size)
        .map(|j| -PI + 2.0 * PI * j as f64 / size as f64)
        .collect()
}

fn check_len(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::SizeMismatch { expected, found });
    }
    Ok(())
}

/// In-place unnormalised 2D FFT of a row-major `size x size` buffer.
fn fft2(plan: &Arc<dyn Fft<f64>>, buf: &mut [Complex64], size: usize) {
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    plan.process_with_scratch(buf, &mut scratch);
    let mut t = vec![Complex64::new(0.0, 0.0); buf.len()];
    transpose(buf, &mut t, size);
    plan.process_with_scratch(&mut t, &mut scratch);
    transpose(&t, buf, size);
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], size: usize) {
    const BLOCK: usize = 16;
    for ib in (0..size).step_by(BLOCK) {
        for jb in (0..size).step_by(BLOCK) {
            for i in ib..(ib + BLOCK).min(size) {
                for j in jb..(jb + BLOCK).min(size) {
                    dst[j * size + i] = src[i * size + j];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(GridSpec::new(6, Padding::Two).is_err());
        assert!(GridSpec::new(9, Padding::Two).is_err());
        assert!(GridSpec::new(8, Padding::Two).is_ok());
    }

    #[test]
    fn padded_sizes() {
        let g = Grid::new(GridSpec::new(16, Padding::ThreeHalves).unwrap()).unwrap();
        assert_eq!(g.m(), 24);
        let g = Grid::new(GridSpec::new(16, Padding::None).unwrap()).unwrap();
        assert_eq!(g.m(), 16);
    }

    #[test]
    fn index_and_mirror_agree() {
        let g = Grid::with_size(8).unwrap();
        let idx = g.index_of(3, -2).unwrap();
        assert_eq!(g.mode(idx), (3, -2));
        assert_eq!(g.mode(g.mirror()[idx]), (-3, 2));
        assert!(g.index_of(4, 0).is_none());
    }

    #[test]
    fn size_mismatch_is_reported() {
        let g = Grid::with_size(8).unwrap();
        let err = g.forward(&vec![Complex64::new(0.0, 0.0); 10]).unwrap_err();
        assert!(matches!(
            err,
            Error::SizeMismatch {
                expected: 64,
                found: 10
            }
        ));
    }
}
