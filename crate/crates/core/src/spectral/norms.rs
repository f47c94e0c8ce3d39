//! Lebesgue and Sobolev norms of spectral fields.

use std::f64::consts::PI;

use super::field::{SpectralField, TensorField22, VectorField2};
use crate::lp::DyadicPartition;

/// Which equivalent `H^s` norm to evaluate.
#[derive(Clone, Copy, Debug)]
pub enum HsForm<'a> {
    /// `2 pi (sum (1+|n|)^{2s} |f_n|^2)^{1/2}`.
    Fourier,
    /// `(sum_q 2^{2qs} ||Delta_q f||_{L^2}^2)^{1/2}`; plain `L^2` at `s = 0`.
    LittlewoodPaley(&'a DyadicPartition),
}

/// `||f||_{L^2}` by Parseval.
pub fn l2_norm(f: &SpectralField) -> f64 {
    2.0 * PI * f.coeff_energy().sqrt()
}

pub fn l2_norm_vector(u: &VectorField2) -> f64 {
    2.0 * PI * u.coeff_energy().sqrt()
}

pub fn l2_norm_tensor(t: &TensorField22) -> f64 {
    2.0 * PI * t.coeff_energy().sqrt()
}

/// `sum_n w(n) |f_n|^2` for a per-mode weight table.
pub fn weighted_energy(f: &SpectralField, weight: &[f64]) -> f64 {
    f.coeffs()
        .iter()
        .zip(weight)
        .map(|(c, w)| w * c.norm_sqr())
        .sum()
}

/// Per-mode weight `(1+|n|)^{2s}`.
pub fn fourier_weight(f: &SpectralField, s: f64) -> Vec<f64> {
    f.grid()
        .k_sq()
        .iter()
        .map(|k2| (1.0 + k2.sqrt()).powf(2.0 * s))
        .collect()
}

pub fn hs_norm(f: &SpectralField, s: f64, form: HsForm<'_>) -> f64 {
    hs_norm_sq(f, s, form).sqrt()
}

pub fn hs_norm_sq(f: &SpectralField, s: f64, form: HsForm<'_>) -> f64 {
    match form {
        _ if s == 0.0 => 4.0 * PI * PI * f.coeff_energy(),
        HsForm::Fourier => 4.0 * PI * PI * weighted_energy(f, &fourier_weight(f, s)),
        HsForm::LittlewoodPaley(p) => 4.0 * PI * PI * weighted_energy(f, &p.sobolev_weight(s)),
    }
}

/// Componentwise sum of squares.
pub fn hs_norm_vector(u: &VectorField2, s: f64, form: HsForm<'_>) -> f64 {
    u.0.iter()
        .map(|c| hs_norm_sq(c, s, form))
        .sum::<f64>()
        .sqrt()
}

pub fn hs_norm_tensor(t: &TensorField22, s: f64, form: HsForm<'_>) -> f64 {
    t.t.iter()
        .flatten()
        .map(|c| hs_norm_sq(c, s, form))
        .sum::<f64>()
        .sqrt()
}

/// `(int |f|^p)^{1/p}` by quadrature on the padded grid; `p = inf` gives the
/// padded-grid maximum.
pub fn lp_norm(f: &SpectralField, p: f64) -> f64 {
    let grid = f.grid();
    if f.is_real() {
        lp_norm_samples(&f.to_padded_real(), p, grid.padded_cell_area())
    } else {
        let mags: Vec<f64> = f.to_padded().iter().map(|c| c.norm()).collect();
        lp_norm_samples(&mags, p, grid.padded_cell_area())
    }
}

/// `L^p` norm of the pointwise Euclidean magnitude of several real fields.
pub fn lp_norm_components(fields: &[&SpectralField], p: f64) -> f64 {
    let grid = fields[0].grid();
    let coeffs: Vec<&[num_complex::Complex64]> = fields.iter().map(|f| f.coeffs()).collect();
    let samples = grid.inverse_padded_real(&coeffs);
    let mut mag = vec![0.0; grid.padded_len()];
    for comp in &samples {
        mag.iter_mut().zip(comp).for_each(|(m, v)| *m += v * v);
    }
    mag.iter_mut().for_each(|m| *m = m.sqrt());
    lp_norm_samples(&mag, p, grid.padded_cell_area())
}

pub fn lp_norm_samples(samples: &[f64], p: f64, cell_area: f64) -> f64 {
    if p.is_infinite() {
        return samples.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    if p == 2.0 {
        return (samples.iter().map(|v| v * v).sum::<f64>() * cell_area).sqrt();
    }
    if p == 1.0 {
        return samples.iter().map(|v| v.abs()).sum::<f64>() * cell_area;
    }
    // Scale by the maximum to keep large p finite.
    let max = samples.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if max == 0.0 {
        return 0.0;
    }
    let sum: f64 = samples.iter().map(|v| (v.abs() / max).powf(p)).sum();
    max * (sum * cell_area).powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;
    use num_complex::Complex64;

    #[test]
    fn single_mode_norms() {
        let g = Grid::with_size(16).unwrap();
        let p = DyadicPartition::new(&g);
        let f = SpectralField::mode(&g, 3, 0, Complex64::new(1.0, 0.0)).unwrap();
        for form in [HsForm::Fourier, HsForm::LittlewoodPaley(&p)] {
            assert!((hs_norm(&f, 0.0, form) - 2.0 * PI).abs() < 1e-14);
        }
        assert!((lp_norm(&f, 2.0) - 2.0 * PI).abs() < 1e-12);
        assert!((lp_norm(&f, f64::INFINITY) - 1.0).abs() < 1e-12);
        assert!((lp_norm(&f, 1.0) - 4.0 * PI * PI).abs() < 1e-10);
    }

    #[test]
    fn zero_field_has_zero_norms() {
        let g = Grid::with_size(8).unwrap();
        let p = DyadicPartition::new(&g);
        let z = SpectralField::zeros(&g);
        assert_eq!(hs_norm(&z, 0.5, HsForm::Fourier), 0.0);
        assert_eq!(hs_norm(&z, 0.5, HsForm::LittlewoodPaley(&p)), 0.0);
        assert_eq!(lp_norm(&z, 4.0), 0.0);
    }

    #[test]
    fn fourier_weight_is_one_plus_abs_n() {
        let g = Grid::with_size(16).unwrap();
        let f = SpectralField::mode(&g, 3, 4, Complex64::new(1.0, 0.0)).unwrap();
        let expected = 2.0 * PI * 6.0;
        assert!((hs_norm(&f, 1.0, HsForm::Fourier) - expected).abs() < 1e-12);
    }

    #[test]
    fn cosine_lp_norms() {
        let g = Grid::with_size(16).unwrap();
        let f = SpectralField::from_fn(&g, |x, _| x.cos());
        // int |cos x|^4 = 2pi * 3pi/4
        let expected = (2.0 * PI * 3.0 * PI / 4.0).powf(0.25);
        assert!((lp_norm(&f, 4.0) - expected).abs() < 1e-12);
    }
}
