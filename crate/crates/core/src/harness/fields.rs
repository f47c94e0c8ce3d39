//! Random field laws for the ensembles.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::initial::random_field;
use crate::lp::DyadicPartition;
use crate::spectral::ops::leray_project;
use crate::spectral::{Grid, SpectralField, VectorField2};

/// Random-phase field (`coherent = false`), or a randomly translated
/// deterministic bump `sum_n w(n) cos(n.(x - x0))` with `x0` on the padded
/// grid, which concentrates every dyadic block near one point.
pub fn scalar<R: Rng>(grid: &Grid, rng: &mut R, decay: f64, coherent: bool) -> SpectralField {
    let w = |k: f64| (1.0 + k).powf(-decay);
    if !coherent {
        return random_field(grid, rng, w);
    }
    let m = grid.m();
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let x0 = [
        rng.random_range(0..m) as f64 * h,
        rng.random_range(0..m) as f64 * h,
    ];
    let amp: f64 = rng.sample(StandardNormal);
    let (k1, k2, k_sq) = (grid.k1(), grid.k2(), grid.k_sq());
    let active = grid.active();
    let coeffs: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            if active[i] && k_sq[i] > 0.0 {
                Complex64::from_polar(amp * w(k_sq[i].sqrt()), -(k1[i] * x0[0] + k2[i] * x0[1]))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let mut f = SpectralField::from_coeffs(grid, coeffs).expect("length matches grid");
    f.make_hermitian();
    f
}

pub fn vector<R: Rng>(grid: &Grid, rng: &mut R, decay: f64, coherent: bool) -> VectorField2 {
    VectorField2([
        scalar(grid, rng, decay, coherent),
        scalar(grid, rng, decay, coherent),
    ])
}

pub fn solenoidal<R: Rng>(grid: &Grid, rng: &mut R, decay: f64, coherent: bool) -> VectorField2 {
    leray_project(&vector(grid, rng, decay, coherent))
}

/// Flat-spectrum field restricted to dyadic block `q`.
pub fn block<R: Rng>(part: &DyadicPartition, rng: &mut R, q: i32, coherent: bool) -> SpectralField {
    scalar(part.grid(), rng, 0.0, coherent).apply_multiplier(part.block(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::rng_from_seed;
    use crate::spectral::norms::lp_norm;

    #[test]
    fn coherent_peak_on_padded_grid() {
        let g = Grid::with_size(32).unwrap();
        let f = scalar(&g, &mut rng_from_seed(1), 1.0, true);
        // all modes add up in phase at x0, where |f| = sum |f_n|
        let peak: f64 = f.coeffs().iter().map(|c| c.norm()).sum();
        assert!((lp_norm(&f, f64::INFINITY) - peak).abs() <= 1e-12 * peak);
        let s = f.to_real_samples();
        assert!(s.iter().all(|v| v.abs() <= peak * (1.0 + 1e-12)));
    }

    #[test]
    fn block_support() {
        let g = Grid::with_size(32).unwrap();
        let part = DyadicPartition::new(&g);
        let f = block(&part, &mut rng_from_seed(2), 2, false);
        for (c, p) in f.coeffs().iter().zip(part.block(2)) {
            if *p == 0.0 {
                assert_eq!(c.norm(), 0.0);
            }
        }
        assert!(f.is_real());
    }
}
