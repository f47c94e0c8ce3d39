//! The dyadic partition of unity on a grid.

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

const PLATEAU: f64 = 0.75;
const SUPPORT: f64 = 4.0 / 3.0;

fn glue(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Radial cut-off: 1 on `[0, 3/4]`, 0 on `[4/3, inf)`, smooth and
/// nonincreasing in between.
pub fn chi(r: f64) -> f64 {
    if r <= PLATEAU {
        1.0
    } else if r >= SUPPORT {
        0.0
    } else {
        let t = (SUPPORT - r) / (SUPPORT - PLATEAU);
        let a = glue(t);
        a / (a + glue(1.0 - t))
    }
}

/// `phi(r) = chi(r/2) - chi(r)`.
pub fn phi(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// Multiplier tables of `Delta_q` (`q = -1..=q_max`) and `S_q` for one grid.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Grid,
    q_max: i32,
    // chi(2^-j |n|) for j = 0..=q_max+1
    chi: Vec<Vec<f64>>,
    // phi_q(n) for q = -1..=q_max, stored at q+1
    blocks: Vec<Vec<f64>>,
    zeros: Vec<f64>,
    ones: Vec<f64>,
}

impl DyadicPartition {
    pub fn new(grid: &Grid) -> Self {
        let n_max = grid.max_wavenumber();
        let mut q_max = -1;
        while PLATEAU * 2f64.powi(q_max + 1) <= n_max {
            q_max += 1;
        }
        let radius: Vec<f64> = grid.k_sq().iter().map(|k| k.sqrt()).collect();
        let active = grid.active();
        let chi_tables: Vec<Vec<f64>> = (0..=q_max + 1)
            .map(|j| {
                let scale = 2f64.powi(-j);
                radius
                    .iter()
                    .zip(active)
                    .map(|(&r, &a)| if a { chi(scale * r) } else { 0.0 })
                    .collect()
            })
            .collect();
        let mut blocks = Vec::with_capacity(q_max as usize + 2);
        blocks.push(chi_tables[0].clone());
        for q in 0..=q_max as usize {
            let t = chi_tables[q + 1]
                .iter()
                .zip(&chi_tables[q])
                .map(|(a, b)| a - b)
                .collect();
            blocks.push(t);
        }
        let ones = active.iter().map(|&a| if a { 1.0 } else { 0.0 }).collect();
        Self {
            grid: grid.clone(),
            q_max,
            chi: chi_tables,
            blocks,
            zeros: vec![0.0; grid.len()],
            ones,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Largest block index that is not identically zero on the grid.
    pub fn q_max(&self) -> i32 {
        self.q_max
    }

    /// Indices `-1..=q_max`.
    pub fn block_indices(&self) -> std::ops::RangeInclusive<i32> {
        -1..=self.q_max
    }

    /// Multiplier of `Delta_q`; identically zero outside `-1..=q_max`.
    pub fn block(&self, q: i32) -> &[f64] {
        if q < -1 || q > self.q_max {
            &self.zeros
        } else {
            &self.blocks[(q + 1) as usize]
        }
    }

    /// Multiplier of `S_q = sum_{k<q} Delta_k`: zero for `q <= -1`, the identity
    /// on active modes for `q > q_max`.
    pub fn low_pass(&self, q: i32) -> &[f64] {
        if q <= -1 {
            &self.zeros
        } else if q > self.q_max {
            &self.ones
        } else {
            &self.chi[q as usize]
        }
    }

    /// `sum_q 2^{2qs} phi_q(n)^2`, the per-mode weight of the LP `H^s` norm.
    pub fn sobolev_weight(&self, s: f64) -> Vec<f64> {
        let mut w = vec![0.0; self.grid.len()];
        for q in self.block_indices() {
            let c = 2f64.powf(2.0 * q as f64 * s);
            for (wi, p) in w.iter_mut().zip(self.block(q)) {
                *wi += c * p * p;
            }
        }
        w
    }

    fn check(&self, f: &SpectralField) -> Result<()> {
        if f.grid() != &self.grid {
            return Err(Error::SizeMismatch {
                expected: self.grid.n(),
                found: f.grid().n(),
            });
        }
        Ok(())
    }

    pub fn delta_q(&self, f: &SpectralField, q: i32) -> Result<SpectralField> {
        self.check(f)?;
        if q < -1 {
            return Err(Error::domain(format!("block index {q} < -1")));
        }
        Ok(f.apply_multiplier(self.block(q)))
    }

    pub fn s_q(&self, f: &SpectralField, q: i32) -> Result<SpectralField> {
        self.check(f)?;
        if q < 0 {
            return Err(Error::domain(format!("cut-off index {q} < 0")));
        }
        Ok(f.apply_multiplier(self.low_pass(q)))
    }

    /// `Delta_q f` for every `q` in `-1..=q_max`.
    pub fn blocks_of(&self, f: &SpectralField) -> Vec<SpectralField> {
        self.block_indices()
            .map(|q| f.apply_multiplier(self.block(q)))
            .collect()
    }

    /// `||Delta_q f||_{L^2}` for `q = -1..=q_max`.
    pub fn block_l2_norms(&self, f: &SpectralField) -> Vec<f64> {
        let c = 2.0 * std::f64::consts::PI;
        self.block_indices()
            .map(|q| {
                let e: f64 = f
                    .coeffs()
                    .iter()
                    .zip(self.block(q))
                    .map(|(v, p)| p * p * v.norm_sqr())
                    .sum();
                c * e.sqrt()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn chi_profile() {
        assert_eq!(chi(0.0), 1.0);
        assert_eq!(chi(0.75), 1.0);
        assert_eq!(chi(4.0 / 3.0), 0.0);
        assert_eq!(chi(2.0), 0.0);
        let mut prev = 1.0;
        for i in 0..=1000 {
            let r = 0.7 + 0.7 * i as f64 / 1000.0;
            let c = chi(r);
            assert!(c <= prev && c >= 0.0);
            prev = c;
        }
        for i in 0..=1000 {
            assert!(phi(3.0 * i as f64 / 1000.0) >= 0.0);
        }
    }

    #[test]
    fn q_max_rule() {
        let p = DyadicPartition::new(&Grid::with_size(64).unwrap());
        assert_eq!(p.q_max(), 5);
        let p = DyadicPartition::new(&Grid::with_size(128).unwrap());
        assert_eq!(p.q_max(), 6);
        let p = DyadicPartition::new(&Grid::with_size(8).unwrap());
        // |n|_max = 3 sqrt 2
        assert_eq!(p.q_max(), 2);
    }

    #[test]
    fn constant_lives_in_lowest_block() {
        let g = Grid::with_size(16).unwrap();
        let p = DyadicPartition::new(&g);
        let f = SpectralField::constant(&g, 2.5);
        assert_eq!(
            p.delta_q(&f, -1).unwrap().coeff(0, 0),
            Complex64::new(2.5, 0.0)
        );
        for q in 0..=p.q_max() + 2 {
            assert_eq!(p.delta_q(&f, q).unwrap().coeff_energy(), 0.0);
            assert_eq!(p.s_q(&f, q).unwrap().coeff(0, 0), Complex64::new(2.5, 0.0));
        }
    }

    #[test]
    fn mode_three_is_in_block_one() {
        let g = Grid::with_size(16).unwrap();
        let p = DyadicPartition::new(&g);
        let f = SpectralField::mode(&g, 3, 0, one()).unwrap();
        for q in -1..=p.q_max() {
            let e = p.delta_q(&f, q).unwrap().coeff_energy();
            assert_eq!(e, if q == 1 { 1.0 } else { 0.0 });
        }
        assert_eq!(p.s_q(&f, 1).unwrap().coeff_energy(), 0.0);
        assert_eq!(p.s_q(&f, 2).unwrap().coeff(3, 0), one());
    }

    #[test]
    fn block_support_bounds() {
        let g = Grid::with_size(64).unwrap();
        let p = DyadicPartition::new(&g);
        for q in 0..=p.q_max() {
            let lo = 3.0 * 2f64.powi(q - 2);
            let hi = 2f64.powi(q + 3) / 3.0;
            for (i, &m) in p.block(q).iter().enumerate() {
                if m != 0.0 {
                    let r = g.k_sq()[i].sqrt();
                    assert!(r >= lo && r <= hi, "q={q} r={r}");
                }
            }
        }
    }

    #[test]
    fn invalid_indices() {
        let g = Grid::with_size(8).unwrap();
        let p = DyadicPartition::new(&g);
        let f = SpectralField::zeros(&g);
        assert!(matches!(p.delta_q(&f, -2), Err(Error::Domain(_))));
        assert!(matches!(p.s_q(&f, -1), Err(Error::Domain(_))));
        let other = SpectralField::zeros(&Grid::with_size(16).unwrap());
        assert!(p.delta_q(&other, 0).is_err());
    }

    #[test]
    fn sobolev_weight_at_zero_is_sum_of_squares() {
        let g = Grid::with_size(32).unwrap();
        let p = DyadicPartition::new(&g);
        let w = p.sobolev_weight(0.0);
        for (i, wi) in w.iter().enumerate() {
            let direct: f64 = (-1..=p.q_max()).map(|q| p.block(q)[i].powi(2)).sum();
            assert!((wi - direct).abs() < 1e-15);
            if g.active()[i] {
                assert!(*wi > 0.49 && *wi <= 1.0 + 1e-15);
            }
        }
    }
}
