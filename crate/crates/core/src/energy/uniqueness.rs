//! Functionals of the difference of two solutions.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::leslie::physics::strain_and_vorticity;
use crate::leslie::State;
use crate::lp::DyadicPartition;
use crate::spectral::norms::{hs_norm_sq, weighted_energy, HsForm};
use crate::spectral::{SpectralField, VectorField2};

/// The four nonnegative parts of the dissipation functional.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrakD {
    /// `nu ||grad du||^2_{H^{-1/2}}`
    pub velocity: f64,
    /// `||grad dd||^2_{H^{1/2}}`
    pub director: f64,
    /// `2 sum_q 2^{-q} int |Delta_q dA S_{q-1} d1|^2`
    pub strain_vector: f64,
    /// `sum_q 2^{-q} int |Delta_q dA : S_{q-1}(d1 (x) d1)|^2`
    pub strain_scalar: f64,
}

impl FrakD {
    pub fn total(&self) -> f64 {
        self.velocity + self.director + self.strain_vector + self.strain_scalar
    }

    pub fn components(&self) -> [f64; 4] {
        [
            self.velocity,
            self.director,
            self.strain_vector,
            self.strain_scalar,
        ]
    }
}

/// Everything the twin experiment records at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniquenessRecord {
    pub t: f64,
    pub phi: f64,
    pub frak_d: FrakD,
    pub du_hm12: f64,
    pub dd_h12: f64,
    pub grad_du_hm12: f64,
    pub grad_dd_h12: f64,
    pub f_hat: f64,
}

impl UniquenessRecord {
    pub fn new(part: &DyadicPartition, s1: &State, s2: &State, nu: f64) -> Result<Self> {
        let (du, dd) = s1.difference(s2)?;
        check(part, &du)?;
        let frak_d = frak_d(part, s1, s2, nu)?;
        let du_hm12 = vector_norm_sq(part, &du, -0.5, false);
        let dd_h12 = vector_norm_sq(part, &dd, 0.5, false);
        Ok(Self {
            t: s1.t,
            phi: 0.5 * (du_hm12 + dd_h12),
            frak_d,
            du_hm12: du_hm12.sqrt(),
            dd_h12: dd_h12.sqrt(),
            grad_du_hm12: vector_norm_sq(part, &du, -0.5, true).sqrt(),
            grad_dd_h12: vector_norm_sq(part, &dd, 0.5, true).sqrt(),
            f_hat: f_bound(part, s1, s2)?,
        })
    }
}

fn check(part: &DyadicPartition, u: &VectorField2) -> Result<()> {
    if u.grid() != part.grid() {
        return Err(Error::SizeMismatch {
            expected: part.grid().n(),
            found: u.grid().n(),
        });
    }
    Ok(())
}

/// `||v||^2_{H^s}` in the LP form; with `grad`, of `grad v` instead.
fn vector_norm_sq(part: &DyadicPartition, v: &VectorField2, s: f64, grad: bool) -> f64 {
    let mut w = part.sobolev_weight(s);
    if grad {
        for (wi, k) in w.iter_mut().zip(part.grid().k_sq()) {
            *wi *= k;
        }
    }
    4.0 * PI * PI * v.0.iter().map(|f| weighted_energy(f, &w)).sum::<f64>()
}

/// `1/2 (||du||^2_{H^{-1/2}} + ||dd||^2_{H^{1/2}})`.
pub fn phi(part: &DyadicPartition, s1: &State, s2: &State) -> Result<f64> {
    let (du, dd) = s1.difference(s2)?;
    check(part, &du)?;
    Ok(0.5 * (vector_norm_sq(part, &du, -0.5, false) + vector_norm_sq(part, &dd, 0.5, false)))
}

pub fn frak_d(part: &DyadicPartition, s1: &State, s2: &State, nu: f64) -> Result<FrakD> {
    let (du, dd) = s1.difference(s2)?;
    check(part, &du)?;
    let grid = part.grid();
    let area = grid.padded_cell_area();
    let (a, _) = strain_and_vorticity(&du);
    let a_parts = [a.get(0, 0), a.get(0, 1), a.get(1, 1)];

    // d1 (x) d1, truncated
    let d1 = &s1.d;
    let dphys = grid.inverse_padded_real(&[d1.x().coeffs(), d1.y().coeffs()]);
    let prod: Vec<Vec<f64>> = [(0, 0), (0, 1), (1, 1)]
        .iter()
        .map(|&(i, j)| dphys[i].iter().zip(&dphys[j]).map(|(x, y)| x * y).collect())
        .collect();
    let dd_coeffs = grid.forward_padded_real(&[&prod[0], &prod[1], &prod[2]]);

    let mut strain_vector = 0.0;
    let mut strain_scalar = 0.0;
    for q in 1..=part.q_max() {
        let block = part.block(q);
        let low = part.low_pass(q - 1);
        let aq: Vec<SpectralField> = a_parts.iter().map(|f| f.apply_multiplier(block)).collect();
        // real fields share complex transforms, so skip empty blocks to keep
        // cross-talk out of an exact zero
        if aq.iter().all(|f| f.max_abs_coeff() == 0.0) {
            continue;
        }
        let low_d: Vec<Vec<_>> =
            d1.0.iter()
                .map(|f| f.coeffs().iter().zip(low).map(|(c, m)| c * m).collect())
                .collect();
        let low_dd: Vec<Vec<_>> = dd_coeffs
            .iter()
            .map(|c| c.iter().zip(low).map(|(c, m)| c * m).collect())
            .collect();
        let p = grid.inverse_padded_real(&[
            aq[0].coeffs(),
            aq[1].coeffs(),
            aq[2].coeffs(),
            &low_d[0],
            &low_d[1],
            &low_dd[0],
            &low_dd[1],
            &low_dd[2],
        ]);
        let (mut sv, mut ss) = (0.0, 0.0);
        for k in 0..p[0].len() {
            let (a00, a01, a11) = (p[0][k], p[1][k], p[2][k]);
            let (x, y) = (p[3][k], p[4][k]);
            let v0 = a00 * x + a01 * y;
            let v1 = a01 * x + a11 * y;
            sv += v0 * v0 + v1 * v1;
            let c = a00 * p[5][k] + 2.0 * a01 * p[6][k] + a11 * p[7][k];
            ss += c * c;
        }
        let w = 2f64.powi(-q);
        strain_vector += w * sv * area;
        strain_scalar += w * ss * area;
    }

    Ok(FrakD {
        velocity: nu * vector_norm_sq(part, &du, -0.5, true),
        director: vector_norm_sq(part, &dd, 0.5, true),
        strain_vector: 2.0 * strain_vector,
        strain_scalar,
    })
}

/// Norms of one solution entering the bound.
struct Norms {
    u: f64,
    u_h1: f64,
    grad_u: f64,
    d_h1: f64,
    d_h2: f64,
}

impl Norms {
    fn of(part: &DyadicPartition, s: &State) -> Self {
        let lp = HsForm::LittlewoodPaley(part);
        let sq = |v: &VectorField2, s: f64| v.0.iter().map(|f| hs_norm_sq(f, s, lp)).sum::<f64>();
        Self {
            u: sq(&s.u, 0.0).sqrt(),
            u_h1: sq(&s.u, 1.0).sqrt(),
            grad_u: vector_norm_sq(part, &s.u, 0.0, true).sqrt(),
            d_h1: sq(&s.d, 1.0).sqrt(),
            d_h2: sq(&s.d, 2.0).sqrt(),
        }
    }
}

/// `||A d||_{L^2}` and `||d . A d||_{L^2}` by padded quadrature.
fn strain_products(s: &State) -> (f64, f64) {
    let grid = s.grid();
    let (a, _) = strain_and_vorticity(&s.u);
    let p = grid.inverse_padded_real(&[
        a.get(0, 0).coeffs(),
        a.get(0, 1).coeffs(),
        a.get(1, 1).coeffs(),
        s.d.x().coeffs(),
        s.d.y().coeffs(),
    ]);
    let (mut ad, mut dad) = (0.0, 0.0);
    for k in 0..p[0].len() {
        let (x, y) = (p[3][k], p[4][k]);
        let v0 = p[0][k] * x + p[1][k] * y;
        let v1 = p[1][k] * x + p[2][k] * y;
        ad += v0 * v0 + v1 * v1;
        let c = x * v0 + y * v1;
        dad += c * c;
    }
    let area = grid.padded_cell_area();
    ((ad * area).sqrt(), (dad * area).sqrt())
}

/// `f1 + f2 + f3 + g1 + g2` with all constants set to one; `4` for two zero
/// states.
pub fn f_bound(part: &DyadicPartition, s1: &State, s2: &State) -> Result<f64> {
    if s1.grid() != s2.grid() {
        return Err(Error::SizeMismatch {
            expected: s1.grid().n(),
            found: s2.grid().n(),
        });
    }
    check(part, &s1.u)?;
    let (a, b) = (Norms::of(part, s1), Norms::of(part, s2));
    let (ad2, dad2) = strain_products(s2);
    let d1h1_2 = a.d_h1 * a.d_h1;
    let d2h1_2 = b.d_h1 * b.d_h1;
    let d1h1_6 = d1h1_2.powi(3);
    let d2h1_6 = d2h1_2.powi(3);
    let dh2_2 = a.d_h2 * a.d_h2 + b.d_h2 * b.d_h2;
    let u_2 = a.u * a.u + b.u * b.u;
    let u_4 = a.u.powi(4) + b.u.powi(4);
    let gu_2 = a.grad_u * a.grad_u + b.grad_u * b.grad_u;
    let tail = a.d_h2 * a.d_h2 + gu_2;

    let f1 = (1.0 + a.u + b.u) * (a.u_h1 * a.u_h1 + b.u_h1 * b.u_h1)
        + (1.0 + a.d_h1 + b.d_h1) * dh2_2
        + d1h1_6
        + d2h1_6
        + ad2 * ad2
        + 1.0;
    let f2 = 1.0 + a.d_h1.powi(3) + b.grad_u * b.grad_u + (1.0 + d1h1_2) * a.d_h2 * a.d_h2;
    let f3 = (1.0 + u_2 + d1h1_6) * dh2_2 + (u_2 + d1h1_2 + d2h1_2) * gu_2 + 1.0;
    let g1 = dad2 * dad2 * (d1h1_2 + d2h1_2)
        + (a.u + b.u) * (d1h1_2 + d2h1_2) * (a.grad_u + b.grad_u)
        + (d1h1_2 + d2h1_2 + d1h1_6 + d2h1_6 + u_4) * tail;
    let g2 = (d1h1_2 + d1h1_6 + u_4) * tail + 1.0;
    Ok(f1 + f2 + f3 + g1 + g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    fn pair(g: &Grid) -> (State, State) {
        let s1 = State::new(
            VectorField2::from_fns(g, |_, y| 0.3 * y.sin(), |x, _| 0.2 * x.cos()),
            VectorField2::from_fns(
                g,
                |x, y| (0.4 * (x + y).sin()).cos(),
                |x, y| (0.4 * (x + y).sin()).sin() + 0.1 * y.cos(),
            ),
            0.0,
        )
        .unwrap();
        let s2 = State::new(
            VectorField2::from_fns(
                g,
                |_, y| 0.1 * (2.0 * y).sin(),
                |x, _| -0.3 * (3.0 * x).cos(),
            ),
            VectorField2::from_fns(g, |x, _| x.cos(), |x, y| x.sin() * y.cos()),
            0.0,
        )
        .unwrap();
        (s1, s2)
    }

    #[test]
    fn identical_states_vanish() {
        let g = Grid::with_size(16).unwrap();
        let part = DyadicPartition::new(&g);
        let (s1, _) = pair(&g);
        assert_eq!(phi(&part, &s1, &s1).unwrap(), 0.0);
        assert_eq!(frak_d(&part, &s1, &s1, 1.0).unwrap().total(), 0.0);
    }

    #[test]
    fn symmetric_and_nonnegative() {
        let g = Grid::with_size(16).unwrap();
        let part = DyadicPartition::new(&g);
        let (s1, s2) = pair(&g);
        assert_eq!(phi(&part, &s1, &s2).unwrap(), phi(&part, &s2, &s1).unwrap());
        let fd = frak_d(&part, &s1, &s2, 0.5).unwrap();
        assert!(fd.components().iter().all(|c| *c > 0.0));
    }

    #[test]
    fn bound_at_zero_is_four() {
        let g = Grid::with_size(16).unwrap();
        let part = DyadicPartition::new(&g);
        let z = State::new(VectorField2::zeros(&g), VectorField2::zeros(&g), 0.0).unwrap();
        assert_eq!(f_bound(&part, &z, &z).unwrap(), 4.0);
        let (s1, s2) = pair(&g);
        assert!(f_bound(&part, &s1, &s2).unwrap() > 4.0);
    }

    #[test]
    fn single_mode_phi() {
        // du = sin(3y) e_1 sits in block 1 only (phi_1(3) = 1), so the
        // H^{-1/2} weight is 2^{-1}.
        let g = Grid::with_size(16).unwrap();
        let part = DyadicPartition::new(&g);
        let s1 = State::new(
            VectorField2::from_fns(&g, |_, y| (3.0 * y).sin(), |_, _| 0.0),
            VectorField2::zeros(&g),
            0.0,
        )
        .unwrap();
        let s2 = State::new(VectorField2::zeros(&g), VectorField2::zeros(&g), 0.0).unwrap();
        let p = phi(&part, &s1, &s2).unwrap();
        assert!((p - 0.5 * 0.5 * 2.0 * PI * PI).abs() < 1e-12);
        let fd = frak_d(&part, &s1, &s2, 1.0).unwrap();
        assert!((fd.velocity - 9.0 * 0.5 * 2.0 * PI * PI).abs() < 1e-11);
        assert_eq!(fd.strain_vector, 0.0);
    }
}
