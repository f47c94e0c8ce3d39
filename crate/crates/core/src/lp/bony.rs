//! Paraproducts, remainder, block decomposition of products and commutators.
//!
//! Every bilinear expression is accumulated on the padded physical grid and
//! truncated once, so the identities below hold to roundoff with respect to
//! the grid's truncated product.

use num_complex::Complex64;

use super::partition::DyadicPartition;
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// `f g = T_f g + T_g f + R(f, g)`.
#[derive(Clone, Debug)]
pub struct BonySplit {
    pub t_fg: SpectralField,
    pub t_gf: SpectralField,
    pub remainder: SpectralField,
}

impl BonySplit {
    pub fn sum(&self) -> SpectralField {
        &(&self.t_fg + &self.t_gf) + &self.remainder
    }
}

/// The four terms of `Delta_q(fg)`:
/// commutator, low-pass difference, paraproduct, remainder-type tail.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub commutator: SpectralField,
    pub low_difference: SpectralField,
    pub paraproduct: SpectralField,
    pub tail: SpectralField,
}

impl BlockDecomposition {
    pub fn sum(&self) -> SpectralField {
        &(&(&self.commutator + &self.low_difference) + &self.paraproduct) + &self.tail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommutatorKind {
    /// `[Delta_q, f] g`
    Block(i32),
    /// `[S_N, f] g`
    LowPass(i32),
}

/// Padded samples of every block of a real field, with cumulative low passes.
struct Physical {
    q_max: i32,
    delta: Vec<Vec<f64>>,
    // low[j] holds S_j for j = 0..=q_max+1; S_j = f beyond that
    low: Vec<Vec<f64>>,
}

impl Physical {
    fn new(part: &DyadicPartition, f: &SpectralField) -> Self {
        let grid = part.grid();
        let blocks = part.blocks_of(f);
        let refs: Vec<&[Complex64]> = blocks.iter().map(|b| b.coeffs()).collect();
        let delta = grid.inverse_padded_real(&refs);
        let mut low = Vec::with_capacity(delta.len());
        let mut acc = vec![0.0; grid.padded_len()];
        for d in &delta {
            acc.iter_mut().zip(d).for_each(|(a, v)| *a += v);
            low.push(acc.clone());
        }
        Self {
            q_max: part.q_max(),
            delta,
            low,
        }
    }

    fn delta(&self, q: i32) -> Option<&[f64]> {
        if q < -1 || q > self.q_max {
            None
        } else {
            Some(&self.delta[(q + 1) as usize])
        }
    }

    fn low(&self, q: i32) -> Option<&[f64]> {
        if q <= -1 {
            None
        } else {
            let j = (q as usize).min(self.low.len() - 1);
            Some(&self.low[j])
        }
    }
}

fn fma(acc: &mut [f64], a: &[f64], b: &[f64]) {
    for ((x, y), z) in acc.iter_mut().zip(a).zip(b) {
        *x += y * z;
    }
}

fn check(part: &DyadicPartition, f: &SpectralField, g: &SpectralField) -> Result<()> {
    for h in [f, g] {
        if h.grid() != part.grid() {
            return Err(Error::SizeMismatch {
                expected: part.grid().n(),
                found: h.grid().n(),
            });
        }
    }
    Ok(())
}

fn real_parts(f: &SpectralField) -> (SpectralField, SpectralField) {
    let grid = f.grid();
    let mirror = grid.mirror();
    let c = f.coeffs();
    let mut re = Vec::with_capacity(c.len());
    let mut im = Vec::with_capacity(c.len());
    for (i, v) in c.iter().enumerate() {
        let m = c[mirror[i]].conj();
        re.push((v + m) * 0.5);
        let d = (v - m) * 0.5;
        im.push(Complex64::new(d.im, -d.re));
    }
    (
        SpectralField::from_parts(grid, re, true),
        SpectralField::from_parts(grid, im, true),
    )
}

/// Lift a bilinear map on real fields to complex ones.
fn bilinear<const K: usize>(
    f: &SpectralField,
    g: &SpectralField,
    op: impl Fn(&SpectralField, &SpectralField) -> [SpectralField; K],
) -> [SpectralField; K] {
    if f.is_real() && g.is_real() {
        return op(f, g);
    }
    let (a, b) = real_parts(f);
    let (c, d) = real_parts(g);
    let i = Complex64::new(0.0, 1.0);
    let ac = op(&a, &c);
    let bd = op(&b, &d);
    let ad = op(&a, &d);
    let bc = op(&b, &c);
    std::array::from_fn(|k| &(&ac[k] - &bd[k]) + &(&ad[k] + &bc[k]).scale_complex(i))
}

fn split_real(part: &DyadicPartition, f: &SpectralField, g: &SpectralField) -> [SpectralField; 3] {
    let grid = part.grid();
    let pf = Physical::new(part, f);
    let pg = Physical::new(part, g);
    let len = grid.padded_len();
    let (mut tfg, mut tgf, mut rem) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    for q in part.block_indices() {
        let (df, dg) = (pf.delta(q).unwrap(), pg.delta(q).unwrap());
        if let Some(sf) = pf.low(q - 1) {
            fma(&mut tfg, sf, dg);
        }
        if let Some(sg) = pg.low(q - 1) {
            fma(&mut tgf, sg, df);
        }
        for k in q - 1..=q + 1 {
            if let Some(dgk) = pg.delta(k) {
                fma(&mut rem, df, dgk);
            }
        }
    }
    let out = grid.forward_padded_real(&[&tfg, &tgf, &rem]);
    let mut it = out
        .into_iter()
        .map(|c| SpectralField::from_parts(grid, c, true));
    std::array::from_fn(|_| it.next().unwrap())
}

/// Paraproducts `T_f g = sum_q S_{q-1} f Delta_q g`, `T_g f`, and the remainder
/// `R(f,g) = sum_q Delta_q f (Delta_{q-1} + Delta_q + Delta_{q+1}) g`.
pub fn bony_split(
    part: &DyadicPartition,
    f: &SpectralField,
    g: &SpectralField,
) -> Result<BonySplit> {
    check(part, f, g)?;
    let [t_fg, t_gf, remainder] = bilinear(f, g, |a, b| split_real(part, a, b));
    Ok(BonySplit {
        t_fg,
        t_gf,
        remainder,
    })
}

fn samples_of(grid: &Grid, coeffs: &[Complex64]) -> Vec<f64> {
    grid.inverse_padded_real(&[coeffs]).pop().unwrap()
}

fn decompose_real(
    part: &DyadicPartition,
    f: &SpectralField,
    g: &SpectralField,
    q: i32,
) -> [SpectralField; 4] {
    let grid = part.grid();
    let len = grid.padded_len();
    let pf = Physical::new(part, f);
    let pg = Physical::new(part, g);
    let phi_q = part.block(q);
    let zero = vec![0.0; len];

    // Delta_q Delta_j g is nonzero only for |j - q| <= 1.
    let near: Vec<(i32, Vec<f64>)> = (q - 1..=q + 1)
        .filter(|&j| (-1..=part.q_max()).contains(&j))
        .map(|j| {
            let c: Vec<Complex64> = g
                .coeffs()
                .iter()
                .zip(phi_q)
                .zip(part.block(j))
                .map(|((v, a), b)| v * (a * b))
                .collect();
            (j, samples_of(grid, &c))
        })
        .collect();

    let window = (q - 5).max(-1)..=(q + 5).min(part.q_max());
    let s_q1 = pf.low(q - 1).unwrap_or(&zero);

    // term 1: Delta_q(sum_j S_{j-1}f Delta_j g) - sum_j S_{j-1}f Delta_q Delta_j g
    let mut inner = vec![0.0; len];
    for j in window.clone() {
        if let Some(sf) = pf.low(j - 1) {
            fma(&mut inner, sf, pg.delta(j).unwrap());
        }
    }
    let mut outer = vec![0.0; len];
    let mut diff = vec![0.0; len];
    for (j, dqdj) in &near {
        if let Some(sf) = pf.low(j - 1) {
            fma(&mut outer, sf, dqdj);
        }
        // term 2: (S_{j-1} - S_{q-1}) f Delta_q Delta_j g
        let sj = pf.low(j - 1).unwrap_or(&zero);
        for ((d, a), (b, c)) in diff.iter_mut().zip(sj).zip(s_q1.iter().zip(dqdj)) {
            *d += (a - b) * c;
        }
    }
    // term 3: S_{q-1} f Delta_q g
    let dq_g = pg.delta(q).unwrap_or(&zero);
    let para: Vec<f64> = s_q1.iter().zip(dq_g).map(|(a, b)| a * b).collect();
    // term 4: Delta_q(sum_{j >= q-5} Delta_j f S_{j+2} g)
    let mut tail = vec![0.0; len];
    for j in (q - 5).max(-1)..=part.q_max() {
        fma(&mut tail, pf.delta(j).unwrap(), pg.low(j + 2).unwrap());
    }

    let out = grid.forward_padded_real(&[&inner, &outer, &diff, &para, &tail]);
    let mut out = out
        .into_iter()
        .map(|c| SpectralField::from_parts(grid, c, true));
    let inner = out.next().unwrap().apply_multiplier(phi_q);
    let outer = out.next().unwrap();
    let diff = out.next().unwrap();
    let para = out.next().unwrap();
    let tail = out.next().unwrap().apply_multiplier(phi_q);
    [&inner - &outer, diff, para, tail]
}

/// Four-term decomposition of `Delta_q(fg)`:
/// `sum_{|j-q|<=5} [Delta_q, S_{j-1}f] Delta_j g`,
/// `sum_{|j-q|<=5} (S_{j-1} - S_{q-1}) f Delta_q Delta_j g`,
/// `S_{q-1} f Delta_q g` and `sum_{j>=q-5} Delta_q(Delta_j f S_{j+2} g)`.
pub fn bony_block_decompose(
    part: &DyadicPartition,
    f: &SpectralField,
    g: &SpectralField,
    q: i32,
) -> Result<BlockDecomposition> {
    check(part, f, g)?;
    if q < -1 {
        return Err(Error::domain(format!("block index {q} < -1")));
    }
    let [commutator, low_difference, paraproduct, tail] =
        bilinear(f, g, |a, b| decompose_real(part, a, b, q));
    Ok(BlockDecomposition {
        commutator,
        low_difference,
        paraproduct,
        tail,
    })
}

/// `[Delta_q, f] g = Delta_q(fg) - f Delta_q g`, or the same with `S_N`.
pub fn commutator(
    part: &DyadicPartition,
    f: &SpectralField,
    g: &SpectralField,
    kind: CommutatorKind,
) -> Result<SpectralField> {
    check(part, f, g)?;
    let table = match kind {
        CommutatorKind::Block(q) if q >= -1 => part.block(q),
        CommutatorKind::LowPass(n) if n >= 0 => part.low_pass(n),
        _ => return Err(Error::domain(format!("invalid commutator index {kind:?}"))),
    };
    let fg = f.mul_field(g)?;
    let f_lg = f.mul_field(&g.apply_multiplier(table))?;
    Ok(&fg.apply_multiplier(table) - &f_lg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: &SpectralField, b: &SpectralField) -> f64 {
        (a - b).coeff_energy().sqrt() / b.coeff_energy().sqrt().max(1e-300)
    }

    #[test]
    fn single_modes_split() {
        let g = Grid::with_size(32).unwrap();
        let p = DyadicPartition::new(&g);
        let f = SpectralField::mode(&g, 3, 0, Complex64::new(1.0, 0.0)).unwrap();
        let split = bony_split(&p, &f, &f).unwrap();
        let sum = split.sum();
        assert!((sum.coeff(6, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((sum.coeff_energy() - 1.0).abs() < 1e-14);
        // same block: everything is remainder
        assert!(split.t_fg.coeff_energy() < 1e-30);
    }

    #[test]
    fn constant_factor() {
        let g = Grid::with_size(32).unwrap();
        let p = DyadicPartition::new(&g);
        let c = SpectralField::constant(&g, 2.0);
        let h = SpectralField::from_fn(&g, |x, y| (3.0 * x).sin() + (x - 5.0 * y).cos());
        let split = bony_split(&p, &c, &h).unwrap();
        assert!(rel_err(&split.sum(), &h.scale(2.0)) < 1e-14);
        for q in -1..=p.q_max() {
            let d = bony_block_decompose(&p, &c, &h, q).unwrap();
            let target = p.delta_q(&h.scale(2.0), q).unwrap();
            assert!((&d.sum() - &target).max_abs_coeff() < 1e-14);
        }
    }

    #[test]
    fn commutator_with_constant_vanishes() {
        let g = Grid::with_size(32).unwrap();
        let p = DyadicPartition::new(&g);
        let c = SpectralField::constant(&g, -1.5);
        let h = SpectralField::from_fn(&g, |x, y| (7.0 * x + y).sin());
        for kind in [CommutatorKind::Block(2), CommutatorKind::LowPass(3)] {
            assert!(commutator(&p, &c, &h, kind).unwrap().max_abs_coeff() < 1e-15);
        }
        assert!(commutator(&p, &c, &h, CommutatorKind::Block(-2)).is_err());
    }

    #[test]
    fn commutator_with_constant_second_argument() {
        // [Delta_q, f] c = c (Delta_q f - f 1_{q=-1})
        let g = Grid::with_size(32).unwrap();
        let p = DyadicPartition::new(&g);
        let f = SpectralField::from_fn(&g, |x, y| x.cos() + (3.0 * y).sin());
        let c = SpectralField::constant(&g, 2.0);
        for q in -1..=2 {
            let got = commutator(&p, &f, &c, CommutatorKind::Block(q)).unwrap();
            let mut expected = p.delta_q(&f, q).unwrap();
            if q == -1 {
                expected -= &f;
            }
            assert!((&got - &expected.scale(2.0)).max_abs_coeff() < 1e-14);
        }
    }

    #[test]
    fn complex_inputs_reconstruct() {
        let g = Grid::with_size(16).unwrap();
        let p = DyadicPartition::new(&g);
        let f = SpectralField::mode(&g, 1, 2, Complex64::new(0.3, -0.7)).unwrap();
        let h = SpectralField::mode(&g, -4, 1, Complex64::new(1.1, 0.2)).unwrap();
        let prod = f.mul_field(&h).unwrap();
        assert!(rel_err(&bony_split(&p, &f, &h).unwrap().sum(), &prod) < 1e-13);
        for q in -1..=p.q_max() {
            let d = bony_block_decompose(&p, &f, &h, q).unwrap();
            let target = prod.apply_multiplier(p.block(q));
            assert!((&d.sum() - &target).max_abs_coeff() < 1e-13);
        }
    }
}
