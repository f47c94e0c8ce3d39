//! Ratio families for the quantitative lemmas.

use super::fields;
use super::{EnsembleSpec, RatioReport};
use crate::error::{Error, Result};
use crate::lp::{commutator, CommutatorKind, DyadicPartition};
use crate::spectral::norms::{hs_norm, lp_norm, lp_norm_components, HsForm};
use crate::spectral::ops::derivative;
use crate::spectral::SpectralField;

/// The `(s, t)` pairs of the product rule that the energy estimates use.
pub const PRODUCT_PAIRS: [(f64, f64); 4] = [(0.5, 0.0), (0.75, -0.25), (0.75, 0.75), (0.0, 0.5)];

/// `(r, p, h)` with `1/p + 1/h = 1/r`.
pub const COMMUTATOR_TRIPLES: [(f64, f64, f64); 3] = [
    (2.0, 4.0, 4.0),
    (2.0, 2.0, f64::INFINITY),
    (4.0 / 3.0, 2.0, 4.0),
];

pub const SOBOLEV_EXPONENTS: [f64; 5] = [4.0, 8.0, 16.0, 32.0, 64.0];

// Recorded caps: roughly ten times the largest ratio seen over 100 trials at
// N = 64 and N = 128.
const CAP_BERNSTEIN: f64 = 20.0;
const CAP_SN_LINF: f64 = 3.0;
const CAP_SOBOLEV: f64 = 3.0;
const CAP_PRODUCT: f64 = 2.0;
const CAP_COMMUTATOR: f64 = 5.0;
const CAP_TAILS: f64 = 5.0;

fn label(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        let s = format!("{x:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    if den == 0.0 {
        None
    } else {
        Some(num / den)
    }
}

/// `sup_{|alpha| = k} ||d^alpha f||_{L^p}` for `k` in `{0, 1}`.
fn sup_derivative(f: &SpectralField, k: u32, p: f64) -> f64 {
    match k {
        0 => lp_norm(f, p),
        _ => lp_norm(&derivative(f, 0), p).max(lp_norm(&derivative(f, 1), p)),
    }
}

/// `sup ||Delta_q d^alpha f||_{L^r} / (2^{q(k + 2(1/p - 1/r))} ||Delta_q f||_{L^p})`.
pub fn bernstein_ratio(
    part: &DyadicPartition,
    f: &SpectralField,
    q: i32,
    p: f64,
    r: f64,
    k: u32,
) -> Option<f64> {
    let fq = f.apply_multiplier(part.block(q));
    let den = lp_norm(&fq, p);
    let scale = 2f64.powf(q as f64 * (k as f64 + 2.0 * (1.0 / p - 1.0 / r)));
    ratio(sup_derivative(&fq, k, r), scale * den)
}

/// `2^q ||Delta_q f||_{L^2} / sup ||d^alpha Delta_q f||_{L^2}`, `|alpha| = 1`.
pub fn bernstein_reverse_ratio(part: &DyadicPartition, f: &SpectralField, q: i32) -> Option<f64> {
    let fq = f.apply_multiplier(part.block(q));
    ratio(
        2f64.powi(q) * lp_norm(&fq, 2.0),
        sup_derivative(&fq, 1, 2.0),
    )
}

pub fn verify_bernstein(spec: &EnsembleSpec) -> Result<Vec<RatioReport>> {
    let grid = spec.build_grid()?;
    let part = DyadicPartition::new(&grid);
    let forward: Vec<(f64, f64, u32)> = [(2.0, 2.0), (2.0, f64::INFINITY), (1.0, 2.0)]
        .iter()
        .flat_map(|&(p, r)| [(p, r, 0), (p, r, 1)])
        .collect();
    let qs_fwd: Vec<i32> = part.block_indices().collect();
    let qs_rev: Vec<i32> = (0..=part.q_max()).collect();
    let mut fwd = vec![Vec::with_capacity(spec.n_trials); forward.len()];
    let mut rev = Vec::with_capacity(spec.n_trials);
    for i in 0..spec.n_trials {
        let f = fields::scalar(&grid, &mut spec.trial_rng(i), spec.decay, i % 2 == 1);
        for (fam, &(p, r, k)) in forward.iter().enumerate() {
            fwd[fam].push(
                qs_fwd
                    .iter()
                    .map(|&q| bernstein_ratio(&part, &f, q, p, r, k))
                    .collect(),
            );
        }
        rev.push(
            qs_rev
                .iter()
                .map(|&q| bernstein_reverse_ratio(&part, &f, q))
                .collect(),
        );
    }
    let params = |qs: &[i32]| qs.iter().map(|&q| q as f64).collect::<Vec<_>>();
    let mut out: Vec<RatioReport> = forward
        .iter()
        .zip(&fwd)
        .map(|(&(p, r, k), ratios)| {
            let name = format!("bernstein[p={},r={},k={k}]", label(p), label(r));
            RatioReport::summarize(name, "q", params(&qs_fwd), ratios, CAP_BERNSTEIN)
        })
        .collect();
    out.push(RatioReport::summarize(
        "bernstein[reverse,p=2,k=1]",
        "q",
        params(&qs_rev),
        &rev,
        CAP_BERNSTEIN,
    ));
    Ok(out)
}

/// `||S_N f||_{L^inf} / (sqrt(N) ||f||_{H^1})`.
pub fn sn_linf_ratio(part: &DyadicPartition, f: &SpectralField, n: i32) -> Option<f64> {
    let low = f.apply_multiplier(part.low_pass(n));
    let den = (n as f64).sqrt() * hs_norm(f, 1.0, HsForm::Fourier);
    ratio(lp_norm(&low, f64::INFINITY), den)
}

pub fn verify_sn_linf(spec: &EnsembleSpec) -> Result<Vec<RatioReport>> {
    let grid = spec.build_grid()?;
    let part = DyadicPartition::new(&grid);
    let ns: Vec<i32> = (1..=part.q_max()).collect();
    let ratios: Vec<Vec<Option<f64>>> = (0..spec.n_trials)
        .map(|i| {
            let f = fields::scalar(&grid, &mut spec.trial_rng(i), spec.decay, i % 2 == 1);
            ns.iter().map(|&n| sn_linf_ratio(&part, &f, n)).collect()
        })
        .collect();
    let params = ns.iter().map(|&n| n as f64).collect();
    Ok(vec![RatioReport::summarize(
        "sn-linf",
        "N",
        params,
        &ratios,
        CAP_SN_LINF,
    )])
}

/// `||f||_{L^p} / (sqrt(p) ||f||_{H^s})` with `s = 1 - 2/p`.
pub fn sobolev_ratio(f: &SpectralField, p: f64) -> Result<Option<f64>> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::domain(format!(
            "p = {p} needs 2 <= p < inf, i.e. 0 <= s < 1"
        )));
    }
    let s = 1.0 - 2.0 / p;
    Ok(ratio(
        lp_norm(f, p),
        p.sqrt() * hs_norm(f, s, HsForm::Fourier),
    ))
}

pub fn verify_sobolev_sqrtp(spec: &EnsembleSpec) -> Result<Vec<RatioReport>> {
    let grid = spec.build_grid()?;
    let mut ratios = Vec::with_capacity(spec.n_trials);
    for i in 0..spec.n_trials {
        let f = fields::scalar(&grid, &mut spec.trial_rng(i), spec.decay, i % 2 == 1);
        ratios.push(
            SOBOLEV_EXPONENTS
                .iter()
                .map(|&p| sobolev_ratio(&f, p))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(vec![RatioReport::summarize(
        "sobolev-sqrtp",
        "p",
        SOBOLEV_EXPONENTS.to_vec(),
        &ratios,
        CAP_SOBOLEV,
    )])
}

fn check_product_pair(s: f64, t: f64) -> Result<()> {
    if !(s + t > 0.0 && s < 1.0 && t < 1.0) {
        return Err(Error::domain(format!(
            "product rule needs s + t > 0 and s, t < 1, got ({s}, {t})"
        )));
    }
    Ok(())
}

/// `||fg||_{H^{s+t-1}} / (||f||_{H^s} ||g||_{H^t})`; the product must be
/// resolved by the grid for the ratio to be exact.
pub fn product_ratio(f: &SpectralField, g: &SpectralField, s: f64, t: f64) -> Result<Option<f64>> {
    check_product_pair(s, t)?;
    let fg = f.mul_field(g)?;
    let num = hs_norm(&fg, s + t - 1.0, HsForm::Fourier);
    Ok(ratio(
        num,
        hs_norm(f, s, HsForm::Fourier) * hs_norm(g, t, HsForm::Fourier),
    ))
}

/// Largest cutoff `K` such that products of two `S_K`-filtered fields stay
/// inside the grid.
pub fn product_cutoff(part: &DyadicPartition) -> i32 {
    let limit = part.grid().n() as f64 / 2.0 - 1.0;
    let mut k = 0;
    while (8.0 / 3.0) * 2f64.powi(k + 1) <= limit {
        k += 1;
    }
    k
}

pub fn verify_product_rule(spec: &EnsembleSpec, s: f64, t: f64) -> Result<RatioReport> {
    check_product_pair(s, t)?;
    let grid = spec.build_grid()?;
    let part = DyadicPartition::new(&grid);
    let ks: Vec<i32> = (0..=product_cutoff(&part)).collect();
    let mut ratios = Vec::with_capacity(spec.n_trials);
    for i in 0..spec.n_trials {
        let mut rng = spec.trial_rng(i);
        let coherent = i % 2 == 1;
        let f = fields::scalar(&grid, &mut rng, spec.decay, coherent);
        let g = fields::scalar(&grid, &mut rng, spec.decay, coherent);
        let mut row = Vec::with_capacity(ks.len());
        for &k in &ks {
            let low = part.low_pass(k);
            row.push(product_ratio(
                &f.apply_multiplier(low),
                &g.apply_multiplier(low),
                s,
                t,
            )?);
        }
        ratios.push(row);
    }
    let name = format!("product[s={},t={}]", label(s), label(t));
    let params = ks.iter().map(|&k| k as f64).collect();
    Ok(RatioReport::summarize(
        name,
        "K",
        params,
        &ratios,
        CAP_PRODUCT,
    ))
}

/// `2^q ||[Delta_q, f] g||_{L^r} / (||grad f||_{L^p} ||g||_{L^h})`, or the
/// `S_N` form; zero for constant `f`.
pub fn commutator_ratio(
    part: &DyadicPartition,
    f: &SpectralField,
    g: &SpectralField,
    kind: CommutatorKind,
    (r, p, h): (f64, f64, f64),
) -> Result<Option<f64>> {
    let grad = [derivative(f, 0), derivative(f, 1)];
    if grad.iter().all(|d| d.max_abs_coeff() == 0.0) {
        return Ok(Some(0.0));
    }
    let c = commutator(part, f, g, kind)?;
    let q = match kind {
        CommutatorKind::Block(q) | CommutatorKind::LowPass(q) => q,
    };
    let den = lp_norm_components(&[&grad[0], &grad[1]], p) * lp_norm(g, h);
    Ok(ratio(2f64.powi(q) * lp_norm(&c, r), den))
}

pub fn verify_commutator(spec: &EnsembleSpec) -> Result<Vec<RatioReport>> {
    let grid = spec.build_grid()?;
    let part = DyadicPartition::new(&grid);
    let qs: Vec<i32> = (0..part.q_max()).collect();
    let ns: Vec<i32> = (1..part.q_max()).collect();
    let nt = COMMUTATOR_TRIPLES.len();
    let mut block = vec![Vec::with_capacity(spec.n_trials); nt];
    let mut low = vec![Vec::with_capacity(spec.n_trials); nt];
    for i in 0..spec.n_trials {
        let mut rng = spec.trial_rng(i);
        let coherent = i % 2 == 1;
        let f = fields::scalar(&grid, &mut rng, spec.decay, coherent);
        let mut rows_b = vec![Vec::with_capacity(qs.len()); nt];
        for &q in &qs {
            let g = fields::block(&part, &mut rng, q, coherent);
            for (k, &tr) in COMMUTATOR_TRIPLES.iter().enumerate() {
                rows_b[k].push(commutator_ratio(
                    &part,
                    &f,
                    &g,
                    CommutatorKind::Block(q),
                    tr,
                )?);
            }
        }
        let mut rows_l = vec![Vec::with_capacity(ns.len()); nt];
        for &n in &ns {
            let g = fields::block(&part, &mut rng, n, coherent);
            for (k, &tr) in COMMUTATOR_TRIPLES.iter().enumerate() {
                rows_l[k].push(commutator_ratio(
                    &part,
                    &f,
                    &g,
                    CommutatorKind::LowPass(n),
                    tr,
                )?);
            }
        }
        for k in 0..nt {
            block[k].push(std::mem::take(&mut rows_b[k]));
            low[k].push(std::mem::take(&mut rows_l[k]));
        }
    }
    let mut out = Vec::with_capacity(2 * nt);
    for (k, &(r, p, h)) in COMMUTATOR_TRIPLES.iter().enumerate() {
        let tag = format!("r={},p={},h={}", label(r), label(p), label(h));
        out.push(RatioReport::summarize(
            format!("commutator[delta,{tag}]"),
            "q",
            qs.iter().map(|&q| q as f64).collect(),
            &block[k],
            CAP_COMMUTATOR,
        ));
        out.push(RatioReport::summarize(
            format!("commutator[s_n,{tag}]"),
            "N",
            ns.iter().map(|&q| q as f64).collect(),
            &low[k],
            CAP_COMMUTATOR,
        ));
    }
    Ok(out)
}

/// The two high-frequency tail ratios at cutoff `N`:
/// `||(1-S_N)d||_{L^inf} / (2^{-N/2} ||d||_{H^1}^{1/2} ||d||_{H^2}^{1/2})` and
/// `||(1-S_N)d||_{H^{1/4}} / (2^{-3N/4} ||d||_{H^1})`.
pub fn tail_ratios(
    part: &DyadicPartition,
    d: &SpectralField,
    n: i32,
) -> (Option<f64>, Option<f64>) {
    let low = part.low_pass(n);
    let tail = d.map_symbol(|i| 1.0 - low[i]);
    let h1 = hs_norm(d, 1.0, HsForm::Fourier);
    let h2 = hs_norm(d, 2.0, HsForm::Fourier);
    let nf = n as f64;
    let linf = ratio(
        lp_norm(&tail, f64::INFINITY),
        2f64.powf(-nf / 2.0) * (h1 * h2).sqrt(),
    );
    let h14 = ratio(
        hs_norm(&tail, 0.25, HsForm::Fourier),
        2f64.powf(-0.75 * nf) * h1,
    );
    (linf, h14)
}

pub fn verify_tail_bounds(spec: &EnsembleSpec) -> Result<Vec<RatioReport>> {
    let grid = spec.build_grid()?;
    let part = DyadicPartition::new(&grid);
    let ns: Vec<i32> = (0..part.q_max()).collect();
    let mut linf = Vec::with_capacity(spec.n_trials);
    let mut h14 = Vec::with_capacity(spec.n_trials);
    for i in 0..spec.n_trials {
        let d = fields::scalar(&grid, &mut spec.trial_rng(i), spec.decay, i % 2 == 1);
        let (a, b): (Vec<_>, Vec<_>) = ns.iter().map(|&n| tail_ratios(&part, &d, n)).unzip();
        linf.push(a);
        h14.push(b);
    }
    let params: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    Ok(vec![
        RatioReport::summarize("tails[linf]", "N", params.clone(), &linf, CAP_TAILS),
        RatioReport::summarize("tails[h1/4]", "N", params, &h14, CAP_TAILS),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn setup(n: usize) -> (Grid, DyadicPartition) {
        let g = Grid::with_size(n).unwrap();
        let p = DyadicPartition::new(&g);
        (g, p)
    }

    #[test]
    fn reverse_bernstein_single_mode() {
        let (g, part) = setup(32);
        let f = SpectralField::from_fn(&g, |x, _| (3.0 * x).cos());
        let r = bernstein_reverse_ratio(&part, &f, 1).unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn constant_field_skips_blocks() {
        let (g, part) = setup(16);
        let f = SpectralField::constant(&g, 2.0);
        assert_eq!(bernstein_ratio(&part, &f, 1, 2.0, 2.0, 0), None);
        assert_eq!(bernstein_reverse_ratio(&part, &f, 0), None);
    }

    #[test]
    fn sn_linf_constant() {
        let (g, part) = setup(32);
        let f = SpectralField::constant(&g, 1.5);
        for n in 1..=part.q_max() {
            let r = sn_linf_ratio(&part, &f, n).unwrap();
            let expect = 1.0 / ((n as f64).sqrt() * 2.0 * PI);
            assert!((r - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn sn_linf_flat_blocks() {
        // a coherent field with equal H^1 mass in blocks 0..=N gives a ratio
        // of the same order for every N
        let (g, part) = setup(128);
        let k = g.k_sq();
        let ratios: Vec<f64> = (1..part.q_max())
            .map(|n| {
                let coeffs: Vec<Complex64> = (0..g.len())
                    .map(|i| {
                        let m = k[i].sqrt();
                        let inside = part.low_pass(n)[i] > 0.0;
                        if m > 0.0 && inside && g.active()[i] {
                            Complex64::new(1.0 / (m * m), 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                    .collect();
                let f = SpectralField::from_real_coeffs(&g, coeffs).unwrap();
                sn_linf_ratio(&part, &f, n).unwrap()
            })
            .collect();
        let max = ratios.iter().copied().fold(0.0, f64::max);
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(max / min < 2.0, "{ratios:?}");
    }

    #[test]
    fn sobolev_domain_and_zero() {
        let (g, _) = setup(16);
        let f = SpectralField::from_fn(&g, |x, y| (x + 2.0 * y).sin());
        assert!(sobolev_ratio(&f, f64::INFINITY).is_err());
        assert!(sobolev_ratio(&f, 1.0).is_err());
        let r4 = sobolev_ratio(&f, 4.0).unwrap().unwrap();
        let r64 = sobolev_ratio(&f, 64.0).unwrap().unwrap();
        assert!(r64 < r4);
        assert_eq!(sobolev_ratio(&SpectralField::zeros(&g), 4.0).unwrap(), None);
    }

    #[test]
    fn product_pairs_and_constants() {
        let (g, _) = setup(32);
        let f = SpectralField::from_fn(&g, |x, y| x.sin() + (2.0 * y).cos());
        let c = SpectralField::constant(&g, 3.0);
        for (s, t) in PRODUCT_PAIRS {
            let r = product_ratio(&f, &c, s, t).unwrap().unwrap();
            assert!(r.is_finite() && r > 0.0);
        }
        assert!(product_ratio(&f, &c, 1.0, 0.5).is_err());
        assert!(product_ratio(&f, &c, -0.5, 0.25).is_err());
        let z = SpectralField::zeros(&g);
        assert_eq!(product_ratio(&z, &z, 0.5, 0.0).unwrap(), None);
    }

    #[test]
    fn product_cutoff_fits() {
        assert_eq!(
            product_cutoff(&DyadicPartition::new(&Grid::with_size(64).unwrap())),
            3
        );
        assert_eq!(
            product_cutoff(&DyadicPartition::new(&Grid::with_size(128).unwrap())),
            4
        );
    }

    #[test]
    fn commutator_two_modes() {
        // f = cos x, g = cos(n.x): [Delta_q, f] g has modes n +- e1 with
        // amplitude (phi_q(n +- e1) - phi_q(n)) / 2
        let (g, part) = setup(64);
        let f = SpectralField::from_fn(&g, |x, _| x.cos());
        let h = SpectralField::from_fn(&g, |x, y| (9.0 * x + 5.0 * y).cos());
        let q = 3;
        let c = commutator(&part, &f, &h, CommutatorKind::Block(q)).unwrap();
        let phi = |n1: f64, n2: f64| crate::lp::phi(2f64.powi(-q) * (n1 * n1 + n2 * n2).sqrt());
        let a_plus = 0.5 * (phi(10.0, 5.0) - phi(9.0, 5.0));
        let a_minus = 0.5 * (phi(8.0, 5.0) - phi(9.0, 5.0));
        // each real cosine of amplitude a has L^2 norm a * 2 pi / sqrt(2)
        let exact = 2.0 * PI * ((a_plus * a_plus + a_minus * a_minus) / 2.0).sqrt();
        assert!((lp_norm(&c, 2.0) - exact).abs() < 1e-12);
        let r = commutator_ratio(
            &part,
            &f,
            &h,
            CommutatorKind::Block(q),
            (2.0, 2.0, f64::INFINITY),
        )
        .unwrap()
        .unwrap();
        let grad = 2.0 * PI / 2f64.sqrt();
        assert!((r - 8.0 * exact / grad).abs() < 1e-10);
        let c0 = SpectralField::constant(&g, 2.0);
        assert_eq!(
            commutator_ratio(&part, &c0, &h, CommutatorKind::Block(q), (2.0, 4.0, 4.0)).unwrap(),
            Some(0.0)
        );
    }

    #[test]
    fn tails_examples() {
        let (g, part) = setup(64);
        // max frequency 5 < 3 * 2^{3-2} = 6: no tail beyond S_3, up to the
        // roundoff the sampled construction leaves on other modes
        let f = SpectralField::from_fn(&g, |x, y| (5.0 * x).sin() + (3.0 * x - 4.0 * y).cos());
        let (a, b) = tail_ratios(&part, &f, 3);
        assert!(a.unwrap() < 1e-14 && b.unwrap() < 1e-14);

        // single mode at |n| = 2^N sits where 1 - chi(1) is known
        let n = 3;
        let f = SpectralField::from_fn(&g, |x, _| (8.0 * x).cos());
        let w = 1.0 - crate::lp::chi(1.0);
        let amp = 2.0 * PI / 2f64.sqrt();
        let h1 = amp * 9.0;
        let h2 = amp * 81.0;
        let (a, b) = tail_ratios(&part, &f, n);
        let ea = w / (2f64.powf(-1.5) * (h1 * h2).sqrt());
        let eb = w * amp * 9f64.powf(0.25) / (2f64.powf(-2.25) * h1);
        assert!((a.unwrap() - ea).abs() < 1e-12 * ea);
        assert!((b.unwrap() - eb).abs() < 1e-12 * eb);
    }
}
