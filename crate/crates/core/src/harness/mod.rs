//! Ensemble checks of the inequalities behind the uniqueness proof.
//!
//! Each check evaluates a ratio `lhs / rhs` per random trial while sweeping
//! one parameter (a dyadic index, an exponent, a cutoff). The ensemble
//! estimate of the constant at each parameter is the largest ratio over the
//! trials. A family is uniform when the largest of these estimates is at most
//! [`UNIFORMITY`] times their median over the sweep, and none exceeds the
//! family's recorded cap.

pub mod fields;
pub mod identities;
pub mod lemmas;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{Grid, GridSpec};

pub use identities::{
    verify_cancellation, verify_skew_symmetry, CancellationTerms, IdentityReport,
};
pub use lemmas::{
    verify_bernstein, verify_commutator, verify_product_rule, verify_sn_linf, verify_sobolev_sqrtp,
    verify_tail_bounds, PRODUCT_PAIRS,
};

/// Largest admissible max/median spread across a sweep.
pub const UNIFORMITY: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub seed: u64,
    pub n_trials: usize,
    /// Spectral decay exponent `s` of the random fields, `|f_n| ~ (1+|n|)^{-s}`.
    pub decay: f64,
    pub grid: GridSpec,
}

impl EnsembleSpec {
    pub const MIN_TRIALS: usize = 30;

    pub fn new(grid: GridSpec, seed: u64, n_trials: usize) -> Result<Self> {
        let s = Self {
            seed,
            n_trials,
            decay: 2.0,
            grid,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials < Self::MIN_TRIALS {
            return Err(Error::config(format!(
                "n_trials = {} below the minimum of {}",
                self.n_trials,
                Self::MIN_TRIALS
            )));
        }
        if !self.decay.is_finite() {
            return Err(Error::config("field decay must be finite"));
        }
        Ok(())
    }

    /// Independent generator for trial `i`.
    pub fn trial_rng(&self, i: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i as u64);
        rng
    }

    pub fn build_grid(&self) -> Result<Grid> {
        self.validate()?;
        Grid::new(self.grid)
    }
}

/// Statistics of one ratio family over the ensemble.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport {
    /// Lemma and family, e.g. `bernstein[p=2,r=inf,k=1]`.
    pub lemma: String,
    pub param_name: &'static str,
    pub params: Vec<f64>,
    /// Per parameter, over trials.
    pub ratio_max: Vec<f64>,
    pub ratio_median: Vec<f64>,
    /// Max over the sweep of `ratio_max` divided by its median over the sweep.
    pub spread: f64,
    pub max_ratio: f64,
    pub cap: f64,
    pub trials: usize,
    pub verdict: bool,
}

impl RatioReport {
    /// `ratios[trial][param]`; `None` marks a skipped sample (empty block,
    /// zero field). Parameters where every ratio vanishes are left out of the
    /// spread.
    pub fn summarize(
        lemma: impl Into<String>,
        param_name: &'static str,
        params: Vec<f64>,
        ratios: &[Vec<Option<f64>>],
        cap: f64,
    ) -> Self {
        let np = params.len();
        let finite = ratios
            .iter()
            .flatten()
            .flatten()
            .all(|v| v.is_finite() && *v >= 0.0);
        let mut ratio_max = Vec::with_capacity(np);
        let mut ratio_median = Vec::with_capacity(np);
        for k in 0..np {
            let col: Vec<f64> = ratios.iter().filter_map(|t| t[k]).collect();
            if col.is_empty() {
                ratio_max.push(f64::NAN);
                ratio_median.push(f64::NAN);
            } else {
                ratio_max.push(col.iter().copied().fold(f64::NEG_INFINITY, f64::max));
                ratio_median.push(median(&col));
            }
        }
        let positive: Vec<f64> = ratio_max.iter().copied().filter(|v| *v > 0.0).collect();
        let spread = if positive.len() >= 2 {
            positive.iter().copied().fold(0.0, f64::max) / median(&positive)
        } else {
            1.0
        };
        let max_ratio = ratio_max
            .iter()
            .filter(|v| !v.is_nan())
            .copied()
            .fold(0.0, f64::max);
        Self {
            lemma: lemma.into(),
            param_name,
            params,
            ratio_max,
            ratio_median,
            spread,
            max_ratio,
            cap,
            trials: ratios.len(),
            verdict: finite && spread <= UNIFORMITY && max_ratio <= cap,
        }
    }
}

/// Median of a nonempty slice; the mean of the middle pair for even length.
pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}
