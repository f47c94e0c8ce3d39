//! Deterministic initial data: fixed profiles and seeded random fields.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::leslie::State;
use crate::spectral::norms::l2_norm_vector;
use crate::spectral::ops::leray_project;
use crate::spectral::{Grid, SpectralField, VectorField2};

/// The generator used everywhere a seed appears.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real, mean-zero random field with `f_n ~ weight(|n|) * (g1 + i g2)`.
/// Every mode draws two normals, inactive ones included, so the stream does
/// not depend on the padding.
pub fn random_field<R: Rng>(
    grid: &Grid,
    rng: &mut R,
    weight: impl Fn(f64) -> f64,
) -> SpectralField {
    let k_sq = grid.k_sq();
    let active = grid.active();
    let coeffs: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            if active[i] && k_sq[i] > 0.0 {
                Complex64::new(re, im) * weight(k_sq[i].sqrt())
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let mut f = SpectralField::from_coeffs(grid, coeffs).expect("length matches grid");
    f.make_hermitian();
    f
}

/// Random vector field with `(1+|n|)^{-decay}` spectrum scaled to unit `L^2`
/// norm; Leray-projected when `solenoidal`.
pub fn random_vector<R: Rng>(
    grid: &Grid,
    rng: &mut R,
    decay: f64,
    solenoidal: bool,
) -> VectorField2 {
    let w = |k: f64| (1.0 + k).powf(-decay);
    let mut v = VectorField2([random_field(grid, rng, w), random_field(grid, rng, w)]);
    if solenoidal {
        v = leray_project(&v);
    }
    let norm = l2_norm_vector(&v);
    if norm > 0.0 {
        v = v.scale(1.0 / norm);
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub seed: u64,
    /// Spectral decay exponent `s0` of the velocity; the director
    /// perturbation decays one power faster.
    pub decay: f64,
    /// `||u0||_{L^2}`, and `||d0 - e1||_{L^2}`.
    pub amplitude: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile {
    /// `u = 0`, `d = (1, 0)`.
    RestUnit,
    /// `u = (a sin y, 0)`, `d = (1, 0)`.
    Shear {
        amplitude: f64,
    },
    /// `u = 0` and a constant director.
    Uniform {
        director: [f64; 2],
    },
    Random(RandomSpec),
}

impl Profile {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Profile::RestUnit => true,
            Profile::Shear { amplitude } => amplitude.is_finite(),
            Profile::Uniform { director } => director.iter().all(|d| d.is_finite()),
            Profile::Random(r) => {
                r.decay.is_finite() && r.amplitude.is_finite() && r.amplitude >= 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("invalid initial profile {self:?}")))
        }
    }
}

pub fn generate_initial(grid: &Grid, profile: &Profile) -> Result<State> {
    profile.validate()?;
    let state = match *profile {
        Profile::RestUnit => State::rest_unit(grid),
        Profile::Shear { amplitude } => State {
            u: VectorField2::from_fns(grid, |_, y| amplitude * y.sin(), |_, _| 0.0),
            d: VectorField2::constant(grid, [1.0, 0.0]),
            t: 0.0,
        },
        Profile::Uniform { director } => State {
            u: VectorField2::zeros(grid),
            d: VectorField2::constant(grid, director),
            t: 0.0,
        },
        Profile::Random(spec) => {
            let mut rng = rng_from_seed(spec.seed);
            let u = random_vector(grid, &mut rng, spec.decay, true).scale(spec.amplitude);
            let mut d =
                random_vector(grid, &mut rng, spec.decay + 1.0, false).scale(spec.amplitude);
            d.0[0].coeffs_mut()[0] = Complex64::new(1.0, 0.0);
            State { u, d, t: 0.0 }
        }
    };
    Ok(state)
}

/// Twin-run perturbation: `delta` times unit-`L^2` random fields with the
/// given decay, a solenoidal one for the velocity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Perturbation {
    pub seed: u64,
    pub delta: f64,
    pub decay: f64,
}

impl Perturbation {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::config(format!(
                "perturbation amplitude {} must be >= 0",
                self.delta
            )));
        }
        if !self.decay.is_finite() {
            return Err(Error::config("perturbation decay must be finite"));
        }
        Ok(())
    }

    /// `delta = 0` returns an exact copy.
    pub fn apply(&self, state: &State) -> Result<State> {
        self.validate()?;
        if self.delta == 0.0 {
            return Ok(state.clone());
        }
        let grid = state.grid();
        let mut rng = rng_from_seed(self.seed);
        let du = random_vector(grid, &mut rng, self.decay, true);
        let dd = random_vector(grid, &mut rng, self.decay + 1.0, false);
        let mut out = state.clone();
        out.u.axpy(self.delta, &du);
        out.d.axpy(self.delta, &dd);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ops::divergence_residual;

    fn spec(seed: u64) -> Profile {
        Profile::Random(RandomSpec {
            seed,
            decay: 2.0,
            amplitude: 1.0,
        })
    }

    #[test]
    fn deterministic_per_seed() {
        let g = Grid::with_size(32).unwrap();
        let a = generate_initial(&g, &spec(7)).unwrap();
        let b = generate_initial(&g, &spec(7)).unwrap();
        let c = generate_initial(&g, &spec(8)).unwrap();
        assert!(a.bit_eq(&b));
        assert!(!a.bit_eq(&c));
    }

    #[test]
    fn random_state_properties() {
        let g = Grid::with_size(64).unwrap();
        let s = generate_initial(&g, &spec(3)).unwrap();
        assert!(divergence_residual(&s.u) <= 1e-13);
        assert_eq!(s.u.x().mean(), Complex64::new(0.0, 0.0));
        assert_eq!(s.d.x().mean(), Complex64::new(1.0, 0.0));
        assert!((l2_norm_vector(&s.u) - 1.0).abs() < 1e-12);
        assert!(s.u.x().is_real() && s.d.y().is_real());
        assert!(State::new(s.u.clone(), s.d.clone(), 0.0).is_ok());
    }

    #[test]
    fn rest_unit_profile() {
        let g = Grid::with_size(8).unwrap();
        let s = generate_initial(&g, &Profile::RestUnit).unwrap();
        assert!(s.bit_eq(&State::rest_unit(&g)));
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let g = Grid::with_size(16).unwrap();
        let s = generate_initial(&g, &spec(1)).unwrap();
        let p = Perturbation {
            seed: 5,
            delta: 0.0,
            decay: 2.0,
        };
        assert!(p.apply(&s).unwrap().bit_eq(&s));
        let p = Perturbation { delta: 1e-6, ..p };
        let t = p.apply(&s).unwrap();
        let (du, _) = t.difference(&s).unwrap();
        assert!((l2_norm_vector(&du) - 1e-6).abs() < 1e-12);
        assert!(Perturbation { delta: -1.0, ..p }.apply(&s).is_err());
    }
}
