use std::f64::consts::PI;

use crate::leslie::physics::{evaluate, Dissipation, Evaluation, Form};
use crate::leslie::{LeslieCoefficients, State};
use crate::spectral::ops::divergence_residual;
use crate::spectral::VectorField2;

/// Kinetic, Dirichlet and potential parts of the total energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Energy {
    pub kinetic: f64,
    /// `1/2 int |grad d|^2`
    pub gradient: f64,
    /// `int W(d)`
    pub potential: f64,
}

impl Energy {
    pub fn elastic(&self) -> f64 {
        self.gradient + self.potential
    }

    pub fn total(&self) -> f64 {
        self.kinetic + self.elastic()
    }
}

/// Energy and dissipation of one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyRecord {
    pub t: f64,
    pub e_total: f64,
    pub e_kinetic: f64,
    pub e_elastic: f64,
    pub d_total: f64,
    pub d_terms: [f64; 5],
    pub form: Form,
    pub div_residual: f64,
}

impl EnergyRecord {
    pub fn new(state: &State, energy: Energy, dissipation: Dissipation) -> Self {
        Self {
            t: state.t,
            e_total: energy.total(),
            e_kinetic: energy.kinetic,
            e_elastic: energy.elastic(),
            d_total: dissipation.total(),
            d_terms: dissipation.terms,
            form: dissipation.form,
            div_residual: divergence_residual(&state.u),
        }
    }

    /// Assemble from a solver evaluation of the same state.
    pub fn from_evaluation(state: &State, ev: &Evaluation) -> Self {
        let energy = Energy {
            kinetic: kinetic_energy(&state.u),
            gradient: dirichlet_energy(&state.d),
            potential: ev.potential,
        };
        Self::new(state, energy, ev.dissipation)
    }
}

fn kinetic_energy(u: &VectorField2) -> f64 {
    0.5 * 4.0 * PI * PI * u.coeff_energy()
}

fn dirichlet_energy(d: &VectorField2) -> f64 {
    let k_sq = d.grid().k_sq();
    let sum: f64 =
        d.0.iter()
            .map(|f| {
                f.coeffs()
                    .iter()
                    .zip(k_sq)
                    .map(|(c, k)| k * c.norm_sqr())
                    .sum::<f64>()
            })
            .sum();
    0.5 * 4.0 * PI * PI * sum
}

/// `int 1/2|u|^2 + 1/2|grad d|^2 + W(d)`; `W` is integrated on the padded grid.
pub fn total_energy(state: &State) -> Energy {
    let grid = state.grid();
    let s = grid.inverse_padded_real(&[state.d.x().coeffs(), state.d.y().coeffs()]);
    let potential: f64 = s[0]
        .iter()
        .zip(&s[1])
        .map(|(a, b)| {
            let w = a * a + b * b - 1.0;
            0.25 * w * w
        })
        .sum::<f64>()
        * grid.padded_cell_area();
    Energy {
        kinetic: kinetic_energy(&state.u),
        gradient: dirichlet_energy(&state.d),
        potential,
    }
}

/// Dissipation rate; the five-term form for the ansatz coefficients, the
/// general form otherwise.
pub fn total_dissipation(state: &State, c: &LeslieCoefficients) -> Dissipation {
    dissipation_with(state, c, Form::for_coefficients(c))
}

pub fn dissipation_with(state: &State, c: &LeslieCoefficients, form: Form) -> Dissipation {
    evaluate(state, c, form).dissipation
}
