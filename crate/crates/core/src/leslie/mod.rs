//! Simplified Ericksen-Leslie system on the torus.

pub mod coefficients;
pub mod physics;
pub mod solver;
pub mod state;

pub use coefficients::LeslieCoefficients;
pub use physics::{evaluate, Dissipation, Evaluation, Form};
pub use solver::{RunSummary, Sample, Scheme, Solver, SolverConfig};
pub use state::State;
