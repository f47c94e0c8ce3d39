//! Pseudo-spectral Ericksen-Leslie solver on the periodic square together with
//! a Littlewood-Paley toolkit and numerical checks of the estimates used in
//! the uniqueness argument.

pub mod config;
pub mod energy;
pub mod error;
pub mod experiment;
pub mod harness;
pub mod initial;
pub mod leslie;
pub mod lp;
pub mod osgood;
pub mod spectral;

pub use energy::{EnergyRecord, UniquenessRecord};
pub use error::{Error, Result};
pub use leslie::{LeslieCoefficients, Scheme, Solver, SolverConfig, State};
pub use lp::DyadicPartition;
pub use spectral::{Grid, GridSpec, Padding, SpectralField, TensorField22, VectorField2};
