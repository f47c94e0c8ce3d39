//! Energy balance and uniqueness functionals.

pub mod record;
pub mod uniqueness;

pub use record::{dissipation_with, total_dissipation, total_energy, Energy, EnergyRecord};
pub use uniqueness::{f_bound, frak_d, phi, FrakD, UniquenessRecord};
