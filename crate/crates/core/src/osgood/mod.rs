//! Osgood moduli, the divergence certificate, the comparison equation and
//! the master integral inequality.

pub mod certificate;
pub mod master;
pub mod modulus;
pub mod ode;
pub mod quad;

pub use certificate::{divergence_certificate, Certificate};
pub use master::{check_master_inequality, MasterOptions, MasterReport, OsgoodTrace, ETA, GAMMA};
pub use modulus::{mu, Modulus};
pub use ode::{comparison_ode, ComparisonSolution};
