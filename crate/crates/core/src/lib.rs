//! Single-qubit two-point-measurement thermodynamics.
//!
//! - [`qubit`]: Bloch-representation states, projectors, unitaries, thermal states.
//! - [`tpm`]: joint/work distributions, moments, Jarzynski and Crooks identities.
//! - [`temporal_bell`]: sequential-measurement correlations and CHSH bounds.
//! - [`work_chsh`]: CHSH-weighted combinations of work moments.
//! - [`sampler`]: seeded Monte Carlo estimates of the same quantities.

pub mod error;
pub mod optimize;
pub mod qubit;
pub mod sampler;
pub mod temporal_bell;
pub mod tpm;
pub mod work_chsh;

pub use error::{Error, Result};
pub use qubit::{
    bloch_to_projector, projector_overlap, thermal_density, unitary_from_hamiltonian, BlochVector,
    DensityOperator, Operator2, Projector, Sign, ThermalState, TwoLevelHamiltonian, Unitary,
};
pub use tpm::{Evolution, JointDistribution, ProtocolSpec, WorkDistribution};
