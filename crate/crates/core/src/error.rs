use thiserror::Error;

use crate::qubit::Sign;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Bloch vector norm {norm} is not 1 (tolerance 1e-6)")]
    NonUnitAxis { norm: f64 },

    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("inverse temperature must be finite and >= 0, got {0}")]
    InvalidBeta(f64),

    #[error("energy must be finite and > 0, got {0}")]
    InvalidEnergy(f64),

    #[error("axis cosine must lie in [-1, 1], got {0}")]
    InvalidCosine(f64),

    #[error("operator is not a valid {role}: {reason}")]
    InvalidOperator { role: &'static str, reason: String },

    #[error("moment order {order} outside supported range {min}..={max}")]
    MomentOrderOutOfRange { order: u32, min: u32, max: u32 },

    #[error("operation requires equal initial and final spectra, got {initial} and {final_energy}")]
    UnequalSpectra { initial: f64, final_energy: f64 },

    #[error("backward probability for outcome pair (n={n}, m={m}) vanishes; Crooks ratio undefined")]
    DegenerateSupport { n: Sign, m: Sign },

    #[error("backward mode generated by the initial Hamiltonian needs a time parameter; explicit evolutions have none")]
    BackwardModeUnsupported,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub(crate) fn check_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<f64> {
    if beta.is_finite() && beta >= 0.0 {
        Ok(beta)
    } else {
        Err(Error::InvalidBeta(beta))
    }
}

pub(crate) fn check_energy(energy: f64) -> Result<f64> {
    if energy.is_finite() && energy > 0.0 {
        Ok(energy)
    } else {
        Err(Error::InvalidEnergy(energy))
    }
}
