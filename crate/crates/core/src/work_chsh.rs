//! CHSH-weighted combinations of work moments.
//!
//! Two initial axes `a₁, a₂` (each also fixing the basis of its own initial
//! thermal state) and two final axes `b₁, b₂`, equal `±E` spectra, `U = I`.
//! With `⟨Wⁿ⟩ = f_n(E, β)(1 − a·b)`, the combination
//! `⟨Wⁿ⟩_{11} + ⟨Wⁿ⟩_{12} + ⟨Wⁿ⟩_{21} − ⟨Wⁿ⟩_{22}` is `f_n·(2 − S)` where `S`
//! is the temporal CHSH term. Classical `S ∈ [−2, 2]`; quantum `S ∈ [−2√2, 2√2]`.

use crate::error::{check_beta, check_energy, Result};
use crate::optimize;
use crate::qubit::{BlochVector, TwoLevelHamiltonian};
use crate::temporal_bell::{CHSHSettings, CLASSICAL_CHSH_BOUND, TSIRELSON_BOUND};
use crate::tpm::{jarzynski_average, moment_prefactor, work_moment, ProtocolSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkBellSettings {
    axes: CHSHSettings,
    energy: f64,
    beta: f64,
}

impl WorkBellSettings {
    pub fn new(axes: CHSHSettings, energy: f64, beta: f64) -> Result<Self> {
        Ok(Self { axes, energy: check_energy(energy)?, beta: check_beta(beta)? })
    }

    /// Axes that maximize the order-`n` combination. Odd orders have `f_n ≤ 0`
    /// and peak at `S = +2√2`; even orders have `f_n > 0` and peak at `S = −2√2`.
    pub fn optimal(order: u32, energy: f64, beta: f64) -> Result<Self> {
        let axes = if order % 2 == 1 {
            CHSHSettings::tsirelson()
        } else {
            CHSHSettings::tsirelson().with_final_axes_negated()
        };
        Self::new(axes, energy, beta)
    }

    pub fn axes(&self) -> &CHSHSettings {
        &self.axes
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.axes, self.energy, beta)
    }

    /// Sudden-quench protocol for one (initial, final) axis pair.
    pub fn pair_protocol(&self, initial: BlochVector, final_axis: BlochVector) -> ProtocolSpec {
        let hi = TwoLevelHamiltonian::new(self.energy, initial).expect("energy validated");
        let hf = TwoLevelHamiltonian::new(self.energy, final_axis).expect("energy validated");
        ProtocolSpec::sudden_quench(hi, hf, self.beta).expect("beta validated")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCombination {
    pub order: u32,
    pub value: f64,
    /// `S = a₁·b₁ + a₁·b₂ + a₂·b₁ − a₂·b₂`.
    pub chsh_bloch_term: f64,
}

/// Closed form `f_n·(2 − S)`.
pub fn work_bell_combination(s: &WorkBellSettings, n: u32) -> Result<MomentCombination> {
    let f = moment_prefactor(s.energy, s.beta, n)?;
    let term = s.axes.bloch_value();
    Ok(MomentCombination { order: n, value: f * (2.0 - term), chsh_bloch_term: term })
}

/// The same combination assembled from four independent TPM moment
/// calculations, one protocol per axis pair.
pub fn work_bell_protocol_sum(s: &WorkBellSettings, n: u32) -> Result<f64> {
    let mut total = 0.0;
    for (a, b, sign) in s.axes.signed_pairs() {
        total += sign * work_moment(&s.pair_protocol(a, b), n)?;
    }
    Ok(total)
}

/// Caller-weighted linear combination `Σ wₖ ⟨Wⁿ⟩_{(aₖ, bₖ)}` over arbitrary axis
/// pairs, e.g. for three-setting arrangements.
pub fn weighted_moment_combination(
    energy: f64,
    beta: f64,
    pairs: &[(BlochVector, BlochVector, f64)],
    n: u32,
) -> Result<f64> {
    let settings = WorkBellSettings::new(CHSHSettings::tsirelson(), energy, beta)?;
    let mut total = 0.0;
    for &(a, b, weight) in pairs {
        total += weight * work_moment(&settings.pair_protocol(a, b), n)?;
    }
    Ok(total)
}

fn sorted(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Range of `f_n·(2 − S)` for `S ∈ [−2, 2]`.
pub fn classical_work_bounds(energy: f64, beta: f64, n: u32) -> Result<(f64, f64)> {
    let f = moment_prefactor(energy, beta, n)?;
    Ok(sorted(f * (2.0 - CLASSICAL_CHSH_BOUND), f * (2.0 + CLASSICAL_CHSH_BOUND)))
}

/// Range of `f_n·(2 − S)` for `S ∈ [−2√2, 2√2]`.
pub fn quantum_work_extrema(energy: f64, beta: f64, n: u32) -> Result<(f64, f64)> {
    let f = moment_prefactor(energy, beta, n)?;
    Ok(sorted(f * (2.0 - TSIRELSON_BOUND), f * (2.0 + TSIRELSON_BOUND)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpWorkBell {
    /// `⟨e^{βW}⟩` for (a₁,b₁), (a₁,b₂), (a₂,b₁), (a₂,b₂).
    pub per_pair: [f64; 4],
    pub combination: f64,
}

pub fn exp_work_bell_combination(s: &WorkBellSettings) -> ExpWorkBell {
    let mut per_pair = [0.0; 4];
    let mut combination = 0.0;
    for (i, (a, b, sign)) in s.axes.signed_pairs().into_iter().enumerate() {
        per_pair[i] = jarzynski_average(&s.pair_protocol(a, b));
        combination += sign * per_pair[i];
    }
    ExpWorkBell { per_pair, combination }
}

pub fn temperature_scan(s: &WorkBellSettings, betas: &[f64], n: u32) -> Result<Vec<(f64, f64)>> {
    betas
        .iter()
        .map(|&beta| Ok((beta, work_bell_combination(&s.with_beta(beta)?, n)?.value)))
        .collect()
}

/// Maximizes the order-`n` combination over four axes.
pub fn settings_optimizer(
    energy: f64,
    beta: f64,
    n: u32,
    restarts: usize,
    seed: u64,
) -> Result<(WorkBellSettings, f64)> {
    let f = moment_prefactor(energy, beta, n)?;
    check_beta(beta)?;
    let objective = |angles: &[f64]| {
        CHSHSettings::from_angles(angles).map_or(f64::NEG_INFINITY, |s| f * (2.0 - s.bloch_value()))
    };
    let found = optimize::maximize(objective, 8, restarts, seed)?;
    let settings = WorkBellSettings::new(CHSHSettings::from_angles(&found.params)?, energy, beta)?;
    let value = work_bell_combination(&settings, n)?.value;
    Ok((settings, value))
}
