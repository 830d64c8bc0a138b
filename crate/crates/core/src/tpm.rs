//! Two-point-measurement (TPM) protocol on a qubit.
//!
//! Work is counted as done *by* the system: `W(n, m) = E^i_n − E^f_m`.
//! `ΔF = F_f − F_i`, so the fluctuation identities read
//! `⟨e^{β(W+ΔF)}⟩ = 1` and `p_F(n,m)/p_B(m,n) = e^{−β(W+ΔF)}`.

use crate::error::{check_beta, check_finite, Error, Result};
use crate::qubit::{
    unitary_from_hamiltonian, DensityOperator, Projector, Sign, ThermalState,
    TwoLevelHamiltonian, Unitary,
};

/// Highest work moment order accepted anywhere in the crate.
pub const MAX_MOMENT_ORDER: u32 = 60;

/// Work values closer than this are merged into one support point.
pub const WORK_MERGE_TOL: f64 = 1e-9;

/// Below this the backward probability counts as zero.
pub const CROOKS_DENOMINATOR_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evolution {
    /// `U = I`.
    SuddenQuench,
    /// `U = exp(−i H_f t)`.
    FinalGenerated { time: f64 },
    Explicit(Unitary),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSpec {
    initial: TwoLevelHamiltonian,
    final_hamiltonian: TwoLevelHamiltonian,
    beta: f64,
    evolution: Evolution,
}

impl ProtocolSpec {
    pub fn new(
        initial: TwoLevelHamiltonian,
        final_hamiltonian: TwoLevelHamiltonian,
        beta: f64,
        evolution: Evolution,
    ) -> Result<Self> {
        check_beta(beta)?;
        if let Evolution::FinalGenerated { time } = evolution {
            check_finite("time", time)?;
        }
        Ok(Self { initial, final_hamiltonian, beta, evolution })
    }

    pub fn sudden_quench(
        initial: TwoLevelHamiltonian,
        final_hamiltonian: TwoLevelHamiltonian,
        beta: f64,
    ) -> Result<Self> {
        Self::new(initial, final_hamiltonian, beta, Evolution::SuddenQuench)
    }

    pub fn initial(&self) -> &TwoLevelHamiltonian {
        &self.initial
    }

    pub fn final_hamiltonian(&self) -> &TwoLevelHamiltonian {
        &self.final_hamiltonian
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn evolution(&self) -> &Evolution {
        &self.evolution
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.initial, self.final_hamiltonian, beta, self.evolution)
    }

    pub fn has_equal_spectra(&self) -> bool {
        self.initial.energy() == self.final_hamiltonian.energy()
    }

    /// The forward unitary between the two measurements.
    pub fn unitary(&self) -> Unitary {
        match self.evolution {
            Evolution::SuddenQuench => Unitary::identity(),
            Evolution::FinalGenerated { time } => unitary_from_hamiltonian(&self.final_hamiltonian, time)
                .expect("time validated at construction"),
            Evolution::Explicit(u) => u,
        }
    }

    pub fn initial_state(&self) -> ThermalState {
        ThermalState::new(self.initial, self.beta).expect("beta validated at construction")
    }

    pub fn final_state(&self) -> ThermalState {
        ThermalState::new(self.final_hamiltonian, self.beta).expect("beta validated at construction")
    }

    /// `E^i_n − E^f_m`.
    pub fn work(&self, n: Sign, m: Sign) -> f64 {
        self.initial.level(n) - self.final_hamiltonian.level(m)
    }
}

/// Outcome table indexed by (first measurement, second measurement).
///
/// For the forward protocol that is `(n, m)`; for the backward protocol the
/// first measurement is in the final basis, so the table is `p_B(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    p: [[f64; 2]; 2],
}

impl JointDistribution {
    pub fn get(&self, first: Sign, second: Sign) -> f64 {
        self.p[first.index()][second.index()]
    }

    /// Entries in the fixed order (+,+), (+,−), (−,+), (−,−).
    pub fn entries(&self) -> [((Sign, Sign), f64); 4] {
        let mut out = [((Sign::Plus, Sign::Plus), 0.0); 4];
        let mut i = 0;
        for a in Sign::ALL {
            for b in Sign::ALL {
                out[i] = ((a, b), self.get(a, b));
                i += 1;
            }
        }
        out
    }

    pub fn total(&self) -> f64 {
        self.p.iter().flatten().sum()
    }

    /// Marginal of the first measurement.
    pub fn first_marginal(&self, first: Sign) -> f64 {
        self.p[first.index()].iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkValue {
    pub work: f64,
    pub probability: f64,
}

/// Distribution over distinct work values, sorted by decreasing work.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkDistribution {
    values: Vec<WorkValue>,
}

impl WorkDistribution {
    pub fn values(&self) -> &[WorkValue] {
        &self.values
    }

    pub fn total(&self) -> f64 {
        self.values.iter().map(|v| v.probability).sum()
    }

    pub fn probability_of(&self, work: f64) -> f64 {
        self.values
            .iter()
            .filter(|v| (v.work - work).abs() <= WORK_MERGE_TOL)
            .map(|v| v.probability)
            .sum()
    }
}

/// `tr{P_b V P_a ρ P_a V† P_b}`.
fn sequential_probability(rho: &DensityOperator, first: &Projector, v: &Unitary, second: &Projector) -> f64 {
    let pa = *first.matrix();
    let pb = *second.matrix();
    let vm = *v.matrix();
    let amplitude = pb * vm * pa;
    let p = (amplitude * *rho.matrix() * amplitude.adjoint()).trace().re;
    p.clamp(0.0, 1.0)
}

fn table(
    rho: &DensityOperator,
    first: &TwoLevelHamiltonian,
    v: &Unitary,
    second: &TwoLevelHamiltonian,
) -> JointDistribution {
    let mut p = [[0.0; 2]; 2];
    for a in Sign::ALL {
        for b in Sign::ALL {
            p[a.index()][b.index()] =
                sequential_probability(rho, &first.eigenprojector(a), v, &second.eigenprojector(b));
        }
    }
    JointDistribution { p }
}

/// `p(n,m) = tr{P^f_m U P^i_n ρ_i P^i_n U† P^f_m}` with `ρ_i` thermal in `H_i`.
pub fn joint_distribution(spec: &ProtocolSpec) -> JointDistribution {
    let rho = spec.initial_state().density();
    table(&rho, spec.initial(), &spec.unitary(), spec.final_hamiltonian())
}

pub fn work_distribution(spec: &ProtocolSpec) -> WorkDistribution {
    let joint = joint_distribution(spec);
    let mut values: Vec<WorkValue> = Vec::with_capacity(4);
    for ((n, m), p) in joint.entries() {
        let w = spec.work(n, m);
        match values.iter_mut().find(|v| (v.work - w).abs() <= WORK_MERGE_TOL) {
            Some(v) => v.probability += p,
            None => values.push(WorkValue { work: w, probability: p }),
        }
    }
    values.sort_by(|a, b| b.work.total_cmp(&a.work));
    WorkDistribution { values }
}

/// `ΔF = F_f − F_i = −(1/β) ln(Z_f/Z_i)`; 0 at `β = 0`.
pub fn free_energy_difference(spec: &ProtocolSpec) -> f64 {
    let beta = spec.beta();
    if beta == 0.0 || spec.has_equal_spectra() {
        return 0.0;
    }
    let log_ratio = spec.final_hamiltonian().log_partition(beta) - spec.initial().log_partition(beta);
    -log_ratio / beta
}

/// `Σ p(n,m) e^{β(W(n,m) + ΔF)}`; equals 1 for every protocol.
pub fn jarzynski_average(spec: &ProtocolSpec) -> f64 {
    let beta = spec.beta();
    let delta_f = free_energy_difference(spec);
    joint_distribution(spec)
        .entries()
        .iter()
        .map(|&((n, m), p)| p * (beta * (spec.work(n, m) + delta_f)).exp())
        .sum()
}

fn check_order(order: u32, min: u32) -> Result<u32> {
    if (min..=MAX_MOMENT_ORDER).contains(&order) {
        Ok(order)
    } else {
        Err(Error::MomentOrderOutOfRange { order, min, max: MAX_MOMENT_ORDER })
    }
}

/// `⟨W^k⟩ = Σ p(n,m) W(n,m)^k`.
pub fn work_moment(spec: &ProtocolSpec, k: u32) -> Result<f64> {
    check_order(k, 0)?;
    if k == 0 {
        return Ok(1.0);
    }
    Ok(joint_distribution(spec)
        .entries()
        .iter()
        .map(|&((n, m), p)| p * spec.work(n, m).powi(k as i32))
        .sum())
}

/// `f_n(E, β) = 2^{n−1} E^n (e^{−βE} + (−1)^n e^{βE})/(e^{−βE} + e^{βE})`, so that
/// `⟨W^n⟩ = f_n (1 − s^i·s^f)` for equal spectra and `U = I`.
pub fn moment_prefactor(energy: f64, beta: f64, n: u32) -> Result<f64> {
    crate::error::check_energy(energy)?;
    check_beta(beta)?;
    check_order(n, 1)?;
    // Numerator and denominator both divided by e^{βE}.
    let decay = (-2.0 * beta * energy).exp();
    let parity = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let hyperbolic = (decay + parity) / (decay + 1.0);
    Ok(2f64.powi(n as i32 - 1) * energy.powi(n as i32) * hyperbolic)
}

/// Closed-form `n`-th moment for equal `±E` spectra and axis cosine `c`.
pub fn moment_closed_form(energy: f64, beta: f64, c: f64, n: u32) -> Result<f64> {
    if !(c.abs() <= 1.0) {
        return Err(Error::InvalidCosine(c));
    }
    Ok(moment_prefactor(energy, beta, n)? * (1.0 - c))
}

/// `Σ_{k=0}^{K} β^k/k! ⟨W^k⟩`, the truncated expansion of `⟨e^{βW}⟩`.
pub fn taylor_partial_sum(spec: &ProtocolSpec, terms: u32) -> Result<f64> {
    if !spec.has_equal_spectra() {
        return Err(Error::UnequalSpectra {
            initial: spec.initial().energy(),
            final_energy: spec.final_hamiltonian().energy(),
        });
    }
    check_order(terms, 0)?;
    let beta = spec.beta();
    let mut coefficient = 1.0;
    let mut sum = 0.0;
    for k in 0..=terms {
        if k > 0 {
            coefficient *= beta / k as f64;
        }
        sum += coefficient * work_moment(spec, k)?;
    }
    Ok(sum)
}

/// How the backward protocol evolves between its two measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BackwardMode {
    /// `U⁻¹ = U†` of the forward unitary.
    #[default]
    ExactInverse,
    /// `exp(+i H_i t)` with the forward protocol's time. Only the true inverse
    /// when `H_i = H_f`.
    InitialGenerated,
}

/// `p_B(m,n) = tr{P^i_n U⁻¹ P^f_m ρ_f P^f_m U P^i_n}`, indexed `(m, n)`.
pub fn backward_joint_distribution(spec: &ProtocolSpec) -> JointDistribution {
    backward_joint_distribution_with(spec, BackwardMode::ExactInverse)
        .expect("exact inverse is always defined")
}

pub fn backward_joint_distribution_with(spec: &ProtocolSpec, mode: BackwardMode) -> Result<JointDistribution> {
    let back = match mode {
        BackwardMode::ExactInverse => spec.unitary().inverse(),
        BackwardMode::InitialGenerated => match spec.evolution() {
            Evolution::SuddenQuench => Unitary::identity(),
            Evolution::FinalGenerated { time } => unitary_from_hamiltonian(spec.initial(), -time)?,
            Evolution::Explicit(_) => return Err(Error::BackwardModeUnsupported),
        },
    };
    let rho = spec.final_state().density();
    Ok(table(&rho, spec.final_hamiltonian(), &back, spec.initial()))
}

/// `p_F(n,m)/p_B(m,n)` for the exact-inverse backward protocol.
pub fn crooks_ratio(spec: &ProtocolSpec, n: Sign, m: Sign) -> Result<f64> {
    let forward = joint_distribution(spec).get(n, m);
    let backward = backward_joint_distribution(spec).get(m, n);
    if !(backward > CROOKS_DENOMINATOR_FLOOR) {
        return Err(Error::DegenerateSupport { n, m });
    }
    Ok(forward / backward)
}

/// `e^{−β(W(n,m) + ΔF)}`, the value [`crooks_ratio`] must reproduce.
pub fn crooks_prediction(spec: &ProtocolSpec, n: Sign, m: Sign) -> f64 {
    (-spec.beta() * (spec.work(n, m) + free_energy_difference(spec))).exp()
}
