//! Temporal Bell correlations: two sequential dichotomic measurements on one qubit.
//!
//! For projective measurements along Bloch axes `a` then `b`, the correlation
//! `⟨AB⟩` equals `a·b` for every input state. The CHSH combination of four such
//! correlations is therefore bounded by 2√2, while ±1-valued classical
//! assignments stay within ±2.

use std::f64::consts::SQRT_2;

use crate::error::Result;
use crate::optimize;
use crate::qubit::{BlochVector, DensityOperator, Projector, Sign};

/// Slack on the three-setting violation predicate.
pub const VIOLATION_SLACK: f64 = 1e-12;

pub const TSIRELSON_BOUND: f64 = 2.0 * SQRT_2;
pub const CLASSICAL_CHSH_BOUND: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTimeSetting {
    pub first: BlochVector,
    pub second: BlochVector,
    pub state: DensityOperator,
}

impl TwoTimeSetting {
    pub fn new(first: BlochVector, second: BlochVector, state: DensityOperator) -> Self {
        Self { first, second, state }
    }

    /// `tr{P^b_β P^a_α ρ P^a_α}` indexed `[α][β]`.
    pub fn sequential_probabilities(&self) -> [[f64; 2]; 2] {
        let rho = *self.state.matrix();
        let mut out = [[0.0; 2]; 2];
        for alpha in Sign::ALL {
            let pa = *Projector::new(self.first, alpha).matrix();
            let post = pa * rho * pa;
            for beta in Sign::ALL {
                let pb = *Projector::new(self.second, beta).matrix();
                out[alpha.index()][beta.index()] = (pb * post).trace().re;
            }
        }
        out
    }
}

/// `Σ αβ tr{P^b_β P^a_α ρ P^a_α}`.
pub fn two_time_correlation(setting: &TwoTimeSetting) -> f64 {
    let p = setting.sequential_probabilities();
    let mut sum = 0.0;
    for alpha in Sign::ALL {
        for beta in Sign::ALL {
            sum += alpha.value() * beta.value() * p[alpha.index()][beta.index()];
        }
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CHSHSettings {
    pub a1: BlochVector,
    pub a2: BlochVector,
    pub b1: BlochVector,
    pub b2: BlochVector,
}

impl CHSHSettings {
    pub fn new(a1: BlochVector, a2: BlochVector, b1: BlochVector, b2: BlochVector) -> Self {
        Self { a1, a2, b1, b2 }
    }

    /// `a₁=z, a₂=x, b₁=(z+x)/√2, b₂=(z−x)/√2`, giving `S = 2√2`.
    pub fn tsirelson() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a1: BlochVector::Z,
            a2: BlochVector::X,
            b1: BlochVector::normalized(h, 0.0, h).expect("nonzero"),
            b2: BlochVector::normalized(-h, 0.0, h).expect("nonzero"),
        }
    }

    /// `a₁=z, a₂=(z+x)/√2, b₁=z, b₂=(z−x)/√2`. A common textbook choice that
    /// reaches only `1+√2` for sequential correlators; a warm start for the
    /// optimizer.
    pub fn textbook_start() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a1: BlochVector::Z,
            a2: BlochVector::normalized(h, 0.0, h).expect("nonzero"),
            b1: BlochVector::Z,
            b2: BlochVector::normalized(-h, 0.0, h).expect("nonzero"),
        }
    }

    /// Final axes negated; flips the sign of the CHSH term.
    pub fn with_final_axes_negated(&self) -> Self {
        Self { b1: -self.b1, b2: -self.b2, ..*self }
    }

    /// `a₁·b₁ + a₁·b₂ + a₂·b₁ − a₂·b₂`.
    pub fn bloch_value(&self) -> f64 {
        self.a1.dot(&self.b1) + self.a1.dot(&self.b2) + self.a2.dot(&self.b1) - self.a2.dot(&self.b2)
    }

    /// Eight angles `(θ, φ)` for `a₁, a₂, b₁, b₂` in that order.
    pub fn to_angles(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (i, v) in [self.a1, self.a2, self.b1, self.b2].iter().enumerate() {
            let (t, p) = v.angles();
            out[2 * i] = t;
            out[2 * i + 1] = p;
        }
        out
    }

    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        assert_eq!(angles.len(), 8, "CHSH settings need eight angles");
        let v = |i: usize| BlochVector::from_angles(angles[2 * i], angles[2 * i + 1]);
        Ok(Self::new(v(0)?, v(1)?, v(2)?, v(3)?))
    }

    /// Pairs in CHSH order with their signs: (a₁,b₁,+), (a₁,b₂,+), (a₂,b₁,+), (a₂,b₂,−).
    pub fn signed_pairs(&self) -> [(BlochVector, BlochVector, f64); 4] {
        [
            (self.a1, self.b1, 1.0),
            (self.a1, self.b2, 1.0),
            (self.a2, self.b1, 1.0),
            (self.a2, self.b2, -1.0),
        ]
    }
}

/// CHSH value from four sequential-measurement correlations on `state`.
pub fn chsh_value(state: &DensityOperator, s: &CHSHSettings) -> f64 {
    s.signed_pairs()
        .iter()
        .map(|&(a, b, sign)| sign * two_time_correlation(&TwoTimeSetting::new(a, b, *state)))
        .sum()
}

/// Deterministic ±1 assignment to `A₁, A₂, B₁, B₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalStrategy {
    pub a1: i8,
    pub a2: i8,
    pub b1: i8,
    pub b2: i8,
}

impl ClassicalStrategy {
    pub fn value(&self) -> f64 {
        let (a1, a2, b1, b2) = (self.a1 as f64, self.a2 as f64, self.b1 as f64, self.b2 as f64);
        a1 * b1 + a2 * b1 + a1 * b2 - a2 * b2
    }

    /// All 16 strategies, bit `k` of the index selecting −1 for the k-th variable.
    pub fn all() -> impl Iterator<Item = ClassicalStrategy> {
        (0u8..16).map(|bits| {
            let pick = |k: u8| if bits >> k & 1 == 1 { -1 } else { 1 };
            ClassicalStrategy { a1: pick(0), a2: pick(1), b1: pick(2), b2: pick(3) }
        })
    }
}

/// Exhaustive maximum over the 16 strategies; first maximizer in enumeration order.
pub fn classical_chsh_bound() -> (f64, ClassicalStrategy) {
    ClassicalStrategy::all().fold((f64::NEG_INFINITY, ClassicalStrategy { a1: 1, a2: 1, b1: 1, b2: 1 }), |best, s| {
        let v = s.value();
        if v > best.0 {
            (v, s)
        } else {
            best
        }
    })
}

pub fn classical_chsh_minimum() -> f64 {
    ClassicalStrategy::all().map(|s| s.value()).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThreeSettingConvention {
    /// `1 + ⟨B₁B₂⟩ ≥ |⟨AB₁⟩ − ⟨AB₂⟩|` as commonly quoted (anticorrelated form).
    Plus,
    /// `1 − ⟨B₁B₂⟩ ≥ |⟨AB₁⟩ − ⟨AB₂⟩|`, the bound satisfied by same-sign
    /// deterministic assignments.
    #[default]
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeSettingReport {
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
}

pub fn three_setting_bell(
    state: &DensityOperator,
    a: BlochVector,
    b1: BlochVector,
    b2: BlochVector,
    convention: ThreeSettingConvention,
) -> ThreeSettingReport {
    let corr = |x, y| two_time_correlation(&TwoTimeSetting::new(x, y, *state));
    let bb = corr(b1, b2);
    let lhs = match convention {
        ThreeSettingConvention::Plus => 1.0 + bb,
        ThreeSettingConvention::Minus => 1.0 - bb,
    };
    let rhs = (corr(a, b1) - corr(a, b2)).abs();
    ThreeSettingReport { lhs, rhs, violated: lhs < rhs - VIOLATION_SLACK }
}

fn chsh_objective(angles: &[f64]) -> f64 {
    CHSHSettings::from_angles(angles).map_or(f64::NEG_INFINITY, |s| s.bloch_value())
}

/// Multi-start maximization of the CHSH value over four unit axes.
///
/// The objective is the Bloch closed form, which equals [`chsh_value`] for
/// every state.
pub fn tsirelson_optimize(restarts: usize, seed: u64) -> Result<(CHSHSettings, f64)> {
    let found = optimize::maximize(chsh_objective, 8, restarts, seed)?;
    let settings = CHSHSettings::from_angles(&found.params)?;
    Ok((settings, settings.bloch_value()))
}

/// Local refinement from given settings.
pub fn tsirelson_refine(start: &CHSHSettings) -> Result<(CHSHSettings, f64)> {
    let (params, _) = optimize::refine(&chsh_objective, &start.to_angles());
    let settings = CHSHSettings::from_angles(&params)?;
    Ok((settings, settings.bloch_value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn mixed() -> DensityOperator {
        DensityOperator::maximally_mixed()
    }

    #[test]
    fn correlation_examples() {
        let a = BlochVector::from_angles(0.9, 0.4).unwrap();
        let rho = DensityOperator::from_bloch([0.2, -0.5, 0.6]).unwrap();
        assert!((two_time_correlation(&TwoTimeSetting::new(a, a, rho)) - 1.0).abs() < 1e-12);
        assert!(two_time_correlation(&TwoTimeSetting::new(BlochVector::Z, BlochVector::X, rho)).abs() < 1e-12);

        // b with a·b = 0.3 in the x–z plane.
        let b = BlochVector::from_angles(0.3_f64.acos(), 0.0).unwrap();
        let v = two_time_correlation(&TwoTimeSetting::new(BlochVector::Z, b, rho));
        assert!((v - 0.3).abs() < 1e-12, "{v}");
    }

    #[test]
    fn chsh_examples() {
        assert!((chsh_value(&mixed(), &CHSHSettings::tsirelson()) - TSIRELSON_BOUND).abs() < 1e-12);
        let z = BlochVector::Z;
        assert!((chsh_value(&mixed(), &CHSHSettings::new(z, z, z, z)) - 2.0).abs() < 1e-12);
        let s = CHSHSettings::from_angles(&[0.3, 1.0, 2.0, -0.4, 1.1, 2.2, 0.7, 3.0]).unwrap();
        let r1 = DensityOperator::from_bloch([0.1, 0.2, 0.3]).unwrap();
        let r2 = DensityOperator::from_bloch([-0.6, 0.0, 0.7]).unwrap();
        assert!((chsh_value(&r1, &s) - chsh_value(&r2, &s)).abs() < 1e-12);
    }

    #[test]
    fn textbook_settings_fall_short_of_tsirelson() {
        let v = CHSHSettings::textbook_start().bloch_value();
        assert!((v - (1.0 + SQRT_2)).abs() < 1e-12);
    }

    #[test]
    fn classical_enumeration() {
        let (max, arg) = classical_chsh_bound();
        assert_eq!(max, 2.0);
        assert_eq!(arg.value(), 2.0);
        assert_eq!(classical_chsh_minimum(), -2.0);
        assert_eq!(ClassicalStrategy { a1: 1, a2: 1, b1: 1, b2: 1 }.value(), 2.0);
        assert_eq!(ClassicalStrategy::all().count(), 16);
    }

    #[test]
    fn three_setting_examples() {
        let a = BlochVector::Z;
        let r = three_setting_bell(&mixed(), a, a, a, ThreeSettingConvention::Minus);
        assert_eq!(r.rhs, 0.0);
        assert!(!r.violated);
        assert!(!three_setting_bell(&mixed(), a, a, a, ThreeSettingConvention::Plus).violated);

        let b1 = BlochVector::from_angles(PI / 3.0, 0.0).unwrap();
        let b2 = BlochVector::from_angles(2.0 * PI / 3.0, 0.0).unwrap();
        let minus = three_setting_bell(&mixed(), a, b1, b2, ThreeSettingConvention::Minus);
        assert!((minus.rhs - 1.0).abs() < 1e-12);
        assert!((minus.lhs - 0.5).abs() < 1e-12);
        assert!(minus.violated);
        let plus = three_setting_bell(&mixed(), a, b1, b2, ThreeSettingConvention::Plus);
        assert!((plus.lhs - 1.5).abs() < 1e-12);
        assert!(!plus.violated);
    }

    #[test]
    fn deterministic_strategies_respect_minus_form() {
        for bits in 0u8..8 {
            let v = |k: u8| -> f64 { if bits >> k & 1 == 1 { -1.0 } else { 1.0 } };
            let (a, b1, b2) = (v(0), v(1), v(2));
            let lhs = 1.0 - b1 * b2;
            let rhs = (a * b1 - a * b2).abs();
            assert!(lhs >= rhs, "strategy {bits:03b}");
            assert_eq!(lhs, rhs, "equality holds for every ±1 assignment");
        }
    }

    #[test]
    fn refine_from_textbook_start_reaches_bound() {
        let (_, v) = tsirelson_refine(&CHSHSettings::textbook_start()).unwrap();
        assert!((v - TSIRELSON_BOUND).abs() < 1e-9, "{v}");
        let (_, v) = tsirelson_refine(&CHSHSettings::tsirelson()).unwrap();
        assert!((v - TSIRELSON_BOUND).abs() < 1e-9, "{v}");
    }

    fn plane_axis(t: f64) -> BlochVector {
        BlochVector::from_angles(t, 0.0).unwrap()
    }

    #[test]
    fn coplanar_grid_maximum() {
        let steps = 32;
        let axes: Vec<BlochVector> = (0..steps).map(|k| plane_axis(2.0 * PI * k as f64 / steps as f64)).collect();
        let mut best = f64::NEG_INFINITY;
        for &a1 in &axes {
            for &a2 in &axes {
                for &b1 in &axes {
                    for &b2 in &axes {
                        best = best.max(CHSHSettings::new(a1, a2, b1, b2).bloch_value());
                    }
                }
            }
        }
        assert!((best - TSIRELSON_BOUND).abs() < 1e-12, "{best}");

        let mut tied = f64::NEG_INFINITY;
        for &a in &axes {
            for &b1 in &axes {
                for &b2 in &axes {
                    tied = tied.max(CHSHSettings::new(a, a, b1, b2).bloch_value());
                }
            }
        }
        assert!((tied - 2.0).abs() < 1e-12, "{tied}");
    }

    #[test]
    fn restarted_optimizer_reaches_bound() {
        let (s, v) = tsirelson_optimize(50, 7).unwrap();
        assert!(v >= TSIRELSON_BOUND - 1e-6);
        assert!(v <= TSIRELSON_BOUND + 1e-12);
        assert!((s.bloch_value() - v).abs() < 1e-12);
    }
}
