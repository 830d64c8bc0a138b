//! Browser bindings for the demo page in `www/`.
//!
//! Every operation returns a flat row-major `Float64Array`; the row width is
//! given by the matching `*_COLUMNS` constant.

use std::f64::consts::{PI, TAU};

use tempwork::temporal_bell::{CHSHSettings, CLASSICAL_CHSH_BOUND, TSIRELSON_BOUND};
use tempwork::tpm::{joint_distribution, work_moment};
use tempwork::work_chsh::{classical_work_bounds, quantum_work_extrema, work_bell_combination, WorkBellSettings};
use tempwork::{BlochVector, ProtocolSpec, TwoLevelHamiltonian};
use wasm_bindgen::prelude::*;

/// theta_f, p(+,+), p(+,-), p(-,+), p(-,-), <W>
pub const WORK_DISTRIBUTION_COLUMNS: usize = 6;
/// beta, value, classical lower, classical upper, quantum lower, quantum upper
pub const WORK_BELL_COLUMNS: usize = 6;
/// theta_b1, S, classical bound, Tsirelson bound
pub const CHSH_COLUMNS: usize = 4;

const MAX_STEPS: usize = 10_000;

fn check_steps(steps: usize) -> Result<(), String> {
    if (2..=MAX_STEPS).contains(&steps) {
        Ok(())
    } else {
        Err(format!("steps must be in 2..={MAX_STEPS}, got {steps}"))
    }
}

fn grid(start: f64, stop: f64, steps: usize) -> impl Iterator<Item = f64> {
    (0..steps).map(move |i| start + (stop - start) * i as f64 / (steps - 1) as f64)
}

/// Sudden quench from a z-axis Hamiltonian to one tilted by theta_f in the x-z plane.
pub fn work_distribution_vs_angle(energy: f64, energy_final: f64, beta: f64, steps: usize) -> Result<Vec<f64>, String> {
    check_steps(steps)?;
    let initial = TwoLevelHamiltonian::new(energy, BlochVector::Z).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(steps * WORK_DISTRIBUTION_COLUMNS);
    for theta in grid(0.0, PI, steps) {
        let axis = BlochVector::from_angles(theta, 0.0).map_err(|e| e.to_string())?;
        let fin = TwoLevelHamiltonian::new(energy_final, axis).map_err(|e| e.to_string())?;
        let spec = ProtocolSpec::sudden_quench(initial, fin, beta).map_err(|e| e.to_string())?;
        out.push(theta);
        out.extend(joint_distribution(&spec).entries().map(|(_, p)| p));
        out.push(work_moment(&spec, 1).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// Order-n work-CHSH combination at the optimal axes for beta in [0, beta_max].
pub fn work_bell_temperature_curve(order: u32, energy: f64, beta_max: f64, steps: usize) -> Result<Vec<f64>, String> {
    check_steps(steps)?;
    if !(beta_max.is_finite() && beta_max > 0.0) {
        return Err(format!("beta_max must be positive and finite, got {beta_max}"));
    }
    let mut out = Vec::with_capacity(steps * WORK_BELL_COLUMNS);
    for beta in grid(0.0, beta_max, steps) {
        let s = WorkBellSettings::optimal(order, energy, beta).map_err(|e| e.to_string())?;
        let value = work_bell_combination(&s, order).map_err(|e| e.to_string())?.value;
        let (lo, hi) = classical_work_bounds(energy, beta, order).map_err(|e| e.to_string())?;
        let (qlo, qhi) = quantum_work_extrema(energy, beta, order).map_err(|e| e.to_string())?;
        out.extend([beta, value, lo, hi, qlo, qhi]);
    }
    Ok(out)
}

/// CHSH value with every axis in the x-z plane: a1 at 0, a2 at `theta_a2`,
/// b1 swept over a full turn and b2 = b1 + `delta_b`.
pub fn coplanar_chsh(theta_a2: f64, delta_b: f64, steps: usize) -> Result<Vec<f64>, String> {
    check_steps(steps)?;
    let plane = |t: f64| BlochVector::from_angles(t, 0.0).map_err(|e| e.to_string());
    let (a1, a2) = (plane(0.0)?, plane(theta_a2)?);
    let mut out = Vec::with_capacity(steps * CHSH_COLUMNS);
    for t in grid(0.0, TAU, steps) {
        let s = CHSHSettings::new(a1, a2, plane(t)?, plane(t + delta_b)?);
        out.extend([t, s.bloch_value(), CLASSICAL_CHSH_BOUND, TSIRELSON_BOUND]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = workDistributionVsAngle)]
pub fn work_distribution_vs_angle_js(energy: f64, energy_final: f64, beta: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    work_distribution_vs_angle(energy, energy_final, beta, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = workBellTemperatureCurve)]
pub fn work_bell_temperature_curve_js(order: u32, energy: f64, beta_max: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    work_bell_temperature_curve(order, energy, beta_max, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = coplanarChsh)]
pub fn coplanar_chsh_js(theta_a2: f64, delta_b: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    coplanar_chsh(theta_a2, delta_b, steps).map_err(|e| JsError::new(&e))
}
