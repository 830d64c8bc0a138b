//! Built-in invariant suites at desk scale.

use std::f64::consts::TAU;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempwork::sampler::{count_outcomes, jarzynski_from_counts, moments_from_counts, SamplerConfig};
use tempwork::temporal_bell::{classical_chsh_bound, tsirelson_optimize, two_time_correlation, CHSHSettings, TwoTimeSetting, TSIRELSON_BOUND};
use tempwork::tpm::{
    backward_joint_distribution, crooks_prediction, crooks_ratio, jarzynski_average, joint_distribution,
    moment_closed_form, taylor_partial_sum, work_moment, Evolution,
};
use tempwork::work_chsh::{work_bell_combination, work_bell_protocol_sum, WorkBellSettings};
use tempwork::{
    bloch_to_projector, projector_overlap, unitary_from_hamiltonian, BlochVector, DensityOperator, Operator2,
    ProtocolSpec, Sign, ThermalState, TwoLevelHamiltonian, Unitary,
};

use crate::document::ResultDocument;
use crate::{EXIT_OK, EXIT_VALIDATION};

const SEED: u64 = 0x5eed;

pub struct Suite {
    pub name: &'static str,
    pub tolerance: f64,
    /// Returns the worst observed error; the suite passes when it is within tolerance.
    pub check: fn(&mut ChaCha8Rng) -> f64,
}

pub const SUITES: &[Suite] = &[
    Suite { name: "projectors", tolerance: 1e-10, check: projectors },
    Suite { name: "unitarity", tolerance: 1e-10, check: unitarity },
    Suite { name: "thermal-state", tolerance: 1e-10, check: thermal_state },
    Suite { name: "normalization", tolerance: 1e-10, check: normalization },
    Suite { name: "jarzynski-identity", tolerance: 1e-10, check: jarzynski_identity },
    Suite { name: "crooks", tolerance: 1e-10, check: crooks },
    Suite { name: "moment-closed-form", tolerance: 1e-10, check: moment_closed_forms },
    Suite { name: "taylor-resummation", tolerance: 1e-8, check: taylor },
    Suite { name: "two-time-correlation", tolerance: 1e-12, check: two_time },
    Suite { name: "tsirelson", tolerance: 1e-6, check: tsirelson },
    Suite { name: "work-bell", tolerance: 1e-10, check: work_bell },
    Suite { name: "classical-work-bounds", tolerance: 1e-12, check: classical_work_bounds },
    Suite { name: "sampler-determinism", tolerance: 1e-9, check: sampler_determinism },
];

fn axis(rng: &mut ChaCha8Rng) -> BlochVector {
    let theta = (1.0 - 2.0 * rng.random::<f64>()).clamp(-1.0, 1.0).acos();
    BlochVector::from_angles(theta, rng.random_range(0.0..TAU)).expect("finite angles")
}

fn sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.random::<bool>() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn unitary(rng: &mut ChaCha8Rng) -> Unitary {
    let a = axis(rng);
    Unitary::from_axis_angle(a, rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)).expect("valid rotation")
}

fn hamiltonian(rng: &mut ChaCha8Rng, max_energy: f64) -> TwoLevelHamiltonian {
    let e = rng.random_range(1e-3..=max_energy);
    TwoLevelHamiltonian::new(e, axis(rng)).expect("positive energy")
}

fn random_spec(rng: &mut ChaCha8Rng) -> ProtocolSpec {
    let hi = hamiltonian(rng, 2.0);
    let hf = hamiltonian(rng, 2.0);
    let beta = rng.random_range(0.0..=3.0);
    ProtocolSpec::new(hi, hf, beta, Evolution::Explicit(unitary(rng))).expect("valid spec")
}

fn quench(e: f64, beta: f64, a: BlochVector, b: BlochVector) -> ProtocolSpec {
    ProtocolSpec::sudden_quench(
        TwoLevelHamiltonian::new(e, a).expect("positive energy"),
        TwoLevelHamiltonian::new(e, b).expect("positive energy"),
        beta,
    )
    .expect("valid spec")
}

fn projectors(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..500 {
        let (a, s) = (axis(rng), sign(rng));
        let pp = bloch_to_projector(a, s);
        let p = *pp.matrix();
        worst = worst.max((p * p).max_abs_diff(&p)).max((p.trace().re - 1.0).abs());
        let (b, t) = (axis(rng), sign(rng));
        let qq = bloch_to_projector(b, t);
        worst = worst.max((projector_overlap(&pp, &qq) - (p * *qq.matrix()).trace().re).abs());
    }
    worst
}

fn unitarity(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let u = *unitary(rng).matrix();
        worst = worst.max((u * u.adjoint()).max_abs_diff(&Operator2::identity()));
        let h = hamiltonian(rng, 2.0);
        let (t1, t2) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let composed = unitary_from_hamiltonian(&h, t1).unwrap().compose(&unitary_from_hamiltonian(&h, t2).unwrap());
        worst = worst.max(composed.matrix().max_abs_diff(unitary_from_hamiltonian(&h, t1 + t2).unwrap().matrix()));
    }
    worst
}

fn thermal_state(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let h = hamiltonian(rng, 2.0);
        let beta = rng.random_range(0.0..=5.0);
        let rho = *ThermalState::new(h, beta).unwrap().density().matrix();
        let t = (beta * h.energy()).tanh();
        let expected = Operator2::pauli_expansion(0.5.into(), h.axis().components().map(|c| -0.5 * t * c));
        worst = worst.max(rho.max_abs_diff(&expected)).max((rho.trace().re - 1.0).abs());
    }
    worst
}

fn normalization(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..500 {
        let spec = random_spec(rng);
        let joint = joint_distribution(&spec);
        worst = worst.max((joint.total() - 1.0).abs());
        let thermal = spec.initial_state();
        for n in Sign::ALL {
            worst = worst.max((joint.first_marginal(n) - thermal.weight(n)).abs());
        }
    }
    worst
}

fn jarzynski_identity(rng: &mut ChaCha8Rng) -> f64 {
    (0..1000).map(|_| (jarzynski_average(&random_spec(rng)) - 1.0).abs()).fold(0.0, f64::max)
}

fn crooks(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let spec = random_spec(rng);
        let back = backward_joint_distribution(&spec);
        for n in Sign::ALL {
            for m in Sign::ALL {
                if back.get(m, n) > 1e-12 {
                    let expected = crooks_prediction(&spec, n, m);
                    let r = crooks_ratio(&spec, n, m).unwrap_or(f64::INFINITY);
                    worst = worst.max((r - expected).abs() / expected.max(1.0));
                }
            }
        }
    }
    worst
}

fn moment_closed_forms(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let e = rng.random_range(0.01..=1.0);
        let beta = rng.random_range(0.0..=3.0);
        let (a, b) = (axis(rng), axis(rng));
        let spec = quench(e, beta, a, b);
        for n in 1..=10 {
            let closed = moment_closed_form(e, beta, a.dot(&b).clamp(-1.0, 1.0), n).unwrap();
            worst = worst.max((closed - work_moment(&spec, n).unwrap()).abs());
        }
    }
    worst
}

fn taylor(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let e = rng.random_range(0.05..=2.0);
        let beta = rng.random_range(0.0..=2.0 / e);
        let spec = quench(e, beta, axis(rng), axis(rng));
        worst = worst.max((taylor_partial_sum(&spec, 40).unwrap() - 1.0).abs());
    }
    worst
}

fn two_time(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let (a, b) = (axis(rng), axis(rng));
        let reference = two_time_correlation(&TwoTimeSetting::new(a, b, DensityOperator::maximally_mixed()));
        for _ in 0..20 {
            let r: f64 = rng.random_range(0.0..=1.0);
            let rho = DensityOperator::from_bloch(axis(rng).components().map(|c| r * c)).unwrap();
            let ab = two_time_correlation(&TwoTimeSetting::new(a, b, rho));
            let ba = two_time_correlation(&TwoTimeSetting::new(b, a, rho));
            worst = worst.max((ab - reference).abs()).max((ab - ba).abs());
        }
    }
    worst
}

fn tsirelson(rng: &mut ChaCha8Rng) -> f64 {
    let (_, v) = tsirelson_optimize(50, rng.random()).unwrap();
    let (classical, _) = classical_chsh_bound();
    (v - TSIRELSON_BOUND).abs().max((classical - 2.0).abs())
}

fn work_bell(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let axes = CHSHSettings::new(axis(rng), axis(rng), axis(rng), axis(rng));
        let e = rng.random_range(0.05..=1.0);
        let beta = rng.random_range(0.0..=3.0);
        let s = WorkBellSettings::new(axes, e, beta).unwrap();
        for n in 1..=6 {
            let closed = work_bell_combination(&s, n).unwrap().value;
            worst = worst.max((closed - work_bell_protocol_sum(&s, n).unwrap()).abs());
        }
        let hot = work_bell_combination(&s.with_beta(0.0).unwrap(), 2).unwrap().value;
        worst = worst.max((hot - work_bell_combination(&s, 2).unwrap().value).abs());
    }
    worst
}

fn classical_work_bounds(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let d = axis(rng);
        let pick = |r: &mut ChaCha8Rng| if r.random::<bool>() { -d } else { d };
        let axes = CHSHSettings::new(pick(rng), pick(rng), pick(rng), pick(rng));
        let e = rng.random_range(0.05..=2.0);
        let s = WorkBellSettings::new(axes, e, rng.random_range(0.0..=3.0)).unwrap();
        let w2 = work_bell_protocol_sum(&s, 2).unwrap();
        let w1 = work_bell_protocol_sum(&s, 1).unwrap();
        worst = worst.max(-w2).max(w2 - 8.0 * e * e).max(w1);
    }
    worst
}

fn sampler_determinism(rng: &mut ChaCha8Rng) -> f64 {
    let spec = random_spec(rng);
    let seed = rng.random();
    let estimates = |workers| {
        let counts = count_outcomes(&spec, &SamplerConfig::new(seed, 20_000, workers).unwrap());
        let mut v = vec![jarzynski_from_counts(&spec, &counts).mean];
        v.extend(moments_from_counts(&spec, &counts, &[1, 2]).iter().map(|r| r.mean));
        v
    };
    let single = estimates(1);
    let mut worst = 0.0_f64;
    for workers in [2, 3, 8] {
        for (a, b) in single.iter().zip(estimates(workers)) {
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

/// Runs every suite; exit 0 iff all pass, 3 otherwise.
pub fn run(tolerance_override: Option<f64>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut doc = ResultDocument::new("selftest");
    if let Some(t) = tolerance_override {
        doc.echo_number("tolerance_override", t);
    }
    let mut failed = Vec::new();
    for suite in SUITES {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let tol = tolerance_override.unwrap_or(suite.tolerance);
        let worst = (suite.check)(&mut rng);
        let pass = worst <= tol;
        let _ = writeln!(
            err,
            "{} {}: worst {:.3e} (tolerance {:.1e})",
            if pass { "PASS" } else { "FAIL" },
            suite.name,
            worst,
            tol
        );
        doc.flag(suite.name, pass);
        if !pass {
            failed.push(suite.name);
        }
    }
    doc.result("suites", SUITES.len() as f64);
    doc.result("passed", (SUITES.len() - failed.len()) as f64);
    doc.result("failed", failed.len() as f64);
    for name in &failed {
        doc.note(format!("suite {name} failed"));
    }
    let _ = out.write_all(doc.to_json().as_bytes());
    if failed.is_empty() {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    }
}
