use tempwork::sampler::{count_outcomes, estimate_jarzynski, estimate_moments, SamplerConfig};
use tempwork::tpm::joint_distribution;
use tempwork::{BlochVector, ProtocolSpec, Sign, TwoLevelHamiltonian};

fn perpendicular(beta: f64) -> ProtocolSpec {
    ProtocolSpec::sudden_quench(
        TwoLevelHamiltonian::new(1.0, BlochVector::Z).unwrap(),
        TwoLevelHamiltonian::new(1.0, BlochVector::X).unwrap(),
        beta,
    )
    .unwrap()
}

#[test]
fn frequencies_match_joint_distribution() {
    let n = 1_000_000u64;
    let spec = ProtocolSpec::sudden_quench(
        TwoLevelHamiltonian::new(0.8, BlochVector::from_angles(0.6, 0.1).unwrap()).unwrap(),
        TwoLevelHamiltonian::new(1.3, BlochVector::from_angles(2.0, 1.9).unwrap()).unwrap(),
        1.2,
    )
    .unwrap();
    let counts = count_outcomes(&spec, &SamplerConfig::new(2024, n, 1).unwrap());
    let exact = joint_distribution(&spec);
    for a in Sign::ALL {
        for b in Sign::ALL {
            let p = exact.get(a, b);
            let f = counts.frequency(a, b);
            let bound = 5.0 * (p * (1.0 - p) / n as f64).sqrt();
            assert!((f - p).abs() <= bound, "({a},{b}): {f} vs {p} (bound {bound})");
        }
    }
}

#[test]
fn uniform_table_at_infinite_temperature() {
    let n = 100_000u64;
    let counts = count_outcomes(&perpendicular(0.0), &SamplerConfig::new(7, n, 2).unwrap());
    let se = (0.25 * 0.75 / n as f64).sqrt();
    for a in Sign::ALL {
        for b in Sign::ALL {
            assert!((counts.frequency(a, b) - 0.25).abs() <= 5.0 * se);
        }
    }
}

#[test]
fn estimates_are_worker_count_invariant() {
    let spec = perpendicular(1.0);
    let single = estimate_moments(&spec, &SamplerConfig::new(42, 200_000, 1).unwrap(), &[1, 2, 3]).unwrap();
    for workers in [2, 3, 8] {
        let multi = estimate_moments(&spec, &SamplerConfig::new(42, 200_000, workers).unwrap(), &[1, 2, 3]).unwrap();
        for (s, m) in single.iter().zip(&multi) {
            assert!((s.mean - m.mean).abs() <= 1e-9);
            assert!((s.std_error - m.std_error).abs() <= 1e-9);
        }
        let a = estimate_jarzynski(&spec, &SamplerConfig::new(42, 200_000, 1).unwrap());
        let b = estimate_jarzynski(&spec, &SamplerConfig::new(42, 200_000, workers).unwrap());
        assert_eq!(a, b);
    }
}

#[test]
fn error_shrinks_like_inverse_sqrt_n() {
    // RMS error over fixed seeds; 100x samples should cut it by about 10.
    let spec = perpendicular(1.0);
    let rms = |n: u64| {
        let seeds = 0..24u64;
        let count = seeds.clone().count() as f64;
        let ss: f64 = seeds
            .map(|seed| {
                let r = estimate_jarzynski(&spec, &SamplerConfig::new(1000 + seed, n, 1).unwrap());
                (r.mean - 1.0).powi(2)
            })
            .sum();
        (ss / count).sqrt()
    };
    let small = rms(1_000);
    let large = rms(100_000);
    let factor = small / large;
    assert!((5.0..=20.0).contains(&factor), "reduction factor {factor}");
}
