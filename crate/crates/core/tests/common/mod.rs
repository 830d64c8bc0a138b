//! Test-only oracles, independent of the library's projector/trace route.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempwork::{BlochVector, Evolution, ProtocolSpec, Sign, TwoLevelHamiltonian, Unitary};

/// Eigen-spinor of `axis·σ` with eigenvalue `sign`, from the axis angles.
pub fn spinor(axis: &BlochVector, sign: Sign) -> [Complex64; 2] {
    let (theta, phi) = axis.angles();
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = Complex64::from_polar(1.0, phi);
    match sign {
        Sign::Plus => [Complex64::new(c, 0.0), e * s],
        Sign::Minus => [Complex64::new(s, 0.0), -e * c],
    }
}

fn amplitude(bra: &[Complex64; 2], u: &Unitary, ket: &[Complex64; 2]) -> Complex64 {
    let m = u.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..2 {
        for c in 0..2 {
            acc += bra[r].conj() * m.entry(r, c) * ket[c];
        }
    }
    acc
}

/// Boltzmann weight by direct exponentials.
pub fn boltzmann(energy: f64, beta: f64, sign: Sign) -> f64 {
    let up = (-beta * energy).exp();
    let down = (beta * energy).exp();
    match sign {
        Sign::Plus => up / (up + down),
        Sign::Minus => down / (up + down),
    }
}

/// `p(n,m) = w_n |⟨m_f|U|n_i⟩|²`.
pub fn oracle_joint(spec: &ProtocolSpec) -> [[f64; 2]; 2] {
    let u = spec.unitary();
    let mut p = [[0.0; 2]; 2];
    for n in Sign::ALL {
        for m in Sign::ALL {
            let a = amplitude(&spinor(&spec.final_hamiltonian().axis(), m), &u, &spinor(&spec.initial().axis(), n));
            p[n.index()][m.index()] = boltzmann(spec.initial().energy(), spec.beta(), n) * a.norm_sqr();
        }
    }
    p
}

/// `p_B(m,n) = w^f_m |⟨n_i|U†|m_f⟩|²`, indexed `[m][n]`.
pub fn oracle_backward(spec: &ProtocolSpec) -> [[f64; 2]; 2] {
    let u = spec.unitary().inverse();
    let mut p = [[0.0; 2]; 2];
    for m in Sign::ALL {
        for n in Sign::ALL {
            let a = amplitude(&spinor(&spec.initial().axis(), n), &u, &spinor(&spec.final_hamiltonian().axis(), m));
            p[m.index()][n.index()] = boltzmann(spec.final_hamiltonian().energy(), spec.beta(), m) * a.norm_sqr();
        }
    }
    p
}

pub fn work(spec: &ProtocolSpec, n: Sign, m: Sign) -> f64 {
    n.value() * spec.initial().energy() - m.value() * spec.final_hamiltonian().energy()
}

pub fn oracle_moment(spec: &ProtocolSpec, k: u32) -> f64 {
    let p = oracle_joint(spec);
    let mut sum = 0.0;
    for n in Sign::ALL {
        for m in Sign::ALL {
            sum += p[n.index()][m.index()] * work(spec, n, m).powi(k as i32);
        }
    }
    sum
}

/// `ΔF = F_f − F_i` from `Z = e^{-βE} + e^{βE}` directly.
pub fn oracle_delta_f(spec: &ProtocolSpec) -> f64 {
    let b = spec.beta();
    if b == 0.0 {
        return 0.0;
    }
    let z = |e: f64| (-b * e).exp() + (b * e).exp();
    -(z(spec.final_hamiltonian().energy()) / z(spec.initial().energy())).ln() / b
}

pub fn oracle_jarzynski(spec: &ProtocolSpec) -> f64 {
    let p = oracle_joint(spec);
    let df = oracle_delta_f(spec);
    let mut sum = 0.0;
    for n in Sign::ALL {
        for m in Sign::ALL {
            sum += p[n.index()][m.index()] * (spec.beta() * (work(spec, n, m) + df)).exp();
        }
    }
    sum
}

pub fn random_axis(rng: &mut impl Rng) -> BlochVector {
    // Uniform on the sphere: cosθ uniform.
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    BlochVector::from_angles(z.acos(), phi).unwrap()
}

pub fn random_unitary(rng: &mut impl Rng) -> Unitary {
    let axis = random_axis(rng);
    Unitary::from_axis_angle(axis, rng.random_range(0.0..std::f64::consts::TAU), rng.random_range(0.0..std::f64::consts::TAU))
        .unwrap()
}

/// Random protocol: β ∈ [0, 3], energies in (0, 2], explicit random unitary.
pub fn random_spec(rng: &mut impl Rng) -> ProtocolSpec {
    let ei = rng.random_range(1e-3..=2.0);
    let ef = rng.random_range(1e-3..=2.0);
    let beta = rng.random_range(0.0..=3.0);
    ProtocolSpec::new(
        TwoLevelHamiltonian::new(ei, random_axis(rng)).unwrap(),
        TwoLevelHamiltonian::new(ef, random_axis(rng)).unwrap(),
        beta,
        Evolution::Explicit(random_unitary(rng)),
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
