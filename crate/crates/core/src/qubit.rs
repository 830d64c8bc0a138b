//! Closed-form single-qubit algebra in the Bloch representation.
//!
//! Every matrix here is built from its Pauli expansion `c0·I + c·σ`; nothing
//! goes through a generic eigensolver or matrix exponential. The Boltzmann
//! constant is 1, so `beta` is an inverse energy.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{check_beta, check_energy, check_finite, Error, Result};

/// Operator identities (idempotence, unitarity, Hermiticity) are checked to this.
pub const OPERATOR_TOL: f64 = 1e-10;

/// Maximum tolerated deviation of a component-built Bloch vector from unit norm.
pub const AXIS_NORM_TOL: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A dichotomic outcome, also used as the label of a `±E` energy level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Fixed enumeration order used for tables and sampling.
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Real unit 3-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl BlochVector {
    pub const X: BlochVector = BlochVector { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: BlochVector = BlochVector { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 1.0 };

    /// Builds a vector from raw components. Inputs off the unit sphere by more
    /// than [`AXIS_NORM_TOL`] are rejected, never renormalized.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > AXIS_NORM_TOL {
            return Err(Error::NonUnitAxis { norm });
        }
        Ok(Self { x, y, z })
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)`. Any finite angles are accepted; the map
    /// is periodic and always lands on the sphere.
    pub fn from_angles(theta: f64, phi: f64) -> Result<Self> {
        check_finite("theta", theta)?;
        check_finite("phi", phi)?;
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Ok(Self { x: st * cp, y: st * sp, z: ct })
    }

    /// Direction of a nonzero vector, normalized. Used for constructed axes such
    /// as `(z + x)/√2` where the caller owns the arithmetic.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NonUnitAxis { norm });
        }
        Ok(Self { x: x / norm, y: y / norm, z: z / norm })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Polar and azimuthal angles, `theta ∈ [0, π]`, `phi ∈ (-π, π]`.
    pub fn angles(&self) -> (f64, f64) {
        (self.z.clamp(-1.0, 1.0).acos(), self.y.atan2(self.x))
    }

    /// `axis·σ` as a matrix.
    pub fn sigma(&self) -> Operator2 {
        Operator2::pauli_expansion(ZERO, [self.x, self.y, self.z])
    }
}

impl Neg for BlochVector {
    type Output = BlochVector;

    fn neg(self) -> BlochVector {
        BlochVector { x: -self.x, y: -self.y, z: -self.z }
    }
}

/// Dense 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator2 {
    m: [[Complex64; 2]; 2],
}

impl Operator2 {
    pub fn new(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self { m: [[ONE, ZERO], [ZERO, ONE]] }
    }

    pub fn zero() -> Self {
        Self { m: [[ZERO; 2]; 2] }
    }

    pub fn pauli_x() -> Self {
        Self { m: [[ZERO, ONE], [ONE, ZERO]] }
    }

    pub fn pauli_y() -> Self {
        Self { m: [[ZERO, -I], [I, ZERO]] }
    }

    pub fn pauli_z() -> Self {
        Self { m: [[ONE, ZERO], [ZERO, -ONE]] }
    }

    /// `c0·I + c[0]σx + c[1]σy + c[2]σz` with real vector coefficients.
    pub fn pauli_expansion(c0: Complex64, c: [f64; 3]) -> Self {
        Self::pauli_expansion_complex(c0, c.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn pauli_expansion_complex(c0: Complex64, c: [Complex64; 3]) -> Self {
        let [cx, cy, cz] = c;
        Self {
            m: [[c0 + cz, cx - I * cy], [cx + I * cy, c0 - cz]],
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self {
            m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { m: self.m.map(|row| row.map(|v| v * s)) }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator2) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigenvalues of the Hermitian part, ascending. Closed form for 2×2.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = 0.5 * (self.m[0][1] + self.m[1][0].conj());
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        (mean - radius, mean + radius)
    }
}

impl Mul for Operator2 {
    type Output = Operator2;

    fn mul(self, rhs: Operator2) -> Operator2 {
        let a = &self.m;
        let b = &rhs.m;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Operator2 { m: out }
    }
}

impl Add for Operator2 {
    type Output = Operator2;

    fn add(self, rhs: Operator2) -> Operator2 {
        let mut out = self.m;
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v += rhs.m[r][c];
            }
        }
        Operator2 { m: out }
    }
}

impl Sub for Operator2 {
    type Output = Operator2;

    fn sub(self, rhs: Operator2) -> Operator2 {
        self + rhs.scale(-ONE)
    }
}

/// Valid qubit state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityOperator {
    matrix: Operator2,
}

impl DensityOperator {
    pub fn new(matrix: Operator2) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidOperator { role: "density operator", reason };
        if !matrix.is_hermitian(OPERATOR_TOL) {
            return Err(invalid("not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > OPERATOR_TOL {
            return Err(invalid(format!("trace {tr} != 1")));
        }
        let (lo, _) = matrix.hermitian_eigenvalues();
        if lo < -OPERATOR_TOL {
            return Err(invalid(format!("negative eigenvalue {lo}")));
        }
        Ok(Self { matrix })
    }

    /// `(I + r·σ)/2` for a Bloch vector `r` with `|r| ≤ 1`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        for v in r {
            check_finite("Bloch component", v)?;
        }
        let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if norm > 1.0 + OPERATOR_TOL {
            return Err(Error::InvalidOperator {
                role: "density operator",
                reason: format!("Bloch vector length {norm} exceeds 1"),
            });
        }
        Ok(Self {
            matrix: Operator2::pauli_expansion(Complex64::new(0.5, 0.0), r.map(|v| 0.5 * v)),
        })
    }

    pub fn maximally_mixed() -> Self {
        Self { matrix: Operator2::identity().scale(Complex64::new(0.5, 0.0)) }
    }

    pub fn matrix(&self) -> &Operator2 {
        &self.matrix
    }

    /// Bloch vector `tr(ρσ)`.
    pub fn bloch(&self) -> [f64; 3] {
        let m = &self.matrix;
        let off = m.entry(1, 0);
        [2.0 * off.re, 2.0 * off.im, (m.entry(0, 0) - m.entry(1, 1)).re]
    }
}

/// Rank-one projector `(I + sign·axis·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projector {
    matrix: Operator2,
    axis: BlochVector,
    sign: Sign,
}

impl Projector {
    pub fn new(axis: BlochVector, sign: Sign) -> Self {
        let s = 0.5 * sign.value();
        let matrix = Operator2::pauli_expansion(
            Complex64::new(0.5, 0.0),
            [s * axis.x, s * axis.y, s * axis.z],
        );
        Self { matrix, axis, sign }
    }

    pub fn matrix(&self) -> &Operator2 {
        &self.matrix
    }

    pub fn axis(&self) -> BlochVector {
        self.axis
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }
}

/// `(I ± s·σ)/2`. Component-built axes are validated at [`BlochVector::new`].
pub fn bloch_to_projector(s: BlochVector, sign: Sign) -> Projector {
    Projector::new(s, sign)
}

/// `tr(PQ) = (1 + sign_p sign_q axis_p·axis_q)/2`.
pub fn projector_overlap(p: &Projector, q: &Projector) -> f64 {
    let v = 0.5 * (1.0 + p.sign.value() * q.sign.value() * p.axis.dot(&q.axis));
    v.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary {
    matrix: Operator2,
}

impl Unitary {
    pub fn new(matrix: Operator2) -> Result<Self> {
        let product = matrix * matrix.adjoint();
        let err = product.max_abs_diff(&Operator2::identity());
        if !(err <= OPERATOR_TOL) {
            return Err(Error::InvalidOperator {
                role: "unitary",
                reason: format!("|U U^dagger - I| = {err}"),
            });
        }
        Ok(Self { matrix })
    }

    pub fn identity() -> Self {
        Self { matrix: Operator2::identity() }
    }

    /// `e^{iγ}(cos α·I − i sin α·n·σ)`; covers all of U(2).
    pub fn from_axis_angle(axis: BlochVector, angle: f64, phase: f64) -> Result<Self> {
        check_finite("rotation angle", angle)?;
        check_finite("global phase", phase)?;
        let (s, c) = angle.sin_cos();
        let g = Complex64::from_polar(1.0, phase);
        let m = Operator2::pauli_expansion_complex(
            g * c,
            axis.components().map(|v| g * (-I) * s * v),
        );
        Ok(Self { matrix: m })
    }

    pub fn matrix(&self) -> &Operator2 {
        &self.matrix
    }

    /// Exact inverse (conjugate transpose).
    pub fn inverse(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn compose(&self, then: &Unitary) -> Self {
        Self { matrix: then.matrix * self.matrix }
    }
}

/// `H = energy·(axis·σ)` with eigenvalues exactly `±energy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelHamiltonian {
    energy: f64,
    axis: BlochVector,
}

impl TwoLevelHamiltonian {
    pub fn new(energy: f64, axis: BlochVector) -> Result<Self> {
        Ok(Self { energy: check_energy(energy)?, axis })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn axis(&self) -> BlochVector {
        self.axis
    }

    /// Eigenvalue belonging to the `sign` eigenprojector.
    pub fn level(&self, sign: Sign) -> f64 {
        sign.value() * self.energy
    }

    pub fn eigenprojector(&self, sign: Sign) -> Projector {
        Projector::new(self.axis, sign)
    }

    pub fn matrix(&self) -> Operator2 {
        self.axis.sigma().scale(Complex64::new(self.energy, 0.0))
    }

    /// `ln Z = ln(2 cosh βE)`, evaluated without overflow.
    pub fn log_partition(&self, beta: f64) -> f64 {
        let x = (beta * self.energy).abs();
        // 2cosh x = e^x (1 + e^{-2x})
        x + (-2.0 * x).exp().ln_1p()
    }
}

/// `cos(Et)·I − i sin(Et)·(axis·σ)`.
pub fn unitary_from_hamiltonian(h: &TwoLevelHamiltonian, t: f64) -> Result<Unitary> {
    check_finite("time", t)?;
    Unitary::from_axis_angle(h.axis, h.energy * t, 0.0)
}

/// Gibbs state of a `±E` Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    hamiltonian: TwoLevelHamiltonian,
    beta: f64,
}

impl ThermalState {
    pub fn new(hamiltonian: TwoLevelHamiltonian, beta: f64) -> Result<Self> {
        Ok(Self { hamiltonian, beta: check_beta(beta)? })
    }

    pub fn hamiltonian(&self) -> &TwoLevelHamiltonian {
        &self.hamiltonian
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `Z = 2 cosh βE`. Overflows to infinity for `βE ≳ 710`; use
    /// [`TwoLevelHamiltonian::log_partition`] when that matters.
    pub fn partition_function(&self) -> f64 {
        2.0 * (self.beta * self.hamiltonian.energy).cosh()
    }

    /// Occupation `e^{-β E_sign}/Z`.
    pub fn weight(&self, sign: Sign) -> f64 {
        // 1/(1 + e^{2 sign βE}) is the same ratio without overflow.
        let x = 2.0 * sign.value() * self.beta * self.hamiltonian.energy;
        1.0 / (1.0 + x.exp())
    }

    pub fn density(&self) -> DensityOperator {
        let p_plus = self.weight(Sign::Plus);
        let p_minus = self.weight(Sign::Minus);
        let plus = self.hamiltonian.eigenprojector(Sign::Plus).matrix;
        let minus = self.hamiltonian.eigenprojector(Sign::Minus).matrix;
        DensityOperator {
            matrix: plus.scale(Complex64::new(p_plus, 0.0)) + minus.scale(Complex64::new(p_minus, 0.0)),
        }
    }
}

/// `p₊P₊ + p₋P₋` with `p_± = e^{∓βE}/Z`.
pub fn thermal_density(h: &TwoLevelHamiltonian, beta: f64) -> Result<DensityOperator> {
    Ok(ThermalState::new(*h, beta)?.density())
}
