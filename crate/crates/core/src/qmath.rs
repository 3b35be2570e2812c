//! Exact 2×2 Hermitian linear algebra and the information-theoretic
//! functionals (entropy, relative entropy, trace distance, coherence) used
//! throughout the crate.
//!
//! Units: k_B = 1, so every entropy here is in nats.

use std::f64::consts::LN_2;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix2, Vector2, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 2×2 complex matrix.
pub type Mat2 = Matrix2<Complex64>;

/// Tolerance used when validating the Hermitian / unit-trace invariants.
pub const STATE_TOL: f64 = 1e-12;
/// Bloch vectors longer than `1 + BLOCH_TOL` are rejected as unphysical.
pub const BLOCH_TOL: f64 = 1e-9;
/// Eigenvalue splitting below which a spectrum is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QmathError {
    #[error("Bloch vector has norm {norm}, which exceeds 1")]
    BlochOutsideBall { norm: f64 },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("matrix has negative eigenvalue {eigenvalue:e}")]
    NotPositive { eigenvalue: f64 },
    #[error("matrix contains non-finite entries")]
    NonFinite,
}

#[inline]
fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity() -> Mat2 {
    Mat2::identity()
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

/// Real trace of a matrix assumed Hermitian (imaginary part discarded).
#[inline]
pub fn real_trace(m: &Mat2) -> f64 {
    m[(0, 0)].re + m[(1, 1)].re
}

/// `tr(a b)` without forming the product.
#[inline]
pub fn trace_of_product(a: &Mat2, b: &Mat2) -> Complex64 {
    a[(0, 0)] * b[(0, 0)] + a[(0, 1)] * b[(1, 0)] + a[(1, 0)] * b[(0, 1)] + a[(1, 1)] * b[(1, 1)]
}

/// Largest entry-wise modulus of `m - m†`.
pub fn hermiticity_defect(m: &Mat2) -> f64 {
    (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// `(m + m†)/2`.
pub fn hermitize(m: &Mat2) -> Mat2 {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Real 3-vector `a` with `ρ = (I + a·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        (*self - *other).norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn as_vector3(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// The six pure states along ±x̂, ±ŷ, ±ẑ.
    pub fn axis_states() -> [BlochVector; 6] {
        [
            Self::new(1.0, 0.0, 0.0),
            Self::new(-1.0, 0.0, 0.0),
            Self::new(0.0, 1.0, 0.0),
            Self::new(0.0, -1.0, 0.0),
            Self::new(0.0, 0.0, 1.0),
            Self::new(0.0, 0.0, -1.0),
        ]
    }
}

impl From<[f64; 3]> for BlochVector {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<Vector3<f64>> for BlochVector {
    fn from(v: Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

impl Add for BlochVector {
    type Output = BlochVector;
    fn add(self, o: BlochVector) -> BlochVector {
        BlochVector::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, o: BlochVector) -> BlochVector {
        BlochVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for BlochVector {
    type Output = BlochVector;
    fn neg(self) -> BlochVector {
        BlochVector::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = BlochVector;
    fn mul(self, s: f64) -> BlochVector {
        self.scale(s)
    }
}

/// A qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState(Mat2);

impl QubitState {
    /// Validates the density-matrix invariants to [`STATE_TOL`].
    pub fn new(m: Mat2) -> Result<Self, QmathError> {
        Self::with_tolerance(m, STATE_TOL)
    }

    /// Validates with a caller-chosen tolerance (used for integrator output).
    pub fn with_tolerance(m: Mat2, tol: f64) -> Result<Self, QmathError> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QmathError::NonFinite);
        }
        let deviation = hermiticity_defect(&m);
        if deviation > tol {
            return Err(QmathError::NotHermitian { deviation });
        }
        let trace = real_trace(&m);
        if (trace - 1.0).abs() > tol {
            return Err(QmathError::BadTrace { trace });
        }
        let m = hermitize(&m);
        let lowest = min_eigenvalue(&m);
        if lowest < -tol {
            return Err(QmathError::NotPositive { eigenvalue: lowest });
        }
        Ok(Self(m))
    }

    /// Wraps a matrix that is already known to be a valid state.
    pub(crate) fn from_matrix_unchecked(m: Mat2) -> Self {
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(identity().scale(0.5))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat2 {
        self.0
    }

    pub fn bloch(&self) -> BlochVector {
        density_to_bloch(self)
    }

    pub fn purity(&self) -> f64 {
        trace_of_product(&self.0, &self.0).re
    }
}

impl TryFrom<BlochVector> for QubitState {
    type Error = QmathError;
    fn try_from(a: BlochVector) -> Result<Self, QmathError> {
        bloch_to_density(&a)
    }
}

/// `(I + a·σ)/2` for any real vector, without validation.
pub fn bloch_matrix(a: &BlochVector) -> Mat2 {
    Mat2::new(
        c(0.5 * (1.0 + a.z), 0.0),
        c(0.5 * a.x, -0.5 * a.y),
        c(0.5 * a.x, 0.5 * a.y),
        c(0.5 * (1.0 - a.z), 0.0),
    )
}

/// `(I + a·σ)/2`. Vectors slightly outside the ball (up to [`BLOCH_TOL`]) are
/// accepted and rescaled onto the sphere.
pub fn bloch_to_density(a: &BlochVector) -> Result<QubitState, QmathError> {
    if !a.is_finite() {
        return Err(QmathError::NonFinite);
    }
    let norm = a.norm();
    if norm > 1.0 + BLOCH_TOL {
        return Err(QmathError::BlochOutsideBall { norm });
    }
    let a = if norm > 1.0 { a.scale(1.0 / norm) } else { *a };
    Ok(QubitState(bloch_matrix(&a)))
}

/// `a_i = tr(ρ σ_i)`.
pub fn density_to_bloch(rho: &QubitState) -> BlochVector {
    matrix_to_bloch(rho.matrix())
}

/// Pauli components of an arbitrary Hermitian matrix: `tr(m σ_i)`.
pub fn matrix_to_bloch(m: &Mat2) -> BlochVector {
    BlochVector::new(
        2.0 * m[(1, 0)].re,
        2.0 * m[(1, 0)].im,
        m[(0, 0)].re - m[(1, 1)].re,
    )
}

/// Smallest eigenvalue of a Hermitian matrix (closed form).
pub fn min_eigenvalue(m: &Mat2) -> f64 {
    let mean = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    let half_gap = (0.5 * (m[(0, 0)].re - m[(1, 1)].re)).hypot(m[(0, 1)].norm());
    mean - half_gap
}

/// Eigendecomposition of a 2×2 Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum2 {
    /// Eigenvalues, descending.
    pub values: [f64; 2],
    /// Orthonormal eigenvectors matching `values`.
    pub vectors: [Vector2<Complex64>; 2],
}

impl Spectrum2 {
    /// `Σ f(λ_i) |v_i⟩⟨v_i|`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Mat2 {
        let mut out = Mat2::zeros();
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            out += (v * v.adjoint()).scale(f(*lambda));
        }
        out
    }

    pub fn reconstruct(&self) -> Mat2 {
        self.map(|x| x)
    }

    /// Projector onto the i-th eigenvector.
    pub fn projector(&self, i: usize) -> Mat2 {
        let v = &self.vectors[i];
        v * v.adjoint()
    }

    pub fn is_degenerate(&self) -> bool {
        (self.values[0] - self.values[1]).abs() <= DEGENERACY_TOL
    }
}

/// Closed-form eigendecomposition of a 2×2 Hermitian matrix.
///
/// Writes `M = m I + r n̂·σ`; the eigenvalues are `m ± r` and the eigenvectors
/// are the ±n̂ spinors. The spinor formula is chosen by the sign of `n_z` so
/// that the normalisation never divides by a small number.
pub fn eig_hermitian(m: &Mat2) -> Result<Spectrum2, QmathError> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(QmathError::NonFinite);
    }
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let deviation = hermiticity_defect(m);
    if deviation > 1e-12 * scale {
        return Err(QmathError::NotHermitian { deviation });
    }
    let m = hermitize(m);
    let mean = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    let dz = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
    let off = m[(0, 1)];
    let r = dz.hypot(off.norm());

    let values = ordered_eigenvalues(mean, r, m[(0, 0)].re * m[(1, 1)].re - off.norm_sqr());
    if r == 0.0 {
        return Ok(Spectrum2 {
            values,
            vectors: [
                Vector2::new(c(1.0, 0.0), c(0.0, 0.0)),
                Vector2::new(c(0.0, 0.0), c(1.0, 0.0)),
            ],
        });
    }
    // n̂ = (Re b, -Im b, dz)/r with b = M_01.
    let nx = off.re / r;
    let ny = -off.im / r;
    let nz = dz / r;
    let upper = if nz >= 0.0 {
        let v = Vector2::new(c(1.0 + nz, 0.0), c(nx, ny));
        v.unscale((2.0 * (1.0 + nz)).sqrt())
    } else {
        let v = Vector2::new(c(nx, -ny), c(1.0 - nz, 0.0));
        v.unscale((2.0 * (1.0 - nz)).sqrt())
    };
    let lower = Vector2::new(-upper[1].conj(), upper[0].conj());
    Ok(Spectrum2 {
        values,
        vectors: [upper, lower],
    })
}

/// `[mean + r, mean − r]`, with the root of smaller magnitude recovered from
/// the determinant so that it keeps full relative precision.
fn ordered_eigenvalues(mean: f64, r: f64, det: f64) -> [f64; 2] {
    let (hi, lo) = (mean + r, mean - r);
    if mean > 0.0 && hi != 0.0 {
        [hi, det / hi]
    } else if mean < 0.0 && lo != 0.0 {
        [det / lo, lo]
    } else {
        [hi, lo]
    }
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(m: &Mat2) -> [f64; 2] {
    let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
    let mean = 0.5 * (a + d);
    let r = (0.5 * (a - d)).hypot(m[(0, 1)].norm());
    ordered_eigenvalues(mean, r, a * d - m[(0, 1)].norm_sqr())
}

#[inline]
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Entropy of a qubit whose Bloch vector has length `radius`:
/// `−p ln p − (1−p) ln(1−p)` with `p = (1+radius)/2`.
pub fn qubit_entropy_from_radius(radius: f64) -> f64 {
    let r = radius.clamp(0.0, 1.0);
    -xlnx(0.5 * (1.0 + r)) - xlnx(0.5 * (1.0 - r))
}

/// `−tr(ρ ln ρ)` from the eigenvalues, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &QubitState) -> f64 {
    let values = clamped_eigenvalues(rho);
    -values.iter().map(|&p| xlnx(p)).sum::<f64>()
}

fn clamped_eigenvalues(rho: &QubitState) -> [f64; 2] {
    hermitian_eigenvalues(rho.matrix()).map(|v| v.clamp(0.0, 1.0))
}

/// Eigenvalues at or below this are treated as exact zeros of the reference
/// state's support.
const SUPPORT_TOL: f64 = 1e-300;
/// Weight of ρ outside σ's support above which `D[ρ‖σ]` is reported infinite.
const LEAKAGE_TOL: f64 = 1e-14;

/// Quantum relative entropy `D[ρ‖σ] = tr(ρ ln ρ) − tr(ρ ln σ)`.
///
/// Returns `f64::INFINITY` when the support of `ρ` is not contained in the
/// support of `σ`.
pub fn relative_entropy(rho: &QubitState, sigma: &QubitState) -> f64 {
    let spec = eig_hermitian(sigma.matrix()).expect("states are Hermitian");
    let mut cross = 0.0;
    for (i, &mu) in spec.values.iter().enumerate() {
        let weight = projected_weight(rho, &spec.vectors[i]);
        if mu <= SUPPORT_TOL {
            if weight > LEAKAGE_TOL {
                return f64::INFINITY;
            }
            continue;
        }
        cross += weight * mu.min(1.0).ln();
    }
    let d = -von_neumann_entropy(rho) - cross;
    d.max(0.0)
}

/// `⟨v|ρ|v⟩`, clamped to [0, 1].
fn projected_weight(rho: &QubitState, v: &Vector2<Complex64>) -> f64 {
    (v.adjoint() * rho.matrix() * v)[(0, 0)].re.clamp(0.0, 1.0)
}

/// Trace distance `½‖ρ − σ‖₁`; for qubits, half the Euclidean distance of
/// the Bloch vectors.
pub fn trace_distance(rho: &QubitState, sigma: &QubitState) -> f64 {
    (0.5 * rho.bloch().distance(&sigma.bloch())).min(1.0)
}

/// Split of `D[ρ₀‖α₀]` into a classical and a coherent part, both measured in
/// the eigenbasis of `α₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceSplit {
    /// `D_KL[P‖Q]` between ρ₀'s populations in α₀'s eigenbasis and α₀'s
    /// eigenvalues.
    pub kl: f64,
    /// Relative entropy of coherence `S(P) − S(ρ₀)`.
    pub coherence: f64,
}

impl CoherenceSplit {
    pub fn total(&self) -> f64 {
        self.kl + self.coherence
    }
}

/// Decomposes `D[ρ₀‖α₀]` into KL divergence plus relative entropy of
/// coherence. When `α₀` is degenerate (`I/2`) the computational basis is used.
pub fn coherence_decomposition(rho0: &QubitState, alpha0: &QubitState) -> CoherenceSplit {
    let mut spec = eig_hermitian(alpha0.matrix()).expect("states are Hermitian");
    if spec.is_degenerate() {
        spec.vectors = [
            Vector2::new(c(1.0, 0.0), c(0.0, 0.0)),
            Vector2::new(c(0.0, 0.0), c(1.0, 0.0)),
        ];
    }
    let p = [
        projected_weight(rho0, &spec.vectors[0]),
        projected_weight(rho0, &spec.vectors[1]),
    ];
    let mut kl = 0.0;
    for (&pi, &qi) in p.iter().zip(&spec.values) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= SUPPORT_TOL {
            if pi > LEAKAGE_TOL {
                kl = f64::INFINITY;
                break;
            }
            continue;
        }
        kl += pi * (pi.ln() - qi.min(1.0).ln());
    }
    let populations_entropy = -xlnx(p[0]) - xlnx(p[1]);
    let coherence = (populations_entropy - von_neumann_entropy(rho0)).clamp(0.0, LN_2);
    CoherenceSplit {
        kl: kl.max(0.0),
        coherence,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn state(x: f64, y: f64, z: f64) -> QubitState {
        bloch_to_density(&BlochVector::new(x, y, z)).unwrap()
    }

    fn gibbs_z(beta_e: f64) -> QubitState {
        state(0.0, 0.0, beta_e.tanh())
    }

    #[test]
    fn bloch_examples() {
        let mixed = state(0.0, 0.0, 0.0);
        assert!(max_abs_diff(mixed.matrix(), &identity().scale(0.5)) < 1e-15);
        let north = state(0.0, 0.0, 1.0);
        assert_eq!(north.matrix()[(0, 0)], c(1.0, 0.0));
        assert_eq!(north.matrix()[(1, 1)], c(0.0, 0.0));
        let plus_x = state(1.0, 0.0, 0.0);
        let expected = (identity() + pauli_x()).scale(0.5);
        assert!(max_abs_diff(plus_x.matrix(), &expected) < 1e-15);
        let plus_y = QubitState::new((identity() + pauli_y()).scale(0.5)).unwrap();
        assert_eq!(plus_y.bloch(), BlochVector::new(0.0, 1.0, 0.0));
        assert_eq!(
            state(0.0, 0.0, -1.0).bloch(),
            BlochVector::new(0.0, 0.0, -1.0)
        );
    }

    #[test]
    fn rejects_vectors_outside_ball() {
        let err = bloch_to_density(&BlochVector::new(1.0, 1.0, 0.0)).unwrap_err();
        assert!(matches!(err, QmathError::BlochOutsideBall { .. }));
        assert!(bloch_to_density(&BlochVector::new(0.0, 0.0, 1.0 + 1e-10)).is_ok());
    }

    #[test]
    fn state_validation() {
        let mut m = identity().scale(0.5);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(
            QubitState::new(m),
            Err(QmathError::NotHermitian { .. })
        ));
        assert!(matches!(
            QubitState::new(identity()),
            Err(QmathError::BadTrace { .. })
        ));
        let negative = Mat2::new(c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0));
        assert!(matches!(
            QubitState::new(negative),
            Err(QmathError::NotPositive { .. })
        ));
    }

    #[test]
    fn eig_examples() {
        let s = eig_hermitian(&pauli_z()).unwrap();
        assert_eq!(s.values, [1.0, -1.0]);
        let s = eig_hermitian(&identity()).unwrap();
        assert_eq!(s.values, [1.0, 1.0]);
        let overlap = (s.vectors[0].adjoint() * s.vectors[1])[(0, 0)].norm();
        assert!(overlap < 1e-15);

        let s = eig_hermitian(&(identity() + pauli_x()).scale(0.5)).unwrap();
        assert_abs_diff_eq!(s.values[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.values[1], 0.0, epsilon = 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // Eigenvectors up to a global phase.
        let plus = Vector2::new(c(h, 0.0), c(h, 0.0));
        let minus = Vector2::new(c(h, 0.0), c(-h, 0.0));
        assert_abs_diff_eq!(
            (plus.adjoint() * s.vectors[0])[(0, 0)].norm(),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            (minus.adjoint() * s.vectors[1])[(0, 0)].norm(),
            1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert!(matches!(
            eig_hermitian(&m),
            Err(QmathError::NotHermitian { .. })
        ));
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(
            von_neumann_entropy(&QubitState::maximally_mixed()),
            LN_2,
            epsilon = 1e-15
        );
        assert_eq!(von_neumann_entropy(&state(0.6, 0.0, 0.8)), 0.0);
        // p = 0.75: −0.75 ln 0.75 − 0.25 ln 0.25
        let half = -0.75 * 0.75f64.ln() - 0.25 * 0.25f64.ln();
        assert_abs_diff_eq!(half, 0.562335, epsilon = 1e-6);
        assert_abs_diff_eq!(
            von_neumann_entropy(&state(0.3, 0.0, 0.4)),
            half,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(qubit_entropy_from_radius(0.5), half, epsilon = 1e-15);
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = state(0.1, -0.4, 0.3);
        assert_abs_diff_eq!(relative_entropy(&rho, &rho), 0.0, epsilon = 1e-14);
        let mixed = QubitState::maximally_mixed();
        assert_abs_diff_eq!(
            relative_entropy(&rho, &mixed),
            LN_2 - von_neumann_entropy(&rho),
            epsilon = 1e-14
        );
        // −ln g₁ with g₁ = e^{−1}/(e + e^{−1}).
        let g1 = (-1.0f64).exp() / (1.0f64.exp() + (-1.0f64).exp());
        let expected = -g1.ln();
        assert_abs_diff_eq!(expected, 2.126928, epsilon = 1e-6);
        let excited = state(0.0, 0.0, -1.0);
        assert_abs_diff_eq!(
            relative_entropy(&excited, &gibbs_z(1.0)),
            expected,
            epsilon = 1e-13
        );
    }

    #[test]
    fn relative_entropy_diverges_outside_support() {
        let ground = state(0.0, 0.0, 1.0);
        let excited = state(0.0, 0.0, -1.0);
        assert_eq!(relative_entropy(&excited, &ground), f64::INFINITY);
        assert_eq!(relative_entropy(&ground, &ground), 0.0);
        assert_eq!(
            relative_entropy(&QubitState::maximally_mixed(), &ground),
            f64::INFINITY
        );
    }

    #[test]
    fn trace_distance_examples() {
        let up = state(0.0, 0.0, 1.0);
        let down = state(0.0, 0.0, -1.0);
        assert_eq!(trace_distance(&up, &up), 0.0);
        assert_abs_diff_eq!(trace_distance(&up, &down), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            trace_distance(&QubitState::maximally_mixed(), &up),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn coherence_examples() {
        let alpha = state(0.2, 0.1, 0.5);
        let split = coherence_decomposition(&alpha, &alpha);
        assert_abs_diff_eq!(split.kl, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(split.coherence, 0.0, epsilon = 1e-14);

        // ρ₀ along α₀'s axis is diagonal in its eigenbasis.
        let axis = alpha.bloch().scale(1.0 / alpha.bloch().norm());
        let rho = state(-0.7 * axis.x, -0.7 * axis.y, -0.7 * axis.z);
        let split = coherence_decomposition(&rho, &alpha);
        assert_abs_diff_eq!(split.coherence, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(split.kl, relative_entropy(&rho, &alpha), epsilon = 1e-13);
    }

    #[test]
    fn coherence_with_degenerate_reference_uses_z_basis() {
        let rho = state(0.6, 0.0, 0.0);
        let split = coherence_decomposition(&rho, &QubitState::maximally_mixed());
        // Populations are (1/2, 1/2) in the z basis: no classical divergence.
        assert_abs_diff_eq!(split.kl, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            split.coherence,
            LN_2 - von_neumann_entropy(&rho),
            epsilon = 1e-14
        );
    }

    fn any_bloch() -> impl Strategy<Value = BlochVector> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..1.0f64).prop_map(|(x, y, z, r)| {
            let v = BlochVector::new(x, y, z);
            let n = v.norm().max(1e-12);
            v.scale(r / n)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn bloch_round_trip(a in any_bloch()) {
            let back = density_to_bloch(&bloch_to_density(&a).unwrap());
            prop_assert!(back.distance(&a) <= 1e-12);
        }

        #[test]
        fn spectrum_reconstructs_and_is_orthonormal(a in any_bloch(), shift in -3.0..3.0f64, scale in 0.1..5.0f64) {
            let m = bloch_matrix(&a).scale(scale) + identity().scale(shift);
            let s = eig_hermitian(&m).unwrap();
            prop_assert!(s.values[0] >= s.values[1]);
            prop_assert!(max_abs_diff(&s.reconstruct(), &m) <= 1e-10);
            for i in 0..2 {
                for j in 0..2 {
                    let ip = (s.vectors[i].adjoint() * s.vectors[j])[(0, 0)];
                    let expected = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((ip - c(expected, 0.0)).norm() <= 1e-10);
                }
            }
        }

        #[test]
        fn entropy_radius_formula_matches_eigenvalues(a in any_bloch()) {
            let rho = bloch_to_density(&a).unwrap();
            prop_assert!((von_neumann_entropy(&rho) - qubit_entropy_from_radius(a.norm())).abs() <= 1e-12);
        }

        #[test]
        fn mixed_reference_identity(a in any_bloch()) {
            let rho = bloch_to_density(&a).unwrap();
            let lhs = relative_entropy(&rho, &QubitState::maximally_mixed()) + von_neumann_entropy(&rho);
            prop_assert!((lhs - LN_2).abs() <= 1e-12);
        }

        #[test]
        fn relative_entropy_nonnegative_and_faithful(a in any_bloch(), b in any_bloch()) {
            let rho = bloch_to_density(&a).unwrap();
            let sigma = bloch_to_density(&b.scale(0.999)).unwrap();
            let d = relative_entropy(&rho, &sigma);
            prop_assert!(d >= 0.0);
            if trace_distance(&rho, &sigma) > 1e-4 {
                prop_assert!(d > 0.0);
            }
        }

        #[test]
        fn coherence_split_sums_to_relative_entropy(a in any_bloch(), b in any_bloch()) {
            let rho = bloch_to_density(&a).unwrap();
            let alpha = bloch_to_density(&b.scale(0.99)).unwrap();
            let split = coherence_decomposition(&rho, &alpha);
            let d = relative_entropy(&rho, &alpha);
            prop_assert!((split.total() - d).abs() <= 1e-10);
            prop_assert!(split.coherence >= 0.0 && split.coherence <= LN_2);
            prop_assert!(split.kl <= d + 1e-12);
        }

        #[test]
        fn trace_distance_symmetric(a in any_bloch(), b in any_bloch()) {
            let rho = bloch_to_density(&a).unwrap();
            let sigma = bloch_to_density(&b).unwrap();
            let d = trace_distance(&rho, &sigma);
            prop_assert_eq!(d, trace_distance(&sigma, &rho));
            // Matches ½ Σ|λ_i(ρ − σ)|.
            let diff = rho.matrix() - sigma.matrix();
            let s = eig_hermitian(&diff).unwrap();
            let direct = 0.5 * (s.values[0].abs() + s.values[1].abs());
            prop_assert!((d - direct).abs() <= 1e-12);
        }
    }
}
