//! Single-qubit linear algebra.
//!
//! All matrices use the basis ordering (|1⟩, |0⟩): row/column 0 is the upper
//! level. With this ordering σ_z = diag(1, −1), σ₋ = |0⟩⟨1| sits in the
//! lower-left corner and ⟨σ₋⟩ = Tr(ρσ₋) is the upper-right entry of ρ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SgadError};

/// Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Unit-trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-12;
/// Hermiticity tolerance for the closed-form eigenvalue routine.
pub const EIGEN_HERMITIAN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Serializes as a row-major nested array of `[re, im]` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexMatrix2 {
    pub entries: [[Complex64; 2]; 2],
}

impl ComplexMatrix2 {
    pub const fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Self::new([
            [Complex64::from(m[0][0]), Complex64::from(m[0][1])],
            [Complex64::from(m[1][0]), Complex64::from(m[1][1])],
        ])
    }

    pub const fn zero() -> Self {
        Self::new([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Self::new([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Self::from_real([[a, 0.0], [0.0, b]])
    }

    pub const fn pauli_x() -> Self {
        Self::new([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        Self::new([[ZERO, -I], [I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::diag(1.0, -1.0)
    }

    /// σ₊ = |1⟩⟨0|.
    pub const fn sigma_plus() -> Self {
        Self::new([[ZERO, ONE], [ZERO, ZERO]])
    }

    /// σ₋ = |0⟩⟨1|.
    pub const fn sigma_minus() -> Self {
        Self::new([[ZERO, ZERO], [ONE, ZERO]])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self::new([[e[0][0].conj(), e[1][0].conj()], [e[0][1].conj(), e[1][1].conj()]])
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn det(&self) -> Complex64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let e = &self.entries;
        Self::new([[f(e[0][0]), f(e[0][1])], [f(e[1][0]), f(e[1][1])]])
    }

    /// ‖M − M†‖_F.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    /// (M + M†)/2.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(Complex64::from(0.5))
    }

    /// M ρ M†.
    pub fn sandwich(&self, rho: &Self) -> Self {
        *self * *rho * self.adjoint()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|z| z.is_finite())
    }
}

impl Default for ComplexMatrix2 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for ComplexMatrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        Self::new([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl Sub for ComplexMatrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ComplexMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        Self::new([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

impl Mul<f64> for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.map(|z| z * s)
    }
}

impl Mul<Complex64> for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        self.scale(s)
    }
}

impl fmt::Display for ComplexMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(f, "[[{}, {}], [{}, {}]]", e[0][0], e[0][1], e[1][0], e[1][1])
    }
}

/// Expectation values (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        BlochVector::new(self.x - other.x, self.y - other.y, self.z - other.z).norm()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs()).max((self.z - other.z).abs())
    }
}

/// A validated qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix {
    matrix: ComplexMatrix2,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: ComplexMatrix2) -> Result<Self> {
        let report = validate_density(&matrix);
        if report.passed() {
            Ok(Self { matrix })
        } else {
            Err(SgadError::UnphysicalState(report.to_string()))
        }
    }

    /// Wraps a matrix known to be a state up to roundoff (channel outputs,
    /// integrator states). No checks are performed.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix2) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed() -> Self {
        Self::new_unchecked(ComplexMatrix2::diag(0.5, 0.5))
    }

    pub fn matrix(&self) -> &ComplexMatrix2 {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix2 {
        self.matrix
    }

    /// ⟨σ₋⟩, the upper-right entry.
    pub fn coherence(&self) -> Complex64 {
        self.matrix.entries[0][1]
    }

    /// Population of the upper level |1⟩.
    pub fn excited_population(&self) -> f64 {
        self.matrix.entries[0][0].re
    }

    pub fn purity(&self) -> f64 {
        (self.matrix * self.matrix).trace().re
    }

    pub fn bloch(&self) -> BlochVector {
        density_to_bloch(self)
    }

    /// Convex combination `w·self + (1−w)·other`.
    pub fn mix(&self, w: f64, other: &Self) -> Self {
        Self::new_unchecked(self.matrix * w + other.matrix * (1.0 - w))
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        hermitian2_closed_form(&self.matrix)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix2::deserialize(d)?;
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// |ψ⟩ = cos(θ₀/2)|1⟩ + e^{iφ₀} sin(θ₀/2)|0⟩.
pub fn pure_state(theta0: f64, phi0: f64) -> Result<DensityMatrix> {
    if !theta0.is_finite() || !phi0.is_finite() {
        return Err(SgadError::InvalidParameter {
            name: "theta0/phi0",
            value: if theta0.is_finite() { phi0 } else { theta0 },
            reason: "angles must be finite",
        });
    }
    let (s, c) = (theta0 / 2.0).sin_cos();
    let upper = Complex64::from(c);
    let lower = Complex64::from_polar(s, phi0);
    let m = ComplexMatrix2::new([
        [upper * upper.conj(), upper * lower.conj()],
        [lower * upper.conj(), lower * lower.conj()],
    ]);
    Ok(DensityMatrix::new_unchecked(m))
}

/// ρ = (𝕀 + b·σ)/2.
pub fn bloch_to_density(b: BlochVector) -> Result<DensityMatrix> {
    let n = b.norm();
    if !n.is_finite() || n > 1.0 + 1e-12 {
        return Err(SgadError::UnphysicalState(format!("Bloch vector norm {n} exceeds 1")));
    }
    let m = ComplexMatrix2::new([
        [Complex64::from(0.5 * (1.0 + b.z)), Complex64::new(0.5 * b.x, -0.5 * b.y)],
        [Complex64::new(0.5 * b.x, 0.5 * b.y), Complex64::from(0.5 * (1.0 - b.z))],
    ]);
    Ok(DensityMatrix::new_unchecked(m))
}

/// Components Tr(ρσ_i).
pub fn density_to_bloch(rho: &DensityMatrix) -> BlochVector {
    let e = &rho.matrix.entries;
    // ⟨σ₋⟩ = (x − iy)/2 lives in the upper-right entry.
    let minus = 0.5 * (e[0][1] + e[1][0].conj());
    BlochVector::new(2.0 * minus.re, -2.0 * minus.im, (e[0][0] - e[1][1]).re)
}

fn hermitian2_closed_form(m: &ComplexMatrix2) -> (f64, f64) {
    let e = &m.entries;
    let (a, d) = (e[0][0].re, e[1][1].re);
    let off = 0.5 * (e[0][1] + e[1][0].conj());
    let half_gap = (0.25 * (a - d) * (a - d) + off.norm_sqr()).max(0.0).sqrt();
    let mean = 0.5 * (a + d);
    (mean + half_gap, mean - half_gap)
}

/// Both eigenvalues of a 2×2 Hermitian matrix, descending.
///
/// Uses (Tr ± √(Tr² − 4 det))/2 written as mean ± √(((a−d)/2)² + |b|²), which
/// is the same discriminant clamped at zero without the subtraction.
pub fn eigenvalues_hermitian2(m: &ComplexMatrix2) -> Result<(f64, f64)> {
    let defect = m.hermiticity_defect();
    if !(defect <= EIGEN_HERMITIAN_TOL) {
        return Err(SgadError::NotHermitian { defect });
    }
    Ok(hermitian2_closed_form(m))
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_term(p) + entropy_term(1.0 - p)
}

fn entropy_term(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    if p == 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let (l1, l2) = rho.eigenvalues();
    entropy_term(l1) + entropy_term(l2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
}

impl DensityReport {
    pub fn passed(&self) -> bool {
        self.hermiticity_defect <= HERMITIAN_TOL
            && self.trace_defect <= TRACE_TOL
            && self.min_eigenvalue >= PSD_TOL
    }
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hermiticity defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e} ({})",
            self.hermiticity_defect,
            self.trace_defect,
            self.min_eigenvalue,
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

/// Diagnostic check of the density-matrix invariants; never fails.
pub fn validate_density(rho: &ComplexMatrix2) -> DensityReport {
    if !rho.is_finite() {
        return DensityReport {
            hermiticity_defect: f64::INFINITY,
            trace_defect: f64::INFINITY,
            min_eigenvalue: f64::NEG_INFINITY,
        };
    }
    let hermiticity_defect = rho.hermiticity_defect();
    let trace_defect = (rho.trace() - ONE).norm();
    let (_, min_eigenvalue) = hermitian2_closed_form(&rho.hermitian_part());
    DensityReport { hermiticity_defect, trace_defect, min_eigenvalue }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn assert_matrix_eq(a: &ComplexMatrix2, b: &ComplexMatrix2, tol: f64) {
        let d = (*a - *b).max_abs();
        assert!(d <= tol, "{a} vs {b} (diff {d:e})");
    }

    #[test]
    fn pure_state_poles_and_equator() {
        let up = pure_state(0.0, 0.0).unwrap();
        assert_matrix_eq(up.matrix(), &ComplexMatrix2::diag(1.0, 0.0), 1e-15);
        let down = pure_state(PI, 0.0).unwrap();
        assert_matrix_eq(down.matrix(), &ComplexMatrix2::diag(0.0, 1.0), 1e-15);
        // (|1⟩ + |0⟩)/√2 ⊗ h.c. has every entry equal to 1/2.
        let plus = pure_state(FRAC_PI_2, 0.0).unwrap();
        assert_matrix_eq(
            plus.matrix(),
            &ComplexMatrix2::from_real([[0.5, 0.5], [0.5, 0.5]]),
            1e-15,
        );
    }

    #[test]
    fn pure_state_rejects_nan() {
        assert!(pure_state(f64::NAN, 0.0).is_err());
        assert!(pure_state(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn bloch_conversions() {
        let mixed = bloch_to_density(BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        assert_matrix_eq(mixed.matrix(), &ComplexMatrix2::diag(0.5, 0.5), 0.0);
        let north = bloch_to_density(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert_matrix_eq(north.matrix(), &ComplexMatrix2::diag(1.0, 0.0), 0.0);
        let x = bloch_to_density(BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        assert!(x.bloch().max_abs_diff(&BlochVector::new(1.0, 0.0, 0.0)) <= 1e-14);

        assert_eq!(DensityMatrix::maximally_mixed().bloch(), BlochVector::new(0.0, 0.0, 0.0));
        let south = pure_state(PI, 0.0).unwrap().bloch();
        assert!(south.max_abs_diff(&BlochVector::new(0.0, 0.0, -1.0)) <= 1e-15);
    }

    #[test]
    fn sigma_y_sign_convention() {
        // ρ₀₁ = ½ e^{−iφ₀} sin θ₀ = −i/2 and ρ₀₁ = (x − iy)/2 give y = +1.
        let b = pure_state(FRAC_PI_2, FRAC_PI_2).unwrap().bloch();
        assert_abs_diff_eq!(b.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.y, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.z, 0.0, epsilon = 1e-15);
        let rho = pure_state(FRAC_PI_2, FRAC_PI_2).unwrap();
        let y = (*rho.matrix() * ComplexMatrix2::pauli_y()).trace();
        assert_abs_diff_eq!(y.re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn sigma_minus_is_upper_right_expectation() {
        let rho = pure_state(1.1, 0.4).unwrap();
        let expect = (*rho.matrix() * ComplexMatrix2::sigma_minus()).trace();
        assert!((expect - rho.coherence()).norm() < 1e-16);
    }

    #[test]
    fn bloch_rejects_outside_ball() {
        assert!(bloch_to_density(BlochVector::new(1.0, 0.1, 0.0)).is_err());
        assert!(bloch_to_density(BlochVector::new(f64::NAN, 0.0, 0.0)).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalues_hermitian2(&ComplexMatrix2::identity()).unwrap(), (1.0, 1.0));
        assert_eq!(
            eigenvalues_hermitian2(&ComplexMatrix2::diag(0.75, 0.25)).unwrap(),
            (0.75, 0.25)
        );
        // λ² − λ = 0 for the all-one-half matrix.
        let (a, b) =
            eigenvalues_hermitian2(&ComplexMatrix2::from_real([[0.5, 0.5], [0.5, 0.5]])).unwrap();
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let m = ComplexMatrix2::from_real([[0.5, 1.0], [0.0, 0.5]]);
        assert!(matches!(eigenvalues_hermitian2(&m), Err(SgadError::NotHermitian { .. })));
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(
            von_neumann_entropy(&pure_state(0.7, 2.0).unwrap()),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            von_neumann_entropy(&DensityMatrix::maximally_mixed()),
            1.0,
            epsilon = 1e-15
        );
        // h(0.1) = −0.1 log₂ 0.1 − 0.9 log₂ 0.9 = 0.46899559...
        let rho = DensityMatrix::new(ComplexMatrix2::diag(0.9, 0.1)).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&rho), 0.468_995_593_589_281_2, epsilon = 1e-4);
    }

    #[test]
    fn validation_examples() {
        assert!(validate_density(&ComplexMatrix2::diag(0.5, 0.5)).passed());
        let negative = validate_density(&ComplexMatrix2::diag(1.5, -0.5));
        assert!(!negative.passed());
        assert_abs_diff_eq!(negative.min_eigenvalue, -0.5);
        let heavy = validate_density(&ComplexMatrix2::diag(0.6, 0.6));
        assert!(!heavy.passed());
        assert_abs_diff_eq!(heavy.trace_defect, 0.2, epsilon = 1e-15);
        let skew = ComplexMatrix2::from_real([[0.5, 0.1], [-0.1, 0.5]]);
        assert!(!validate_density(&skew).passed());
        assert!(!validate_density(&ComplexMatrix2::diag(f64::NAN, 1.0)).passed());
    }

    #[test]
    fn density_deserialization_validates() {
        let ok = serde_json::to_string(&ComplexMatrix2::diag(0.5, 0.5)).unwrap();
        assert!(serde_json::from_str::<DensityMatrix>(&ok).is_ok());
        let bad = serde_json::to_string(&ComplexMatrix2::diag(1.5, -0.5)).unwrap();
        assert!(serde_json::from_str::<DensityMatrix>(&bad).is_err());
    }

    fn ball_vector() -> impl Strategy<Value = BlochVector> {
        (0.0..=1.0f64, 0.0..PI, 0.0..2.0 * PI).prop_map(|(r, th, ph)| {
            BlochVector::new(r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos())
        })
    }

    fn random_unitary(a: f64, b: f64, c: f64, d: f64) -> ComplexMatrix2 {
        // e^{ia} [[e^{ib} cos c, e^{id} sin c], [−e^{−id} sin c, e^{−ib} cos c]]
        let g = Complex64::from_polar(1.0, a);
        ComplexMatrix2::new([
            [Complex64::from_polar(c.cos(), b), Complex64::from_polar(c.sin(), d)],
            [-Complex64::from_polar(c.sin(), -d), Complex64::from_polar(c.cos(), -b)],
        ]) * g
    }

    proptest! {
        #[test]
        fn bloch_round_trip(b in ball_vector()) {
            let back = bloch_to_density(b).unwrap().bloch();
            prop_assert!(back.max_abs_diff(&b) <= 1e-13);
        }

        #[test]
        fn purity_matches_bloch_length(b in ball_vector()) {
            let rho = bloch_to_density(b).unwrap();
            let n = b.norm();
            prop_assert!((rho.purity() - 0.5 * (1.0 + n * n)).abs() <= 1e-12);
            let (l1, l2) = rho.eigenvalues();
            prop_assert!((l1 + l2 - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn entropy_unitarily_invariant(
            b in ball_vector(),
            a in 0.0..6.3f64, p in 0.0..6.3f64, c in 0.0..6.3f64, d in 0.0..6.3f64,
        ) {
            let rho = bloch_to_density(b).unwrap();
            let u = random_unitary(a, p, c, d);
            let rotated = DensityMatrix::new_unchecked(u.sandwich(rho.matrix()));
            let s0 = von_neumann_entropy(&rho);
            prop_assert!((0.0..=1.0).contains(&s0));
            prop_assert!((von_neumann_entropy(&rotated) - s0).abs() <= 1e-10);
        }
    }
}
