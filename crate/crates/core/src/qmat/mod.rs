//! Fixed-size complex matrices for one and two qubits.
//!
//! Two-qubit matrices use the basis order `|00>, |01>, |10>, |11>`, with the
//! first tensor factor indexing the first subsystem. Under this ordering a
//! channel acting on the first qubit mixes rows/columns 0 with 2 and 1 with 3.

mod eigen;
mod json;

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result, ValidationError};

pub use eigen::hermitian_eigenvalues;
pub use json::{matrix_from_json, matrix_to_json};

pub type ComplexScalar = Complex64;

/// Shorthand for building a complex scalar.
#[inline]
pub const fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

/// Dense `N x N` complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize>(pub [[ComplexScalar; N]; N]);

/// 2x2 operator on a single qubit (Kraus operators, qubit states).
pub type QubitOperator = Matrix<2>;
/// 4x4 operator on two qubits.
pub type Matrix4 = Matrix<4>;

impl<const N: usize> Matrix<N> {
    pub fn zeros() -> Self {
        Matrix([[c(0.0, 0.0); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.0[i][j] = c(x, 0.0);
            }
        }
        m
    }

    pub fn diag(d: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, &x) in d.iter().enumerate() {
            m.0[i][i] = c(x, 0.0);
        }
        m
    }

    pub const fn dim(&self) -> usize {
        N
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: ComplexScalar) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn trace(&self) -> ComplexScalar {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |a_ij - conj(a_ji)|.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn rows(&self) -> &[[ComplexScalar; N]; N] {
        &self.0
    }
}

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = ComplexScalar;

    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Mul::mul(&self, &rhs)
    }
}

impl<const N: usize> Mul for &Matrix<N> {
    type Output = Matrix<N>;

    fn mul(self, rhs: &Matrix<N>) -> Matrix<N> {
        let mut out = Matrix::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self.0
            .iter_mut()
            .flatten()
            .zip(rhs.0.iter().flatten())
            .for_each(|(a, b)| *a += b);
        self
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        self.0
            .iter_mut()
            .flatten()
            .zip(rhs.0.iter().flatten())
            .for_each(|(a, b)| *a -= b);
        self
    }
}

/// Kronecker product `a ⊗ b`; `a` acts on the first subsystem.
pub fn tensor(a: &QubitOperator, b: &QubitOperator) -> Matrix4 {
    let mut out = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

/// A validated two-qubit density matrix: Hermitian, unit trace, positive
/// semidefinite (each up to the tolerance it was validated with).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "json::MatrixDoc")]
pub struct DensityMatrix4(Matrix4);

impl DensityMatrix4 {
    pub fn matrix(&self) -> &Matrix4 {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix4 {
        self.0
    }

    /// Entry `a_ij` with the 1-based indices used in the two-qubit
    /// literature (`a_11 ... a_44`).
    pub fn a(&self, i: usize, j: usize) -> ComplexScalar {
        self.0 .0[i - 1][j - 1]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.0)[0]
    }
}

impl Index<(usize, usize)> for DensityMatrix4 {
    type Output = ComplexScalar;

    fn index(&self, idx: (usize, usize)) -> &ComplexScalar {
        &self.0[idx]
    }
}

/// Checks the density-matrix invariants, in the order Hermitian, unit
/// trace, positive semidefinite.
pub fn validate_density(m: Matrix4, tol_struct: f64) -> Result<DensityMatrix4, ValidationError> {
    for (i, row) in m.0.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(ValidationError::NonFinite { row: i, col: j });
            }
        }
    }
    let residual = m.hermiticity_residual();
    if residual > tol_struct {
        return Err(ValidationError::NotHermitian { residual });
    }
    let tr = m.trace();
    let residual = (tr - c(1.0, 0.0)).norm();
    if residual > tol_struct {
        return Err(ValidationError::NotUnitTrace { residual });
    }
    let min_eigenvalue = hermitian_eigenvalues(&m)[0];
    if min_eigenvalue < -tol_struct {
        return Err(ValidationError::NotPositive { min_eigenvalue });
    }
    Ok(DensityMatrix4(m))
}

/// Residual of the completeness relation `sum K^dag K = I`.
pub fn completeness_residual(ops: &[Matrix4]) -> f64 {
    let sum = ops.iter().fold(Matrix4::zeros(), |acc, k| acc + &k.adjoint() * k);
    sum.max_abs_diff(&Matrix4::identity())
}

/// `rho -> sum_i K_i rho K_i^dag`, validated at `tol_struct`.
pub fn apply_kraus_with_tol(rho: &DensityMatrix4, ops: &[Matrix4], tol_struct: f64) -> Result<DensityMatrix4> {
    let residual = completeness_residual(ops);
    if residual > tol_struct {
        return Err(Error::NonTracePreserving { residual });
    }
    let out = ops
        .iter()
        .fold(Matrix4::zeros(), |acc, k| acc + (k * rho.matrix()) * k.adjoint());
    validate_density(out, tol_struct).map_err(Error::InvalidState)
}

pub fn apply_kraus(rho: &DensityMatrix4, ops: &[Matrix4]) -> Result<DensityMatrix4> {
    apply_kraus_with_tol(rho, ops, crate::TOL_STRUCT)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket_bra(i: usize, j: usize) -> QubitOperator {
        let mut m = QubitOperator::zeros();
        m.0[i][j] = c(1.0, 0.0);
        m
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i2 = QubitOperator::identity();
        assert_eq!(tensor(&i2, &i2), Matrix4::identity());
    }

    #[test]
    fn tensor_basis_ordering() {
        // |0><0| ⊗ |1><1| = |01><01|, index 1 (0-based)
        let m = tensor(&ket_bra(0, 0), &ket_bra(1, 1));
        let mut expected = Matrix4::zeros();
        expected.0[1][1] = c(1.0, 0.0);
        assert_eq!(m, expected);
    }

    #[test]
    fn tensor_full_decay_on_first_qubit() {
        // E1(γ=1) = |0><1|, so E1 ⊗ I maps |10> -> |00> and |11> -> |01>.
        let m = tensor(&ket_bra(0, 1), &QubitOperator::identity());
        let mut expected = Matrix4::zeros();
        expected.0[0][2] = c(1.0, 0.0);
        expected.0[1][3] = c(1.0, 0.0);
        assert_eq!(m, expected);
    }

    #[test]
    fn maximally_mixed_is_valid() {
        assert!(validate_density(Matrix4::diag([0.25; 4]), 1e-9).is_ok());
    }

    #[test]
    fn trace_violation_reported() {
        let err = validate_density(Matrix4::diag([1.0, 0.0, 0.0, 0.01]), 1e-9).unwrap_err();
        match err {
            ValidationError::NotUnitTrace { residual } => assert!((residual - 0.01).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_eigenvalue_reported() {
        let mut m = Matrix4::zeros();
        m.0[0][0] = c(0.5, 0.0);
        m.0[1][1] = c(0.5, 0.0);
        m.0[0][1] = c(0.6, 0.0);
        m.0[1][0] = c(0.6, 0.0);
        match validate_density(m, 1e-9).unwrap_err() {
            ValidationError::NotPositive { min_eigenvalue } => {
                assert!((min_eigenvalue + 0.1).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_hermitian_reported() {
        let mut m = Matrix4::diag([0.25; 4]);
        m.0[0][1] = c(0.1, 0.0);
        assert!(matches!(
            validate_density(m, 1e-9),
            Err(ValidationError::NotHermitian { .. })
        ));
    }

    #[test]
    fn nan_rejected() {
        let mut m = Matrix4::diag([0.25; 4]);
        m.0[2][3] = c(f64::NAN, 0.0);
        assert!(matches!(
            validate_density(m, 1e-9),
            Err(ValidationError::NonFinite { row: 2, col: 3 })
        ));
    }

    #[test]
    fn identity_channel_is_noop() {
        let rho = validate_density(Matrix4::diag([0.1, 0.2, 0.3, 0.4]), 1e-9).unwrap();
        let out = apply_kraus(&rho, &[Matrix4::identity()]).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn incomplete_kraus_set_rejected() {
        let rho = validate_density(Matrix4::diag([0.25; 4]), 1e-9).unwrap();
        let half = Matrix4::identity().scale(c(0.5, 0.0));
        assert!(matches!(
            apply_kraus(&rho, &[half]),
            Err(Error::NonTracePreserving { .. })
        ));
    }

    #[test]
    fn bell_state_full_decay_on_first_qubit() {
        // Φ+ with E0(1) ⊗ I, E1(1) ⊗ I: hand-applied products give diag(1/2, 1/2, 0, 0).
        let mut bell = Matrix4::zeros();
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            bell.0[i][j] = c(0.5, 0.0);
        }
        let rho = validate_density(bell, 1e-9).unwrap();
        let i2 = QubitOperator::identity();
        let e0 = ket_bra(0, 0);
        let e1 = ket_bra(0, 1);
        let out = apply_kraus(&rho, &[tensor(&e0, &i2), tensor(&e1, &i2)]).unwrap();
        assert!(out.matrix().max_abs_diff(&Matrix4::diag([0.5, 0.5, 0.0, 0.0])) < 1e-15);
    }
}
