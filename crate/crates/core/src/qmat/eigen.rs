//! Eigenvalues of small Hermitian matrices.

use nalgebra::DMatrix;

use super::Matrix;

/// Eigenvalues of a Hermitian matrix, sorted ascending. Only the lower
/// triangle is read, so callers check Hermiticity separately.
pub fn hermitian_eigenvalues<const N: usize>(m: &Matrix<N>) -> [f64; N] {
    let values = DMatrix::from_fn(N, N, |i, j| m.0[i][j]).symmetric_eigenvalues();
    let mut ev = [0.0; N];
    ev.iter_mut().zip(values.iter()).for_each(|(e, v)| *e = *v);
    ev.sort_by(f64::total_cmp);
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{c, Matrix4};

    #[test]
    fn diagonal_input() {
        let ev = hermitian_eigenvalues(&Matrix4::diag([0.4, -0.1, 0.3, 0.2]));
        assert_eq!(ev, [-0.1, 0.2, 0.3, 0.4]);
    }

    #[test]
    fn complex_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let m = Matrix([[c(1.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(1.0, 0.0)]]);
        let ev = hermitian_eigenvalues(&m);
        assert!(ev[0].abs() < 1e-15);
        assert!((ev[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn bell_projector() {
        let mut m = Matrix4::zeros();
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            m.0[i][j] = c(0.5, 0.0);
        }
        let ev = hermitian_eigenvalues(&m);
        for e in &ev[..3] {
            assert!(e.abs() < 1e-15);
        }
        assert!((ev[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matches_characteristic_invariants() {
        // Dense Hermitian matrix: sum of eigenvalues = trace and
        // sum of squares = Frobenius norm squared.
        let mut m = Matrix4::zeros();
        let vals = [
            (0, 1, c(0.3, -0.2)),
            (0, 2, c(-0.1, 0.4)),
            (0, 3, c(0.05, 0.0)),
            (1, 2, c(0.0, 0.7)),
            (1, 3, c(-0.25, 0.15)),
            (2, 3, c(0.6, -0.3)),
        ];
        for &(i, j, z) in &vals {
            m.0[i][j] = z;
            m.0[j][i] = z.conj();
        }
        for (i, d) in [0.9, -0.4, 0.1, 1.3].into_iter().enumerate() {
            m.0[i][i] = c(d, 0.0);
        }
        let ev = hermitian_eigenvalues(&m);
        let trace: f64 = ev.iter().sum();
        let frob: f64 = m.0.iter().flatten().map(|z| z.norm_sqr()).sum();
        assert!((trace - 1.9).abs() < 1e-13);
        assert!((ev.iter().map(|e| e * e).sum::<f64>() - frob).abs() < 1e-13);
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    }
}
