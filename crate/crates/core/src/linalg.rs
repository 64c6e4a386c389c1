//! Dense complex linear algebra used by the desk-scale reference paths.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type Mat = DMatrix<Complex64>;
pub type Vector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn dagger(a: &Mat) -> Mat {
    a.adjoint()
}

/// Spectral decomposition of a Hermitian matrix: real eigenvalues and a
/// unitary whose columns are the eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

impl HermitianEigen {
    pub fn new(h: &Mat) -> Self {
        // symmetrize so rounding noise in the lower triangle is ignored
        let sym = (h + h.adjoint()).scale(0.5);
        let eig = sym.symmetric_eigen();
        HermitianEigen {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }

    /// V f(Λ) V† for a scalar function applied to the eigenvalues.
    pub fn apply<F>(&self, f: F) -> Mat
    where
        F: Fn(f64) -> Complex64,
    {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let fk = f(lambda);
            for r in 0..n {
                scaled[(r, k)] *= fk;
            }
        }
        &scaled * self.vectors.adjoint()
    }
}

/// Applies a scalar function to a Hermitian matrix through its eigendecomposition.
pub fn hermitian_function<F>(h: &Mat, f: F) -> Mat
where
    F: Fn(f64) -> Complex64,
{
    HermitianEigen::new(h).apply(f)
}

/// Positive square root of a positive semidefinite Hermitian matrix, with
/// eigenvalues clamped to [0, 1] before the root.
pub fn psd_sqrt_clamped(h: &Mat) -> Mat {
    hermitian_function(h, |x| Complex64::new(x.clamp(0.0, 1.0).sqrt(), 0.0))
}

pub fn spectral_norm(a: &Mat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |m, &s| m.max(s))
}

pub fn max_abs_entry(a: &Mat) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// Largest entrywise modulus of `a - a†`.
pub fn hermitian_asymmetry(a: &Mat) -> f64 {
    max_abs_entry(&(a - a.adjoint()))
}

/// ‖U†U − I‖ in operator norm.
pub fn unitarity_defect(u: &Mat) -> f64 {
    let n = u.nrows();
    spectral_norm(&(u.adjoint() * u - identity(n)))
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

pub fn trace(a: &Mat) -> Complex64 {
    a.trace()
}

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Number of qubits needed to index `n` modes (n rounded up to a power of two).
pub fn qubits_for(n: usize) -> u32 {
    n.max(1).next_power_of_two().trailing_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_projector_is_projector() {
        let mut p = Mat::zeros(2, 2);
        p[(0, 0)] = ONE;
        let r = psd_sqrt_clamped(&p);
        assert!((r - p).norm() < 1e-12);
    }

    #[test]
    fn qubit_counts() {
        assert_eq!(qubits_for(1), 0);
        assert_eq!(qubits_for(8), 3);
        assert_eq!(qubits_for(9), 4);
    }

    #[test]
    fn hermitian_function_reproduces_exponential_of_pauli_x() {
        let mut x = Mat::zeros(2, 2);
        x[(0, 1)] = ONE;
        x[(1, 0)] = ONE;
        let t: f64 = 0.7;
        let u = hermitian_function(&x, |e| (I * e * t).exp());
        assert!((u[(0, 0)] - c(t.cos(), 0.0)).norm() < 1e-12);
        assert!((u[(0, 1)] - c(0.0, t.sin())).norm() < 1e-12);
        assert!(unitarity_defect(&u) < 1e-12);
    }
}
