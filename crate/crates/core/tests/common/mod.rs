#![allow(dead_code)]

use fermiblock::linalg::{Mat, ONE, ZERO};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    Mat::from_fn(n, n, |_, _| {
        // Box-Muller
        let u1: f64 = rng.random::<f64>().max(1e-300);
        let u2: f64 = rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        Complex64::new(
            r * (2.0 * std::f64::consts::PI * u2).cos(),
            r * (2.0 * std::f64::consts::PI * u2).sin(),
        )
    })
}

/// Haar-ish random unitary from the QR decomposition of a Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    gaussian_matrix(rng, n).qr().q()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    let g = gaussian_matrix(rng, n);
    (&g + g.adjoint()).scale(0.5)
}

/// Random matrix rescaled to spectral norm `norm`.
pub fn random_contraction(rng: &mut ChaCha8Rng, n: usize, norm: f64) -> Mat {
    let g = gaussian_matrix(rng, n);
    let s = g.clone().singular_values().max();
    g.scale(norm / s)
}

pub fn max_entry_diff(a: &Mat, b: &Mat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Jordan-Wigner annihilation operators on the 2^modes Fock space; mode 0
/// is the most significant bit.
pub fn annihilators(modes: usize) -> Vec<Mat> {
    let dim = 1usize << modes;
    (0..modes)
        .map(|p| {
            let bit = 1usize << (modes - 1 - p);
            Mat::from_fn(dim, dim, |r, c| {
                // a_p |c⟩ = sign · |c without p⟩ when p is occupied
                if c & bit == 0 || r != c ^ bit {
                    return ZERO;
                }
                let before = (c >> (modes - p)).count_ones();
                if before % 2 == 0 {
                    ONE
                } else {
                    -ONE
                }
            })
        })
        .collect()
}

/// Thermal Fock-space density matrix of H = Σ_ij h_ij a†_j a_i.
pub struct FockThermal {
    pub a: Vec<Mat>,
    pub rho: Mat,
}

impl FockThermal {
    pub fn new(h: &Mat, beta: f64) -> Self {
        let modes = h.nrows();
        let a = annihilators(modes);
        let dim = 1usize << modes;
        let mut big = DMatrix::zeros(dim, dim);
        for i in 0..modes {
            for j in 0..modes {
                if h[(i, j)] != ZERO {
                    big += (a[j].adjoint() * &a[i]) * h[(i, j)];
                }
            }
        }
        let w = (big * Complex64::new(-beta, 0.0)).exp();
        let z = w.trace();
        FockThermal { a, rho: w / z }
    }

    pub fn expect(&self, op: &Mat) -> Complex64 {
        (&self.rho * op).trace()
    }

    /// Tr(ρ a†_i a_j).
    pub fn two_point(&self, i: usize, j: usize) -> Complex64 {
        self.expect(&(self.a[i].adjoint() * &self.a[j]))
    }

    /// Tr(ρ a†_i a†_j a_k a_l).
    pub fn four_point(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.expect(&(self.a[i].adjoint() * self.a[j].adjoint() * &self.a[k] * &self.a[l]))
    }
}

/// (I + e^{βh})^{-1} through the matrix exponential and a dense inverse.
pub fn fermi_dirac_dense(h: &Mat, beta: f64) -> Mat {
    let n = h.nrows();
    let e = (h * Complex64::new(beta, 0.0)).exp();
    (Mat::identity(n, n) + e)
        .try_inverse()
        .expect("I + e^{beta h} is invertible")
}

/// e^{iht} M e^{−iht} through matrix exponentials.
pub fn heisenberg_dense(h: &Mat, m: &Mat, t1: f64, t2: f64) -> Mat {
    let u1 = (h * Complex64::new(0.0, t1)).exp();
    let u2 = (h * Complex64::new(0.0, -t2)).exp();
    u1 * m * u2
}

/// Open-boundary nearest-neighbour chain with hopping `hop`, padded to
/// `dim` modes.
pub fn chain_matrix(length: usize, dim: usize, hop: f64) -> Mat {
    Mat::from_fn(dim, dim, |i, j| {
        if i < length && j < length && i.abs_diff(j) == 1 {
            Complex64::new(hop, 0.0)
        } else {
            ZERO
        }
    })
}
