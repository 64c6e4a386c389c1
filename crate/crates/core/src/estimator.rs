//! Statistical extraction of observables from block-encodings.
//!
//! Matrix entries are read with a simulated Hadamard test: the ancilla
//! outcome probabilities are computed from the stored unitary and sampled
//! with a seeded ChaCha generator. Densities average exact entry reads over
//! uniformly sampled Hamiltonian terms or diagonal positions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::block_encoding::{apply_polynomial, encode_sparse, BlockEncoding};
use crate::chebyshev::{bernstein_bound, log_fermi_ellipse, softplus};
use crate::correlation::Degree;
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat;
use crate::oracle::OracleTuple;

/// Constant c in D = ⌈c ε₂^{−2} ln(4/δ)⌉. Eight makes the Hoeffding bound
/// hold for the complex estimate: each quadrature receives half of the
/// shots and must land within ε₂/√2.
pub const DEFAULT_HADAMARD_CONSTANT: f64 = 8.0;

/// Stream identifiers that keep the two θ settings on disjoint sequences.
const STREAM_REAL: u64 = 0;
const STREAM_IMAG: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    /// α times the estimated amplitude.
    pub value: Complex64,
    /// Encoding error of the block-encoding that was probed.
    pub eps1: f64,
    /// Statistical target on the raw amplitude.
    pub eps2: f64,
    pub delta: f64,
    /// Total Hadamard-test shots over both θ settings (0 for exact reads).
    pub samples: u64,
    pub alpha: f64,
}

impl EstimateResult {
    /// Claimed error ε₁ + α·ε₂, valid with probability at least 1 − δ.
    pub fn error_claim(&self) -> f64 {
        self.eps1 + self.alpha * self.eps2
    }
}

/// D(ε₂, δ) = ⌈c ε₂^{−2} ln(4/δ)⌉ rounded up to an even count.
pub fn hadamard_samples(eps2: f64, delta: f64, constant: f64) -> Result<u64> {
    if !(eps2 > 0.0) || !eps2.is_finite() {
        return Err(invalid("eps2", format!("must be positive, got {eps2}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("must lie in (0, 1), got {delta}")));
    }
    let d = (constant * (4.0 / delta).ln() / (eps2 * eps2)).ceil() as u64;
    Ok(d + d % 2)
}

/// Probability of the ancilla reading 0 in the Hadamard test for amplitude
/// `a` with phase θ = 0 (real part) or θ = π/2 (imaginary part).
pub fn hadamard_p0(a: Complex64, imaginary: bool) -> f64 {
    let p = if imaginary {
        0.5 - 0.5 * a.im
    } else {
        0.5 + 0.5 * a.re
    };
    p.clamp(0.0, 1.0)
}

fn bernoulli_mean(rng: &mut ChaCha8Rng, p: f64, shots: u64) -> f64 {
    let hits = (0..shots).filter(|_| rng.random_bool(p)).count();
    hits as f64 / shots as f64
}

/// Hadamard-test estimate of α⟨0, i|U|0, j⟩ with the default constant.
pub fn estimate_entry(
    be: &BlockEncoding,
    i: usize,
    j: usize,
    eps2: f64,
    delta: f64,
    seed: u64,
) -> Result<EstimateResult> {
    estimate_entry_with(be, i, j, eps2, delta, seed, DEFAULT_HADAMARD_CONSTANT)
}

pub fn estimate_entry_with(
    be: &BlockEncoding,
    i: usize,
    j: usize,
    eps2: f64,
    delta: f64,
    seed: u64,
    constant: f64,
) -> Result<EstimateResult> {
    let a = be.amplitude(i, j)?;
    let total = hadamard_samples(eps2, delta, constant)?;
    let half = total / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_REAL);
    let p_re = bernoulli_mean(&mut rng, hadamard_p0(a, false), half);
    rng.set_stream(STREAM_IMAG);
    rng.set_word_pos(0);
    let p_im = bernoulli_mean(&mut rng, hadamard_p0(a, true), half);
    let estimate = Complex64::new(2.0 * p_re - 1.0, 1.0 - 2.0 * p_im);
    Ok(EstimateResult {
        value: estimate * be.alpha(),
        eps1: be.eps(),
        eps2,
        delta,
        samples: total,
        alpha: be.alpha(),
    })
}

/// Infinite-shot limit: the exact entry of α·block.
pub fn exact_entry(be: &BlockEncoding, i: usize, j: usize) -> Result<EstimateResult> {
    let a = be.amplitude(i, j)?;
    Ok(EstimateResult {
        value: a * be.alpha(),
        eps1: be.eps(),
        eps2: 0.0,
        delta: 0.0,
        samples: 0,
        alpha: be.alpha(),
    })
}

/// A sampled density with the number of samples it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEstimate {
    pub value: f64,
    pub samples: usize,
    /// Population the samples were drawn from (terms or modes).
    pub population: usize,
}

/// S = ⌈2b² ε^{−2} ln(2/δ)⌉ samples for terms bounded by b in modulus.
pub fn energy_samples(eps: f64, delta: f64, bound: f64) -> Result<usize> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(invalid("eps", format!("must be positive, got {eps}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("must lie in (0, 1), got {delta}")));
    }
    Ok((2.0 * bound * bound * (2.0 / delta).ln() / (eps * eps)).ceil() as usize)
}

/// ⟨H_x⟩ for the term x = (i, j): h_ij M_ji + h_ji M_ij off the diagonal,
/// h_ii M_ii on it.
pub fn term_expectation(h: &OracleTuple, m: &Mat, i: usize, j: usize) -> f64 {
    let hij = h.entry(i, j);
    if i == j {
        (hij * m[(i, i)]).re
    } else {
        (hij * m[(j, i)] + hij.conj() * m[(i, j)]).re
    }
}

fn check_dims(be: &BlockEncoding, h: &OracleTuple) -> Result<()> {
    if be.system_dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: be.system_dim(),
        });
    }
    Ok(())
}

/// Mean of ⟨H_x⟩ over S uniformly sampled terms, estimating Tr(Hρ)/K.
pub fn estimate_energy_density(
    be_m: &BlockEncoding,
    h: &OracleTuple,
    eps: f64,
    delta: f64,
    seed: u64,
) -> Result<DensityEstimate> {
    check_dims(be_m, h)?;
    let terms = h.terms();
    if terms.is_empty() {
        return Err(Error::NoTerms);
    }
    let samples = energy_samples(eps, delta, h.max_entry().max(1.0))?;
    let m = be_m.extract_block();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: f64 = (0..samples)
        .map(|_| {
            let (i, j) = terms[rng.random_range(0..terms.len())];
            term_expectation(h, &m, i, j)
        })
        .sum();
    Ok(DensityEstimate {
        value: total / samples as f64,
        samples,
        population: terms.len(),
    })
}

/// Exhaustive mean of ⟨H_x⟩ over all K terms of h for the given M.
pub fn energy_density_all_terms(m: &Mat, h: &OracleTuple) -> Result<f64> {
    let terms = h.terms();
    if terms.is_empty() {
        return Err(Error::NoTerms);
    }
    let sum: f64 = terms
        .iter()
        .map(|&(i, j)| term_expectation(h, m, i, j))
        .sum();
    Ok(sum / terms.len() as f64)
}

/// Mean of uniformly sampled diagonal entries, estimating Tr(M)/2^n.
pub fn particle_density(
    be_m: &BlockEncoding,
    samples: usize,
    seed: u64,
) -> Result<DensityEstimate> {
    if samples == 0 {
        return Err(invalid("samples", "must be positive"));
    }
    let dim = be_m.system_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..samples {
        let j = rng.random_range(0..dim);
        total += (be_m.amplitude(j, j)? * be_m.alpha()).re;
    }
    Ok(DensityEstimate {
        value: total / samples as f64,
        samples,
        population: dim,
    })
}

/// ⟨a†_i a†_j a_k a_l⟩ = M_il M_jk − M_ik M_jl for a free-fermion state.
pub fn wick_quartic(m: &Mat, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
    m[(i, l)] * m[(j, k)] - m[(i, k)] * m[(j, l)]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyEstimate {
    /// Estimate of F/2^n = −Tr log(I + e^{−βh}) / (β 2^n).
    pub value: f64,
    /// Certified polynomial and encoding error, in units of F/2^n.
    pub certified_error: f64,
    /// Largest value a sampled diagonal entry can take, for Hoeffding
    /// confidence intervals.
    pub sample_range: f64,
    pub samples: usize,
    pub degree: usize,
}

impl FreeEnergyEstimate {
    /// Half-width of a 1 − δ Hoeffding interval for the sampling error, in
    /// units of F/2^n, given the inverse temperature used.
    pub fn sampling_halfwidth(&self, beta: f64, delta: f64) -> f64 {
        self.sample_range * ((2.0 / delta).ln() / (2.0 * self.samples as f64)).sqrt() / beta
    }
}

fn log_fermi_degree(c: f64, eps: f64) -> Result<usize> {
    if !(eps > 0.0) {
        return Err(invalid("eps", format!("must be positive, got {eps}")));
    }
    if c == 0.0 {
        return Ok(1);
    }
    let (r, modulus) = log_fermi_ellipse(c);
    let d = ((2.0 * modulus / ((r - 1.0) * eps)).ln() / r.ln())
        .ceil()
        .max(1.0);
    if d > 1e8 {
        return Err(invalid("eps", format!("{eps} would need degree {d:e}")));
    }
    let mut d = d as usize;
    while bernstein_bound(r, modulus, d) > eps {
        d += 1;
    }
    Ok(d)
}

/// Free-energy density from sampled diagonal entries of an encoding of
/// log(I + e^{−βh}).
///
/// The target is divided by α_F = 2(log(1 + e^{βs}) + bound) so that the
/// polynomial stays within ½, and the resulting encoding is rescaled by α_F.
pub fn free_energy_density(
    oracle: &OracleTuple,
    beta: f64,
    degree: Degree,
    samples: usize,
    seed: u64,
) -> Result<FreeEnergyEstimate> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(invalid("beta", format!("must be positive, got {beta}")));
    }
    let s = oracle.normalization();
    let c = beta * s;
    let (d, limit) = match degree {
        Degree::Fixed(d) => (d, None),
        Degree::Target(eps) => (log_fermi_degree(c, eps)?, Some(eps)),
    };
    let (r, modulus) = log_fermi_ellipse(c);
    let unscaled_bound = bernstein_bound(r, modulus, d);
    if let Some(target) = limit {
        if unscaled_bound > target {
            return Err(Error::DegreeInsufficient {
                degree: d,
                bound: unscaled_bound,
                target,
            });
        }
    }
    let alpha_f = 2.0 * (softplus(c) + unscaled_bound.min(1.0));
    let approx = crate::chebyshev::log_fermi_scaled(beta, s, d, 1.0 / alpha_f)?;
    let be_h = encode_sparse(oracle)?;
    let be = apply_polynomial(&be_h, &approx, 0.0)?.rescale(alpha_f)?;
    let dim = be.system_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..samples.max(1) {
        let j = rng.random_range(0..dim);
        total += (be.amplitude(j, j)? * be.alpha()).re;
    }
    let mean = total / samples.max(1) as f64;
    Ok(FreeEnergyEstimate {
        value: -mean / beta,
        certified_error: be.eps() / beta,
        sample_range: softplus(c) + be.eps(),
        samples: samples.max(1),
        degree: d,
    })
}

/// Exact F/2^n = −Tr log(I + e^{−βh}) / (β 2^n) from the eigenvalues of h.
pub fn exact_free_energy_density(h: &Mat, beta: f64) -> f64 {
    let eig = crate::linalg::HermitianEigen::new(h);
    let sum: f64 = eig.values.iter().map(|&e| softplus(-beta * e)).sum();
    -sum / (beta * eig.values.len() as f64)
}
