//! Pipelines for thermal correlation matrices, time-evolved correlation
//! matrices and Fourier-domain Green's functions, with exact references.
//!
//! Hamiltonians use H = Σ h_ij a†_j a_i, so the thermal correlation matrix
//! M_ij = Tr(a†_i a_j ρ) is (I + e^{βh})^{−1}. Any chemical potential is
//! folded into the diagonal of h.

use std::f64::consts::PI;

use num_complex::Complex64;

pub use crate::block_encoding::ErrorBudget;
use crate::block_encoding::{
    apply_polynomial, encode_sparse, evolve, multiply, BlockEncoding, Resources,
};
use crate::chebyshev::{
    fermi_dirac_approx, fermi_dirac_degree, greens_degree, greens_scalar, greens_scalar_approx,
    logistic, ChebyshevApprox,
};
use crate::error::{invalid, Error, Result};
use crate::linalg::{kron, HermitianEigen, Mat};
use crate::oracle::OracleTuple;

/// How the polynomial degree is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Degree {
    /// Use exactly this degree.
    Fixed(usize),
    /// Smallest degree whose certified bound is at most this ε_PA.
    Target(f64),
}

/// Knobs shared by the pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineOptions {
    /// Modelled synthesis error δ added to every polynomial encoding.
    pub delta_qsvt: f64,
    /// Declared error of the sparse encoding of h (the reference unitary is
    /// exact; a nonzero value models an imprecise oracle circuit).
    pub eps_be_h: f64,
    /// Reject fixed degrees whose certified bound exceeds this ε_PA.
    pub max_eps_pa: Option<f64>,
}

fn encoded_h(oracle: &OracleTuple, opts: &PipelineOptions) -> Result<BlockEncoding> {
    let be = encode_sparse(oracle)?;
    Ok(if opts.eps_be_h > 0.0 {
        be.with_eps(opts.eps_be_h)
    } else {
        be
    })
}

fn check_certified(approx: &ChebyshevApprox, limit: Option<f64>) -> Result<()> {
    if let Some(target) = limit {
        if approx.certified_bound > target {
            return Err(Error::DegreeInsufficient {
                degree: approx.degree(),
                bound: approx.certified_bound,
                target,
            });
        }
    }
    Ok(())
}

/// Encoding of M = (I + e^{βh})^{−1} with α = 4.
///
/// The polynomial step encodes ¼·M (so that |p| ≤ ½); the result is
/// rescaled so that α·block approximates M itself and every error
/// component is reported in the units of M.
pub fn thermal_correlation(
    oracle: &OracleTuple,
    beta: f64,
    degree: Degree,
    opts: &PipelineOptions,
) -> Result<BlockEncoding> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(invalid(
            "beta",
            format!("must be finite and non-negative, got {beta}"),
        ));
    }
    let s = oracle.normalization();
    let c = beta * s;
    let (d, limit) = match degree {
        Degree::Fixed(d) => (d, opts.max_eps_pa),
        Degree::Target(eps) => (fermi_dirac_degree(c, eps)?, Some(eps)),
    };
    let approx = fermi_dirac_approx(c, d)?;
    check_certified(&approx, limit)?;
    let be_h = encoded_h(oracle, opts)?;
    let quarter = apply_polynomial(&be_h, &approx, opts.delta_qsvt)?;
    let eps_pa = approx.certified_bound.max(f64::MIN_POSITIVE);
    let (calls, formula) = if c >= 2.0 * PI {
        (c.powi(4) / eps_pa, "(beta s)^4 / eps_PA")
    } else {
        (c.powi(2) / eps_pa, "(beta s)^2 / eps_PA")
    };
    let resources = Resources {
        emulated_ancillas: quarter.resources().emulated_ancillas,
        oracle_calls: Some(calls),
        call_formula: Some(formula.to_string()),
    };
    Ok(quarter
        .with_resources(resources)
        .rescale(4.0)?
        .with_provenance(format!("thermal correlation at beta = {beta}")))
}

/// Encoding of e^{iht₁} M₀ e^{−iht₂} from an encoding of M₀.
///
/// The declared error is ε_M + 2α_M ε_BE_h (|t₁| + |t₂|).
pub fn time_evolved_correlation(
    oracle: &OracleTuple,
    be_m0: &BlockEncoding,
    t1: f64,
    t2: f64,
    opts: &PipelineOptions,
) -> Result<BlockEncoding> {
    if be_m0.system_dim() != oracle.dim() {
        return Err(Error::DimensionMismatch {
            expected: oracle.dim(),
            got: be_m0.system_dim(),
        });
    }
    let be_h = encoded_h(oracle, opts)?;
    let forward = evolve(&be_h, t1)?;
    let backward = evolve(&be_h, -t2)?;
    let product = multiply(&multiply(&forward, be_m0)?, &backward)?;
    let budget = ErrorBudget {
        eps_pa: 0.0,
        eps_ph: product.eps() - be_m0.eps(),
        delta_qsvt: 0.0,
        eps_m: be_m0.eps(),
    };
    Ok(product
        .with_budget(budget)
        .with_provenance(format!("time-evolved correlation at t1 = {t1}, t2 = {t2}")))
}

/// Encoding of G^{(η,β)}(ω, h) with α = 8/η.
pub fn greens_fourier(
    oracle: &OracleTuple,
    beta: f64,
    eta: f64,
    omega: f64,
    degree: Degree,
    opts: &PipelineOptions,
) -> Result<BlockEncoding> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(invalid("eta", format!("must be positive, got {eta}")));
    }
    let s = oracle.normalization();
    if !(omega.abs() <= s + 1.0) {
        return Err(invalid(
            "omega",
            format!("|omega| must be at most s + 1 = {}, got {omega}", s + 1.0),
        ));
    }
    let (d, limit) = match degree {
        Degree::Fixed(d) => (d, opts.max_eps_pa),
        Degree::Target(eps) => (greens_degree(beta, s, eta, eps)?, Some(eps)),
    };
    let approx = greens_scalar_approx(beta, s, eta, omega, d)?;
    check_certified(&approx, limit)?;
    let be_h = encoded_h(oracle, opts)?;
    let scaled = apply_polynomial(&be_h, &approx, opts.delta_qsvt)?;
    let eps_pa = approx.certified_bound.max(f64::MIN_POSITIVE);
    let c = beta * s;
    let fermi_calls = if c >= 2.0 * PI { c.powi(4) } else { c.powi(2) };
    let ratio = s / eta;
    let resolvent_calls = if 2.0 * ratio >= 1.0 {
        ratio.powi(4)
    } else {
        ratio.powi(2)
    };
    let resources = Resources {
        emulated_ancillas: scaled.resources().emulated_ancillas,
        oracle_calls: Some((fermi_calls + resolvent_calls) / eps_pa),
        call_formula: Some(
            "[(beta s)^4 or (beta s)^2 + (s/eta)^4 or (s/eta)^2] / eps_PA".to_string(),
        ),
    };
    Ok(scaled
        .with_resources(resources)
        .rescale(8.0 / eta)?
        .with_provenance(format!(
            "Green's function at beta = {beta}, eta = {eta}, omega = {omega}"
        )))
}

/// Target of an exact eigendecomposition reference.
#[derive(Debug, Clone)]
pub enum Reference {
    Thermal { beta: f64 },
    Evolved { m0: Mat, t1: f64, t2: f64 },
    Greens { beta: f64, eta: f64, omega: f64 },
}

/// Exact target matrix through the spectral decomposition of h.
pub fn exact_reference(h: &Mat, kind: &Reference) -> Result<Mat> {
    let eig = HermitianEigen::new(h);
    match kind {
        Reference::Thermal { beta } => Ok(eig.apply(|e| Complex64::new(logistic(beta * e), 0.0))),
        Reference::Evolved { m0, t1, t2 } => {
            if m0.nrows() != h.nrows() || m0.ncols() != h.ncols() {
                return Err(Error::DimensionMismatch {
                    expected: h.nrows(),
                    got: m0.nrows(),
                });
            }
            let u1 = eig.apply(|e| Complex64::from_polar(1.0, e * t1));
            let u2 = eig.apply(|e| Complex64::from_polar(1.0, -e * t2));
            Ok(u1 * m0 * u2)
        }
        Reference::Greens { beta, eta, omega } => {
            if !(*eta > 0.0) {
                return Err(invalid("eta", format!("must be positive, got {eta}")));
            }
            // greens_scalar carries the η/8 prefactor and takes x = e/s
            Ok(eig.apply(|e| greens_scalar(*beta, 1.0, *eta, *omega, e) * (8.0 / eta)))
        }
    }
}

/// Unitary discrete Fourier matrix F_{kx} = e^{−2πikx/L}/√L.
pub fn dft_matrix(length: usize) -> Mat {
    let norm = 1.0 / (length as f64).sqrt();
    Mat::from_fn(length, length, |k, x| {
        Complex64::from_polar(norm, -2.0 * PI * (k * x) as f64 / length as f64)
    })
}

/// F M F† with F the tensor product of one-dimensional DFTs over `dims`
/// (first axis most significant).
pub fn momentum_transform(m: &Mat, dims: &[usize]) -> Result<Mat> {
    let product: usize = dims.iter().product();
    if dims.is_empty() || product != m.nrows() || m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: product,
        });
    }
    let f = dims
        .iter()
        .skip(1)
        .fold(dft_matrix(dims[0]), |acc, &l| kron(&acc, &dft_matrix(l)));
    Ok(&f * m * f.adjoint())
}

/// Inverse of [`momentum_transform`]: F† M F.
pub fn real_space_transform(m: &Mat, dims: &[usize]) -> Result<Mat> {
    let product: usize = dims.iter().product();
    if dims.is_empty() || product != m.nrows() || m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: product,
        });
    }
    let f = dims
        .iter()
        .skip(1)
        .fold(dft_matrix(dims[0]), |acc, &l| kron(&acc, &dft_matrix(l)));
    Ok(f.adjoint() * m * &f)
}
