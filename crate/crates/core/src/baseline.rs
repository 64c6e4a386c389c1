//! Classical locality baseline: matrix-function entries from sparse
//! vectors that only ever touch the K-step neighbourhood of the probed
//! indices.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::chebyshev::{exp_taylor, fermi_dirac_scaled};
use crate::error::{invalid, Error, Result};
use crate::linalg::ZERO;
use crate::oracle::OracleTuple;

/// Sparse vector as index → amplitude. Entries are never pruned, so the key
/// set is the structural support.
pub type SparseVec = BTreeMap<usize, Complex64>;

fn unit(j: usize) -> SparseVec {
    BTreeMap::from([(j, Complex64::new(1.0, 0.0))])
}

/// y = (h/scale)·x, counting oracle entry reads into `work`.
fn apply_h(oracle: &OracleTuple, x: &SparseVec, scale: f64, work: &mut u64) -> SparseVec {
    let mut y = SparseVec::new();
    for (&col, &amp) in x {
        // h_{r,col} = conj(h_{col,r}) by Hermiticity, so row `col` suffices
        for (r, v) in oracle.row_entries(col) {
            *work += 1;
            *y.entry(r).or_insert(ZERO) += v.conj() * amp / scale;
        }
    }
    y
}

fn axpby(a: f64, x: &SparseVec, b: f64, y: &SparseVec) -> SparseVec {
    let mut out: SparseVec = x.iter().map(|(&k, &v)| (k, v * a)).collect();
    for (&k, &v) in y {
        *out.entry(k).or_insert(ZERO) += v * b;
    }
    out
}

/// The Krylov sequence h^k|j⟩ for k = 0..=K.
#[derive(Debug, Clone)]
pub struct LocalKrylovState {
    pub center: usize,
    pub max_order: usize,
    pub vectors: Vec<SparseVec>,
    /// Size of the union of the supports of h^0|j⟩ … h^k|j⟩, which is the
    /// ball of radius k around j in the hopping graph.
    pub support_sizes: Vec<usize>,
}

impl LocalKrylovState {
    pub fn new(oracle: &OracleTuple, center: usize, max_order: usize) -> Result<Self> {
        if center >= oracle.dim() {
            return Err(Error::IndexOutOfRange {
                index: center,
                dim: oracle.dim(),
            });
        }
        let mut work = 0;
        let mut vectors = vec![unit(center)];
        let mut seen: BTreeSet<usize> = BTreeSet::from([center]);
        let mut support_sizes = vec![1];
        for _ in 0..max_order {
            let next = apply_h(oracle, vectors.last().unwrap(), 1.0, &mut work);
            seen.extend(next.keys().copied());
            support_sizes.push(seen.len());
            vectors.push(next);
        }
        Ok(LocalKrylovState {
            center,
            max_order,
            vectors,
            support_sizes,
        })
    }
}

/// Cumulative support size of h^k|j⟩ for k = 0..=K.
///
/// Only the sparsity pattern is followed, so this is a breadth-first
/// search of the hopping graph and never overflows for large K.
pub fn support_growth(oracle: &OracleTuple, j: usize, max_order: usize) -> Result<Vec<usize>> {
    if j >= oracle.dim() {
        return Err(Error::IndexOutOfRange {
            index: j,
            dim: oracle.dim(),
        });
    }
    let mut seen: BTreeSet<usize> = BTreeSet::from([j]);
    let mut frontier = vec![j];
    let mut sizes = vec![1];
    for _ in 0..max_order {
        let mut next = Vec::new();
        for &v in &frontier {
            for u in oracle.row(v) {
                if seen.insert(u) {
                    next.push(u);
                }
            }
        }
        sizes.push(seen.len());
        frontier = next;
    }
    Ok(sizes)
}

/// Least-squares slope of log(size) against log(k) over k ≥ `from`.
pub fn growth_exponent(sizes: &[usize], from: usize) -> f64 {
    let points: Vec<(f64, f64)> = sizes
        .iter()
        .enumerate()
        .skip(from.max(1))
        .map(|(k, &s)| ((k as f64).ln(), (s as f64).ln()))
        .collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// A locally computed entry with its certificate and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalEntry {
    pub value: Complex64,
    /// Rigorous bound on |value − exact|.
    pub certified_bound: f64,
    /// Oracle entry reads performed.
    pub work: u64,
}

/// ⟨i|p_K(h/s)|j⟩ with p_K the degree-K Chebyshev approximation of
/// 1/(1 + e^{βs x}), evaluated by the three-term recurrence on sparse
/// vectors.
pub fn local_thermal_entry(
    oracle: &OracleTuple,
    beta: f64,
    i: usize,
    j: usize,
    order: usize,
) -> Result<LocalEntry> {
    let dim = oracle.dim();
    for index in [i, j] {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
    }
    let s = oracle.normalization();
    let approx = fermi_dirac_scaled(beta * s, order, 1.0)?;
    let mut work = 0;
    let mut prev = unit(j);
    let read = |v: &SparseVec| v.get(&i).copied().unwrap_or(ZERO);
    let mut value = approx.coeffs[0] * read(&prev);
    if order >= 1 {
        let mut cur = apply_h(oracle, &prev, s, &mut work);
        value += approx.coeffs[1] * read(&cur);
        for a in &approx.coeffs[2..] {
            let next = axpby(2.0, &apply_h(oracle, &cur, s, &mut work), -1.0, &prev);
            value += a * read(&next);
            prev = cur;
            cur = next;
        }
    }
    Ok(LocalEntry {
        value,
        certified_bound: approx.certified_bound,
        work,
    })
}

/// Σ_k c_k (h/s)^k x for monomial coefficients c_k.
fn apply_monomial(
    oracle: &OracleTuple,
    coeffs: &[Complex64],
    x: &SparseVec,
    s: f64,
    work: &mut u64,
) -> SparseVec {
    let mut power = x.clone();
    let mut out: SparseVec = power.iter().map(|(&k, &v)| (k, v * coeffs[0])).collect();
    for c in &coeffs[1..] {
        power = apply_h(oracle, &power, s, work);
        for (&k, &v) in &power {
            *out.entry(k).or_insert(ZERO) += v * c;
        }
    }
    out
}

/// Entry (i, j) of e^{iht} M₀ e^{−iht} with both exponentials replaced by
/// the order-K Taylor polynomial in h/s at τ = t·s.
///
/// With a = p(−τ)|i⟩ and b = p(−τ)|j⟩ the entry is Σ conj(a_k) M₀(k, l) b_l.
/// The bound assumes ‖M₀‖ ≤ 1: if ‖p − e^{iτx}‖ ≤ e on [−1, 1] then the
/// entry is off by at most e(2 + e).
pub fn local_dynamics_entry<F>(
    oracle: &OracleTuple,
    m0_entry: F,
    t: f64,
    i: usize,
    j: usize,
    order: usize,
) -> Result<LocalEntry>
where
    F: Fn(usize, usize) -> Complex64,
{
    if !t.is_finite() {
        return Err(invalid("t", "must be finite"));
    }
    let dim = oracle.dim();
    for index in [i, j] {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
    }
    let s = oracle.normalization();
    let poly = exp_taylor(-t * s, order);
    let mut work = 0;
    let a = apply_monomial(oracle, &poly.coeffs, &unit(i), s, &mut work);
    let b = apply_monomial(oracle, &poly.coeffs, &unit(j), s, &mut work);
    let mut value = ZERO;
    for (&k, &ak) in &a {
        for (&l, &bl) in &b {
            let m = m0_entry(k, l);
            if m != ZERO {
                value += ak.conj() * m * bl;
            }
        }
    }
    let e = poly.lagrange_bound;
    Ok(LocalEntry {
        value,
        certified_bound: e * (2.0 + e),
        work,
    })
}
