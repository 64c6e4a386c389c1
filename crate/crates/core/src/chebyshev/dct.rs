//! Discrete cosine transforms on Chebyshev–Gauss nodes through a length-2M FFT.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Chebyshev–Gauss nodes x_j = cos(π(j + ½)/M), j = 0..M.
pub fn chebyshev_nodes(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| (PI * (j as f64 + 0.5) / m as f64).cos())
        .collect()
}

/// Chebyshev coefficients of the degree-(M−1) interpolant through values
/// sampled at the M Chebyshev–Gauss nodes:
/// a_k = (2/M) Σ_j f_j cos(πk(j+½)/M), with a_0 halved.
pub fn coefficients_from_nodes(values: &[Complex64]) -> Vec<Complex64> {
    let m = values.len();
    if m == 0 {
        return Vec::new();
    }
    let mut buf: Vec<Complex64> = Vec::with_capacity(2 * m);
    buf.extend_from_slice(values);
    buf.extend(values.iter().rev());
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(2 * m).process(&mut buf);
    let scale = 2.0 / m as f64;
    let mut out: Vec<Complex64> = (0..m)
        .map(|k| {
            let phase = Complex64::from_polar(1.0, -PI * k as f64 / (2.0 * m as f64));
            phase * buf[k] * 0.5 * scale
        })
        .collect();
    out[0] *= 0.5;
    out
}

/// Values Σ_k a_k T_k(x_j) at the M Chebyshev–Gauss nodes (M ≥ len(a)).
pub fn values_at_nodes(coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    assert!(
        m >= coeffs.len(),
        "need at least as many nodes as coefficients"
    );
    if m == 0 {
        return Vec::new();
    }
    let len = 2 * m;
    let mut up = vec![Complex64::new(0.0, 0.0); len];
    let mut down = vec![Complex64::new(0.0, 0.0); len];
    for (k, &a) in coeffs.iter().enumerate() {
        let theta = PI * k as f64 / (2.0 * m as f64);
        up[k] = a * Complex64::from_polar(1.0, theta);
        down[k] = a * Complex64::from_polar(1.0, -theta);
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(len).process(&mut up);
    planner.plan_fft_forward(len).process(&mut down);
    (0..m).map(|j| 0.5 * (up[j] + down[j])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(coeffs: &[Complex64], x: f64) -> Complex64 {
        let theta = x.acos();
        coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a * (k as f64 * theta).cos())
            .sum()
    }

    #[test]
    fn round_trip_through_nodes() {
        let coeffs: Vec<Complex64> = (0..9)
            .map(|k| Complex64::new(1.0 / (k as f64 + 1.0), (k as f64).sin()))
            .collect();
        let m = 16;
        let vals = values_at_nodes(&coeffs, m);
        let nodes = chebyshev_nodes(m);
        for (v, &x) in vals.iter().zip(&nodes) {
            assert!((v - direct(&coeffs, x)).norm() < 1e-13);
        }
        let back = coefficients_from_nodes(&vals);
        for k in 0..m {
            let expect = coeffs.get(k).copied().unwrap_or_default();
            assert!((back[k] - expect).norm() < 1e-13, "k={k}");
        }
    }
}
