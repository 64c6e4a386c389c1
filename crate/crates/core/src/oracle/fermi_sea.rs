use std::sync::Arc;

use num_complex::Complex64;

use super::{OracleTuple, SparseAccess};
use crate::error::{invalid, Result};
use crate::linalg::ZERO;

struct FermiSea {
    filled: usize,
}

impl SparseAccess for FermiSea {
    fn row(&self, i: usize) -> Vec<usize> {
        if i < self.filled {
            vec![i]
        } else {
            Vec::new()
        }
    }

    fn entry(&self, i: usize, j: usize) -> Complex64 {
        if i == j && i < self.filled {
            Complex64::new(1.0, 0.0)
        } else {
            ZERO
        }
    }

    fn describe(&self) -> String {
        format!("fermi-sea filled={}", self.filled)
    }
}

/// Diagonal correlation matrix with the lowest `fill_fraction · 2^n` modes
/// occupied.
pub fn build_fermi_sea(n: u32, fill_fraction: f64) -> Result<OracleTuple> {
    if !(0.0..=1.0).contains(&fill_fraction) {
        return Err(invalid(
            "fill_fraction",
            format!("{fill_fraction} is outside [0, 1]"),
        ));
    }
    let dim = 1usize << n;
    let exact = fill_fraction * dim as f64;
    let filled = exact.round();
    if (exact - filled).abs() > 1e-9 {
        return Err(invalid(
            "fill_fraction",
            format!("{fill_fraction} · 2^{n} is not an integer"),
        ));
    }
    let filled = filled as usize;
    let s = usize::from(filled > 0);
    let max_entry = if filled > 0 { 1.0 } else { 0.0 };
    Ok(OracleTuple::new(
        n,
        s.max(1),
        dim,
        max_entry,
        Arc::new(FermiSea { filled }),
    ))
}
