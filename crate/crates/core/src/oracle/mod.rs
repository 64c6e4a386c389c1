//! Sparse-access descriptions of Hermitian matrices.
//!
//! An [`OracleTuple`] exposes an N×N Hermitian matrix (N = 2^n) through two
//! functions: `row(i)`, the ascending list of column indices where row `i`
//! is nonzero, and `entry(i, j)`. Everything downstream (block encodings,
//! classical local algorithms, term sampling) talks to a matrix only through
//! this interface; [`OracleTuple::materialize`] is the bridge to dense
//! ground truth at desk scale.

mod fermi_sea;
pub mod lattice;
mod margulis;
mod prf;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Mat, ZERO};

pub use fermi_sea::build_fermi_sea;
pub use lattice::{build_tight_binding, Boundary, Disorder, Domain, HoppingEntry, LatticeSpec};
pub use margulis::{build_margulis, margulis_maps};
pub use prf::{disorder_prf, prf_unit};

/// Default qubit cap for dense materialization (4096 × 4096).
pub const DEFAULT_MATERIALIZE_CAP: u32 = 12;

/// Row/entry access to a sparse Hermitian matrix.
pub trait SparseAccess: Send + Sync {
    /// Ascending column indices of the nonzero entries of row `i`.
    fn row(&self, i: usize) -> Vec<usize>;
    /// Matrix element (i, j); zero when `j` is not in `row(i)`.
    fn entry(&self, i: usize, j: usize) -> Complex64;
    /// Row indices with their values, in ascending column order.
    fn row_entries(&self, i: usize) -> Vec<(usize, Complex64)> {
        self.row(i)
            .into_iter()
            .map(|j| (j, self.entry(i, j)))
            .collect()
    }
    fn describe(&self) -> String;
}

/// Sparse oracle access to an N×N Hermitian matrix with N = 2^n.
#[derive(Clone)]
pub struct OracleTuple {
    n: u32,
    s: usize,
    n_a: u32,
    modes: usize,
    max_entry: f64,
    access: Arc<dyn SparseAccess>,
}

impl fmt::Debug for OracleTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleTuple")
            .field("n", &self.n)
            .field("s", &self.s)
            .field("n_a", &self.n_a)
            .field("modes", &self.modes)
            .field("max_entry", &self.max_entry)
            .field("model", &self.access.describe())
            .finish()
    }
}

impl OracleTuple {
    /// Wraps an access implementation. `modes` is the number of physical
    /// modes before padding to 2^n; `max_entry` an upper bound on |entry|.
    pub fn new(
        n: u32,
        s: usize,
        modes: usize,
        max_entry: f64,
        access: Arc<dyn SparseAccess>,
    ) -> Self {
        OracleTuple {
            n,
            s,
            n_a: 64,
            modes,
            max_entry,
            access,
        }
    }

    /// Builds an oracle from an explicit list of entries. The list is
    /// symmetrized: each (i, j, v) also sets (j, i, conj v).
    pub fn from_entries(n: u32, entries: &[(usize, usize, Complex64)]) -> Result<Self> {
        let dim = 1usize << n;
        let mut table = TableAccess {
            rows: vec![BTreeMap::new(); dim],
        };
        for &(i, j, v) in entries {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            if j >= dim {
                return Err(Error::IndexOutOfRange { index: j, dim });
            }
            if i == j {
                table.rows[i].insert(j, Complex64::new(v.re, 0.0));
            } else {
                table.rows[i].insert(j, v);
                table.rows[j].insert(i, v.conj());
            }
        }
        for row in &mut table.rows {
            row.retain(|_, v| *v != ZERO);
        }
        let s = table.rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let max_entry = table
            .rows
            .iter()
            .flat_map(|r| r.values())
            .fold(0.0_f64, |m, v| m.max(v.norm()));
        Ok(OracleTuple::new(n, s, dim, max_entry, Arc::new(table)))
    }

    /// Oracle of the nonzero pattern of a dense Hermitian matrix.
    pub fn from_dense(m: &Mat) -> Result<Self> {
        let dim = m.nrows();
        if m.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: m.ncols(),
            });
        }
        if !crate::linalg::is_power_of_two(dim) {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: format!("dimension {dim} is not a power of two"),
            });
        }
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in i..dim {
                if m[(i, j)] != ZERO {
                    entries.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_entries(dim.trailing_zeros(), &entries)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    /// Declared sparsity bound.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Bits of entry precision (metadata only; entries are stored in f64).
    pub fn n_a(&self) -> u32 {
        self.n_a
    }

    /// Physical modes before zero padding.
    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Upper bound on |entry(i, j)| over all i, j.
    pub fn max_entry(&self) -> f64 {
        self.max_entry
    }

    /// Scale used for the block encoding of h: s·max(1, max|entry|), so the
    /// encoded block h / normalization is a contraction.
    pub fn normalization(&self) -> f64 {
        (self.s.max(1) as f64) * self.max_entry.max(1.0)
    }

    pub fn row(&self, i: usize) -> Vec<usize> {
        if i >= self.dim() {
            return Vec::new();
        }
        self.access.row(i)
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        if i >= self.dim() || j >= self.dim() {
            return ZERO;
        }
        self.access.entry(i, j)
    }

    pub fn row_entries(&self, i: usize) -> Vec<(usize, Complex64)> {
        if i >= self.dim() {
            return Vec::new();
        }
        self.access.row_entries(i)
    }

    pub fn describe(&self) -> String {
        self.access.describe()
    }

    /// Dense N×N matrix, refusing when n exceeds `cap` qubits.
    pub fn materialize_with_cap(&self, cap: u32) -> Result<Mat> {
        if self.n > cap {
            return Err(Error::TooLarge {
                qubits: self.n,
                cap,
            });
        }
        let dim = self.dim();
        let mut m = Mat::zeros(dim, dim);
        for i in 0..dim {
            for (j, v) in self.access.row_entries(i) {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn materialize(&self) -> Result<Mat> {
        self.materialize_with_cap(DEFAULT_MATERIALIZE_CAP)
    }

    /// Gershgorin row-sum bound on the spectral norm: max_i Σ_j |entry(i, j)|.
    pub fn gershgorin_bound(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                self.access
                    .row_entries(i)
                    .iter()
                    .map(|(_, v)| v.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Unordered pairs (i ≤ j) with nonzero entry, in ascending order.
    /// Each is one Hamiltonian term h_ij a†_j a_i + h.c. (or h_ii n_i).
    pub fn terms(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for (j, v) in self.access.row_entries(i) {
                if j >= i && v != ZERO {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Explicit sparse table, used for small hand-built matrices.
#[derive(Debug, Clone)]
struct TableAccess {
    rows: Vec<BTreeMap<usize, Complex64>>,
}

impl SparseAccess for TableAccess {
    fn row(&self, i: usize) -> Vec<usize> {
        self.rows[i].keys().copied().collect()
    }

    fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.rows[i].get(&j).copied().unwrap_or(ZERO)
    }

    fn row_entries(&self, i: usize) -> Vec<(usize, Complex64)> {
        self.rows[i].iter().map(|(&j, &v)| (j, v)).collect()
    }

    fn describe(&self) -> String {
        format!("table({} rows)", self.rows.len())
    }
}
