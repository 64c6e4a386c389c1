//! Tight-binding Hamiltonian on the Margulis expander graph over [N]×[N].
//!
//! Vertex (v1, v2) has mode index v1·N + v2. The four affine maps and
//! their inverses give up to 8 neighbours; when several maps land on the
//! same vertex the row lists it once and the entry counts the collisions.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::{OracleTuple, SparseAccess};
use crate::error::{invalid, Result};
use crate::linalg::ZERO;

/// Images of v under t_l and t_l^{-1} for l = 0..4, in the order
/// t0, t0⁻¹, t1, t1⁻¹, t2, t2⁻¹, t3, t3⁻¹.
pub fn margulis_maps(side: usize, v: (usize, usize)) -> [(usize, usize); 8] {
    let n = side;
    let (a, b) = v;
    let add = |x: usize, y: usize| (x + y) % n;
    let sub = |x: usize, y: usize| (x + n - y % n) % n;
    [
        (add(a, 1), b),
        (sub(a, 1), b),
        (a, add(b, 1)),
        (a, sub(b, 1)),
        (add(a, b), b),
        (sub(a, b), b),
        (a, add(b, a)),
        (a, sub(b, a)),
    ]
}

struct Margulis {
    side: usize,
}

impl Margulis {
    fn row_map(&self, i: usize) -> BTreeMap<usize, Complex64> {
        let mut row = BTreeMap::new();
        if i >= self.side * self.side {
            return row;
        }
        let v = (i / self.side, i % self.side);
        for (u1, u2) in margulis_maps(self.side, v) {
            *row.entry(u1 * self.side + u2).or_insert(ZERO) += Complex64::new(1.0, 0.0);
        }
        row
    }
}

impl SparseAccess for Margulis {
    fn row(&self, i: usize) -> Vec<usize> {
        self.row_map(i).into_keys().collect()
    }

    fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.row_map(i).get(&j).copied().unwrap_or(ZERO)
    }

    fn row_entries(&self, i: usize) -> Vec<(usize, Complex64)> {
        self.row_map(i).into_iter().collect()
    }

    fn describe(&self) -> String {
        format!("margulis N={}", self.side)
    }
}

/// Oracle for the Margulis graph Hamiltonian on side × side vertices.
/// Entries are collision counts and may exceed 1; `normalization()` on the
/// result accounts for that.
pub fn build_margulis(side: usize) -> Result<OracleTuple> {
    if side < 2 {
        return Err(invalid(
            "N",
            format!("side length must be at least 2, got {side}"),
        ));
    }
    let access = Margulis { side };
    let modes = side * side;
    let mut s = 0;
    let mut max_entry: f64 = 0.0;
    for i in 0..modes {
        let row = access.row_map(i);
        s = s.max(row.len());
        for v in row.values() {
            max_entry = max_entry.max(v.norm());
        }
    }
    let n = crate::linalg::qubits_for(modes);
    Ok(OracleTuple::new(n, s, modes, max_entry, Arc::new(access)))
}
