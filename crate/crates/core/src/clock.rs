//! Clock (history) Hamiltonian of a two-qubit gate circuit.
//!
//! For gates W_1 … W_L on q qubits the Hamiltonian is
//! h = Σ_l |l+1⟩⟨l| ⊗ W_l + h.c. on a clock register holding l ∈ 1..=L+1.
//! The clock value l is stored as l − 1 in the q_clock most significant
//! bits of the basis index; circuit qubit 0 is the most significant bit of
//! the remaining q bits and serves as the output qubit.
//!
//! Restricted to history states the Hamiltonian acts as the hopping chain
//! J on L + 1 sites, whose spectrum 2cos(πk/(L+2)) controls how quickly
//! amplitude reaches the final clock value.

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::block_encoding::dilate;
use crate::correlation::{exact_reference, time_evolved_correlation, PipelineOptions, Reference};
use crate::error::{invalid, Error, Result};
use crate::estimator::{estimate_entry, EstimateResult};
use crate::linalg::{unitarity_defect, HermitianEigen, Mat, ONE, ZERO};
use crate::oracle::{OracleTuple, SparseAccess};

/// Largest deviation from unitarity accepted for a gate.
pub const GATE_TOLERANCE: f64 = 1e-12;
/// Largest clock-plus-circuit register handled by the demonstration.
pub const MAX_THEOREM1_QUBITS: u32 = 12;

/// A two-qubit gate on (q1, q2), q1 < q2, in the basis |b_q1 b_q2⟩ with
/// q1 as the more significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub q1: usize,
    pub q2: usize,
    pub matrix: [[Complex64; 4]; 4],
}

impl Gate {
    /// Gate on qubits (a, b) with `matrix` written in the basis |b_a b_b⟩.
    /// When a > b the qubit order is swapped internally.
    pub fn new(a: usize, b: usize, matrix: [[Complex64; 4]; 4]) -> Result<Self> {
        if a == b {
            return Err(invalid(
                "gate",
                format!("qubit pair ({a}, {b}) repeats a qubit"),
            ));
        }
        if a < b {
            return Ok(Gate {
                q1: a,
                q2: b,
                matrix,
            });
        }
        // relabel |b_a b_b⟩ → |b_b b_a⟩: basis index 1 ↔ 2
        let p = [0, 2, 1, 3];
        let mut swapped = [[ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                swapped[p[r]][p[c]] = matrix[r][c];
            }
        }
        Ok(Gate {
            q1: b,
            q2: a,
            matrix: swapped,
        })
    }

    pub fn identity(q1: usize, q2: usize) -> Result<Self> {
        let mut m = [[ZERO; 4]; 4];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = ONE;
        }
        Gate::new(q1, q2, m)
    }

    /// Single-qubit gate u on `target`, tensored with identity on `partner`.
    pub fn single(target: usize, partner: usize, u: [[Complex64; 2]; 2]) -> Result<Self> {
        let mut m = [[ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                // target is the more significant bit of the local basis
                if r & 1 == c & 1 {
                    m[r][c] = u[r >> 1][c >> 1];
                }
            }
        }
        Gate::new(target, partner, m)
    }

    /// CNOT with the given control and target.
    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = ONE;
        m[1][1] = ONE;
        m[2][3] = ONE;
        m[3][2] = ONE;
        Gate::new(control, target, m)
    }

    fn as_mat(&self) -> Mat {
        Mat::from_fn(4, 4, |r, c| self.matrix[r][c])
    }

    /// Local index |b_q1 b_q2⟩ of the circuit basis state x on q qubits.
    fn local(&self, x: usize, q: usize) -> usize {
        (bit(x, self.q1, q) << 1) | bit(x, self.q2, q)
    }

    /// x with the bits of q1 and q2 replaced by the local index `loc`.
    fn with_local(&self, x: usize, loc: usize, q: usize) -> usize {
        let x = set_bit(x, self.q1, q, loc >> 1);
        set_bit(x, self.q2, q, loc & 1)
    }

    /// Dense 2^q × 2^q matrix of the gate.
    pub fn full_matrix(&self, q: usize) -> Mat {
        let dim = 1usize << q;
        Mat::from_fn(dim, dim, |y, x| {
            if self.with_local(y, 0, q) != self.with_local(x, 0, q) {
                ZERO
            } else {
                self.matrix[self.local(y, q)][self.local(x, q)]
            }
        })
    }
}

fn bit(x: usize, qubit: usize, q: usize) -> usize {
    (x >> (q - 1 - qubit)) & 1
}

fn set_bit(x: usize, qubit: usize, q: usize, value: usize) -> usize {
    let shift = q - 1 - qubit;
    (x & !(1 << shift)) | (value << shift)
}

fn h_gate() -> [[Complex64; 2]; 2] {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[r, r], [r, -r]]
}

fn x_gate() -> [[Complex64; 2]; 2] {
    [[ZERO, ONE], [ONE, ZERO]]
}

fn t_gate() -> [[Complex64; 2]; 2] {
    [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, PI / 4.0)]]
}

/// Ordered circuit W_L … W_1 on q qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct GateList {
    pub q: usize,
    pub gates: Vec<Gate>,
}

impl GateList {
    pub fn new(q: usize, gates: Vec<Gate>) -> Result<Self> {
        let list = GateList { q, gates };
        list.validate()?;
        Ok(list)
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(invalid(
                "q",
                format!("circuits need at least 2 qubits, got {}", self.q),
            ));
        }
        for (index, g) in self.gates.iter().enumerate() {
            if g.q1 >= g.q2 || g.q2 >= self.q {
                return Err(invalid(
                    "gate",
                    format!(
                        "gate {index} acts on ({}, {}) outside {} qubits",
                        g.q1, g.q2, self.q
                    ),
                ));
            }
            let deviation = unitarity_defect(&g.as_mat());
            if deviation > GATE_TOLERANCE {
                return Err(Error::NonUnitaryGate { index, deviation });
            }
        }
        Ok(())
    }

    /// Copy padded with identity gates so that L + 1 is a power of two.
    pub fn padded(&self) -> Result<Self> {
        let target = (self.gates.len() + 1).next_power_of_two() - 1;
        let mut gates = self.gates.clone();
        while gates.len() < target.max(1) {
            gates.push(Gate::identity(0, 1)?);
        }
        Ok(GateList { q: self.q, gates })
    }

    /// W_l … W_1 as a dense matrix (identity for l = 0).
    pub fn prefix_unitary(&self, l: usize) -> Mat {
        let dim = 1usize << self.q;
        self.gates[..l]
            .iter()
            .fold(Mat::identity(dim, dim), |acc, g| {
                g.full_matrix(self.q) * acc
            })
    }

    /// Text form understood by [`GateList::from_str`].
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.q);
        for g in &self.gates {
            out.push_str(&format!("{} {}", g.q1, g.q2));
            for row in &g.matrix {
                for z in row {
                    out.push_str(&format!(" {} {}", z.re, z.im));
                }
            }
            out.push('\n');
        }
        out
    }
}

impl FromStr for GateList {
    type Err = Error;

    /// One gate per line: `H k`, `X k`, `T k`, `CNOT c t`, `I a b`, or a
    /// qubit pair followed by 16 complex entries (re im) of the 4×4 matrix
    /// in row-major order. An optional `qubits q` line fixes the width;
    /// `#` starts a comment.
    fn from_str(text: &str) -> Result<Self> {
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let mut q: Option<usize> = None;
        let mut raw: Vec<(usize, Vec<String>)> = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<String> = line.split_whitespace().map(str::to_string).collect();
            if tokens[0].eq_ignore_ascii_case("qubits") {
                let v = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| perr(k + 1, "expected `qubits <count>`".into()))?;
                q = Some(v);
            } else {
                raw.push((k + 1, tokens));
            }
        }
        let int = |line: usize, t: Option<&String>| -> Result<usize> {
            t.and_then(|t| t.parse().ok())
                .ok_or_else(|| perr(line, "expected a qubit index".into()))
        };
        let mut max_qubit = 1;
        for (line, tokens) in &raw {
            let first_numeric = tokens[0].parse::<usize>().is_ok();
            let count = if first_numeric { 2 } else { tokens.len() - 1 };
            for t in tokens.iter().skip(usize::from(!first_numeric)).take(count) {
                max_qubit = max_qubit.max(int(*line, Some(t))?);
            }
        }
        let q = q.unwrap_or(max_qubit + 1).max(2);
        let mut gates = Vec::new();
        for (line, tokens) in raw {
            let name = tokens[0].to_ascii_uppercase();
            let partner = |k: usize| if k == 0 { 1 } else { 0 };
            let gate = match name.as_str() {
                "H" | "X" | "T" => {
                    let k = int(line, tokens.get(1))?;
                    let u = match name.as_str() {
                        "H" => h_gate(),
                        "X" => x_gate(),
                        _ => t_gate(),
                    };
                    Gate::single(k, partner(k), u)
                }
                "CNOT" => Gate::cnot(int(line, tokens.get(1))?, int(line, tokens.get(2))?),
                "I" => Gate::identity(int(line, tokens.get(1))?, int(line, tokens.get(2))?),
                _ if tokens[0].parse::<usize>().is_ok() => {
                    if tokens.len() != 34 {
                        return Err(perr(
                            line,
                            format!(
                                "custom gate needs 2 qubits and 32 numbers, got {} tokens",
                                tokens.len()
                            ),
                        ));
                    }
                    let a = int(line, tokens.first())?;
                    let b = int(line, tokens.get(1))?;
                    let mut nums = Vec::with_capacity(32);
                    for t in &tokens[2..] {
                        nums.push(
                            t.parse::<f64>()
                                .map_err(|_| perr(line, format!("malformed number `{t}`")))?,
                        );
                    }
                    let mut m = [[ZERO; 4]; 4];
                    for r in 0..4 {
                        for c in 0..4 {
                            let k = 2 * (4 * r + c);
                            m[r][c] = Complex64::new(nums[k], nums[k + 1]);
                        }
                    }
                    Gate::new(a, b, m)
                }
                other => return Err(perr(line, format!("unknown gate `{other}`"))),
            }
            .map_err(|e| perr(line, e.to_string()))?;
            gates.push(gate);
        }
        GateList::new(q, gates)
    }
}

struct ClockAccess {
    gates: GateList,
    q_clock: u32,
}

impl ClockAccess {
    fn entries(&self, index: usize) -> Vec<(usize, Complex64)> {
        let q = self.gates.q;
        let dim_x = 1usize << q;
        let l = index / dim_x + 1;
        let y = index % dim_x;
        let last = self.gates.len() + 1;
        let mut out = Vec::with_capacity(8);
        if l >= 2 {
            // ⟨l, y| h |l−1, x⟩ = W_{l−1}[y][x]
            let g = &self.gates.gates[l - 2];
            let ly = g.local(y, q);
            for lx in 0..4 {
                let v = g.matrix[ly][lx];
                if v != ZERO {
                    out.push(((l - 2) * dim_x + g.with_local(y, lx, q), v));
                }
            }
        }
        if l < last {
            // ⟨l, y| h |l+1, x⟩ = conj(W_l[x][y])
            let g = &self.gates.gates[l - 1];
            let ly = g.local(y, q);
            for lx in 0..4 {
                let v = g.matrix[lx][ly].conj();
                if v != ZERO {
                    out.push((l * dim_x + g.with_local(y, lx, q), v));
                }
            }
        }
        out.sort_by_key(|&(c, _)| c);
        out
    }
}

impl SparseAccess for ClockAccess {
    fn row(&self, i: usize) -> Vec<usize> {
        self.entries(i).into_iter().map(|(c, _)| c).collect()
    }

    fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries(i)
            .into_iter()
            .find(|&(c, _)| c == j)
            .map(|(_, v)| v)
            .unwrap_or(ZERO)
    }

    fn row_entries(&self, i: usize) -> Vec<(usize, Complex64)> {
        self.entries(i)
    }

    fn describe(&self) -> String {
        format!(
            "clock L={} q={} q_clock={}",
            self.gates.len(),
            self.gates.q,
            self.q_clock
        )
    }
}

/// Sparse oracle for the clock Hamiltonian, after identity padding.
pub fn build_clock_hamiltonian(gates: &GateList) -> Result<OracleTuple> {
    gates.validate()?;
    let padded = gates.padded()?;
    let q_clock = (padded.len() + 1).trailing_zeros();
    let n = q_clock + padded.q as u32;
    let modes = 1usize << n;
    let max_entry = padded
        .gates
        .iter()
        .flat_map(|g| g.matrix.iter().flatten())
        .fold(0.0_f64, |m, z| m.max(z.norm()));
    let access = ClockAccess {
        gates: padded,
        q_clock,
    };
    let s = (0..modes)
        .map(|i| access.entries(i).len())
        .max()
        .unwrap_or(0);
    Ok(OracleTuple::new(n, s, modes, max_entry, Arc::new(access)))
}

/// Number of clock qubits used for a gate list after padding.
pub fn clock_qubits(gates: &GateList) -> Result<u32> {
    Ok((gates.padded()?.len() + 1).trailing_zeros())
}

/// The (L+1)-site hopping chain and its spectral data.
#[derive(Debug, Clone)]
pub struct HoppingChain {
    pub length: usize,
    pub matrix: Mat,
    /// Eigenvalues from the dense solver, descending.
    pub values: Vec<f64>,
    /// Matching eigenvectors as columns.
    pub vectors: Mat,
}

impl HoppingChain {
    /// ε_k = 2cos(πk/(L+2)) for k = 1..=L+1, descending.
    pub fn analytic_values(&self) -> Vec<f64> {
        (1..=self.length + 1)
            .map(|k| analytic_energy(self.length, k))
            .collect()
    }

    /// Smallest spacing between consecutive eigenvalues.
    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| (w[0] - w[1]).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// 2cos(πk/(L+2)).
pub fn analytic_energy(length: usize, k: usize) -> f64 {
    2.0 * (PI * k as f64 / (length + 2) as f64).cos()
}

/// √(2/(L+2))·sin(πjk/(L+2)), the j-th component of eigenvector k.
pub fn analytic_amplitude(length: usize, j: usize, k: usize) -> f64 {
    let m = (length + 2) as f64;
    (2.0 / m).sqrt() * (PI * (j * k) as f64 / m).sin()
}

/// Lower bound (2π/(L+2))·sin(π/(L+2)) on the spectral gap of the chain.
pub fn gap_lower_bound(length: usize) -> f64 {
    let m = (length + 2) as f64;
    2.0 * PI / m * (PI / m).sin()
}

pub fn hopping_chain(length: usize) -> Result<HoppingChain> {
    if length < 1 {
        return Err(invalid("L", "needs at least one gate"));
    }
    let sites = length + 1;
    let matrix = Mat::from_fn(
        sites,
        sites,
        |i, j| if i.abs_diff(j) == 1 { ONE } else { ZERO },
    );
    let eig = HermitianEigen::new(&matrix);
    let mut order: Vec<usize> = (0..sites).collect();
    order.sort_by(|&a, &b| eig.values[b].total_cmp(&eig.values[a]));
    let values = order.iter().map(|&k| eig.values[k]).collect();
    let vectors = Mat::from_fn(sites, sites, |r, c| eig.vectors[(r, order[c])]);
    Ok(HoppingChain {
        length,
        matrix,
        values,
        vectors,
    })
}

/// ⟨L+1|e^{−iJt}|1⟩ from the analytic spectral sum.
pub fn endpoint_amplitude(length: usize, t: f64) -> Complex64 {
    (1..=length + 1)
        .map(|k| {
            let w = analytic_amplitude(length, length + 1, k) * analytic_amplitude(length, 1, k);
            Complex64::from_polar(w, -analytic_energy(length, k) * t)
        })
        .sum()
}

/// |⟨L+1|e^{−iJt}|1⟩|².
pub fn overlap_probe(length: usize, t: f64) -> f64 {
    endpoint_amplitude(length, t).norm_sqr()
}

/// 3/(2(L+2)), the infinite-time average of the endpoint overlap.
pub fn limiting_overlap_average(length: usize) -> f64 {
    1.5 / (length + 2) as f64
}

/// Uniform time grid on [0, T] with T = (L+2)² log(2(L+2)), using at least
/// 8(L+2)² points and spacing at most π/16 so that no pair of chain
/// frequencies (spread at most 4) aliases.
pub fn averaging_grid(length: usize) -> Vec<f64> {
    let m = (length + 2) as f64;
    let horizon = m * m * (2.0 * m).ln();
    let by_spacing = (16.0 * horizon / PI).ceil() as usize + 1;
    let points = (8 * (length + 2).pow(2)).max(by_spacing);
    uniform_times(horizon, points)
}

/// `points` evenly spaced times on [0, horizon].
pub fn uniform_times(horizon: f64, points: usize) -> Vec<f64> {
    let points = points.max(2);
    (0..points)
        .map(|k| horizon * k as f64 / (points - 1) as f64)
        .collect()
}

/// Σ_t p(t)·overlap_probe(L, t) for the uniform distribution on `times`.
pub fn randomized_time_average(length: usize, times: &[f64]) -> f64 {
    if times.is_empty() {
        return 0.0;
    }
    times.iter().map(|&t| overlap_probe(length, t)).sum::<f64>() / times.len() as f64
}

/// Best overlap over a uniform grid on [0, 4L² log L].
pub fn grid_search_overlap(length: usize) -> (f64, f64) {
    let l = length as f64;
    let horizon = 4.0 * l * l * l.ln().max(1.0);
    let points = (16.0 * horizon / PI).ceil() as usize + 1;
    uniform_times(horizon, points)
        .into_iter()
        .map(|t| (t, overlap_probe(length, t)))
        .fold((0.0, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
}

/// Outcome of one decision-problem instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Result {
    /// Hadamard-test estimate of the probed entry.
    pub estimate: EstimateResult,
    /// The probed entry of the pipeline's encoding read exactly.
    pub pipeline_value: f64,
    /// Eigendecomposition reference p = |(⟨L+1| ⊗ ⟨1|_out) e^{−iht}|1, 0…0⟩|².
    pub exact: f64,
}

impl Theorem1Result {
    /// YES-style answer when the estimate reaches `threshold`.
    pub fn accepts(&self, threshold: f64) -> bool {
        self.estimate.value.re >= threshold
    }

    pub fn within_claim(&self) -> bool {
        (self.estimate.value.re - self.exact).abs() <= self.estimate.error_claim() + 1e-10
    }
}

/// Diagonal projector onto clock = L+1 and output qubit = 1.
pub fn output_projector(gates: &GateList) -> Result<Mat> {
    let padded = gates.padded()?;
    let q = padded.q;
    let q_clock = (padded.len() + 1).trailing_zeros() as usize;
    let dim = 1usize << (q_clock + q);
    let last_clock = (1usize << q_clock) - 1;
    Ok(Mat::from_fn(dim, dim, |r, c| {
        if r == c && r >> q == last_clock && bit(r & ((1 << q) - 1), 0, q) == 1 {
            ONE
        } else {
            ZERO
        }
    }))
}

/// Runs the full pipeline for the entry (1_clock 0…0, 1_clock 0…0) of
/// e^{iht} M₀ e^{−iht} and the exact reference.
pub fn theorem1_instance(
    gates: &GateList,
    t: f64,
    eps2: f64,
    delta: f64,
    seed: u64,
) -> Result<Theorem1Result> {
    let oracle = build_clock_hamiltonian(gates)?;
    if oracle.n() > MAX_THEOREM1_QUBITS {
        return Err(Error::TooLarge {
            qubits: oracle.n(),
            cap: MAX_THEOREM1_QUBITS,
        });
    }
    let m0 = output_projector(gates)?;
    let be_m0 = dilate(&m0)?;
    let be = time_evolved_correlation(&oracle, &be_m0, t, t, &PipelineOptions::default())?;
    let estimate = estimate_entry(&be, 0, 0, eps2, delta, seed)?;
    let pipeline_value = (be.amplitude(0, 0)? * be.alpha()).re;
    let h = oracle.materialize()?;
    let exact = exact_reference(&h, &Reference::Evolved { m0, t1: t, t2: t })?[(0, 0)].re;
    Ok(Theorem1Result {
        estimate,
        pipeline_value,
        exact,
    })
}
