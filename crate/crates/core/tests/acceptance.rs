//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`. The process exits nonzero if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::*;
use fermiblock::baseline::{
    growth_exponent, local_dynamics_entry, local_thermal_entry, support_growth,
};
use fermiblock::block_encoding::dilate;
use fermiblock::chebyshev::{fermi_dirac_bound, fermi_dirac_scaled, GRID_POINTS};
use fermiblock::clock::{
    averaging_grid, build_clock_hamiltonian, grid_search_overlap, hopping_chain,
    limiting_overlap_average, randomized_time_average, Gate, GateList,
};
use fermiblock::correlation::{
    greens_fourier, thermal_correlation, time_evolved_correlation, Degree, PipelineOptions,
};
use fermiblock::estimator::{estimate_energy_density, estimate_entry, wick_quartic};
use fermiblock::experiment::{parse_config, run_experiment, RunOptions};
use fermiblock::linalg::{spectral_norm, trace, Mat, ONE, ZERO};
use fermiblock::oracle::{build_margulis, build_tight_binding, Boundary, LatticeSpec, OracleTuple};
use num_complex::Complex64;

/// Rounding slack used when comparing measured deviations with declared
/// error bounds.
const FP: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn chain(length: usize) -> OracleTuple {
    build_tight_binding(&LatticeSpec::chain(length, Boundary::Open, -1.0)).unwrap()
}

fn c1_fermi_dirac_bound() -> Outcome {
    let mut worst_ratio: f64 = 0.0;
    let mut failures = Vec::new();
    for c in [1.0, 4.0, 8.0, 16.0] {
        for d in [100, 1000, 4000] {
            let approx = fermi_dirac_scaled(c, d, 1.0).unwrap();
            let measured = approx.measured_error(GRID_POINTS).unwrap();
            let bound = fermi_dirac_bound(c, d);
            let expected = if c >= 2.0 * PI {
                12.0 / d as f64 * (c / PI).powi(4)
            } else {
                40.0 / d as f64 * (c / PI).powi(2)
            };
            if (bound - expected).abs() > 1e-12 * expected || measured > bound {
                failures.push(format!(
                    "c={c} d={d}: measured {measured:e} bound {bound:e}"
                ));
            }
            worst_ratio = worst_ratio.max(measured / bound);
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "12 (c, d) pairs, max measured/bound = {worst_ratio:.2e} {}",
            failures.join("; ")
        ),
    )
}

fn c2_thermal_pipeline() -> Outcome {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut configs = 0;
    for length in [8, 16] {
        let oracle = chain(length);
        let h = chain_matrix(length, oracle.dim(), -1.0);
        for beta in [0.5, 2.0, 4.0] {
            let be = thermal_correlation(
                &oracle,
                beta,
                Degree::Target(2.5e-3),
                &PipelineOptions::default(),
            )
            .unwrap();
            let exact = fermi_dirac_dense(&h, beta);
            let dev = max_entry_diff(&be.extract_block(), &exact);
            worst = worst.max(dev);
            configs += 1;
            if be.eps() > 1e-2 {
                failures.push(format!(
                    "L={length} beta={beta}: eps_Tot {:e} above 1e-2",
                    be.eps()
                ));
            } else if dev > be.eps() + FP {
                failures.push(format!(
                    "L={length} beta={beta}: deviation {dev:e} > eps_Tot {:e}",
                    be.eps()
                ));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{configs} configurations with eps_Tot <= 1e-2, max entry deviation {worst:.2e} {}",
            failures.join("; ")
        ),
    )
}

fn c3_time_evolution() -> Outcome {
    let oracle = chain(8);
    let h = chain_matrix(8, 8, -1.0);
    let site = 3;
    let m0 = Mat::from_fn(8, 8, |r, c| if r == site && c == site { ONE } else { ZERO });
    let be_m0 = dilate(&m0).unwrap();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    for t in [1.0, 2.0, 5.0] {
        let be =
            time_evolved_correlation(&oracle, &be_m0, t, t, &PipelineOptions::default()).unwrap();
        let exact = heisenberg_dense(&h, &m0, t, t);
        let dev = spectral_norm(&(be.extract_block() - &exact));
        let drift = (trace(&be.extract_block()) - trace(&m0)).norm();
        worst = worst.max(dev);
        worst_trace = worst_trace.max(drift);
        if dev > be.eps() + FP || drift > 1e-10 {
            failures.push(format!(
                "t={t}: deviation {dev:e} (declared {:e}), trace drift {drift:e}",
                be.eps()
            ));
        }
    }
    outcome(
        failures.is_empty(),
        format!("t in {{1, 2, 5}}: max spectral deviation {worst:.2e}, max trace drift {worst_trace:.2e} {}", failures.join("; ")),
    )
}

/// G(ω) = Σ_k [(1 − f_k)/(iη − (ε_k + ω)) − f_k/(iη + (ε_k + ω))] |k⟩⟨k|.
fn greens_dense(h: &Mat, beta: f64, eta: f64, omega: f64) -> Mat {
    let eig = h.clone().symmetric_eigen();
    let n = h.nrows();
    let diag = Mat::from_fn(n, n, |r, c| {
        if r != c {
            return ZERO;
        }
        let e = eig.eigenvalues[r];
        let f = 1.0 / (1.0 + (beta * e).exp());
        (1.0 - f) / Complex64::new(-(e + omega), eta) - f / Complex64::new(e + omega, eta)
    });
    &eig.eigenvectors * diag * eig.eigenvectors.adjoint()
}

fn c4_greens() -> Outcome {
    let oracle = chain(8);
    let h = chain_matrix(8, 8, -1.0);
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    let mut worst: f64 = 0.0;
    for eta in [0.5, 1.0] {
        for omega in [-1.0, 0.0, 1.0] {
            let be = greens_fourier(
                &oracle,
                2.0,
                eta,
                omega,
                Degree::Target(0.05),
                &PipelineOptions::default(),
            )
            .unwrap();
            let exact = greens_dense(&h, 2.0, eta, omega);
            let dev = max_entry_diff(&be.extract_block(), &exact);
            worst = worst.max(dev);
            let b = be.budget().copied().unwrap_or_default();
            let three_term = b.eps_pa + b.eps_ph + b.delta_qsvt;
            if dev > be.eps() + FP || (three_term - be.eps()).abs() > 1e-12 * be.eps() {
                failures.push(format!(
                    "eta={eta} omega={omega}: deviation {dev:e} > eps_Tot {:e}",
                    be.eps()
                ));
            }
            if omega == 0.0 {
                lines.push(format!(
                    "eta={eta}: eps_Tot = {:.3e} + {:.1e} + {:.1e}",
                    b.eps_pa, b.eps_ph, b.delta_qsvt
                ));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "6 (eta, omega) points, max entry deviation {worst:.2e}; {} {}",
            lines.join(", "),
            failures.join("; ")
        ),
    )
}

fn c5_hadamard_calibration() -> Outcome {
    let mut rng = rng(5);
    let mut failures = 0;
    let mut total = 0;
    for enc in 0..50 {
        let a = random_contraction(&mut rng, 8, 0.95);
        let be = dilate(&a).unwrap();
        for k in 0..10 {
            let seed = (enc * 10 + k) as u64;
            let (i, j) = (seed as usize * 5 % 8, seed as usize * 3 % 8);
            let est = estimate_entry(&be, i, j, 0.1, 0.1, seed).unwrap();
            if (est.value - a[(i, j)]).norm() > est.error_claim() {
                failures += 1;
            }
            total += 1;
        }
    }
    let fraction = failures as f64 / total as f64;
    outcome(
        fraction <= 0.13,
        format!(
            "{failures} of {total} estimates outside eps1 + alpha eps2 (fraction {fraction:.3})"
        ),
    )
}

fn c6_energy_density() -> Outcome {
    let oracle = chain(16);
    let h = chain_matrix(16, 16, -1.0);
    let m = fermi_dirac_dense(&h, 2.0);
    let terms: Vec<(usize, usize)> = (0..15).map(|i| (i, i + 1)).collect();
    let exact = terms
        .iter()
        .map(|&(i, j)| (h[(i, j)] * m[(j, i)] + h[(i, j)].conj() * m[(i, j)]).re)
        .sum::<f64>()
        / terms.len() as f64;
    let be = thermal_correlation(
        &oracle,
        2.0,
        Degree::Target(1e-3),
        &PipelineOptions::default(),
    )
    .unwrap();
    let hits = (0..100)
        .filter(|&seed| {
            let est = estimate_energy_density(&be, &oracle, 0.05, 0.05, seed).unwrap();
            (est.value - exact).abs() <= 0.05
        })
        .count();
    outcome(
        hits >= 90,
        format!("{hits} of 100 trials within 0.05 of the exact per-term mean {exact:.5}"),
    )
}

fn c7_wick() -> Outcome {
    let mut rng = rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let h = random_hermitian(&mut rng, 4);
        let fock = FockThermal::new(&h, 1.0);
        let m = fermi_dirac_dense(&h, 1.0);
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((fock.two_point(i, j) - m[(i, j)]).norm());
                for k in 0..4 {
                    for l in 0..4 {
                        let brute = fock.four_point(i, j, k, l);
                        worst = worst.max((wick_quartic(&m, i, j, k, l) - brute).norm());
                    }
                }
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("5 Hamiltonians x 256 tuples, max deviation {worst:.2e}"),
    )
}

fn c8_hopping_chain() -> Outcome {
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for length in [7, 15, 31] {
        let chain = hopping_chain(length).unwrap();
        let spectrum: f64 = (1..=length + 1)
            .map(|k| {
                (chain.values[k - 1] - 2.0 * (PI * k as f64 / (length + 2) as f64).cos()).abs()
            })
            .fold(0.0, f64::max);
        let grid = averaging_grid(length);
        let average = randomized_time_average(length, &grid);
        let reference = 3.0 / (2.0 * (length + 2) as f64);
        let tol = 1.0 / (2.0 * (length + 2) as f64);
        let (_, best) = grid_search_overlap(length);
        let ok = spectrum <= 1e-10
            && (average - reference).abs() <= tol
            && best >= tol
            && (limiting_overlap_average(length) - reference).abs() < 1e-15;
        if !ok {
            failures.push(format!("L={length}"));
        }
        lines.push(format!(
            "L={length}: avg {average:.4} vs {reference:.4}, max {best:.3}"
        ));
    }
    outcome(
        failures.is_empty(),
        format!("{} {}", lines.join(", "), failures.join(" ")),
    )
}

/// W on two qubits from a 4×4 matrix acting on (q_a, q_b) = (1, 0).
fn reversed(g: &Mat) -> Mat {
    let swap = Mat::from_fn(4, 4, |r, c| {
        let p = [0, 2, 1, 3];
        if p[r] == c {
            ONE
        } else {
            ZERO
        }
    });
    &swap * g * &swap
}

fn to_array(m: &Mat) -> [[Complex64; 4]; 4] {
    let mut out = [[ZERO; 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, z) in row.iter_mut().enumerate() {
            *z = m[(r, c)];
        }
    }
    out
}

fn c9_clock() -> Outcome {
    let mut rng = rng(9);
    let mut worst_h: f64 = 0.0;
    let mut worst_marginal: f64 = 0.0;
    let mut max_sparsity = 0;
    for trial in 0..10 {
        // full 4×4 matrices in the basis |b0 b1⟩
        let mut full = Vec::new();
        let mut gates = Vec::new();
        for k in 0..3 {
            let u = random_unitary(&mut rng, 4);
            if (trial + k) % 2 == 0 {
                gates.push(Gate::new(0, 1, to_array(&u)).unwrap());
                full.push(u);
            } else {
                gates.push(Gate::new(1, 0, to_array(&u)).unwrap());
                full.push(reversed(&u));
            }
        }
        let list = GateList::new(2, gates).unwrap();
        let oracle = build_clock_hamiltonian(&list).unwrap();
        let h = oracle.materialize().unwrap();
        let mut brute = Mat::zeros(16, 16);
        for (l, w) in full.iter().enumerate() {
            let hop = Mat::from_fn(4, 4, |r, c| if r == l + 1 && c == l { ONE } else { ZERO });
            let term = hop.kronecker(w);
            brute += &term + term.adjoint();
        }
        worst_h = worst_h.max(max_entry_diff(&h, &brute));
        max_sparsity = max_sparsity.max((0..16).map(|i| oracle.row(i).len()).max().unwrap());

        let history: Vec<nalgebra::DVector<Complex64>> = (0..4)
            .map(|l| {
                let mut v = nalgebra::DVector::from_element(4, ZERO);
                v[0] = ONE;
                full[..l].iter().fold(v, |acc, w| w * acc)
            })
            .collect();
        for t in [0.7, 2.3, 5.0] {
            let psi = (&brute * Complex64::new(0.0, -t))
                .exp()
                .column(0)
                .into_owned();
            let j = hopping_chain(3).unwrap().matrix;
            let alpha = (&j * Complex64::new(0.0, -t)).exp().column(0).into_owned();
            for l in 0..4 {
                let block = psi.rows(4 * l, 4).into_owned();
                let expected = &history[l] * alpha[l];
                worst_marginal = worst_marginal.max((block - expected).norm());
            }
        }
    }
    outcome(
        worst_h <= 1e-12 && max_sparsity <= 8 && worst_marginal <= 1e-10,
        format!(
            "10 random gate lists: |h - brute force| {worst_h:.1e}, max row sparsity {max_sparsity}, clock-marginal deviation {worst_marginal:.1e}"
        ),
    )
}

fn c10_baseline() -> Outcome {
    let oracle = chain(64);
    let h = chain_matrix(64, 64, -1.0);
    let exact = fermi_dirac_dense(&h, 4.0);
    let mut rng = rng(10);
    let mut failures = Vec::new();
    let mut worst_thermal: f64 = 0.0;
    let mut bound = 0.0;
    for _ in 0..20 {
        use rand::Rng;
        let (i, j) = (rng.random_range(0..64), rng.random_range(0..64));
        let e = local_thermal_entry(&oracle, 4.0, i, j, 2000).unwrap();
        let dev = (e.value - exact[(i, j)]).norm();
        worst_thermal = worst_thermal.max(dev);
        bound = e.certified_bound;
        if dev > e.certified_bound {
            failures.push(format!("thermal ({i}, {j}) {dev:e}"));
        }
    }
    let center = 32;
    let m0 = Mat::from_fn(64, 64, |r, c| {
        if r == center && c == center {
            ONE
        } else {
            ZERO
        }
    });
    let evolved = heisenberg_dense(&h, &m0, 4.0, 4.0);
    let mut worst_dyn: f64 = 0.0;
    for (i, j) in [(32, 32), (30, 35), (20, 40), (33, 31), (25, 25)] {
        let e = local_dynamics_entry(&oracle, |k, l| m0[(k, l)], 4.0, i, j, 60).unwrap();
        worst_dyn = worst_dyn.max((e.value - evolved[(i, j)]).norm());
    }
    if worst_dyn > 1e-8 {
        failures.push(format!("dynamics deviation {worst_dyn:e}"));
    }
    // outside the light cone the sparse vectors never touch the probed index
    let mut zeros = 0;
    for (i, j, order) in [(0, 40, 20), (10, 50, 39), (63, 1, 61)] {
        let e = local_thermal_entry(&oracle, 4.0, i, j, order).unwrap();
        let d = local_dynamics_entry(
            &oracle,
            |k, l| m0[(k, l)],
            4.0,
            i,
            i,
            (center as i64 - i as i64).unsigned_abs() as usize - 1,
        )
        .unwrap();
        if e.value == ZERO && d.value == ZERO {
            zeros += 1;
        } else {
            failures.push(format!("light-cone entry ({i}, {j}) not exactly zero"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "thermal max deviation {worst_thermal:.1e} (certified {bound:.2e}), dynamics max deviation {worst_dyn:.1e}, {zeros}/3 light-cone zeros exact {}",
            failures.join("; ")
        ),
    )
}

fn margulis_bfs(side: usize, start: (usize, usize), depth: usize) -> Vec<usize> {
    let mut seen = BTreeSet::from([start]);
    let mut frontier = vec![start];
    let mut sizes = vec![1];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &(a, b) in &frontier {
            let n = side;
            for u in [
                ((a + 1) % n, b),
                ((a + n - 1) % n, b),
                (a, (b + 1) % n),
                (a, (b + n - 1) % n),
                ((a + b) % n, b),
                ((a + n - b) % n, b),
                (a, (b + a) % n),
                (a, (b + n - a) % n),
            ] {
                if seen.insert(u) {
                    next.push(u);
                }
            }
        }
        sizes.push(seen.len());
        frontier = next;
    }
    sizes
}

fn c11_expansion() -> Outcome {
    let line = build_tight_binding(&LatticeSpec::chain(1024, Boundary::Open, 1.0)).unwrap();
    let d1 = growth_exponent(&support_growth(&line, 512, 200).unwrap(), 10);
    let square =
        build_tight_binding(&LatticeSpec::uniform(&[128, 128], Boundary::Open, 1.0)).unwrap();
    let d2 = growth_exponent(&support_growth(&square, 64 * 128 + 64, 50).unwrap(), 10);
    let margulis = build_margulis(8).unwrap();
    let start = (1, 2);
    let sizes = support_growth(&margulis, start.0 * 8 + start.1, 6).unwrap();
    let bfs = margulis_bfs(8, start, 6);
    let ok = (d1 - 1.0).abs() <= 0.5 && (d2 - 2.0).abs() <= 0.5 && sizes == bfs && sizes[6] >= 32;
    outcome(
        ok,
        format!(
            "1D exponent {d1:.3}, 2D exponent {d2:.3}, Margulis N=8 support {:?} (BFS {:?})",
            sizes, bfs
        ),
    )
}

const DETERMINISM_CONFIGS: [&str; 6] = [
    "[experiment]\ncommand = thermal-entry\nseed = 11\n[model]\ntype = lattice\ndims = 8\nhop = -1\n[parameters]\nbeta = 0.5, 2, 4\neps_pa = 0.0025\nentries = all\n",
    "[experiment]\ncommand = approx-bound\n[parameters]\nc = 4, 8\ndegree = 500, 2000\n",
    "[experiment]\ncommand = energy-density\nseed = 4\n[model]\ntype = lattice\ndims = 16\nhop = -1\n[parameters]\nbeta = 2\neps_pa = 0.001\neps = 0.05\n",
    "[experiment]\ncommand = theorem1-demo\nseed = 2\n[model]\ntype = clock\nqubits = 2\ngate = H 1\ngate = CNOT 1 0\ngate = X 0\n[parameters]\nt = 0.5, 1, 2, 3\neps2 = 0.05\n",
    "[experiment]\ncommand = dynamics-entry\nseed = 9\n[model]\ntype = lattice\ndims = 8\nhop = -1\n[parameters]\nt = 1, 2, 5\nm0 = site 3\nentries = 3:3, 2:4\n",
    "[experiment]\ncommand = baseline-compare\n[model]\ntype = lattice\ndims = 16\nhop = -1\n[parameters]\nbeta = 4\norder = 200\nt = 2\nm0 = site 8\nentries = 8:8, 6:9\n",
];

fn c12_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    for (k, text) in DETERMINISM_CONFIGS.iter().enumerate() {
        let cfg = parse_config(text).unwrap();
        let mut files = Vec::new();
        for (run, jobs) in [(0, 1), (1, 1), (2, 4)] {
            let opts = RunOptions {
                output_dir: dir.path().join(format!("c{k}-r{run}")),
                seed: None,
                jobs,
            };
            let out = run_experiment(&cfg, &opts).unwrap();
            files.push(std::fs::read(out.csv_path).unwrap());
        }
        if files.iter().any(|f| f != &files[0]) || files[0].is_empty() {
            failures.push(cfg.command.to_string());
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} configs rerun 3 times (1 and 4 jobs): byte-identical CSV {}",
            DETERMINISM_CONFIGS.len(),
            failures.join(" ")
        ),
    )
}

fn main() {
    type Criterion = (u32, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        (
            1,
            "Fermi-Dirac approximation bound",
            60,
            c1_fermi_dirac_bound,
        ),
        (
            2,
            "thermal pipeline vs eigen-oracle",
            120,
            c2_thermal_pipeline,
        ),
        (3, "time-evolution pipeline", 60, c3_time_evolution),
        (4, "Green's function", 120, c4_greens),
        (5, "Hadamard-test calibration", 120, c5_hadamard_calibration),
        (6, "energy-density sampling", 60, c6_energy_density),
        (7, "Wick quartic vs Fock space", 60, c7_wick),
        (8, "hopping-chain overlap", 180, c8_hopping_chain),
        (9, "clock Hamiltonian", 180, c9_clock),
        (10, "classical baseline equivalence", 120, c10_baseline),
        (11, "expansion contrast", 30, c11_expansion),
        (12, "determinism", 180, c12_determinism),
    ];
    let mut failed = 0;
    for (number, name, limit, run) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run);
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(_) => (false, "panicked".to_string()),
        };
        let in_time = elapsed <= Duration::from_secs(limit);
        let verdict = if pass && in_time { "PASS" } else { "FAIL" };
        if verdict == "FAIL" {
            failed += 1;
        }
        let timing = if in_time {
            format!("{:.1}s", elapsed.as_secs_f64())
        } else {
            format!("{:.1}s, over the {limit}s limit", elapsed.as_secs_f64())
        };
        println!(
            "criterion {number:>2} {verdict} [{name}] ({timing}): {}",
            detail.trim_end()
        );
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
