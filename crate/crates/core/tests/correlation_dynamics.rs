mod common;

use common::{fermi_dirac_dense, heisenberg_dense, max_entry_diff, FockThermal};
use fermiblock::block_encoding::dilate;
use fermiblock::correlation::{
    exact_reference, greens_fourier, momentum_transform, real_space_transform, thermal_correlation,
    time_evolved_correlation, Degree, PipelineOptions, Reference,
};
use fermiblock::linalg::{spectral_norm, Mat};
use fermiblock::oracle::{build_tight_binding, Boundary, LatticeSpec, OracleTuple};
use fermiblock::Error;
use num_complex::Complex64;
use std::f64::consts::PI;

fn chain(length: usize, boundary: Boundary, hop: f64, onsite: f64) -> OracleTuple {
    build_tight_binding(&LatticeSpec::chain(length, boundary, hop).with_onsite(onsite)).unwrap()
}

/// G = (I − F)(iη − (h + ω))^{−1} − F(iη + (h + ω))^{−1} with dense inverses.
fn greens_dense(h: &Mat, beta: f64, eta: f64, omega: f64) -> Mat {
    let n = h.nrows();
    let id = Mat::identity(n, n);
    let f = fermi_dirac_dense(h, beta);
    let shifted = h + &id * Complex64::new(omega, 0.0);
    let ieta = &id * Complex64::new(0.0, eta);
    let r1 = (&ieta - &shifted).try_inverse().unwrap();
    let r2 = (&ieta + &shifted).try_inverse().unwrap();
    (&id - &f) * r1 - f * r2
}

#[test]
fn thermal_pipeline_matches_fock_space() {
    let oracle = chain(4, Boundary::Open, -0.8, 0.2);
    let h = oracle.materialize().unwrap();
    let beta = 1.5;
    let be = thermal_correlation(
        &oracle,
        beta,
        Degree::Target(1e-3),
        &PipelineOptions::default(),
    )
    .unwrap();
    assert_eq!(be.alpha(), 4.0);
    let fock = FockThermal::new(&h, beta);
    let m = be.extract_block();
    for i in 0..4 {
        for j in 0..4 {
            assert!(
                (m[(i, j)] - fock.two_point(i, j)).norm() <= be.eps(),
                "({i},{j})"
            );
        }
    }
}

#[test]
fn thermal_pipeline_within_declared_error() {
    let opts = PipelineOptions::default();
    for (len, beta, eps) in [(8, 0.5, 1e-2), (8, 3.0, 1e-3), (16, 1.0, 5e-3)] {
        let oracle = chain(len, Boundary::Periodic, 1.0, 0.0);
        let h = oracle.materialize().unwrap();
        let be = thermal_correlation(&oracle, beta, Degree::Target(eps), &opts).unwrap();
        let exact = fermi_dirac_dense(&h, beta);
        let dev = be.deviation_from(&exact);
        assert!(
            dev <= be.eps(),
            "len={len} beta={beta}: {dev} > {}",
            be.eps()
        );
        assert!(be.budget().unwrap().eps_pa <= 4.0 * eps);
    }
}

#[test]
fn thermal_fixed_degree_checks_budget() {
    let oracle = chain(8, Boundary::Open, 1.0, 0.0);
    let opts = PipelineOptions {
        max_eps_pa: Some(1e-3),
        ..Default::default()
    };
    assert!(matches!(
        thermal_correlation(&oracle, 2.0, Degree::Fixed(5), &opts),
        Err(Error::DegreeInsufficient { .. })
    ));
    assert!(
        thermal_correlation(&oracle, -1.0, Degree::Fixed(5), &PipelineOptions::default()).is_err()
    );
}

#[test]
fn evolved_pipeline_matches_heisenberg_picture() {
    let oracle = chain(8, Boundary::Open, 1.0, 0.0);
    let h = oracle.materialize().unwrap();
    let m0 = Mat::from_fn(8, 8, |i, j| {
        if i == j && i < 4 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let be_m0 = dilate(&m0).unwrap();
    for (t1, t2) in [(0.0, 0.0), (1.0, 1.0), (2.5, 0.5), (-1.0, 3.0)] {
        let be =
            time_evolved_correlation(&oracle, &be_m0, t1, t2, &PipelineOptions::default()).unwrap();
        let expected = heisenberg_dense(&h, &m0, t1, t2);
        assert!(
            max_entry_diff(&be.extract_block(), &expected) < 1e-10,
            "t1={t1} t2={t2}"
        );
    }
}

#[test]
fn evolved_trace_is_conserved_at_equal_times() {
    let oracle = chain(8, Boundary::Periodic, 1.0, 0.0);
    let h = oracle.materialize().unwrap();
    let m0 = fermi_dirac_dense(&h, 2.0);
    let be_m0 = dilate(&m0).unwrap();
    let be =
        time_evolved_correlation(&oracle, &be_m0, 3.0, 3.0, &PipelineOptions::default()).unwrap();
    assert!((be.extract_block().trace() - m0.trace()).norm() < 1e-10);
}

#[test]
fn evolved_error_propagation() {
    let oracle = chain(4, Boundary::Open, 1.0, 0.0);
    let be_m0 = dilate(&Mat::identity(4, 4).scale(0.5))
        .unwrap()
        .with_eps(1e-3);
    let opts = PipelineOptions {
        eps_be_h: 1e-5,
        ..Default::default()
    };
    let be = time_evolved_correlation(&oracle, &be_m0, 2.0, 1.0, &opts).unwrap();
    // ε_M + 2 α_M ε_BE_h (|t₁| + |t₂|) with α_M = 1
    let expected = 1e-3 + 2.0 * 1e-5 * 3.0;
    assert!((be.eps() - expected).abs() < 1e-15, "{}", be.eps());
}

#[test]
fn evolved_rejects_dimension_mismatch() {
    let oracle = chain(8, Boundary::Open, 1.0, 0.0);
    let be_m0 = dilate(&Mat::identity(4, 4)).unwrap();
    assert!(matches!(
        time_evolved_correlation(&oracle, &be_m0, 1.0, 1.0, &PipelineOptions::default()),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn greens_pipeline_matches_resolvent_form() {
    let oracle = chain(4, Boundary::Open, 1.0, 0.0);
    let h = oracle.materialize().unwrap();
    for (beta, eta, omega) in [(1.0, 1.0, 0.0), (2.0, 1.5, 0.5), (0.5, 2.0, -1.0)] {
        let be = greens_fourier(
            &oracle,
            beta,
            eta,
            omega,
            Degree::Target(0.05),
            &PipelineOptions::default(),
        )
        .unwrap();
        assert!((be.alpha() - 8.0 / eta).abs() < 1e-15);
        let exact = greens_dense(&h, beta, eta, omega);
        let dev = be.deviation_from(&exact);
        assert!(
            dev <= be.eps(),
            "beta={beta} eta={eta}: {dev} > {}",
            be.eps()
        );
        let reference = exact_reference(&h, &Reference::Greens { beta, eta, omega }).unwrap();
        assert!(max_entry_diff(&reference, &exact) < 1e-12);
    }
}

#[test]
fn greens_rejects_bad_parameters() {
    let oracle = chain(4, Boundary::Open, 1.0, 0.0);
    let opts = PipelineOptions::default();
    assert!(greens_fourier(&oracle, 1.0, 0.0, 0.0, Degree::Fixed(10), &opts).is_err());
    let s = oracle.normalization();
    assert!(greens_fourier(&oracle, 1.0, 1.0, s + 1.5, Degree::Fixed(10), &opts).is_err());
    assert!(greens_fourier(&oracle, 1.0, 1.0, 0.0, Degree::Fixed(11), &opts).is_err());
}

#[test]
fn exact_references_agree_with_dense_forms() {
    let oracle = chain(8, Boundary::Periodic, -1.0, 0.3);
    let h = oracle.materialize().unwrap();
    let thermal = exact_reference(&h, &Reference::Thermal { beta: 2.0 }).unwrap();
    assert!(max_entry_diff(&thermal, &fermi_dirac_dense(&h, 2.0)) < 1e-12);
    let m0 = thermal.clone();
    let evolved = exact_reference(
        &h,
        &Reference::Evolved {
            m0: m0.clone(),
            t1: 1.2,
            t2: -0.4,
        },
    )
    .unwrap();
    assert!(max_entry_diff(&evolved, &heisenberg_dense(&h, &m0, 1.2, -0.4)) < 1e-12);
}

#[test]
fn momentum_transform_diagonalizes_periodic_chain() {
    let (len, beta, hop) = (8, 1.3, 1.0);
    let h = chain(len, Boundary::Periodic, hop, 0.0)
        .materialize()
        .unwrap();
    let m = fermi_dirac_dense(&h, beta);
    let mk = momentum_transform(&m, &[len]).unwrap();
    for k in 0..len {
        let energy = 2.0 * hop * (2.0 * PI * k as f64 / len as f64).cos();
        let occupation = 1.0 / (1.0 + (beta * energy).exp());
        for q in 0..len {
            let expected = if q == k { occupation } else { 0.0 };
            assert!(
                (mk[(k, q)] - Complex64::new(expected, 0.0)).norm() < 1e-12,
                "k={k} q={q}"
            );
        }
    }
    let back = real_space_transform(&mk, &[len]).unwrap();
    assert!(max_entry_diff(&back, &m) < 1e-12);
}

#[test]
fn momentum_transform_on_square_lattice() {
    let spec = LatticeSpec::uniform(&[4, 4], Boundary::Periodic, 0.5);
    let h = build_tight_binding(&spec).unwrap().materialize().unwrap();
    let hk = momentum_transform(&h, &[4, 4]).unwrap();
    for k1 in 0..4 {
        for k2 in 0..4 {
            let idx = k1 * 4 + k2;
            let e = (2.0 * PI * k1 as f64 / 4.0).cos() + (2.0 * PI * k2 as f64 / 4.0).cos();
            assert!((hk[(idx, idx)].re - e).abs() < 1e-12);
        }
    }
    let off: f64 = (0..16)
        .flat_map(|i| (0..16).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| hk[(i, j)].norm())
        .fold(0.0, f64::max);
    assert!(off < 1e-12);
    assert!(momentum_transform(&h, &[4, 3]).is_err());
}

#[test]
fn low_temperature_gapped_state_is_slater_projector() {
    // every single-particle level sits at least 0.3 from zero
    let oracle = chain(8, Boundary::Periodic, 1.0, 0.3);
    let h = oracle.materialize().unwrap();
    let m = exact_reference(&h, &Reference::Thermal { beta: 60.0 }).unwrap();
    assert!(spectral_norm(&(&m * &m - &m)) < 1e-7);
    // three levels lie below zero
    assert!((m.trace().re - 3.0).abs() < 1e-7);
}
