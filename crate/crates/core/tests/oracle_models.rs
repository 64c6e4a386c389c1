mod common;

use common::max_entry_diff;
use fermiblock::linalg::{hermitian_asymmetry, spectral_norm, Mat, ZERO};
use fermiblock::oracle::{
    build_fermi_sea, build_margulis, build_tight_binding, disorder_prf, margulis_maps, Boundary,
    Domain, HoppingEntry, LatticeSpec, OracleTuple,
};
use fermiblock::Error;
use num_complex::Complex64;
use proptest::prelude::*;

/// Nearest-neighbour lattice written out site by site.
fn brute_force(dims: &[usize], periodic: bool, hop: f64, onsite: f64) -> Mat {
    let sites: usize = dims.iter().product();
    let dim = sites.next_power_of_two();
    let mut h = Mat::zeros(dim, dim);
    let index = |x: &[usize]| x.iter().zip(dims).fold(0, |acc, (&xi, &l)| acc * l + xi);
    for site in 0..sites {
        let mut x = vec![0; dims.len()];
        let mut rest = site;
        for a in (0..dims.len()).rev() {
            x[a] = rest % dims[a];
            rest /= dims[a];
        }
        h[(site, site)] = Complex64::new(onsite, 0.0);
        for a in 0..dims.len() {
            let mut y = x.clone();
            if x[a] + 1 < dims[a] {
                y[a] += 1;
            } else if periodic {
                y[a] = 0;
            } else {
                continue;
            }
            let j = index(&y);
            h[(site, j)] = Complex64::new(hop, 0.0);
            h[(j, site)] = Complex64::new(hop, 0.0);
        }
    }
    h
}

fn lattice_strategy() -> impl Strategy<Value = (Vec<usize>, bool, f64, f64)> {
    (
        prop_oneof![
            (3usize..14).prop_map(|l| vec![l]),
            (3usize..6, 3usize..6).prop_map(|(a, b)| vec![a, b]),
            (3usize..4, 3usize..4, 3usize..4).prop_map(|(a, b, c)| vec![a, b, c]),
        ],
        any::<bool>(),
        -1.0f64..1.0,
        -1.0f64..1.0,
    )
}

fn spec_from(dims: &[usize], periodic: bool, hop: f64, onsite: f64) -> LatticeSpec {
    let boundary = if periodic {
        Boundary::Periodic
    } else {
        Boundary::Open
    };
    LatticeSpec::uniform(dims, boundary, hop).with_onsite(onsite)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn tight_binding_matches_brute_force((dims, periodic, hop, onsite) in lattice_strategy()) {
        let oracle = build_tight_binding(&spec_from(&dims, periodic, hop, onsite)).unwrap();
        let h = oracle.materialize().unwrap();
        let expected = brute_force(&dims, periodic, hop, onsite);
        prop_assert!(max_entry_diff(&h, &expected) < 1e-15);
        prop_assert!(hermitian_asymmetry(&h) == 0.0);
    }

    #[test]
    fn gershgorin_dominates_norm((dims, periodic, hop, onsite) in lattice_strategy()) {
        let oracle = build_tight_binding(&spec_from(&dims, periodic, hop, onsite)).unwrap();
        let norm = spectral_norm(&oracle.materialize().unwrap());
        prop_assert!(oracle.gershgorin_bound() + 1e-12 >= norm);
        prop_assert!(oracle.normalization() + 1e-12 >= norm);
    }

    #[test]
    fn rows_are_sorted_and_consistent((dims, periodic, hop, onsite) in lattice_strategy()) {
        let oracle = build_tight_binding(&spec_from(&dims, periodic, hop, onsite)).unwrap();
        for i in 0..oracle.dim() {
            let row = oracle.row(i);
            prop_assert!(row.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(row.len() <= oracle.s());
            for j in row {
                prop_assert!(oracle.entry(i, j) != ZERO);
                prop_assert_eq!(oracle.entry(i, j), oracle.entry(j, i).conj());
            }
        }
    }
}

#[test]
fn padding_modes_are_decoupled() {
    let oracle = build_tight_binding(&LatticeSpec::chain(5, Boundary::Open, 1.0)).unwrap();
    assert_eq!(oracle.dim(), 8);
    assert_eq!(oracle.modes(), 5);
    for i in 5..8 {
        assert!(oracle.row(i).is_empty());
        for j in 0..8 {
            assert_eq!(oracle.entry(i, j), ZERO);
        }
    }
}

#[test]
fn two_domain_interface_hopping() {
    // left half [0, 3], right half [4, 7] with a weaker bond across the cut
    let mut spec = LatticeSpec::chain(8, Boundary::Open, 0.0);
    spec.hoppings.clear();
    spec.domains = vec![
        Domain {
            label: "L".into(),
            lo: vec![0],
            hi: vec![3],
        },
        Domain {
            label: "R".into(),
            lo: vec![4],
            hi: vec![7],
        },
    ];
    for (d1, d2, amp) in [("L", "L", 1.0), ("R", "R", 1.0), ("L", "R", 0.25)] {
        spec.hoppings.push(HoppingEntry {
            from_orbital: 0,
            to_orbital: 0,
            from_domain: d1.into(),
            to_domain: d2.into(),
            displacement: vec![1],
            amplitude: Complex64::new(amp, 0.0),
        });
    }
    let h = build_tight_binding(&spec).unwrap().materialize().unwrap();
    assert_eq!(h[(3, 4)], Complex64::new(0.25, 0.0));
    assert_eq!(h[(4, 3)], Complex64::new(0.25, 0.0));
    assert_eq!(h[(1, 2)], Complex64::new(1.0, 0.0));
    assert_eq!(h[(5, 6)], Complex64::new(1.0, 0.0));
}

#[test]
fn complex_hopping_is_hermitian() {
    let mut spec = LatticeSpec::chain(6, Boundary::Periodic, 0.0);
    spec.hoppings[0].amplitude = Complex64::from_polar(1.0, 0.3);
    let h = build_tight_binding(&spec).unwrap().materialize().unwrap();
    assert_eq!(hermitian_asymmetry(&h), 0.0);
    assert_eq!(h[(0, 1)], Complex64::from_polar(1.0, 0.3));
    assert_eq!(h[(1, 0)], Complex64::from_polar(1.0, -0.3));
}

#[test]
fn disorder_is_replayable_and_bounded() {
    let spec = LatticeSpec::uniform(&[4, 4], Boundary::Open, -1.0).with_disorder(42, "all", 0.7);
    let a = build_tight_binding(&spec).unwrap().materialize().unwrap();
    let b = build_tight_binding(&spec).unwrap().materialize().unwrap();
    assert_eq!(a, b);
    for x in 0..4 {
        for y in 0..4 {
            let site = x * 4 + y;
            let v = a[(site, site)];
            assert_eq!(v.re, disorder_prf(42, &[x, y], 0.7));
            assert!(v.re.abs() <= 0.7);
        }
    }
    let other = build_tight_binding(&spec.clone().with_disorder(43, "all", 0.7))
        .unwrap()
        .materialize()
        .unwrap();
    assert_ne!(a, other);
}

#[test]
fn rejects_large_amplitude_and_short_periodic_side() {
    let big = LatticeSpec::chain(8, Boundary::Open, 1.5);
    assert!(matches!(
        build_tight_binding(&big),
        Err(Error::AmplitudeTooLarge { .. })
    ));
    let short = LatticeSpec::chain(2, Boundary::Periodic, 1.0);
    assert!(matches!(
        build_tight_binding(&short),
        Err(Error::InvalidLattice(_))
    ));
}

#[test]
fn materialize_respects_cap() {
    let oracle =
        build_tight_binding(&LatticeSpec::uniform(&[64, 128], Boundary::Open, 1.0)).unwrap();
    assert_eq!(oracle.n(), 13);
    assert!(matches!(oracle.materialize(), Err(Error::TooLarge { .. })));
}

#[test]
fn margulis_rows_follow_the_maps() {
    for side in [3, 5, 8] {
        let oracle = build_margulis(side).unwrap();
        assert!(oracle.s() <= 8);
        let h = oracle.materialize_with_cap(8).unwrap();
        for a in 0..side {
            for b in 0..side {
                let i = a * side + b;
                // row sum over collision counts is exactly 8
                let sum: f64 = (0..side * side).map(|j| h[(i, j)].re).sum();
                assert_eq!(sum, 8.0);
                for (u1, u2) in margulis_maps(side, (a, b)) {
                    assert!(h[(i, u1 * side + u2)].re >= 1.0);
                }
            }
        }
        assert!(oracle.gershgorin_bound() <= oracle.normalization() + 1e-12);
    }
}

#[test]
fn fermi_sea_is_projector() {
    let sea = build_fermi_sea(4, 0.25).unwrap();
    let m = sea.materialize().unwrap();
    assert!(max_entry_diff(&(&m * &m), &m) < 1e-15);
    assert_eq!(m.trace(), Complex64::new(4.0, 0.0));
    assert!(build_fermi_sea(3, 0.3).is_err());
}

#[test]
fn from_entries_symmetrizes() {
    let o = OracleTuple::from_entries(
        2,
        &[
            (0, 1, Complex64::new(0.5, 0.5)),
            (2, 2, Complex64::new(0.3, 0.0)),
        ],
    )
    .unwrap();
    assert_eq!(o.entry(1, 0), Complex64::new(0.5, -0.5));
    assert_eq!(o.terms(), vec![(0, 1), (2, 2)]);
    assert_eq!(o.s(), 1);
}
