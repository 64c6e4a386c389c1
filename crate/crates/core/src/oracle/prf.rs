//! Keyed pseudo-random function of lattice coordinates, used for quenched
//! onsite disorder. Multiply–xorshift avalanche rounds (splitmix64 finalizer).

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn hash(key: u64, site: &[usize]) -> u64 {
    let mut state = mix(key.wrapping_add(GOLDEN));
    for (axis, &x) in site.iter().enumerate() {
        state = mix(state ^ (x as u64).wrapping_add(GOLDEN.wrapping_mul(axis as u64 + 1)));
        state = state.wrapping_add(GOLDEN);
    }
    mix(state ^ site.len() as u64)
}

/// Uniform value in [0, 1) determined by (key, site).
pub fn prf_unit(key: u64, site: &[usize]) -> f64 {
    // top 53 bits → exactly representable dyadic in [0, 1)
    (hash(key, site) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Disorder value in [−W, W] for the given site.
pub fn disorder_prf(key: u64, site: &[usize], amplitude: f64) -> f64 {
    amplitude * (2.0 * prf_unit(key, site) - 1.0)
}
