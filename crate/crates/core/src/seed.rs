//! Counter-based seed splitting: every random stream is a pure function of the
//! root seed and its `(domain, index…)` path, so parallel work stays
//! reproducible regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Channel = 1,
    Noise = 2,
    Symbols = 3,
    Trial = 4,
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for `path` under `root`.
pub fn derive(root: u64, domain: Domain, path: &[u64]) -> u64 {
    let mut h = mix(root ^ mix(domain as u64));
    for &p in path {
        h = mix(h ^ mix(p.wrapping_add(0x632B_E59B_D9B4_E019)));
    }
    h
}

pub fn rng(root: u64, domain: Domain, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(root, domain, path))
}
