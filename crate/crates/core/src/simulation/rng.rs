//! Reproducible randomness for the simulation: every (purpose, index...)
//! tuple derives its own ChaCha8 substream from the master seed, so the
//! work can be scheduled in any order, on any number of threads, without
//! changing a single draw.
//!
//! Normal variates use the Marsaglia polar method, fixed here so results
//! are stable across dependency upgrades.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

/// Purpose tag for macro-population generation streams.
pub(crate) const TAG_MACRO: u64 = 1;
/// Purpose tag for per-(study, population) streams.
pub(crate) const TAG_POPULATION: u64 = 2;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

/// Derive the independent random stream identified by `tags` under the
/// master `seed`. Identical inputs yield identical streams.
pub fn substream(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut state = mix64(seed ^ GOLDEN);
    for &tag in tags {
        state = mix64(state.wrapping_add(GOLDEN) ^ mix64(tag));
    }
    let mut key = [0u8; 32];
    for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
        let word = mix64(state.wrapping_add((i as u64 + 1).wrapping_mul(GOLDEN)));
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// One pair of independent standard normals (Marsaglia polar).
fn polar_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    loop {
        let u = 2.0 * rng.random::<f64>() - 1.0;
        let v = 2.0 * rng.random::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (u * f, v * f);
        }
    }
}

/// `count` draws from N(mean, sd^2).
pub(crate) fn normal_vec<R: Rng>(rng: &mut R, mean: f64, sd: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (z0, z1) = polar_pair(rng);
        out.push(mean + sd * z0);
        if out.len() < count {
            out.push(mean + sd * z1);
        }
    }
    out
}

/// Draw `k` values from `src` without replacement (partial Fisher-Yates
/// over indices).
pub(crate) fn sample_without_replacement<R: Rng>(rng: &mut R, src: &[f64], k: usize) -> Vec<f64> {
    debug_assert!(k <= src.len());
    let mut idx: Vec<u32> = (0..src.len() as u32).collect();
    for i in 0..k {
        let j = rng.random_range(i..idx.len());
        idx.swap(i, j);
    }
    idx[..k].iter().map(|&i| src[i as usize]).collect()
}
