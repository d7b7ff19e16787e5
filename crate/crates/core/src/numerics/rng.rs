//! Reproducible random streams.
//!
//! Stream `(master_seed, stream_index)` seeds a ChaCha8 generator with 32
//! bytes derived by the SplitMix64 finalizer:
//!
//! ```text
//! mix(z)  = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!           z ^= z >> 27; z *= 0x94D049BB133111EB; z ^ (z >> 31)
//! key     = mix(mix(master_seed) ^ (stream_index * 0x9E3779B97F4A7C15))
//! word[j] = mix(key + (j + 1) * 0x9E3779B97F4A7C15),  j = 0..4
//! ```
//!
//! The four little-endian words form the ChaCha key.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Identifies a stream without carrying generator state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamId {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl StreamId {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        StreamId {
            master_seed,
            stream_index,
        }
    }

    pub fn stream(self) -> RngStream {
        make_stream(self.master_seed, self.stream_index)
    }

    fn seed_bytes(self) -> [u8; 32] {
        let key = mix64(mix64(self.master_seed) ^ self.stream_index.wrapping_mul(GOLDEN_GAMMA));
        let mut seed = [0u8; 32];
        for (j, chunk) in seed.chunks_exact_mut(8).enumerate() {
            let word = mix64(key.wrapping_add((j as u64 + 1).wrapping_mul(GOLDEN_GAMMA)));
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        seed
    }
}

/// A seeded generator for one realization.
#[derive(Debug, Clone)]
pub struct RngStream {
    id: StreamId,
    rng: ChaCha8Rng,
}

pub fn make_stream(master_seed: u64, stream_index: u64) -> RngStream {
    let id = StreamId::new(master_seed, stream_index);
    RngStream {
        id,
        rng: ChaCha8Rng::from_seed(id.seed_bytes()),
    }
}

impl RngStream {
    pub fn id(&self) -> StreamId {
        self.id
    }

    /// Standard normal variate.
    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform variate on `[a, b)`.
    pub fn uniform(&mut self, a: f64, b: f64) -> f64 {
        self.rng.random_range(a..b)
    }

    /// Complex normal with independent real and imaginary parts of variance 1/2.
    pub fn complex_gaussian(&mut self) -> num_complex::Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        num_complex::Complex64::new(s * self.gaussian(), s * self.gaussian())
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;

    #[test]
    fn identical_ids_reproduce() {
        let mut a = make_stream(42, 7);
        let mut b = make_stream(42, 7);
        for _ in 0..100 {
            assert_eq!(a.gaussian().to_bits(), b.gaussian().to_bits());
        }
    }

    #[test]
    fn distinct_indices_differ() {
        let mut a = make_stream(42, 0);
        let mut b = make_stream(42, 1);
        let xs: Vec<f64> = (0..16).map(|_| a.gaussian()).collect();
        let ys: Vec<f64> = (0..16).map(|_| b.gaussian()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn gaussian_moments() {
        let mut s = make_stream(2024, 0);
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| s.gaussian()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 5e-3, "mean {mean}");
        assert!((var - 1.0).abs() < 1e-2, "variance {var}");
    }

    #[test]
    fn uniform_range() {
        let mut s = make_stream(1, 2);
        for _ in 0..100_000 {
            let x = s.uniform(0.0, TAU);
            assert!((0.0..TAU).contains(&x));
        }
    }

    #[test]
    fn mix_reference_values() {
        // SplitMix64 outputs for seed 0: the finalizer of 0x9E3779B97F4A7C15
        assert_eq!(mix64(GOLDEN_GAMMA), 0xE220_A839_7B1D_CDAF);
        assert_eq!(mix64(0), 0);
    }
}
