//! Sampling estimator of oceanic values.
//!
//! Each sample draws an arrival position `X_j ~ U[0,1)` for every major,
//! sorts the majors by arrival and sweeps the running total
//! `r(before) + alpha * X_j`. At most one major can carry the total across the
//! quota; if none does, the ocean is pivotal.
//!
//! # Random stream
//!
//! The generator is ChaCha8 keyed with the 64-bit seed in little-endian order
//! followed by 24 zero bytes, stream id equal to the partition index, and
//! word position 0. A uniform draw is `(next_u64() >> 11) * 2^-53`. Within a
//! sample, draws are taken in major index order. With `partitions = P` the
//! samples are split so that partition `p` runs `samples / P` samples, plus
//! one for the first `samples % P` partitions, and the integer pivot counts
//! are summed, so the output depends only on `(seed, samples, partitions)`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{Method, NormalizedGame, ValueProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    samples: u64,
    seed: u64,
    partitions: u32,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Parse("samples: must be >= 1".into()));
        }
        Ok(Self {
            samples,
            seed,
            partitions: 1,
        })
    }

    pub fn with_partitions(mut self, partitions: u32) -> Self {
        self.partitions = partitions.max(1);
        self
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn partitions(&self) -> u32 {
        self.partitions
    }
}

pub fn partition_rng(seed: u64, partition: u32) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(partition as u64);
    rng
}

pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn count_pivots(game: &NormalizedGame, samples: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let m = game.len();
    let q = game.quota();
    let alpha = game.ocean();
    let weights = game.majors();
    let mut counts = vec![0u64; m];
    let mut draws = vec![0.0f64; m];
    let mut order: Vec<usize> = (0..m).collect();
    for _ in 0..samples {
        for d in draws.iter_mut() {
            *d = uniform(rng);
        }
        order.sort_unstable_by(|&a, &b| draws[a].total_cmp(&draws[b]).then(a.cmp(&b)));
        let mut before = 0.0;
        for &j in &order {
            let reached = before + alpha * draws[j];
            if reached >= q {
                // the ocean crossed the quota before j arrived
                break;
            }
            if q <= reached + weights[j] {
                counts[j] += 1;
                break;
            }
            before += weights[j];
        }
    }
    counts
}

/// Monte Carlo estimate with binomial standard errors.
pub fn mc_values(game: &NormalizedGame, cfg: &McConfig) -> ValueProfile {
    let parts = cfg.partitions as u64;
    let base = cfg.samples / parts;
    let extra = cfg.samples % parts;
    let per_partition: Vec<Vec<u64>> = (0..cfg.partitions)
        .into_par_iter()
        .map(|p| {
            let n = base + u64::from((p as u64) < extra);
            let mut rng = partition_rng(cfg.seed, p);
            count_pivots(game, n, &mut rng)
        })
        .collect();
    let mut counts = vec![0u64; game.len()];
    for part in &per_partition {
        for (c, x) in counts.iter_mut().zip(part) {
            *c += x;
        }
    }
    let n = cfg.samples as f64;
    let major_values: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let ocean_count = cfg.samples - counts.iter().sum::<u64>();
    let ocean_value = ocean_count as f64 / n;
    let stderr = major_values
        .iter()
        .copied()
        .chain(std::iter::once(ocean_value))
        .map(|p| (p * (1.0 - p) / n).sqrt())
        .collect();
    ValueProfile {
        major_values,
        ocean_value,
        method: Method::MonteCarlo,
        stderr: Some(stderr),
    }
}
