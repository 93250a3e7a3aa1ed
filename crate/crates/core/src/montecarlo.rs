//! Seeded, chunked Monte Carlo.
//!
//! Samples are split into fixed-size chunks. Chunk `k` draws from a ChaCha
//! stream seeded by `seed` with stream id `k`, so results depend only on the
//! seed and sample count, never on the number of worker threads. Chunk
//! results are merged in chunk order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const CHUNK: u64 = 1 << 15;
pub const THREADS_ENV: &str = "CHOICE_LAB_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig { samples, seed }
    }
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            samples: 1_000_000,
            seed: DEFAULT_SEED,
        }
    }
}

/// Independent generator for substream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `step` once per sample and folds the per-chunk accumulators in order.
pub fn run<A, I, F, M>(cfg: McConfig, init: I, step: F, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &mut ChaCha8Rng) -> Result<()> + Sync,
    M: Fn(A, A) -> A,
{
    let chunks = cfg.samples.div_ceil(CHUNK);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(cfg.seed, k);
            let mut acc = init();
            let len = CHUNK.min(cfg.samples - k * CHUNK);
            for _ in 0..len {
                step(&mut acc, &mut rng)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<A>>>()?;
    Ok(parts.into_iter().fold(init(), merge))
}

/// Binomial standard error of a proportion.
pub fn binomial_stderr(p: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Sets the global worker count from `explicit`, else from `CHOICE_LAB_THREADS`.
/// Returns the count in effect; repeated calls keep the first pool.
pub fn configure_threads(explicit: Option<usize>) -> Result<usize> {
    let from_env = match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("{THREADS_ENV}={v}: {e}")))?,
        ),
        _ => None,
    };
    if let Some(n) = explicit.or(from_env) {
        // A second initialisation fails harmlessly; the existing pool stays.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(rayon::current_num_threads())
}
