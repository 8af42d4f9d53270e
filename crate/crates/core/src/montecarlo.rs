//! Deterministic parallel Monte Carlo.
//!
//! Trial `i` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to stream
//! `i`, so its randomness depends on `(seed, i)` only. Trials are grouped in
//! fixed chunks of [`CHUNK`] trials whose statistics are merged in chunk
//! order; the result is bit-identical for every worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

pub const CHUNK: u64 = 1024;

/// Acceptance band on `|z|` for a single comparison.
pub const Z_THRESHOLD: f64 = 4.0;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Streaming mean and variance with Welford updates, mergeable across chunks.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / total as f64;
        self.m2 += other.m2 + delta * delta * (self.count as f64 * other.count as f64) / total as f64;
        self.count = total;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; 0 with fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// Runs `trials` trials, each filling `dim` values, and returns one
/// [`RunningStats`] per coordinate. `workers = 0` lets rayon decide.
pub fn run_trials<F>(trials: u64, seed: u64, workers: usize, dim: usize, trial: F) -> Result<Vec<RunningStats>>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let chunks = trials.div_ceil(CHUNK);
    let partial: Vec<Vec<RunningStats>> = with_pool(workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut stats = vec![RunningStats::default(); dim];
                let mut out = vec![0.0; dim];
                for i in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                    let mut rng = trial_rng(seed, i);
                    trial(&mut rng, &mut out);
                    for (s, &x) in stats.iter_mut().zip(&out) {
                        s.push(x);
                    }
                }
                stats
            })
            .collect()
    })?;
    let mut total = vec![RunningStats::default(); dim];
    for chunk in &partial {
        for (t, s) in total.iter_mut().zip(chunk) {
            t.merge(s);
        }
    }
    Ok(total)
}

/// Runs `trials` trials and returns their outputs in trial order.
pub fn collect_trials<T, F>(trials: u64, seed: u64, workers: usize, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    with_pool(workers, || {
        (0..trials)
            .into_par_iter()
            .map(|i| trial(i, &mut trial_rng(seed, i)))
            .collect()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimatorResult {
    pub statistic: String,
    pub n: usize,
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
    pub target: Option<f64>,
    /// Target as an exact rational `p/q`, when known exactly.
    pub target_exact: Option<String>,
    pub z: Option<f64>,
}

impl EstimatorResult {
    pub fn new(statistic: &str, n: usize, stats: &RunningStats, seed: u64) -> Self {
        EstimatorResult {
            statistic: statistic.to_string(),
            n,
            estimate: stats.mean(),
            std_error: stats.std_error(),
            trials: stats.count(),
            seed,
            target: None,
            target_exact: None,
            z: None,
        }
    }

    pub fn with_target(mut self, target: f64, exact: Option<String>) -> Self {
        self.target = Some(target);
        self.target_exact = exact;
        self.z = Some(z_score(self.estimate, self.std_error, target));
        self
    }

    /// `|z| <= Z_THRESHOLD`; true when there is no target.
    pub fn within(&self, threshold: f64) -> bool {
        self.z.is_none_or(|z| z.abs() <= threshold)
    }
}

/// `(estimate - target)/se`, with `0` for an exact hit at `se = 0`.
pub fn z_score(estimate: f64, se: f64, target: f64) -> f64 {
    let diff = estimate - target;
    if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

/// z-score of the difference of two independent estimates.
pub fn two_sample_z(a: &RunningStats, b: &RunningStats) -> f64 {
    let se = (a.std_error().powi(2) + b.std_error().powi(2)).sqrt();
    z_score(a.mean(), se, b.mean())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson goodness-of-fit of `observed` counts against `probabilities`.
pub fn chi_square(observed: &[u64], probabilities: &[f64]) -> Result<ChiSquareResult> {
    if observed.len() != probabilities.len() || observed.len() < 2 {
        return Err(Error::InvalidArgument("chi-square needs matching categories, at least two".into()));
    }
    let total: u64 = observed.iter().sum();
    let statistic: f64 = observed
        .iter()
        .zip(probabilities)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let df = observed.len() - 1;
    let dist = ChiSquared::new(df as f64).expect("positive degrees of freedom");
    Ok(ChiSquareResult {
        statistic,
        degrees_of_freedom: df,
        p_value: 1.0 - dist.cdf(statistic),
    })
}
