//! Trial scheduling, per-trial random streams and order-stable reductions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::Result;

/// How independent trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Execution {
    Sequential,
    /// Rayon worker pool; `None` uses every core. Without the `parallel`
    /// feature this runs sequentially.
    Parallel {
        threads: Option<usize>,
    },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { threads: None }
        } else {
            Execution::Sequential
        }
    }
}

const TRIAL_BITS: u32 = 40;
const PREAMBLE_STREAM: u64 = 1 << 63;

/// Random stream of trial `trial` at sweep point `point`.
///
/// Streams depend only on `(master, point, trial)`, never on scheduling.
pub fn trial_rng(master: u64, point: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(((point as u64) << TRIAL_BITS) | trial as u64);
    rng
}

/// Independent stream for the preamble phase of the same trial.
pub(crate) fn preamble_rng(master: u64, point: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(PREAMBLE_STREAM | ((point as u64) << TRIAL_BITS) | trial as u64);
    rng
}

/// Runs `trial(0..n)` and returns the outputs in trial order.
pub(crate) fn run_trials<T, F>(exec: Execution, n: usize, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).map(&trial).collect(),
        Execution::Parallel { threads } => parallel(threads, n, trial),
    }
}

#[cfg(feature = "parallel")]
fn parallel<T, F>(threads: Option<usize>, n: usize, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    let work = || (0..n).into_par_iter().map(&trial).collect();
    match threads {
        None => work(),
        Some(t) => match rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
        {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel<T, F>(_threads: Option<usize>, n: usize, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    (0..n).map(&trial).collect()
}

/// Compensated (Neumaier) sum.
pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Sample mean and standard error of the mean. The standard error of a
/// single sample is reported as 0.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = neumaier_sum(values.iter().copied()) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss = neumaier_sum(values.iter().map(|v| (v - mean).powi(2)));
    let var = ss / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
