//! Data-parallel trial runner.
//!
//! The verification sweeps (hundreds of seeded pipeline runs, thousand-fold
//! obstruction fuzzing) are embarrassingly parallel: each trial derives its
//! RNG from the trial index, so results are identical whichever way the loop
//! runs. With the default `parallel` feature [`run_trials`] fans out over
//! rayon; without it the call degrades to the sequential loop.
//! [`run_trials_sequential`] is always sequential, for baseline comparison in
//! the benchmarks.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Run `count` independent jobs, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn run_trials<T, F>(count: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(job).collect()
}

/// Run `count` independent jobs, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn run_trials<T, F>(count: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    run_trials_sequential(count, job)
}

/// Sequential reference implementation of the same contract.
pub fn run_trials_sequential<T, F>(count: usize, job: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(job).collect()
}

/// Derive a per-trial seed from a base seed and the trial index.
pub fn trial_seed(base: u64, index: usize) -> u64 {
    // SplitMix64 step keeps neighboring indices uncorrelated.
    let mut z = base ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
