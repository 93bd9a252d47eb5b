//! Execution policy for the data-parallel inner loops.
//!
//! Trajectory batches, estimator cells, and sweep evaluations are
//! independent work items. [`ExecPolicy`] selects between a rayon-backed
//! parallel map and a plain sequential loop; both produce results in item
//! order, so downstream reductions are deterministic either way.

/// How to run a batch of independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecPolicy {
    /// Rayon work-stealing pool (default when the `parallel` feature is on).
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
    /// Plain sequential loop.
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
}

/// Maps `f` over `0..n` and collects the results in index order.
pub fn map_indexed<T, F>(policy: ExecPolicy, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match policy {
        #[cfg(feature = "parallel")]
        ExecPolicy::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        ExecPolicy::Sequential => (0..n).map(f).collect(),
    }
}

/// Runs two closures, concurrently under the parallel policy.
pub fn join<A, B, RA, RB>(policy: ExecPolicy, a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    match policy {
        #[cfg(feature = "parallel")]
        ExecPolicy::Parallel => rayon::join(a, b),
        ExecPolicy::Sequential => (a(), b()),
    }
}

/// Applies `f` to equal-size mutable chunks of `data`, in parallel when the
/// policy allows. `f` receives the chunk index and the chunk.
pub fn for_each_chunk_mut<T, F>(policy: ExecPolicy, data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    debug_assert!(chunk > 0);
    match policy {
        #[cfg(feature = "parallel")]
        ExecPolicy::Parallel => {
            use rayon::prelude::*;
            data.par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(i, c)| f(i, c));
        }
        ExecPolicy::Sequential => {
            for (i, c) in data.chunks_mut(chunk).enumerate() {
                f(i, c);
            }
        }
    }
}
