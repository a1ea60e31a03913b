//! Chunked execution. Work is cut into fixed-size chunks; chunk `i` draws
//! from stream `(seed, i)` and results come back in chunk order, so the
//! outcome is identical whichever policy runs them.

use crate::error::Result;

/// Samples per chunk unless overridden.
pub const DEFAULT_CHUNK_SIZE: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Data-parallel over chunks on the global pool. Both parallel policies
    /// fall back to sequential execution without the `parallel` feature.
    #[default]
    Parallel,
    /// Data-parallel on a dedicated pool of `threads` workers.
    ParallelWith {
        threads: usize,
    },
}

impl Execution {
    /// `Some(1)` maps to sequential, `Some(t)` to a dedicated pool of `t`
    /// threads, `None` to the global pool.
    pub fn from_threads(threads: Option<usize>) -> Self {
        match threads {
            Some(0) | None => Execution::Parallel,
            Some(1) => Execution::Sequential,
            Some(t) => Execution::ParallelWith { threads: t },
        }
    }
}

/// `(chunk index, chunk length)` covering `total` items.
pub fn chunk_plan(total: u64, chunk_size: u64) -> Vec<(u64, u64)> {
    let chunk_size = chunk_size.max(1);
    let full = total / chunk_size;
    let rem = total % chunk_size;
    let mut plan: Vec<(u64, u64)> = (0..full).map(|i| (i, chunk_size)).collect();
    if rem > 0 {
        plan.push((full, rem));
    }
    plan
}

/// Runs `f` over the indices `0..n` and returns the results in index order.
pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        #[cfg(feature = "parallel")]
        Execution::ParallelWith { threads } => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| crate::Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| (0..n).into_par_iter().map(f).collect())
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel | Execution::ParallelWith { .. } => (0..n).map(f).collect(),
    }
}

/// Runs `f(chunk_index, chunk_len)` over the chunk plan and folds the results
/// left to right in chunk order.
pub fn run_chunks<T, F, M>(exec: Execution, total: u64, chunk_size: u64, f: F, merge: M) -> Result<T>
where
    T: Send + Default,
    F: Fn(u64, u64) -> Result<T> + Sync + Send,
    M: Fn(T, T) -> T,
{
    let plan = chunk_plan(total, chunk_size);
    let parts = map_indexed(exec, plan.len(), |i| {
        let (idx, len) = plan[i];
        f(idx, len)
    })?;
    Ok(parts.into_iter().fold(T::default(), merge))
}
