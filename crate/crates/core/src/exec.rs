//! Data-parallel execution with a sequential fallback.
//!
//! Every parallel loop in the crate goes through [`map_indexed`]. With the
//! `parallel` feature enabled the work is spread over the rayon pool unless
//! the process-wide mode is switched to [`ExecutionMode::Sequential`]; without
//! the feature everything runs on the calling thread. Output order is the
//! index order in both modes, so results do not depend on the worker count.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecutionMode {
    /// Use the rayon pool when the `parallel` feature is compiled in.
    #[default]
    Parallel,
    Sequential,
}

static MODE: AtomicU8 = AtomicU8::new(0);

pub fn set_execution_mode(mode: ExecutionMode) {
    let raw = match mode {
        ExecutionMode::Parallel => 0,
        ExecutionMode::Sequential => 1,
    };
    MODE.store(raw, Ordering::Relaxed);
}

pub fn execution_mode() -> ExecutionMode {
    match MODE.load(Ordering::Relaxed) {
        0 => ExecutionMode::Parallel,
        _ => ExecutionMode::Sequential,
    }
}

/// True when loops will actually be dispatched to rayon.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && execution_mode() == ExecutionMode::Parallel
}

/// Evaluates `f(0), …, f(n - 1)` and returns the results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if execution_mode() == ExecutionMode::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    (0..n).map(f).collect()
}

/// Fallible variant of [`map_indexed`]; the first error in index order wins.
pub fn try_map_indexed<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map_indexed(n, f).into_iter().collect()
}
