//! Data-parallel execution helpers.
//!
//! Batch work in this crate (candidate scoring, neighborhood scans,
//! similarity matrices, corpus evaluation) goes through [`Execution`]. With
//! the `parallel` feature enabled the work is spread over the rayon pool;
//! without it every mode runs sequentially. Results always come back in
//! input order, so output is identical in both modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How batch operations are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is compiled in, otherwise
    /// falls back to sequential evaluation.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Whether this mode actually runs on more than one thread in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Maps a fallible `f` over `items`, preserving order. Returns the error
    /// of the earliest failing item.
    pub fn try_map<T, R, E, F>(self, items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(&T) -> Result<R, E> + Sync + Send,
    {
        // Collecting every result first keeps the reported error independent
        // of thread scheduling.
        self.map(items, f).into_iter().collect()
    }
}
