//! Data-parallel execution of independent work items.
//!
//! Grid scans, sampled invariant checks and per-candidate searches all funnel
//! through [`Exec::map`]. With the `parallel` feature (on by default) the work is
//! spread over the rayon pool; without it, or with [`Exec::Sequential`], it runs
//! on the calling thread. Results always come back in input order, so callers see
//! the same output either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Evaluates `f(0), .., f(n-1)` and returns the results in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Maps over a slice, preserving order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        self.map(items.len(), |k| f(&items[k]))
    }

    /// Whether work will actually run on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}
