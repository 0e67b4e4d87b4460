//! Execution mode for the data-parallel loops (Monte Carlo replicates,
//! sampling jobs, optimizer restarts).
//!
//! Every parallel loop in the crate goes through [`map_indices`], which keeps
//! results in index order so that sequential and parallel runs are
//! bit-identical. Without the `parallel` feature, [`Execution::Parallel`]
//! silently runs sequentially.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Evaluates `f(0..count)` and returns the results in index order.
pub fn map_indices<T, F>(exec: Execution, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec == Execution::Parallel {
            use rayon::prelude::*;
            return (0..count).into_par_iter().map(f).collect();
        }
    }
    let _ = exec;
    (0..count).map(f).collect()
}
