//! Execution-mode plumbing and deterministic reductions shared by the core
//! loops. Parallel and sequential paths must produce bitwise-identical
//! results: map work writes into index-addressed buffers and every reduction
//! runs in a fixed pairwise order independent of thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether the data-parallel loops run on the rayon pool or inline.
///
/// With the `parallel` feature disabled the `Parallel` variant silently
/// degrades to sequential execution, so library code can keep a single
/// default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

/// `(0..n).map(f)` into a vector, parallelized when requested.
pub(crate) fn map_indexed<T, F>(exec: ExecMode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        ExecMode::Sequential => (0..n).map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                (0..n).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..n).map(f).collect()
            }
        }
    }
}

/// Pairwise (balanced-tree) sum of `f(lo), ..., f(hi-1)`.
///
/// The fixed association order makes the result independent of chunking and,
/// for power-of-two counts of identical addends, exact.
pub(crate) fn pairwise_sum_by<T, F>(lo: usize, hi: usize, zero: T, f: &F) -> T
where
    T: Copy + std::ops::Add<Output = T>,
    F: Fn(usize) -> T,
{
    match hi - lo {
        0 => zero,
        1 => f(lo),
        2 => f(lo) + f(lo + 1),
        n => {
            let mid = lo + n / 2;
            pairwise_sum_by(lo, mid, zero, f) + pairwise_sum_by(mid, hi, zero, f)
        }
    }
}

pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_by(0, values.len(), 0.0, &|i| values[i])
}
