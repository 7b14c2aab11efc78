//! Execution-mode plumbing: data-parallel map with a sequential fallback.
//!
//! Callers pass an [`Exec`] value to the few entry points that fan out over
//! independent work items (simulation runs, candidate verification, per-EC
//! gains). With the `parallel` feature enabled, `Exec::Parallel` runs on
//! rayon; without it, `Parallel` silently degrades to the sequential path.
//! Work items never share mutable state and derive any randomness from their
//! index, so both modes produce identical results.

/// How to run a batch of independent work items.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True iff this build can actually fan out.
    pub fn parallelism_compiled() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Applies `f` to `0..n` and collects results in index order.
pub fn map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec == Exec::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Sets the global worker count for `Exec::Parallel`. `None` keeps the
/// default. Calling again after threads have started is a no-op.
pub fn configure_threads(n: Option<usize>) {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = n {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
    }
}
