//! Order-preserving batch evaluation, parallel when the `parallel` feature is
//! enabled.
//!
//! Both entry points return results in input order, so callers produce the
//! same bytes regardless of the execution mode; the benches compare the two
//! on the real verification workloads.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every item, in parallel when available.
#[cfg(feature = "parallel")]
pub fn map<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    items.par_iter().map(f).collect()
}

/// Applies `f` to every item, in parallel when available.
#[cfg(not(feature = "parallel"))]
pub fn map<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    map_sequential(items, f)
}

/// Applies `f` to every item on the current thread.
pub fn map_sequential<T, U, F: Fn(&T) -> U>(items: &[T], f: F) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Applies `f` to every index in `0..n`, in parallel when available.
#[cfg(feature = "parallel")]
pub fn map_indices<U: Send, F: Fn(usize) -> U + Sync + Send>(n: usize, f: F) -> Vec<U> {
    (0..n).into_par_iter().map(f).collect()
}

/// Applies `f` to every index in `0..n`, in parallel when available.
#[cfg(not(feature = "parallel"))]
pub fn map_indices<U: Send, F: Fn(usize) -> U + Sync + Send>(n: usize, f: F) -> Vec<U> {
    map_indices_sequential(n, f)
}

/// Applies `f` to every index in `0..n` on the current thread.
pub fn map_indices_sequential<U, F: Fn(usize) -> U>(n: usize, f: F) -> Vec<U> {
    (0..n).map(f).collect()
}
