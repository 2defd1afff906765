//! Thin wrappers over the data-parallel inner loops.
//!
//! With the `parallel` feature (default) these dispatch to rayon; without it
//! they fall back to plain sequential iteration with identical results. All
//! call sites are pure functions of their index, so the two paths agree
//! everywhere, including the "lowest index wins" tie-break rules.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many indices the whole loop runs on the calling thread:
/// per-index work at these call sites (coefficient sums, single-entry
/// checks) is far cheaper than fork-join dispatch.
#[cfg(feature = "parallel")]
const SEQ_CUTOFF: usize = 512;
#[cfg(feature = "parallel")]
const MIN_CHUNK: usize = 128;

/// Map `f` over `0..n`, preserving index order in the output.
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if n >= SEQ_CUTOFF {
        return (0..n)
            .into_par_iter()
            .with_min_len(MIN_CHUNK)
            .map(f)
            .collect();
    }
    (0..n).map(f).collect()
}

/// First `Some` produced over `0..n`, by lowest index.
pub fn first_hit<U, F>(n: usize, f: F) -> Option<U>
where
    U: Send,
    F: Fn(usize) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if n >= SEQ_CUTOFF {
        return (0..n)
            .into_par_iter()
            .with_min_len(MIN_CHUNK)
            .filter_map(|i| f(i).map(|u| (i, u)))
            .min_by_key(|(i, _)| *i)
            .map(|(_, u)| u);
    }
    (0..n).find_map(f)
}

/// Whether `pred` holds for every index in `0..n`.
pub fn forall<F>(n: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if n >= SEQ_CUTOFF {
        return (0..n).into_par_iter().with_min_len(MIN_CHUNK).all(pred);
    }
    (0..n).all(pred)
}

/// Flat-map `f` over owned items, preserving item order in the output
/// (rayon's indexed flat_map keeps sibling order, so parallel and
/// sequential runs emit identical streams).
pub fn flat_branches<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Vec<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().flat_map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().flat_map(f).collect()
    }
}
