//! Thin switch between rayon and plain iterators.

use crate::config::Exec;

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "rayon")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "rayon")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Returns the first item (in input order) for which `f` yields `Some`.
///
/// Under rayon all candidates may be evaluated, but the selected result is
/// always the lowest-index success, so outputs do not depend on scheduling.
pub fn find_first<T, R, F>(exec: Exec, items: &[T], f: F) -> Option<(usize, R)>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    match exec {
        #[cfg(feature = "rayon")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items
                .par_iter()
                .enumerate()
                .filter_map(|(i, t)| f(t).map(|r| (i, r)))
                .min_by_key(|(i, _)| *i)
        }
        _ => items.iter().enumerate().find_map(|(i, t)| f(t).map(|r| (i, r))),
    }
}
