//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper returns results in input order, so parallel and sequential
//! runs are indistinguishable to callers. Without the `parallel` feature the
//! `parallel` flag of [`Config`](crate::Config) is ignored.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::Config;

/// Map `f` over `items`, preserving order.
pub fn map<T, R, F>(config: &Config, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if config.parallel && items.len() > 1 {
        return items.par_iter().map(f).collect();
    }
    let _ = config;
    items.iter().map(f).collect()
}

/// Index of the first item (in input order) satisfying `pred`.
pub fn position_first<T, F>(config: &Config, items: &[T], pred: F) -> Option<usize>
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if config.parallel && items.len() > 1 {
        return items.par_iter().position_first(pred);
    }
    let _ = config;
    items.iter().position(pred)
}

/// Map a fallible `f` over `items`; the first error in input order wins.
pub fn try_map<T, R, E, F>(config: &Config, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map(config, items, f).into_iter().collect()
}
