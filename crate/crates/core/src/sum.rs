use rayon::prelude::*;

use crate::error::Result;
use crate::scalar::Scalar;

const PAR_THRESHOLD: usize = 16;

/// Sums `term(item)` over `items`. Terms may be evaluated on several threads
/// but are always added in item order, so float results do not depend on
/// the worker count.
pub fn ordered_sum<S, I, F>(items: &[I], term: F) -> Result<S>
where
    S: Scalar,
    I: Sync,
    F: Fn(&I) -> Result<S> + Sync + Send,
{
    let terms: Vec<Result<S>> = if items.len() >= PAR_THRESHOLD {
        items.par_iter().map(&term).collect()
    } else {
        items.iter().map(&term).collect()
    };
    let mut acc = S::zero();
    for t in terms {
        acc = acc + &t?;
    }
    Ok(acc)
}
