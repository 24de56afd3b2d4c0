//! Data-parallel map/reduce used by the law suites and quotient builders.
//!
//! With the `parallel` feature the [`Strategy::Parallel`] variant runs on the
//! rayon pool; without it every strategy runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Map `f` over `items`, preserving order.
pub fn map<T, U, F>(strategy: Strategy, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

/// Map `f` over `items` and return the first (in input order) `Some` result.
pub fn find_map_first<T, U, F>(strategy: Strategy, items: &[T], f: F) -> Option<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().find_map_first(f);
    }
    let _ = strategy;
    items.iter().find_map(f)
}

/// Map `f` over `items` and sum the results.
pub fn sum<T, F>(strategy: Strategy, items: &[T], f: F) -> usize
where
    T: Sync,
    F: Fn(&T) -> usize + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().map(f).sum();
    }
    let _ = strategy;
    items.iter().map(f).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<usize> = (0..1000).collect();
        let a = map(Strategy::Sequential, &xs, |x| x * x);
        let b = map(Strategy::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        let f = |x: &usize| {
            if *x > 500 && x.is_multiple_of(7) {
                Some(*x)
            } else {
                None
            }
        };
        assert_eq!(find_map_first(Strategy::Sequential, &xs, f), Some(504));
        assert_eq!(find_map_first(Strategy::Parallel, &xs, f), Some(504));
        assert_eq!(sum(Strategy::Parallel, &xs, |x| *x), 499500);
    }
}
