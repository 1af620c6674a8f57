//! Data-parallel helpers.
//!
//! With the `parallel` feature the helpers run on the rayon pool unless
//! sequential execution is forced at runtime; without it they are plain
//! iterator loops. Results are always returned in input order.

use std::sync::atomic::{AtomicBool, Ordering};

static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Forces sequential execution (process-wide) when the feature is enabled.
pub fn set_sequential(on: bool) {
    FORCE_SEQUENTIAL.store(on, Ordering::SeqCst);
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.load(Ordering::SeqCst)
}

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// First index (in input order) whose item satisfies `f`, with its payload.
pub fn find_first<T, R, F>(items: &[T], f: F) -> Option<(usize, R)>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().enumerate().filter_map(|(i, t)| f(t).map(|r| (i, r))).find_first(|_| true);
    }
    items.iter().enumerate().find_map(|(i, t)| f(t).map(|r| (i, r)))
}

/// Unordered pairs `(i, j)` with `i < j < n`, lexicographic.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u32> = (0..100).collect();
        assert_eq!(map(&xs, |x| x * 2), xs.iter().map(|x| x * 2).collect::<Vec<_>>());
        assert_eq!(find_first(&xs, |&x| (x > 10 && x % 7 == 0).then_some(x)), Some((14, 14)));
        assert_eq!(pairs(3), vec![(0, 1), (0, 2), (1, 2)]);
    }
}
