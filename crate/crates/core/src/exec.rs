//! Sequential and data-parallel execution of index sweeps.
//!
//! Every sweep in the crate goes through [`Execution`]. With the `parallel`
//! feature (default) the parallel variant runs on the rayon pool; without it
//! both variants run sequentially. Results are always assembled in index
//! order, so the two paths produce identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// `(0..n).map(f).collect()` in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Folds `f` over `0..n` into per-worker accumulators created by `init`
    /// and merges them with `merge`. `merge` must be associative and
    /// commutative for the result to be independent of scheduling.
    pub fn fold<A, I, F, M>(self, n: usize, init: I, f: F, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(&mut A, usize) + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n)
                .into_par_iter()
                .fold(&init, |mut acc, i| {
                    f(&mut acc, i);
                    acc
                })
                .reduce(&init, &merge),
            _ => {
                let mut acc = init();
                for i in 0..n {
                    f(&mut acc, i);
                }
                acc
            }
        }
    }

    /// Calls `f(i, chunk)` for each `width`-sized chunk of `out`.
    pub fn for_each_chunk<T, F>(self, out: &mut [T], width: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => out
                .par_chunks_mut(width)
                .enumerate()
                .for_each(|(i, c)| f(i, c)),
            _ => out.chunks_mut(width).enumerate().for_each(|(i, c)| f(i, c)),
        }
    }
}

/// Element-wise sum of two count vectors.
pub fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if a.is_empty() {
        return b;
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Caps the global worker pool. No-op without the `parallel` feature.
pub fn set_threads(n: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let seq = Execution::Sequential.map(1000, |i| i * i);
        let par = Execution::Parallel.map(1000, |i| i * i);
        assert_eq!(seq, par);
        let fold = |e: Execution| {
            e.fold(
                500,
                || vec![0u64; 7],
                |acc, i| acc[i % 7] += i as u64,
                add_counts,
            )
        };
        assert_eq!(fold(Execution::Sequential), fold(Execution::Parallel));
    }
}
