//! Execution policy for the data-parallel kernels.
//!
//! Every kernel produces bit-identical results under both policies:
//! element-wise updates are independent, and reductions always sum fixed-size
//! chunks first and then fold the chunk totals in index order.

use std::sync::atomic::{AtomicU8, Ordering};

/// Reductions are split into chunks of this many elements regardless of the
/// policy, which keeps floating-point sums reproducible.
pub const CHUNK: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

static POLICY: AtomicU8 = AtomicU8::new(if cfg!(feature = "parallel") { 1 } else { 0 });

pub fn set_execution(policy: Execution) {
    POLICY.store(policy as u8, Ordering::Relaxed);
}

pub fn execution() -> Execution {
    if cfg!(feature = "parallel") && POLICY.load(Ordering::Relaxed) == 1 {
        Execution::Parallel
    } else {
        Execution::Sequential
    }
}

#[cfg(feature = "parallel")]
#[inline]
fn parallel_for(len: usize) -> bool {
    len > CHUNK && execution() == Execution::Parallel
}

/// Apply `f(index, &mut item)` to every element.
pub fn for_each_indexed<T, F>(data: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_for(data.len()) {
        use rayon::prelude::*;
        data.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
            let base = c * CHUNK;
            chunk.iter_mut().enumerate().for_each(|(i, x)| f(base + i, x));
        });
        return;
    }
    data.iter_mut().enumerate().for_each(|(i, x)| f(i, x));
}

/// Apply `f` to disjoint blocks of `block` elements (the last may be short).
pub fn for_each_block<T, F>(data: &mut [T], block: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_for(data.len()) && data.len() / block > 1 {
        use rayon::prelude::*;
        data.par_chunks_mut(block).enumerate().for_each(|(b, chunk)| f(b, chunk));
        return;
    }
    data.chunks_mut(block).enumerate().for_each(|(b, chunk)| f(b, chunk));
}

/// Apply `f` to aligned pairs `(lo[i], hi[i])` of two equal-length slices.
pub fn for_each_pair<T, F>(lo: &mut [T], hi: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T, &mut T) + Sync + Send,
{
    debug_assert_eq!(lo.len(), hi.len());
    #[cfg(feature = "parallel")]
    if parallel_for(lo.len()) {
        use rayon::prelude::*;
        lo.par_chunks_mut(CHUNK)
            .zip(hi.par_chunks_mut(CHUNK))
            .enumerate()
            .for_each(|(c, (a, b))| {
                let base = c * CHUNK;
                a.iter_mut()
                    .zip(b.iter_mut())
                    .enumerate()
                    .for_each(|(i, (x, y))| f(base + i, x, y));
            });
        return;
    }
    lo.iter_mut()
        .zip(hi.iter_mut())
        .enumerate()
        .for_each(|(i, (x, y))| f(i, x, y));
}

/// Deterministic sum of `f(i)` for `i in 0..len`.
pub fn sum_indexed<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunk_sum = |c: usize| -> f64 {
        let end = ((c + 1) * CHUNK).min(len);
        (c * CHUNK..end).map(&f).sum()
    };
    let chunks = len.div_ceil(CHUNK);
    #[cfg(feature = "parallel")]
    if parallel_for(len) {
        use rayon::prelude::*;
        let partial: Vec<f64> = (0..chunks).into_par_iter().map(chunk_sum).collect();
        return partial.into_iter().sum();
    }
    (0..chunks).map(chunk_sum).sum()
}

/// `f(i)` for `i in 0..len`, collected in index order.
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_for(len) {
        use rayon::prelude::*;
        return (0..len).into_par_iter().with_min_len(CHUNK).map(f).collect();
    }
    (0..len).map(f).collect()
}

/// Fold over `0..len` in fixed chunks, then combine chunk results in order.
pub fn fold_chunks<A, F, G>(len: usize, init: A, fold: F, combine: G) -> A
where
    A: Clone + Send + Sync,
    F: Fn(A, usize) -> A + Sync + Send,
    G: Fn(A, A) -> A + Sync + Send,
{
    let chunk_fold = |c: usize| -> A {
        let end = ((c + 1) * CHUNK).min(len);
        (c * CHUNK..end).fold(init.clone(), &fold)
    };
    let chunks = len.div_ceil(CHUNK);
    #[cfg(feature = "parallel")]
    if parallel_for(len) {
        use rayon::prelude::*;
        let partial: Vec<A> = (0..chunks).into_par_iter().map(chunk_fold).collect();
        return partial.into_iter().fold(init.clone(), &combine);
    }
    (0..chunks).map(chunk_fold).fold(init.clone(), &combine)
}
