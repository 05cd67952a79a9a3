//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the work is spread over the rayon
//! pool; without it the same closures run on the calling thread. Reductions
//! always split the index range into fixed-size chunks and combine the chunk
//! results in index order, so results are bit-identical across thread counts
//! and across the two builds.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default chunk length for reductions.
pub(crate) const CHUNK: usize = 64;

fn chunks(n: usize, chunk: usize) -> Vec<Range<usize>> {
    let chunk = chunk.max(1);
    (0..n.div_ceil(chunk))
        .map(|c| c * chunk..((c + 1) * chunk).min(n))
        .collect()
}

/// `(0..n).map(f).collect()`, possibly in parallel. Output order is index order.
pub(crate) fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Deterministic sum of `f(range)` over fixed chunks of `0..n`.
pub(crate) fn sum_chunked<F>(n: usize, chunk: usize, f: F) -> f64
where
    F: Fn(Range<usize>) -> f64 + Sync + Send,
{
    let parts = map_ranges(chunks(n, chunk), f);
    parts.into_iter().sum()
}

/// Deterministic max of `f(range)` over fixed chunks of `0..n`.
pub(crate) fn max_chunked<F>(n: usize, chunk: usize, f: F) -> f64
where
    F: Fn(Range<usize>) -> f64 + Sync + Send,
{
    let parts = map_ranges(chunks(n, chunk), f);
    parts.into_iter().fold(0.0, f64::max)
}

/// Deterministic element-wise vector sum: every chunk accumulates into its own
/// zeroed buffer of length `len`, buffers are added in chunk order.
pub(crate) fn vec_sum_chunked<F>(n: usize, chunk: usize, len: usize, f: F) -> Vec<f64>
where
    F: Fn(Range<usize>, &mut [f64]) + Sync + Send,
{
    let parts = map_ranges(chunks(n, chunk), |r| {
        let mut buf = vec![0.0; len];
        f(r, &mut buf);
        buf
    });
    let mut total = vec![0.0; len];
    for part in parts {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total
}

/// Like [`map_range`], but `f` produces the outputs of a whole chunk at once,
/// so per-chunk scratch buffers can be reused.
pub(crate) fn map_chunks<T, F>(n: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> Vec<T> + Sync + Send,
{
    map_ranges(chunks(n, chunk), f).into_iter().flatten().collect()
}

fn map_ranges<T, F>(ranges: Vec<Range<usize>>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        ranges.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ranges.into_iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunked_sum_is_order_stable() {
        let a = sum_chunked(1000, 7, |r| r.map(|i| (i as f64).sqrt()).sum());
        let b = sum_chunked(1000, 7, |r| r.map(|i| (i as f64).sqrt()).sum());
        assert_eq!(a.to_bits(), b.to_bits());
        let direct: f64 = (0..1000).map(|i| (i as f64).sqrt()).sum();
        assert!((a - direct).abs() < 1e-9);
    }

    #[test]
    fn vec_sum_matches_direct() {
        let v = vec_sum_chunked(10, 3, 2, |r, buf| {
            for i in r {
                buf[0] += i as f64;
                buf[1] += 1.0;
            }
        });
        assert_eq!(v, vec![45.0, 10.0]);
    }

    #[test]
    fn empty_ranges() {
        assert_eq!(sum_chunked(0, 8, |_| 1.0), 0.0);
        assert!(map_range(0, |i| i).is_empty());
    }
}
