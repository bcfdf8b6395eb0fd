//! Deterministic summation helpers.
//!
//! All bulk sums in the crate go through a fixed pairwise reduction tree:
//! inputs are split into blocks of [`CHUNK`] elements, blocks are summed
//! pairwise, and the per-block partials are again combined pairwise in block
//! order. The tree shape depends only on the input length, never on the
//! number of worker threads, so results are bit-identical across `--threads`
//! settings.

use num_traits::Zero;
use rayon::prelude::*;
use std::ops::Add;

pub const CHUNK: usize = 1024;

/// Pairwise (tree) sum of a slice.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Add<Output = T> + Zero,
{
    match xs.len() {
        0 => T::zero(),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Sum `f(i)` for `i` in `0..len`, parallel over fixed-size blocks.
pub fn par_sum<T, F>(len: usize, f: F) -> T
where
    T: Copy + Add<Output = T> + Zero + Send,
    F: Fn(usize) -> T + Sync,
{
    if len == 0 {
        return T::zero();
    }
    let nblocks = len.div_ceil(CHUNK);
    let partials: Vec<T> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let vals: Vec<T> = (lo..hi).map(&f).collect();
            pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&partials)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_sequential_sum() {
        let xs: Vec<f64> = (0..10_000).map(|i| (i as f64).sin()).collect();
        // Sequentially built reference with the same fixed chunk shape.
        let partials: Vec<f64> = xs.chunks(CHUNK).map(pairwise_sum).collect();
        let tree = pairwise_sum(&partials);
        let par = par_sum(xs.len(), |i| xs[i]);
        assert_eq!(tree, par);
        let seq: f64 = xs.iter().sum();
        assert!((par - seq).abs() < 1e-9);
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
        assert_eq!(par_sum::<f64, _>(0, |_| 1.0), 0.0);
    }
}
