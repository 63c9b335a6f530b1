//! Fixed-order parallel reductions.
//!
//! Work is split into chunks of a fixed size independent of the thread count,
//! each chunk is summed sequentially, and chunk totals are combined in index
//! order. Results are therefore bit-identical for any number of threads.

use rayon::prelude::*;

pub(crate) const CHUNK: usize = 4096;

pub(crate) fn sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    sum_n::<1, _>(n, |i| [f(i)])[0]
}

pub(crate) fn sum_n<const N: usize, F>(n: usize, f: F) -> [f64; N]
where
    F: Fn(usize) -> [f64; N] + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<[f64; N]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = [0.0; N];
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                let v = f(i);
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += x;
                }
            }
            acc
        })
        .collect();
    let mut total = [0.0; N];
    for p in partial {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    total
}

pub(crate) fn max<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    (0..n).into_par_iter().map(|i| f(i)).reduce(|| 0.0, f64::max)
}
