//! Range-partitioned parallel drivers for the core search kernels.
//!
//! Each driver splits the outer numerator range into chunks, runs the core
//! kernel on every chunk inside a dedicated rayon pool, and merges the chunk
//! outputs in order. Output is identical for every thread count.

use std::ops::RangeInclusive;

use preper_core::curves::{self, QuarticPoint, WeightedPoint};
use preper_core::fermat_catalan::{self, SignatureSolution};
use preper_core::search::{self, CycleCertificate, FixedPair, SweepRow, Type12Solution};
use preper_core::{Rational, Result};
use rayon::prelude::*;

/// Chunks per worker, so triangular workloads still balance.
const CHUNKS_PER_THREAD: i64 = 16;

/// Splits `lo..=hi` into at most `parts` contiguous, ordered, non-empty ranges.
pub fn split_range(lo: i64, hi: i64, parts: usize) -> Vec<RangeInclusive<i64>> {
    if lo > hi {
        return Vec::new();
    }
    let len = (hi - lo + 1) as u64;
    let parts = (parts.max(1) as u64).min(len);
    let (base, extra) = (len / parts, len % parts);
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = lo;
    for i in 0..parts {
        let size = base + u64::from(i < extra);
        let end = start + size as i64 - 1;
        out.push(start..=end);
        start = end + 1;
    }
    out
}

/// Worker configuration; `threads = 0` means "use all cores".
#[derive(Clone, Copy, Debug)]
pub struct Workers {
    pub threads: usize,
}

impl Workers {
    pub fn new(threads: usize) -> Self {
        Workers { threads }
    }

    fn pool(&self) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .expect("failed to start worker pool")
    }

    fn effective(&self) -> usize {
        if self.threads == 0 {
            rayon::current_num_threads()
        } else {
            self.threads
        }
    }

    /// Runs `kernel` over an ordered partition of `lo..=hi`, returning the
    /// per-chunk outputs in range order.
    pub fn map_ranges<T, F>(&self, lo: i64, hi: i64, kernel: F) -> Result<Vec<Vec<T>>>
    where
        T: Send,
        F: Fn(RangeInclusive<i64>) -> Result<Vec<T>> + Sync,
    {
        let chunks = split_range(lo, hi, self.effective() * CHUNKS_PER_THREAD as usize);
        self.pool()
            .install(|| chunks.into_par_iter().map(&kernel).collect::<Result<Vec<_>>>())
    }

    pub fn map_items<I, T, F>(&self, items: Vec<I>, f: F) -> Result<Vec<T>>
    where
        I: Send,
        T: Send,
        F: Fn(I) -> Result<T> + Sync,
    {
        self.pool().install(|| items.into_par_iter().map(&f).collect())
    }
}

// validates parameters without scanning anything
fn empty() -> RangeInclusive<i64> {
    RangeInclusive::new(1, 0)
}

fn concat<T>(parts: Vec<Vec<T>>) -> Vec<T> {
    parts.into_iter().flatten().collect()
}

pub fn two_cycle_search(w: &Workers, d: u32, bound: i64) -> Result<Vec<CycleCertificate>> {
    // validate once so bad input fails identically for every partition
    search::two_cycle_search_range(d, bound, empty())?;
    let parts = w.map_ranges(-bound, bound, |r| search::two_cycle_search_range(d, bound, r))?;
    Ok(search::merge_cycles(parts))
}

pub fn fixed_point_search(w: &Workers, d: u32, bound: i64) -> Result<Vec<FixedPair>> {
    search::fixed_point_search_range(d, bound, empty())?;
    let parts = w.map_ranges(-bound, bound, |r| search::fixed_point_search_range(d, bound, r))?;
    Ok(search::merge_fixed_pairs(parts))
}

pub fn type12_search(w: &Workers, d: u32, bound: i64) -> Result<Vec<Type12Solution>> {
    search::type12_search_range(d, bound, empty())?;
    let parts = w.map_ranges(-bound, bound, |r| search::type12_search_range(d, bound, r))?;
    Ok(concat(parts))
}

pub fn signature_search(w: &Workers, k: u32, delta: u32, bound: i64) -> Result<Vec<SignatureSolution>> {
    fermat_catalan::signature_search_range(k, delta, bound, empty())?;
    let parts = w.map_ranges(-bound, bound, |r| fermat_catalan::signature_search_range(k, delta, bound, r))?;
    Ok(concat(parts))
}

pub fn quartic_points(w: &Workers, bound: i64) -> Result<Vec<QuarticPoint>> {
    curves::quartic_points_range(bound, empty())?;
    let parts = w.map_ranges(-bound, bound, |r| curves::quartic_points_range(bound, r))?;
    let mut all = concat(parts);
    all.sort();
    Ok(all)
}

pub fn hyperelliptic_points(w: &Workers, bound: i64) -> Result<Vec<WeightedPoint>> {
    curves::hyperelliptic_points_range(bound, empty())?;
    let b2 = bound.saturating_mul(bound);
    let parts = w.map_ranges(-b2, b2, |r| curves::hyperelliptic_points_range(bound, r))?;
    let mut all = concat(parts);
    all.sort_by(|a, b| (&a.z, &a.x, &a.y).cmp(&(&b.z, &b.x, &b.y)));
    Ok(all)
}

pub fn sweep(w: &Workers, degrees: &[u32], z_max: i64, height: i64, extra: &[Rational]) -> Result<Vec<SweepRow>> {
    search::sweep(&[], z_max, height, &[])?;
    let tasks = search::sweep_tasks(degrees, z_max, height, extra);
    w.map_items(tasks, |(d, c)| search::sweep_row(d, &c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_covers_range_in_order() {
        for (lo, hi, parts) in [(-10, 10, 3), (0, 0, 8), (-5, 4, 10), (-5, 4, 100), (1, 0, 4)] {
            let chunks = split_range(lo, hi, parts);
            let flat: Vec<i64> = chunks.iter().flat_map(|r| r.clone()).collect();
            assert_eq!(flat, (lo..=hi).collect::<Vec<_>>());
            assert!(chunks.iter().all(|r| !r.is_empty()));
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let one = two_cycle_search(&Workers::new(1), 4, 30).unwrap();
        let four = two_cycle_search(&Workers::new(4), 4, 30).unwrap();
        assert_eq!(one, four);
        assert_eq!(one, search::two_cycle_search(4, 30).unwrap());
        assert_eq!(
            signature_search(&Workers::new(3), 2, 2, 15).unwrap(),
            fermat_catalan::signature_search(2, 2, 15).unwrap()
        );
        assert_eq!(type12_search(&Workers::new(5), 4, 3).unwrap(), search::type12_search(4, 3).unwrap());
        assert_eq!(hyperelliptic_points(&Workers::new(2), 5).unwrap(), curves::hyperelliptic_points(5).unwrap());
        assert_eq!(quartic_points(&Workers::new(2), 9).unwrap(), curves::quartic_points(9).unwrap());
        assert_eq!(
            sweep(&Workers::new(3), &[3, 4], 2, 5, &[]).unwrap(),
            search::sweep(&[3, 4], 2, 5, &[]).unwrap()
        );
    }

    #[test]
    fn invalid_input_is_reported_not_swallowed() {
        assert!(two_cycle_search(&Workers::new(2), 5, 10).is_err());
        assert!(fixed_point_search(&Workers::new(2), 2, 10).is_err());
    }
}
