//! Deterministic segment scheduling.
//!
//! Every long-range computation in this crate walks a window `[lo, hi)` in
//! fixed-size segments. The segmentation depends only on `(lo, hi,
//! segment_len)` — never on the number of worker threads — and results are
//! collected into a vector indexed by segment, then folded in segment order.
//! That makes every sweep bit-for-bit reproducible whether it runs on one
//! thread or eight.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Default segment length for sieving sweeps (must match the cache layout
/// used by [`crate::cache::SegmentCache`] for read-through to hit).
pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 19;

/// Split `[lo, hi)` into consecutive segments of length `segment_len`
/// (the final segment may be shorter). Panics if the window is empty.
pub fn segment_bounds(lo: u64, hi: u64, segment_len: u64) -> Vec<(u64, u64)> {
    assert!(lo < hi, "empty window [{lo}, {hi})");
    assert!(segment_len > 0, "segment_len must be positive");
    let mut out = Vec::with_capacity(((hi - lo) / segment_len + 1) as usize);
    let mut start = lo;
    while start < hi {
        let end = start.saturating_add(segment_len).min(hi);
        out.push((start, end));
        start = end;
    }
    out
}

/// Run `work(seg_lo, seg_hi)` over every segment of `[lo, hi)` and return the
/// per-segment outputs in segment order.
///
/// With `threads <= 1` the segments run sequentially on the caller's thread.
/// Otherwise a fixed-size pool of scoped workers pulls segment indices from
/// an atomic counter; outputs land in their slot so the returned order is
/// independent of scheduling.
pub fn run_segments<T, F>(lo: u64, hi: u64, segment_len: u64, threads: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    let bounds = segment_bounds(lo, hi, segment_len);
    let workers = threads.max(1).min(bounds.len());
    if workers <= 1 {
        return bounds.iter().map(|&(a, b)| work(a, b)).collect();
    }

    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..bounds.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= bounds.len() {
                    break;
                }
                let (a, b) = bounds[idx];
                let out = work(a, b);
                slots.lock().unwrap()[idx] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every segment produces an output"))
        .collect()
}
