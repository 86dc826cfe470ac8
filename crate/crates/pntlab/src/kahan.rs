//! Compensated floating-point summation.
//!
//! Long sums of logarithms (millions of terms for `psi` at 10^8) lose several
//! digits under naive accumulation. Every accumulating loop in this crate
//! goes through [`KahanSum`], a Kahan–Babuška–Neumaier compensated sum: the
//! running compensation also absorbs the case where an incoming term is
//! larger than the running total, which plain Kahan summation mishandles.

use std::ops::AddAssign;

/// Kahan–Babuška–Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Start an accumulator at `value`.
    pub fn from_value(value: f64) -> Self {
        Self {
            sum: value,
            comp: 0.0,
        }
    }

    /// Add one term.
    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Fold another accumulator into this one, keeping both compensations.
    #[inline]
    pub fn merge(&mut self, other: KahanSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    /// The compensated value of the sum so far.
    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for KahanSum {
    #[inline]
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl From<KahanSum> for f64 {
    fn from(k: KahanSum) -> f64 {
        k.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_that_breaks_naive_summation() {
        // Naive left-to-right summation returns 0.0 here.
        let mut k = KahanSum::new();
        k += 1e100;
        k += 1.0;
        k += -1e100;
        assert_eq!(k.value(), 1.0);
    }

    #[test]
    fn neumaier_variant_handles_large_incoming_terms() {
        // Classic Kahan fails when the new term dominates the running sum.
        let mut k = KahanSum::new();
        for v in [1.0, 1e100, 1.0, -1e100] {
            k += v;
        }
        assert_eq!(k.value(), 2.0);
    }

    #[test]
    fn tracks_harmonic_series_to_machine_precision() {
        let mut k = KahanSum::new();
        let mut naive = 0.0f64;
        for n in 1..=1_000_000u64 {
            let term = 1.0 / n as f64;
            k += term;
            naive += term;
        }
        // Reference from summing the tail first (much better conditioned).
        let mut rev = KahanSum::new();
        for n in (1..=1_000_000u64).rev() {
            rev += 1.0 / n as f64;
        }
        assert!((k.value() - rev.value()).abs() < 1e-12);
        // Demonstrate there was something to compensate for.
        assert!((naive - rev.value()).abs() >= (k.value() - rev.value()).abs());
    }

    #[test]
    fn merge_matches_single_stream() {
        let terms: Vec<f64> = (1..=10_000)
            .map(|n| ((n as f64) * 0.1).ln().abs())
            .collect();
        let mut whole = KahanSum::new();
        for &t in &terms {
            whole += t;
        }
        let mut left = KahanSum::new();
        let mut right = KahanSum::new();
        for &t in &terms[..5000] {
            left += t;
        }
        for &t in &terms[5000..] {
            right += t;
        }
        left.merge(right);
        assert!((left.value() - whole.value()).abs() < 1e-9);
    }
}
