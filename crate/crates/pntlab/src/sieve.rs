//! Segmented Möbius and von Mangoldt sieves over windows `[lo, hi)`.
//!
//! Both sieves share a [`PrimeBasis`] of base primes up to `sqrt(hi - 1)` and
//! work on one segment at a time, so memory stays proportional to the segment
//! length no matter how far the window reaches. The global cap on `hi` is
//! [`RANGE_CAP`] = 2^40, which keeps every intermediate product inside `u64`.
//!
//! The von Mangoldt table stores the *structure* of each entry — the prime
//! `p` and exponent `m` with `n = p^m` — rather than a floating-point
//! `Lambda(n)`. Consumers take logarithms at the point of use, which keeps
//! the sieve output exact and lets `psi` accumulation choose its own
//! compensation strategy.

use crate::error::{Error, Result};

/// Global cap on sieve windows: `hi <= 2^40`.
pub const RANGE_CAP: u64 = 1 << 40;

/// Validate a sieve window `[lo, hi)`: `1 <= lo < hi <= RANGE_CAP`.
pub fn check_window(lo: u64, hi: u64) -> Result<()> {
    if lo < 1 || hi <= lo {
        return Err(Error::EmptyRange { lo, hi });
    }
    if hi > RANGE_CAP {
        return Err(Error::RangeCap { lo, hi });
    }
    Ok(())
}

/// Base primes `p <= limit`, shared across all segments of a sweep.
#[derive(Debug, Clone)]
pub struct PrimeBasis {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeBasis {
    /// All primes `p <= limit` by a plain monolithic sieve of Eratosthenes.
    /// `limit` never exceeds `sqrt(RANGE_CAP) = 2^20`, so this is cheap.
    pub fn with_limit(limit: u64) -> Self {
        let mut primes = Vec::new();
        if limit >= 2 {
            let n = limit as usize;
            let mut composite = vec![false; n + 1];
            for p in 2..=n {
                if !composite[p] {
                    primes.push(p as u64);
                    let mut m = p * p;
                    while m <= n {
                        composite[m] = true;
                        m += p;
                    }
                }
            }
        }
        Self { limit, primes }
    }

    /// A basis large enough to sieve any segment of `[1, hi)`.
    pub fn for_window(hi: u64) -> Self {
        Self::with_limit(hi.saturating_sub(1).isqrt())
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// True if this basis can fully sieve segments below `hi`.
    pub fn covers(&self, hi: u64) -> bool {
        self.limit >= hi.saturating_sub(1).isqrt()
    }
}

/// Möbius values over a window `[lo, hi)`, stored as `i8` in `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTable {
    lo: u64,
    values: Vec<i8>,
}

impl MobiusTable {
    /// Reassemble a table from raw parts (used by the segment cache).
    pub fn from_raw(lo: u64, values: Vec<i8>) -> Self {
        Self { lo, values }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.lo + self.values.len() as u64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `mu(n)`; panics if `n` is outside the window.
    #[inline]
    pub fn mu(&self, n: u64) -> i8 {
        self.values[(n - self.lo) as usize]
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Iterate `(n, mu(n))` in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.lo + i as u64, v))
    }
}

/// Sieve `mu` over one segment, given a basis covering `hi`.
///
/// Per base prime `p`: divide one factor of `p` out of the running residual;
/// if another factor remains the entry is squarefull (`mu = 0`), otherwise
/// flip the sign. Afterwards a residual `> 1` is a single prime exceeding
/// the basis limit and flips the sign once more.
pub fn mobius_segment(basis: &PrimeBasis, lo: u64, hi: u64) -> MobiusTable {
    assert!(lo >= 1 && lo < hi, "invalid window [{lo}, {hi})");
    debug_assert!(basis.covers(hi));
    let len = (hi - lo) as usize;
    let mut residual: Vec<u64> = (lo..hi).collect();
    let mut mu: Vec<i8> = vec![1; len];
    for &p in basis.primes() {
        if p.saturating_mul(p) >= hi {
            break;
        }
        let mut n = lo.next_multiple_of(p);
        while n < hi {
            let i = (n - lo) as usize;
            if mu[i] != 0 {
                residual[i] /= p;
                if residual[i] % p == 0 {
                    mu[i] = 0;
                } else {
                    mu[i] = -mu[i];
                }
            }
            n += p;
        }
    }
    for i in 0..len {
        if mu[i] != 0 && residual[i] > 1 {
            mu[i] = -mu[i];
        }
    }
    MobiusTable { lo, values: mu }
}

/// Sieve `mu` over `[lo, hi)` with a self-sized basis, after range checks.
pub fn sieve_mobius(lo: u64, hi: u64) -> Result<MobiusTable> {
    check_window(lo, hi)?;
    let basis = PrimeBasis::for_window(hi);
    Ok(mobius_segment(&basis, lo, hi))
}

/// Monolithic linear (SPF-style) Möbius sieve for `0..=n`, as an independent
/// reference implementation; index 0 holds a placeholder `0`.
pub fn mobius_upto(n: u64) -> Vec<i8> {
    let n = n as usize;
    let mut mu = vec![0i8; n + 1];
    if n >= 1 {
        mu[1] = 1;
    }
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let m = i * p;
            if m > n {
                break;
            }
            composite[m] = true;
            if i % p == 0 {
                mu[m] = 0;
                break;
            }
            mu[m] = -mu[i];
        }
    }
    mu
}

/// Von Mangoldt structure over a window `[lo, hi)`.
///
/// For each `n` the table records `(p, m)` with `n = p^m` when `n` is a
/// prime power, and `p = 0` otherwise. `Lambda(n) = ln p` falls out of
/// [`MangoldtTable::lambda`]; primality is `m == 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MangoldtTable {
    lo: u64,
    base: Vec<u64>,
    exp: Vec<u8>,
}

impl MangoldtTable {
    /// Reassemble a table from raw parts (used by the segment cache).
    /// Panics if the two columns disagree in length.
    pub fn from_raw(lo: u64, base: Vec<u64>, exp: Vec<u8>) -> Self {
        assert_eq!(base.len(), exp.len());
        Self { lo, base, exp }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.lo + self.base.len() as u64
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// `(p, m)` with `n = p^m`, or `None` when `Lambda(n) = 0`.
    #[inline]
    pub fn entry(&self, n: u64) -> Option<(u64, u32)> {
        let i = (n - self.lo) as usize;
        let p = self.base[i];
        (p != 0).then(|| (p, u32::from(self.exp[i])))
    }

    /// `Lambda(n)`, taking the logarithm at the point of use.
    #[inline]
    pub fn lambda(&self, n: u64) -> f64 {
        match self.entry(n) {
            Some((p, _)) => (p as f64).ln(),
            None => 0.0,
        }
    }

    /// True if `n` is prime (exponent 1).
    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        matches!(self.entry(n), Some((_, 1)))
    }

    /// Raw columns `(base, exp)`, aligned with `lo..hi`.
    pub fn columns(&self) -> (&[u64], &[u8]) {
        (&self.base, &self.exp)
    }

    /// Iterate the prime powers in the window as `(n, p, m)`.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u64, u32)> + '_ {
        self.base
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p != 0)
            .map(move |(i, &p)| (self.lo + i as u64, p, u32::from(self.exp[i])))
    }
}

/// Sieve the von Mangoldt structure over one segment.
///
/// Primes come from a composite-marking pass (anything unmarked in the
/// segment is prime because the basis covers `sqrt(hi - 1)`); higher prime
/// powers `p^m`, `m >= 2`, are enumerated directly from the base primes —
/// there are only `O(sqrt(hi))` of them below `hi`.
pub fn mangoldt_segment(basis: &PrimeBasis, lo: u64, hi: u64) -> MangoldtTable {
    assert!(lo >= 1 && lo < hi, "invalid window [{lo}, {hi})");
    debug_assert!(basis.covers(hi));
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    if lo == 1 {
        composite[0] = true; // n = 1 is not prime
    }
    for &p in basis.primes() {
        if p.saturating_mul(p) >= hi {
            break;
        }
        let mut n = lo.next_multiple_of(p).max(p * p);
        while n < hi {
            composite[(n - lo) as usize] = true;
            n += p;
        }
    }
    let mut base = vec![0u64; len];
    let mut exp = vec![0u8; len];
    for i in 0..len {
        if !composite[i] {
            base[i] = lo + i as u64;
            exp[i] = 1;
        }
    }
    for &p in basis.primes() {
        let mut v = p.saturating_mul(p);
        let mut m = 2u8;
        while v < hi {
            if v >= lo {
                let i = (v - lo) as usize;
                base[i] = p;
                exp[i] = m;
            }
            v = v.saturating_mul(p);
            m += 1;
        }
    }
    MangoldtTable { lo, base, exp }
}

/// Sieve the von Mangoldt structure over `[lo, hi)` with a self-sized basis.
pub fn sieve_mangoldt(lo: u64, hi: u64) -> Result<MangoldtTable> {
    check_window(lo, hi)?;
    let basis = PrimeBasis::for_window(hi);
    Ok(mangoldt_segment(&basis, lo, hi))
}
