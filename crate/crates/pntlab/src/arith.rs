//! Elementary multiplicative helpers: gcd, Euler phi, factorization,
//! divisor enumeration, and modular inverses.
//!
//! Everything here is exact integer arithmetic on `u64`. Trial division is
//! plenty for the moduli and divisors this crate touches (`q <= 10^6`,
//! divisor loops up to `sqrt(x) <= 2^20`); bulk factorization over a window
//! goes through [`FactorSegment`], which reuses a base-prime table instead of
//! dividing each `n` from scratch.

use crate::sieve::PrimeBasis;

/// Euclid's algorithm. By convention `gcd(0, n) = gcd(n, 0) = n`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization by trial division, smallest prime first.
///
/// Returns the exponent form `n = prod p_i^{e_i}` as `(p_i, e_i)` pairs;
/// `factorize(1)` is empty. Panics if `n = 0`.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0) is undefined");
    let mut out = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        if *m % p == 0 {
            let mut e = 0u32;
            while *m % p == 0 {
                *m /= p;
                e += 1;
            }
            out.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    let mut p = 5u64;
    // 2/4 wheel over 6k +- 1.
    let mut step = 2u64;
    while p.saturating_mul(p) <= m {
        push(p, &mut m);
        p += step;
        step = 6 - step;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Euler's totient via the factorization of `q`.
pub fn euler_phi(q: u64) -> u64 {
    let mut phi = q;
    for (p, _) in factorize(q.max(1)) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// All divisors of `n`, sorted ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let base_len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..base_len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// The inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
///
/// Extended Euclid on signed 128-bit intermediates; `m = 1` maps everything
/// to `Some(0)`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (i128::from(a % m), i128::from(m));
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    let m = i128::from(m);
    Some(old_s.rem_euclid(m) as u64)
}

/// `Lambda(n)` read off a factorization: `ln p` when the list is a single
/// prime power, `0` otherwise (including `n = 1`).
pub fn lambda_of_factors(factors: &[(u64, u32)]) -> f64 {
    match factors {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    }
}

/// Visit every squarefree divisor `d | n` together with `mu(d)`, given the
/// factorization of `n`. Enumerates subsets of the distinct primes, so the
/// visit order is deterministic (binary-counter order).
pub fn for_each_squarefree_divisor<F: FnMut(u64, i8)>(factors: &[(u64, u32)], mut visit: F) {
    let k = factors.len();
    assert!(k < 64, "too many distinct primes");
    for mask in 0u64..(1u64 << k) {
        let mut d = 1u64;
        for (i, &(p, _)) in factors.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= p;
            }
        }
        let mu = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        visit(d, mu);
    }
}

/// Factorizations for every `n` in a window `[lo, hi)`, built with one pass
/// of the shared base primes instead of per-`n` trial division.
///
/// Factor lists are ordered by ascending prime. Intended for bulk identity
/// verification; memory is `O(hi - lo)` entries.
pub struct FactorSegment {
    lo: u64,
    factors: Vec<Vec<(u64, u32)>>,
}

impl FactorSegment {
    /// Build the segment. `basis` must cover primes up to `sqrt(hi - 1)`.
    pub fn build(basis: &PrimeBasis, lo: u64, hi: u64) -> Self {
        assert!(lo >= 1 && lo < hi, "invalid window [{lo}, {hi})");
        debug_assert!(basis.covers(hi));
        let len = (hi - lo) as usize;
        let mut residual: Vec<u64> = (lo..hi).collect();
        let mut factors: Vec<Vec<(u64, u32)>> = vec![Vec::new(); len];
        for &p in basis.primes() {
            if p.saturating_mul(p) >= hi {
                break;
            }
            let mut n = lo.next_multiple_of(p);
            while n < hi {
                let i = (n - lo) as usize;
                let mut e = 0u32;
                while residual[i] % p == 0 {
                    residual[i] /= p;
                    e += 1;
                }
                factors[i].push((p, e));
                n += p;
            }
        }
        for i in 0..len {
            if residual[i] > 1 {
                factors[i].push((residual[i], 1));
            }
        }
        Self { lo, factors }
    }

    /// Convenience constructor that sizes its own basis.
    pub fn new(lo: u64, hi: u64) -> Self {
        let basis = PrimeBasis::for_window(hi);
        Self::build(&basis, lo, hi)
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factorization of `n`; panics if `n` is outside the window.
    pub fn factors_of(&self, n: u64) -> &[(u64, u32)] {
        &self.factors[(n - self.lo) as usize]
    }

    /// Iterate `(n, factors)` in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &[(u64, u32)])> {
        self.factors
            .iter()
            .enumerate()
            .map(move |(i, f)| (self.lo + i as u64, f.as_slice()))
    }
}
