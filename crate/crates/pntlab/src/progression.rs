//! Residue classes `a mod q` and the Chebyshev functions restricted to them.
//!
//! `psi(x; q, a)`, `theta(x; q, a)` and `pi(x; q, a)` are computed *exactly*
//! (up to f64 rounding of sums of logarithms) by walking the von Mangoldt
//! table in fixed segments and picking out `n ≡ a (mod q)`. One driver,
//! [`chebyshev_checkpoints`], serves every modulus including `q = 1`, which
//! is represented as the class `0 mod 1`.
//!
//! The module also hosts the small CRT facts the decomposition needs: the
//! unique residue `b mod dq` with `b ≡ 0 (mod d)` and `b ≡ a (mod q)`, and
//! the exact count of multiples of `d` in the class up to `x`.

use crate::arith::{euler_phi, gcd};
use crate::cache::SweepOptions;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::par::run_segments;
use crate::sieve::{check_window, PrimeBasis};

/// A residue class `a mod q` with `0 <= a < q`, `q >= 1`.
///
/// [`ProgressionClass::new`] insists on `gcd(a, q) = 1` (so `0 mod 1` is the
/// whole-line class, since `gcd(0, 1) = 1`); [`ProgressionClass::any_residue`]
/// admits non-coprime residues for conservation checks, flagged through
/// [`ProgressionClass::is_coprime`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProgressionClass {
    q: u64,
    a: u64,
    phi_q: u64,
    coprime: bool,
}

impl ProgressionClass {
    /// A coprime class; errors with the offending gcd otherwise.
    pub fn new(q: u64, a: u64) -> Result<Self> {
        let cls = Self::any_residue(q, a)?;
        if !cls.coprime {
            return Err(Error::NotCoprime {
                q,
                a,
                gcd: gcd(a, q),
            });
        }
        Ok(cls)
    }

    /// Any residue class, coprime or not.
    pub fn any_residue(q: u64, a: u64) -> Result<Self> {
        if q == 0 || a >= q {
            return Err(Error::InvalidClass { q, a });
        }
        Ok(Self {
            q,
            a,
            phi_q: euler_phi(q),
            coprime: gcd(a, q) == 1,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    /// `phi(q)`, cached at construction.
    pub fn phi(&self) -> u64 {
        self.phi_q
    }

    pub fn is_coprime(&self) -> bool {
        self.coprime
    }

    /// Membership test `n ≡ a (mod q)`.
    #[inline]
    pub fn contains(&self, n: u64) -> bool {
        n % self.q == self.a
    }

    /// Smallest member of the class that is `>= lo`.
    #[inline]
    pub fn first_at_or_above(&self, lo: u64) -> u64 {
        let r = lo % self.q;
        lo + (self.a + self.q - r) % self.q
    }
}

/// The CRT residue `b` for `n ≡ 0 (mod d)`, `n ≡ a (mod q)`.
///
/// Fields are `u128` because `d * q` can exceed `u64` at the range cap.
/// `b` is normalised into `(0, dq]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrtResidue {
    pub b: u128,
    pub modulus: u128,
}

/// Solve `n ≡ 0 (mod d)`, `n ≡ a (mod q)`; `None` when `gcd(d, q) > 1`
/// (for a coprime class those congruences are then incompatible).
pub fn crt_residue(d: u64, cls: &ProgressionClass) -> Option<CrtResidue> {
    assert!(d >= 1, "d must be positive");
    let q = cls.q();
    if gcd(d, q) != 1 {
        return None;
    }
    let inv = crate::arith::mod_inverse(d % q, q).expect("d is invertible mod q");
    // t = a * d^{-1} mod q, so n = d * t satisfies both congruences.
    let t = (u128::from(cls.a()) * u128::from(inv) % u128::from(q)) as u64;
    let modulus = u128::from(d) * u128::from(q);
    let b = if t == 0 {
        modulus
    } else {
        u128::from(d) * u128::from(t)
    };
    Some(CrtResidue { b, modulus })
}

/// `#{1 <= k <= limit : k ≡ c (mod q)}` for a plain residue `0 <= c < q`.
#[inline]
pub fn count_in_class_upto(limit: u64, q: u64, c: u64) -> u64 {
    debug_assert!(q >= 1 && c < q);
    if c == 0 {
        limit / q
    } else if c <= limit {
        (limit - c) / q + 1
    } else {
        0
    }
}

/// Exact count of `n <= x` with `d | n` and `n ≡ a (mod q)`.
pub fn count_multiples_in_class(x: u64, d: u64, cls: &ProgressionClass) -> u64 {
    match crt_residue(d, cls) {
        Some(CrtResidue { b, modulus }) if b <= u128::from(x) => {
            ((u128::from(x) - b) / modulus + 1) as u64
        }
        _ => 0,
    }
}

/// One checkpoint of the Chebyshev functions on a class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevResult {
    pub x: u64,
    pub q: u64,
    pub a: u64,
    /// `psi(x; q, a) = sum of Lambda(n) over n <= x in the class`.
    pub psi: f64,
    /// `theta(x; q, a) = sum of ln p over primes p <= x in the class`.
    pub theta: f64,
    /// `pi(x; q, a) = number of primes p <= x in the class`.
    pub pi_count: u64,
    /// The smooth main term `x / phi(q)`.
    pub main: f64,
    /// `psi - main`.
    pub residual: f64,
}

impl ChebyshevResult {
    fn at(x: u64, cls: &ProgressionClass, psi: f64, theta: f64, pi_count: u64) -> Self {
        let main = x as f64 / cls.phi() as f64;
        Self {
            x,
            q: cls.q(),
            a: cls.a(),
            psi,
            theta,
            pi_count,
            main,
            residual: psi - main,
        }
    }
}

/// Local contribution of one segment: running totals plus snapshots taken
/// at each checkpoint that falls inside the segment.
struct SegmentPart {
    cuts: Vec<(usize, f64, f64, u64)>,
    psi: KahanSum,
    theta: KahanSum,
    pi_count: u64,
}

/// Evaluate `psi`, `theta` and `pi` on a class at every checkpoint in `xs`
/// with a single pass over `[1, max(xs)]`.
///
/// `xs` must be strictly increasing; `xs[i] = 0` yields a zero row. The
/// segmentation is fixed by `opts.segment_len`, so results are bit-for-bit
/// identical for any `opts.threads`.
pub fn chebyshev_checkpoints(
    xs: &[u64],
    cls: &ProgressionClass,
    opts: &SweepOptions,
) -> Result<Vec<ChebyshevResult>> {
    if xs.is_empty() {
        return Err(Error::InvalidGrid("checkpoint list is empty".into()));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(
            "checkpoints must be strictly increasing".into(),
        ));
    }
    let max = *xs.last().unwrap();
    let mut out: Vec<ChebyshevResult> = xs
        .iter()
        .map(|&x| ChebyshevResult::at(x, cls, 0.0, 0.0, 0))
        .collect();
    if max == 0 {
        return Ok(out);
    }
    check_window(1, max + 1)?;

    let basis = PrimeBasis::for_window(max + 1);
    let parts = run_segments(1, max + 1, opts.segment_len, opts.threads, |lo, hi| {
        let table = opts.mangoldt(&basis, lo, hi);
        let mut psi = KahanSum::new();
        let mut theta = KahanSum::new();
        let mut pi_count = 0u64;
        let mut cuts = Vec::new();

        let first_cut = xs.partition_point(|&x| x < lo);
        let end_cut = xs.partition_point(|&x| x < hi);
        let mut n = cls.first_at_or_above(lo);
        // Walk to each checkpoint bound inside the segment, snapshot, then
        // finish the segment.
        let bounds = xs[first_cut..end_cut]
            .iter()
            .map(|&x| Some(x))
            .chain([None]);
        for (offset, bound) in bounds.enumerate() {
            let bound = bound.unwrap_or(hi - 1);
            while n <= bound {
                if let Some((p, m)) = table.entry(n) {
                    let lam = (p as f64).ln();
                    psi += lam;
                    if m == 1 {
                        theta += lam;
                        pi_count += 1;
                    }
                }
                n += cls.q();
            }
            let k = first_cut + offset;
            if k < end_cut {
                cuts.push((k, psi.value(), theta.value(), pi_count));
            }
        }
        SegmentPart {
            cuts,
            psi,
            theta,
            pi_count,
        }
    });

    // Ordered fold: prefix totals advance segment by segment, and each cut
    // combines the prefix with the segment-local snapshot.
    let mut psi = KahanSum::new();
    let mut theta = KahanSum::new();
    let mut pi_count = 0u64;
    for part in parts {
        for &(k, psi_part, theta_part, pi_part) in &part.cuts {
            let mut psi_cut = psi;
            psi_cut += psi_part;
            let mut theta_cut = theta;
            theta_cut += theta_part;
            out[k] = ChebyshevResult::at(
                xs[k],
                cls,
                psi_cut.value(),
                theta_cut.value(),
                pi_count + pi_part,
            );
        }
        psi.merge(part.psi);
        theta.merge(part.theta);
        pi_count += part.pi_count;
    }
    Ok(out)
}

/// `psi`, `theta`, `pi` on a class at a single point.
pub fn psi_direct(x: u64, cls: &ProgressionClass) -> Result<ChebyshevResult> {
    Ok(chebyshev_checkpoints(&[x], cls, &SweepOptions::default())?
        .pop()
        .unwrap())
}

/// Number of primes `p <= x` with `p ≡ a (mod q)`.
pub fn pi_direct(x: u64, cls: &ProgressionClass) -> Result<u64> {
    Ok(psi_direct(x, cls)?.pi_count)
}

/// Unrestricted `psi(x)` (the class `0 mod 1`).
pub fn psi_all(x: u64) -> Result<f64> {
    let cls = ProgressionClass::new(1, 0).expect("0 mod 1 is valid");
    Ok(psi_direct(x, &cls)?.psi)
}

/// Unrestricted `theta(x)`.
pub fn theta_all(x: u64) -> Result<f64> {
    let cls = ProgressionClass::new(1, 0).expect("0 mod 1 is valid");
    Ok(psi_direct(x, &cls)?.theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::SweepOptions;

    #[test]
    fn class_construction_rules() {
        assert!(ProgressionClass::new(1, 0).is_ok());
        assert!(ProgressionClass::new(5, 2).is_ok());
        let err = ProgressionClass::new(12, 8).unwrap_err();
        match err {
            Error::NotCoprime { q, a, gcd } => {
                assert_eq!((q, a, gcd), (12, 8, 4));
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(matches!(
            ProgressionClass::new(0, 0),
            Err(Error::InvalidClass { .. })
        ));
        assert!(matches!(
            ProgressionClass::new(5, 5),
            Err(Error::InvalidClass { .. })
        ));
        let nc = ProgressionClass::any_residue(12, 8).unwrap();
        assert!(!nc.is_coprime());
        assert_eq!(nc.phi(), 4);
    }

    #[test]
    fn crt_examples() {
        let cls = ProgressionClass::new(5, 3).unwrap();
        let r = crt_residue(4, &cls).unwrap();
        assert_eq!((r.b, r.modulus), (8, 20));

        let cls31 = ProgressionClass::new(3, 1).unwrap();
        let r = crt_residue(6, &cls31);
        assert!(r.is_none(), "gcd(6, 3) = 3 > 1");

        // q = 1: every multiple of d qualifies; representative is d itself.
        let whole = ProgressionClass::new(1, 0).unwrap();
        let r = crt_residue(7, &whole).unwrap();
        assert_eq!((r.b, r.modulus), (7, 7));
    }

    #[test]
    fn crt_covers_all_small_cases() {
        for q in 1..=12u64 {
            for a in 0..q {
                let Ok(cls) = ProgressionClass::new(q, a) else {
                    continue;
                };
                for d in 1..=20u64 {
                    let expect = (1..=2000u64).find(|&n| n % d == 0 && n % q == a);
                    match crt_residue(d, &cls) {
                        Some(r) => {
                            assert_eq!(r.modulus, u128::from(d * q));
                            assert!(r.b >= 1 && r.b <= r.modulus);
                            assert_eq!(Some(r.b as u64), expect, "d={d} q={q} a={a}");
                        }
                        None => assert_eq!(expect, None, "d={d} q={q} a={a}"),
                    }
                }
            }
        }
    }

    #[test]
    fn count_multiples_examples() {
        let cls = ProgressionClass::new(3, 1).unwrap();
        // Multiples of 2 that are 1 mod 3 up to 20: 4, 10, 16.
        assert_eq!(count_multiples_in_class(20, 2, &cls), 3);
        // Multiples of 6 can never be 1 mod 3.
        assert_eq!(count_multiples_in_class(1000, 6, &cls), 0);
        let whole = ProgressionClass::new(1, 0).unwrap();
        assert_eq!(count_multiples_in_class(20, 7, &whole), 2);
        assert_eq!(count_multiples_in_class(6, 7, &whole), 0);
    }

    #[test]
    fn residue_count_brute_force() {
        for q in 1..=9u64 {
            for c in 0..q {
                for limit in 0..=60u64 {
                    let brute = (1..=limit).filter(|&k| k % q == c).count() as u64;
                    assert_eq!(
                        count_in_class_upto(limit, q, c),
                        brute,
                        "limit={limit} q={q} c={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn count_multiples_brute_force() {
        for q in 1..=10u64 {
            for a in 0..q {
                let Ok(cls) = ProgressionClass::new(q, a) else {
                    continue;
                };
                for d in 1..=15u64 {
                    for x in [0u64, 1, 7, 29, 100, 351] {
                        let brute = (1..=x).filter(|&n| n % d == 0 && n % q == a).count() as u64;
                        assert_eq!(
                            count_multiples_in_class(x, d, &cls),
                            brute,
                            "x={x} d={d} q={q} a={a}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn psi_small_exact_values() {
        let cls = ProgressionClass::new(3, 1).unwrap();
        // Class members <= 20 with Lambda > 0: 4 = 2^2, 7, 13, 16 = 2^4, 19.
        let expect = 2f64.ln() + 7f64.ln() + 13f64.ln() + 2f64.ln() + 19f64.ln();
        let r = psi_direct(20, &cls).unwrap();
        assert!((r.psi - expect).abs() < 1e-12);
        // Primes in the class up to 20: 7, 13, 19.
        assert_eq!(r.pi_count, 3);
        assert!((r.theta - (7f64.ln() + 13f64.ln() + 19f64.ln())).abs() < 1e-12);
        assert!((r.main - 10.0).abs() < 1e-12);
        assert!((r.residual - (r.psi - 10.0)).abs() < 1e-15);

        let zero = psi_direct(0, &cls).unwrap();
        assert_eq!((zero.psi, zero.pi_count), (0.0, 0));
        let one = psi_direct(1, &cls).unwrap();
        assert_eq!((one.psi, one.pi_count), (0.0, 0));
    }

    #[test]
    fn psi_unrestricted_small() {
        // psi(10) = ln 2 + ln 3 + ln 2 + ln 5 + ln 7 + ln 2 + ln 3 (n = 2,
        // 3, 4, 5, 7, 8, 9).
        let expect = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((psi_all(10).unwrap() - expect).abs() < 1e-12);
        assert!(
            (theta_all(10).unwrap() - (2f64.ln() + 3f64.ln() + 5f64.ln() + 7f64.ln())).abs()
                < 1e-12
        );
    }

    #[test]
    fn checkpoints_match_single_shots_bitwise() {
        let cls = ProgressionClass::new(7, 2).unwrap();
        let xs = [0u64, 10, 500, 9999, 100_000];
        let rows = chebyshev_checkpoints(&xs, &cls, &SweepOptions::default()).unwrap();
        for (row, &x) in rows.iter().zip(&xs) {
            let single = psi_direct(x, &cls).unwrap();
            assert_eq!(row.psi.to_bits(), single.psi.to_bits(), "x = {x}");
            assert_eq!(row.theta.to_bits(), single.theta.to_bits(), "x = {x}");
            assert_eq!(row.pi_count, single.pi_count, "x = {x}");
        }
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let cls = ProgressionClass::new(4, 3).unwrap();
        let xs = [123u64, 4567, 300_000, 1_000_000];
        // Many segments, so checkpoints land across segment boundaries.
        let mut opts = SweepOptions {
            segment_len: 1 << 14,
            ..SweepOptions::default()
        };
        let seq = chebyshev_checkpoints(&xs, &cls, &opts).unwrap();
        opts.threads = 4;
        let par = chebyshev_checkpoints(&xs, &cls, &opts).unwrap();
        for (s, p) in seq.iter().zip(&par) {
            assert_eq!(s.psi.to_bits(), p.psi.to_bits());
            assert_eq!(s.theta.to_bits(), p.theta.to_bits());
            assert_eq!(s.pi_count, p.pi_count);
        }
    }

    #[test]
    fn conservation_over_residues_small() {
        // Summing psi(x; q, a) over all residues a (coprime or not)
        // reproduces unrestricted psi(x) to within accumulation error.
        for q in [2u64, 3, 6, 10] {
            for x in [100u64, 999, 5000] {
                let whole = psi_all(x).unwrap();
                let mut total = KahanSum::new();
                for a in 0..q {
                    let cls = ProgressionClass::any_residue(q, a).unwrap();
                    total += psi_direct(x, &cls).unwrap().psi;
                }
                assert!(
                    (total.value() - whole).abs() < 1e-9 * whole.max(1.0),
                    "q={q} x={x}: {} vs {whole}",
                    total.value()
                );
            }
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let cls = ProgressionClass::new(3, 1).unwrap();
        let opts = SweepOptions::default();
        assert!(matches!(
            chebyshev_checkpoints(&[], &cls, &opts),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            chebyshev_checkpoints(&[5, 5], &cls, &opts),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            chebyshev_checkpoints(&[9, 2], &cls, &opts),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            psi_direct(crate::sieve::RANGE_CAP, &cls),
            Err(Error::RangeCap { .. })
        ));
    }
}
