//! `pntlab` is a computational laboratory for the elementary side of prime
//! number theory in arithmetic progressions.
//!
//! The crate builds everything from segmented sieves upward:
//!
//! * [`sieve`] — segmented Möbius and von Mangoldt tables over arbitrary
//!   windows `[lo, hi)`, plus monolithic reference sieves.
//! * [`arith`] — small multiplicative helpers (gcd, Euler phi, factorization,
//!   divisor enumeration, modular inverses).
//! * [`progression`] — residue classes `a mod q`, CRT residue construction,
//!   exact counts of multiples in a class, and the Chebyshev functions
//!   `psi(x; q, a)`, `theta(x; q, a)`, `pi(x; q, a)`.
//! * [`identities`] — pointwise verification of the Möbius-inversion identity
//!   for `Lambda(n)` and of its split into small/large divisor halves.
//! * [`decompose`] — the exact main/error decomposition of `psi(x; q, a)`
//!   induced by that split, in both per-`n` and divisor-grouped forms.
//! * [`mertens`] — partial sums of `mu(n)/n` and `mu(n) ln(n)/n`, Möbius
//!   sums over progressions, the fractional-part sum, and log-power fits.
//! * [`analysis`] — residual scans under Siegel–Walfisz / RH / Montgomery
//!   style normalizations and a partial-summation route from `theta` to
//!   `pi(x)`.
//! * [`cache`] — an optional on-disk segment cache so long scans can reuse
//!   sieve work across runs.
//!
//! All floating-point accumulation goes through compensated summation
//! ([`kahan::KahanSum`]) and every parallel sweep uses a fixed segmentation
//! so results are bit-for-bit reproducible regardless of thread count.

pub mod analysis;
pub mod arith;
pub mod cache;
pub mod decompose;
pub mod error;
pub mod identities;
pub mod kahan;
pub mod mertens;
pub mod par;
pub mod progression;
pub mod sieve;

pub use error::{Error, Result};
pub use kahan::KahanSum;
pub use progression::ProgressionClass;
