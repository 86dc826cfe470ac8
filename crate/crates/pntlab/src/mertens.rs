//! Mertens-type partial sums and their convergence experiments.
//!
//! The two series `sum mu(n)/n -> 0` and `sum mu(n) ln(n)/n -> -1` are the
//! elementary engine behind the error-term bound; both are equivalent to the
//! prime number theorem, so no finite computation proves them — this module
//! measures how the partial sums approach their limits and fits the apparent
//! `1/(log y)^B` decay exponent. It also evaluates Möbius sums over
//! progressions (the quantity the Siegel–Walfisz argument ultimately needs)
//! and the fractional-part sum `sum_{d^2<x} mu(d) ln(d) {x/d}`.
//!
//! All real accumulation is compensated; every sweep walks fixed segments
//! with an ordered merge.

use crate::cache::SweepOptions;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::par::run_segments;
use crate::progression::ProgressionClass;
use crate::sieve::{check_window, mobius_upto, PrimeBasis};

/// Partial sums of `mu(n)/n` and `mu(n) ln(n)/n` on a common checkpoint grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MertensSeries {
    pub checkpoints: Vec<u64>,
    /// `S_mu(y) = sum_{n<=y} mu(n)/n` per checkpoint.
    pub s_mu: Vec<f64>,
    /// `S_mulog(y) = sum_{n<=y} mu(n) ln(n)/n` per checkpoint.
    pub s_mulog: Vec<f64>,
}

/// Evaluate both Mertens series at every checkpoint in one Möbius pass.
///
/// `checkpoints` must be strictly increasing with first entry `>= 1`.
pub fn mertens_series(checkpoints: &[u64], opts: &SweepOptions) -> Result<MertensSeries> {
    if checkpoints.is_empty() {
        return Err(Error::InvalidGrid("checkpoint list is empty".into()));
    }
    if checkpoints[0] < 1 {
        return Err(Error::InvalidGrid(
            "checkpoints must start at y >= 1".into(),
        ));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(
            "checkpoints must be strictly increasing".into(),
        ));
    }
    let max = *checkpoints.last().unwrap();
    check_window(1, max + 1)?;

    struct Part {
        cuts: Vec<(usize, f64, f64)>,
        s_mu: KahanSum,
        s_mulog: KahanSum,
    }
    let basis = PrimeBasis::for_window(max + 1);
    let parts = run_segments(1, max + 1, opts.segment_len, opts.threads, |lo, hi| {
        let table = opts.mobius(&basis, lo, hi);
        let mut s_mu = KahanSum::new();
        let mut s_mulog = KahanSum::new();
        let mut cuts = Vec::new();
        let first_cut = checkpoints.partition_point(|&y| y < lo);
        let end_cut = checkpoints.partition_point(|&y| y < hi);
        let mut n = lo;
        let bounds = checkpoints[first_cut..end_cut]
            .iter()
            .map(|&y| Some(y))
            .chain([None]);
        for (offset, bound) in bounds.enumerate() {
            let bound = bound.unwrap_or(hi - 1);
            while n <= bound {
                let mu = table.mu(n);
                if mu != 0 {
                    let inv_n = 1.0 / n as f64;
                    let m = f64::from(mu);
                    s_mu += m * inv_n;
                    s_mulog += m * (n as f64).ln() * inv_n;
                }
                n += 1;
            }
            let k = first_cut + offset;
            if k < end_cut {
                cuts.push((k, s_mu.value(), s_mulog.value()));
            }
        }
        Part {
            cuts,
            s_mu,
            s_mulog,
        }
    });

    let mut out = MertensSeries {
        checkpoints: checkpoints.to_vec(),
        s_mu: vec![0.0; checkpoints.len()],
        s_mulog: vec![0.0; checkpoints.len()],
    };
    let mut s_mu = KahanSum::new();
    let mut s_mulog = KahanSum::new();
    for part in parts {
        for &(k, mu_part, mulog_part) in &part.cuts {
            let mut a = s_mu;
            a += mu_part;
            let mut b = s_mulog;
            b += mulog_part;
            out.s_mu[k] = a.value();
            out.s_mulog[k] = b.value();
        }
        s_mu.merge(part.s_mu);
        s_mulog.merge(part.s_mulog);
    }
    Ok(out)
}

/// `S_mu(y) = sum_{n<=y} mu(n)/n`.
pub fn mu_over_n_partial(y: u64) -> Result<f64> {
    Ok(mertens_series(&[y], &SweepOptions::default())?.s_mu[0])
}

/// `S_mulog(y) = sum_{n<=y} mu(n) ln(n)/n`; approaches -1.
pub fn mu_logn_over_n_partial(y: u64) -> Result<f64> {
    Ok(mertens_series(&[y], &SweepOptions::default())?.s_mulog[0])
}

/// `M(x; q, a) = sum_{n<=x, n≡a (q)} mu(n)` at each checkpoint.
///
/// Non-coprime residues are allowed — summing over *all* residues of `q`
/// must reproduce the Mertens function `M(x)`.
pub fn mobius_progression_checkpoints(
    xs: &[u64],
    cls: &ProgressionClass,
    opts: &SweepOptions,
) -> Result<Vec<i64>> {
    if xs.is_empty() {
        return Err(Error::InvalidGrid("checkpoint list is empty".into()));
    }
    if xs[0] < 1 {
        return Err(Error::InvalidGrid(
            "checkpoints must start at x >= 1".into(),
        ));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(
            "checkpoints must be strictly increasing".into(),
        ));
    }
    let max = *xs.last().unwrap();
    check_window(1, max + 1)?;

    let basis = PrimeBasis::for_window(max + 1);
    let parts = run_segments(1, max + 1, opts.segment_len, opts.threads, |lo, hi| {
        let table = opts.mobius(&basis, lo, hi);
        let mut sum = 0i64;
        let mut cuts: Vec<(usize, i64)> = Vec::new();
        let first_cut = xs.partition_point(|&y| y < lo);
        let end_cut = xs.partition_point(|&y| y < hi);
        let mut n = cls.first_at_or_above(lo);
        let bounds = xs[first_cut..end_cut]
            .iter()
            .map(|&y| Some(y))
            .chain([None]);
        for (offset, bound) in bounds.enumerate() {
            let bound = bound.unwrap_or(hi - 1);
            while n <= bound {
                sum += i64::from(table.mu(n));
                n += cls.q();
            }
            let k = first_cut + offset;
            if k < end_cut {
                cuts.push((k, sum));
            }
        }
        (cuts, sum)
    });

    let mut out = vec![0i64; xs.len()];
    let mut prefix = 0i64;
    for (cuts, total) in parts {
        for &(k, part) in &cuts {
            out[k] = prefix + part;
        }
        prefix += total;
    }
    Ok(out)
}

/// `M(x; q, a)` at a single threshold.
pub fn mobius_progression_sum(x: u64, cls: &ProgressionClass) -> Result<i64> {
    Ok(mobius_progression_checkpoints(&[x], cls, &SweepOptions::default())?[0])
}

/// The Mertens function `M(x) = sum_{n<=x} mu(n)` (the class `0 mod 1`).
pub fn mertens_function(x: u64) -> Result<i64> {
    let cls = ProgressionClass::new(1, 0).expect("0 mod 1 is valid");
    mobius_progression_sum(x, &cls)
}

/// The fractional-part sum `sum_{d, d^2 < x} mu(d) ln(d) {x/d}`, with
/// `{x/d} = (x mod d)/d` computed exactly.
pub fn fractional_sum(x: u64) -> Result<f64> {
    check_window(1, x + 1)?;
    let strict_root = if x > 1 { (x - 1).isqrt() } else { 0 };
    let mut acc = KahanSum::new();
    if strict_root >= 2 {
        let mu = mobius_upto(strict_root);
        for d in 2..=strict_root {
            let m = mu[d as usize];
            if m == 0 {
                continue;
            }
            let rem = x % d;
            if rem == 0 {
                continue; // {x/d} = 0
            }
            acc += f64::from(m) * (d as f64).ln() * (rem as f64 / d as f64);
        }
    }
    Ok(acc.value())
}

/// Result of fitting `|s(y) - L| ≈ C / (log y)^B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    /// Fitted decay exponent `B` (positive means the gap shrinks).
    pub b: f64,
    /// Fitted constant `C`.
    pub c: f64,
    /// `|s(y) - L|` per input checkpoint, in input order.
    pub gaps: Vec<f64>,
}

/// Resolution floor below which a gap is considered numerically zero.
pub const FIT_GAP_FLOOR: f64 = 1e-12;

/// Least-squares fit of `ln|s(y) - L|` against `ln ln y`.
///
/// `points` are `(y, s(y))` with strictly increasing `y >= 3` and at least
/// three entries. Gaps below [`FIT_GAP_FLOOR`] are excluded from the
/// regression (they carry no exponent information); if fewer than two
/// usable points remain the fit is reported as saturated.
pub fn fit_log_exponent(points: &[(f64, f64)], limit: f64) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::InvalidGrid(
            "need at least 3 checkpoints to fit".into(),
        ));
    }
    if points.iter().any(|&(y, _)| !y.is_finite() || y < 3.0) {
        return Err(Error::InvalidGrid(
            "fit checkpoints must satisfy y >= 3".into(),
        ));
    }
    if points.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidGrid(
            "fit checkpoints must be strictly increasing".into(),
        ));
    }
    let gaps: Vec<f64> = points.iter().map(|&(_, s)| (s - limit).abs()).collect();
    let usable: Vec<(f64, f64)> = points
        .iter()
        .zip(&gaps)
        .filter(|&(_, &g)| g >= FIT_GAP_FLOOR)
        .map(|(&(y, _), &g)| (y.ln().ln(), g.ln()))
        .collect();
    if usable.len() < 2 {
        return Err(Error::SaturatedFit {
            floor: FIT_GAP_FLOOR,
        });
    }
    let n = usable.len() as f64;
    let mean_t = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_z = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxz = 0.0;
    for &(t, z) in &usable {
        sxx += (t - mean_t) * (t - mean_t);
        sxz += (t - mean_t) * (z - mean_z);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidGrid(
            "fit checkpoints are too close to resolve a slope".into(),
        ));
    }
    let slope = sxz / sxx;
    let intercept = mean_z - slope * mean_t;
    Ok(ExponentFit {
        b: -slope,
        c: intercept.exp(),
        gaps,
    })
}
