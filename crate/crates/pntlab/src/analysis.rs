//! Residual scans under the three error-shape normalizations, and the
//! partial-summation bridge from `theta`/`psi` to `pi`.
//!
//! Nothing here proves an asymptotic: a scan computes the exact residual
//! `r = psi(x; q, a) - x/phi(q)` on a grid and divides it by each candidate
//! error shape —
//!
//! * `sw_norm = |r| phi(q) (ln x)^B / x` (the unconditional shape),
//! * `rh_norm = |r| / (sqrt(x) (ln x)^2)` (the RH-conditional shape),
//! * `mont_norm = |r| sqrt(q) / x^{1/2+eps}` (the conjectured shape)
//!
//! — so that boundedness or decay of a column is an observable fact about
//! the data, not an assumption. The Möbius variant does the same for
//! `M(x; q, a)` with `|r| (ln x)^D / x` and `|r| / sqrt(x)`.

use crate::cache::SweepOptions;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::mertens::mobius_progression_checkpoints;
use crate::progression::{chebyshev_checkpoints, ProgressionClass};
use crate::sieve::RANGE_CAP;

/// Exponent and grid configuration for residual scans.
///
/// `B` is the Siegel–Walfisz exponent, `C` the modulus-range exponent
/// (`q <= (ln x)^C` is *checked*, not enforced), `D` the Möbius-scan decay
/// exponent, and `epsilon` the Montgomery exponent. The classical constraint
/// `B > C + 1` is enforced at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    cls: ProgressionClass,
    x_grid: Vec<u64>,
    b: f64,
    c: f64,
    d: f64,
    epsilon: f64,
}

/// Default Siegel–Walfisz exponent `B`.
pub const DEFAULT_B: f64 = 3.0;
/// Default modulus exponent `C`; must keep `B > C + 1`.
pub const DEFAULT_C: f64 = 1.0;
/// Default Möbius decay exponent `D`.
pub const DEFAULT_D: f64 = 2.0;
/// Default Montgomery `epsilon` (0 = strongest form, reported not asserted).
pub const DEFAULT_EPSILON: f64 = 0.0;

impl ScanConfig {
    /// Config with default exponents.
    pub fn new(cls: ProgressionClass, x_grid: Vec<u64>) -> Result<Self> {
        Self::with_exponents(
            cls,
            x_grid,
            DEFAULT_B,
            DEFAULT_C,
            DEFAULT_D,
            DEFAULT_EPSILON,
        )
    }

    /// Config with explicit exponents; validates every invariant.
    pub fn with_exponents(
        cls: ProgressionClass,
        x_grid: Vec<u64>,
        b: f64,
        c: f64,
        d: f64,
        epsilon: f64,
    ) -> Result<Self> {
        if !cls.is_coprime() {
            return Err(Error::NotCoprime {
                q: cls.q(),
                a: cls.a(),
                gcd: crate::arith::gcd(cls.a(), cls.q()),
            });
        }
        if x_grid.is_empty() {
            return Err(Error::InvalidConfig("x grid is empty".into()));
        }
        if x_grid[0] < 100 {
            return Err(Error::InvalidConfig(format!(
                "x grid must start at 100 or above, got {}",
                x_grid[0]
            )));
        }
        if x_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "x grid must be strictly increasing".into(),
            ));
        }
        if *x_grid.last().unwrap() >= RANGE_CAP {
            return Err(Error::RangeCap {
                lo: 1,
                hi: *x_grid.last().unwrap(),
            });
        }
        for (name, v) in [("B", b), ("C", c), ("D", d), ("epsilon", epsilon)] {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if b <= c + 1.0 {
            return Err(Error::InvalidConfig(format!(
                "need B > C + 1 (got B = {b}, C = {c})"
            )));
        }
        if epsilon < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be >= 0, got {epsilon}"
            )));
        }
        Ok(Self {
            cls,
            x_grid,
            b,
            c,
            d,
            epsilon,
        })
    }

    pub fn cls(&self) -> &ProgressionClass {
        &self.cls
    }

    pub fn x_grid(&self) -> &[u64] {
        &self.x_grid
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Whether `q <= (ln x)^C` — the Siegel–Walfisz admissible range.
    pub fn q_admissible_at(&self, x: u64) -> bool {
        self.cls.q() as f64 <= (x as f64).ln().powf(self.c)
    }
}

/// One row of a `psi` residual scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub x: u64,
    pub psi: f64,
    /// `x / phi(q)`.
    pub main: f64,
    /// `psi - main`.
    pub residual: f64,
    /// `|r| phi(q) (ln x)^B / x`.
    pub sw_norm: f64,
    /// `|r| / (sqrt(x) (ln x)^2)`.
    pub rh_norm: f64,
    /// `|r| sqrt(q) / x^{1/2 + eps}`.
    pub mont_norm: f64,
    /// `q <= (ln x)^C` at this row.
    pub q_admissible: bool,
}

/// A full `psi` scan: config echo plus one row per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub config: ScanConfig,
    pub rows: Vec<ScanRow>,
}

/// One row of a Möbius-sum residual scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusScanRow {
    pub x: u64,
    /// `M(x; q, a)`, exact.
    pub sum: i64,
    /// `|r| (ln x)^D / x`.
    pub log_norm: f64,
    /// `|r| / sqrt(x)`.
    pub sqrt_norm: f64,
    pub q_admissible: bool,
}

/// A full Möbius scan.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusScanTable {
    pub config: ScanConfig,
    pub rows: Vec<MobiusScanRow>,
}

/// Exact `psi` residuals across `cfg.x_grid`, normalized three ways.
pub fn residual_scan(cfg: &ScanConfig, opts: &SweepOptions) -> Result<ScanTable> {
    let points = chebyshev_checkpoints(cfg.x_grid(), cfg.cls(), opts)?;
    let q = cfg.cls().q() as f64;
    let rows = points
        .iter()
        .map(|p| {
            let x = p.x as f64;
            let r = p.residual.abs();
            ScanRow {
                x: p.x,
                psi: p.psi,
                main: p.main,
                residual: p.residual,
                sw_norm: r * cfg.cls().phi() as f64 * x.ln().powf(cfg.b()) / x,
                rh_norm: r / (x.sqrt() * x.ln() * x.ln()),
                mont_norm: r * q.sqrt() / x.powf(0.5 + cfg.epsilon()),
                q_admissible: cfg.q_admissible_at(p.x),
            }
        })
        .collect();
    Ok(ScanTable {
        config: cfg.clone(),
        rows,
    })
}

/// Exact `M(x; q, a)` across `cfg.x_grid`, under both decay normalizations.
pub fn mobius_residual_scan(cfg: &ScanConfig, opts: &SweepOptions) -> Result<MobiusScanTable> {
    let sums = mobius_progression_checkpoints(cfg.x_grid(), cfg.cls(), opts)?;
    let rows = cfg
        .x_grid()
        .iter()
        .zip(&sums)
        .map(|(&x, &sum)| {
            let xf = x as f64;
            let r = (sum as f64).abs();
            MobiusScanRow {
                x,
                sum,
                log_norm: r * xf.ln().powf(cfg.d()) / xf,
                sqrt_norm: r / xf.sqrt(),
                q_admissible: cfg.q_admissible_at(x),
            }
        })
        .collect();
    Ok(MobiusScanTable {
        config: cfg.clone(),
        rows,
    })
}

/// Cap on quadrature refinement.
pub const MAX_QUAD_NODES: usize = 1 << 17;

/// Result of the partial-summation estimate of `pi(x; q, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiEstimate {
    pub x: u64,
    pub q: u64,
    pub a: u64,
    /// `theta(x)/ln x + int_2^x theta(t)/(t ln^2 t) dt` — the estimate.
    pub theta_route: f64,
    /// Same formula with `psi`, carrying the prime-power excess.
    pub psi_route: f64,
    /// `psi_route - theta_route` (positive; roughly `theta(sqrt x)/ln x`).
    pub route_gap: f64,
    /// `|I_N - I_{N/2}|` for the theta integral at the accepted resolution.
    pub quad_error: f64,
    /// Trapezoid panel count actually used.
    pub nodes: usize,
}

fn trapezoid(values: &[f64], h: f64, stride: usize) -> f64 {
    let pts: Vec<f64> = values.iter().copied().step_by(stride).collect();
    let mut acc = KahanSum::new();
    for w in pts.windows(2) {
        acc += w[0] + w[1];
    }
    acc.value() * (h * stride as f64) / 2.0
}

/// Estimate `pi(x; q, a)` by Abel summation against exact `theta`/`psi`
/// samples.
///
/// The integral `int_2^x theta(t)/(t ln^2 t) dt` becomes
/// `int_{ln 2}^{ln x} theta(e^u)/u^2 du` and is evaluated by the trapezoid
/// rule on a uniform `u` grid with `theta` sampled exactly at
/// `t = floor(e^u)` (endpoints pinned to 2 and `x`). Refinement quadruples
/// the panel count until the `|I_N - I_{N/2}|` estimate drops to half a
/// count, up to [`MAX_QUAD_NODES`].
pub fn pi_from_psi(x: u64, cls: &ProgressionClass, grid_points: usize) -> Result<PiEstimate> {
    if x < 3 {
        return Err(Error::InvalidConfig(format!(
            "pi_from_psi needs x >= 3, got {x}"
        )));
    }
    if grid_points < 16 {
        return Err(Error::InvalidConfig(format!(
            "pi_from_psi needs grid_points >= 16, got {grid_points}"
        )));
    }
    if x >= RANGE_CAP {
        return Err(Error::RangeCap { lo: 1, hi: x });
    }

    let u0 = 2f64.ln();
    let u1 = (x as f64).ln();
    let mut nodes = grid_points.next_multiple_of(2);
    loop {
        let h = (u1 - u0) / nodes as f64;
        // Sample points t_i = floor(e^{u_i}), clamped to [2, x] and with the
        // endpoints pinned exactly.
        let ts: Vec<u64> = (0..=nodes)
            .map(|i| {
                if i == 0 {
                    2
                } else if i == nodes {
                    x
                } else {
                    ((u0 + i as f64 * h).exp().floor() as u64).clamp(2, x)
                }
            })
            .collect();
        let mut unique = ts.clone();
        unique.dedup(); // ts is nondecreasing
        let samples = chebyshev_checkpoints(&unique, cls, &SweepOptions::default())?;
        let theta_of = |t: u64| samples[unique.binary_search(&t).unwrap()].theta;
        let psi_of = |t: u64| samples[unique.binary_search(&t).unwrap()].psi;

        let f_theta: Vec<f64> = ts
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let u = u0 + i as f64 * h;
                theta_of(t) / (u * u)
            })
            .collect();
        let i_full = trapezoid(&f_theta, h, 1);
        let i_half = trapezoid(&f_theta, h, 2);
        let quad_error = (i_full - i_half).abs();

        if quad_error <= 0.5 {
            let f_psi: Vec<f64> = ts
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    let u = u0 + i as f64 * h;
                    psi_of(t) / (u * u)
                })
                .collect();
            let theta_route = theta_of(x) / u1 + i_full;
            let psi_route = psi_of(x) / u1 + trapezoid(&f_psi, h, 1);
            return Ok(PiEstimate {
                x,
                q: cls.q(),
                a: cls.a(),
                theta_route,
                psi_route,
                route_gap: psi_route - theta_route,
                quad_error,
                nodes,
            });
        }
        if nodes >= MAX_QUAD_NODES {
            return Err(Error::QuadratureTooCoarse {
                estimate: quad_error,
                nodes,
            });
        }
        nodes = (nodes * 4).min(MAX_QUAD_NODES);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::progression::{pi_direct, psi_direct};

    fn cls(q: u64, a: u64) -> ProgressionClass {
        ProgressionClass::new(q, a).unwrap()
    }

    #[test]
    fn config_validation() {
        let grid = vec![100u64, 1000, 10_000];
        assert!(ScanConfig::new(cls(3, 1), grid.clone()).is_ok());
        // B > C + 1 violated.
        let err =
            ScanConfig::with_exponents(cls(3, 1), grid.clone(), 3.0, 2.0, 2.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)), "{err}");
        // Grid starts too low.
        assert!(matches!(
            ScanConfig::new(cls(3, 1), vec![99, 1000]),
            Err(Error::InvalidConfig(_))
        ));
        // Not ascending.
        assert!(matches!(
            ScanConfig::new(cls(3, 1), vec![1000, 1000]),
            Err(Error::InvalidConfig(_))
        ));
        // Non-coprime class.
        let nc = ProgressionClass::any_residue(9, 6).unwrap();
        assert!(matches!(
            ScanConfig::new(nc, grid),
            Err(Error::NotCoprime { .. })
        ));
        // Negative epsilon.
        assert!(matches!(
            ScanConfig::with_exponents(cls(3, 1), vec![100, 200], 3.0, 1.0, 2.0, -0.5),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn scan_row_columns_recompute() {
        let cfg = ScanConfig::new(cls(3, 1), vec![100, 1000, 20_000]).unwrap();
        let table = residual_scan(&cfg, &SweepOptions::default()).unwrap();
        assert_eq!(table.rows.len(), 3);
        for row in &table.rows {
            let x = row.x as f64;
            let psi = psi_direct(row.x, cfg.cls()).unwrap().psi;
            assert_eq!(row.psi.to_bits(), psi.to_bits());
            assert!((row.main - x / 2.0).abs() < 1e-12);
            assert!((row.residual - (row.psi - row.main)).abs() < 1e-12);
            // Scaling coherence: invert each normalization back to |r|.
            let r = row.residual.abs();
            let back_sw = row.sw_norm * x / (2.0 * x.ln().powf(cfg.b()));
            assert!((back_sw - r).abs() <= 1e-12 * r.max(1.0), "x = {}", row.x);
            let back_rh = row.rh_norm * x.sqrt() * x.ln() * x.ln();
            assert!((back_rh - r).abs() <= 1e-12 * r.max(1.0));
            let back_mont = row.mont_norm * x.powf(0.5 + cfg.epsilon()) / 3f64.sqrt();
            assert!((back_mont - r).abs() <= 1e-12 * r.max(1.0));
        }
    }

    #[test]
    fn whole_line_scan_reduces_to_psi_minus_x() {
        let cfg = ScanConfig::new(cls(1, 0), vec![100, 5000]).unwrap();
        let table = residual_scan(&cfg, &SweepOptions::default()).unwrap();
        for row in &table.rows {
            assert_eq!(row.main, row.x as f64);
            let psi = psi_direct(row.x, cfg.cls()).unwrap().psi;
            assert!((row.residual - (psi - row.x as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn admissibility_flag_tracks_c() {
        // ln(100) ≈ 4.6: q = 3 admissible at C = 1, q = 7 not.
        let cfg = ScanConfig::new(cls(3, 1), vec![100]).unwrap();
        assert!(residual_scan(&cfg, &SweepOptions::default()).unwrap().rows[0].q_admissible);
        let cfg7 = ScanConfig::new(cls(7, 2), vec![100]).unwrap();
        assert!(!residual_scan(&cfg7, &SweepOptions::default()).unwrap().rows[0].q_admissible);
        // With C = 2 the range (ln 100)^2 ≈ 21 admits q = 7 (B raised to keep
        // B > C + 1).
        let cfg7 = ScanConfig::with_exponents(cls(7, 2), vec![100], 4.0, 2.0, 2.0, 0.0).unwrap();
        assert!(residual_scan(&cfg7, &SweepOptions::default()).unwrap().rows[0].q_admissible);
    }

    #[test]
    fn mobius_scan_rows() {
        let cfg = ScanConfig::new(cls(3, 1), vec![100, 1000, 10_000]).unwrap();
        let table = mobius_residual_scan(&cfg, &SweepOptions::default()).unwrap();
        for row in &table.rows {
            let direct = crate::mertens::mobius_progression_sum(row.x, cfg.cls()).unwrap();
            assert_eq!(row.sum, direct);
            let xf = row.x as f64;
            let r = (row.sum as f64).abs();
            assert!((row.log_norm - r * xf.ln().powf(2.0) / xf).abs() < 1e-12);
            assert!((row.sqrt_norm - r / xf.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn epsilon_weakens_montgomery_norm() {
        let strict = ScanConfig::new(cls(3, 1), vec![10_000]).unwrap();
        let eased =
            ScanConfig::with_exponents(cls(3, 1), vec![10_000], 3.0, 1.0, 2.0, 0.25).unwrap();
        let opts = SweepOptions::default();
        let s = residual_scan(&strict, &opts).unwrap().rows[0].mont_norm;
        let e = residual_scan(&eased, &opts).unwrap().rows[0].mont_norm;
        assert!(e < s, "{e} vs {s}");
    }

    #[test]
    fn pi_from_psi_small_points() {
        let whole = cls(1, 0);
        let est = pi_from_psi(3, &whole, 16).unwrap();
        assert!((est.theta_route - 2.0).abs() <= 1.0, "{est:?}");
        let est = pi_from_psi(100, &whole, 64).unwrap();
        assert!((est.theta_route - 25.0).abs() <= 1.0, "{est:?}");
        assert!(est.route_gap > 0.0);
    }

    #[test]
    fn pi_from_psi_matches_pi_direct_within_estimate() {
        for (x, q, a, grid) in [(10_000u64, 1u64, 0u64, 128usize), (100_000, 3, 1, 256)] {
            let c = cls(q, a);
            let est = pi_from_psi(x, &c, grid).unwrap();
            let truth = pi_direct(x, &c).unwrap() as f64;
            let err = (est.theta_route - truth).abs();
            assert!(
                err <= est.quad_error.max(1.0),
                "x={x} q={q}: err {err} vs allowance {}",
                est.quad_error.max(1.0)
            );
            assert!(est.route_gap > 0.0, "x={x} q={q}: {est:?}");
        }
    }

    #[test]
    fn pi_from_psi_refines_when_coarse() {
        let est = pi_from_psi(1_000_000, &cls(1, 0), 16).unwrap();
        assert!(est.nodes > 16, "refinement expected, got {est:?}");
        assert!(est.quad_error <= 0.5);
        let truth = pi_direct(1_000_000, &cls(1, 0)).unwrap() as f64;
        assert!((est.theta_route - truth).abs() / truth < 0.01);
    }

    #[test]
    fn pi_from_psi_rejects_bad_inputs() {
        assert!(matches!(
            pi_from_psi(2, &cls(1, 0), 64),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            pi_from_psi(100, &cls(1, 0), 8),
            Err(Error::InvalidConfig(_))
        ));
    }
}
