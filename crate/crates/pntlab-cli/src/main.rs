//! `pntlab` — exact Chebyshev/Möbius tables, decompositions, and residual
//! scans from the command line.
//!
//! One subcommand per experiment family; every run with the same parameters
//! and cache state produces byte-identical output. Numeric flags accept
//! scientific notation. `--cache DIR` (or the `PNTLAB_CACHE` env var) points
//! at a segment cache that `sieve` populates and the heavy sweeps read
//! through; caching never changes a value, only how it is obtained.

mod output;

use std::env;
use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pntlab::analysis::{
    self, pi_from_psi, ScanConfig, DEFAULT_B, DEFAULT_C, DEFAULT_D, DEFAULT_EPSILON,
};
use pntlab::cache::{SegmentCache, SweepOptions};
use pntlab::decompose::decompose_psi_with;
use pntlab::identities::verify_identities;
use pntlab::mertens::{fit_log_exponent, mertens_series};
use pntlab::par::segment_bounds;
use pntlab::progression::{chebyshev_checkpoints, ProgressionClass};
use pntlab::sieve::{check_window, PrimeBasis};

use output::{fmt_f64, parse_magnitude, render, write_output, ConfigEcho, CsvRow, Failure, Format};

/// Identity-gap threshold above which `identities` exits nonzero.
const IDENTITY_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "pntlab",
    version,
    about = "Exact prime-counting tables, Mertens sums, and residual scans"
)]
struct Cli {
    /// Worker threads for segment sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Segment cache directory; overrides the PNTLAB_CACHE env var.
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// Output format. `identities` defaults to a one-line summary instead.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Mobius,
    Mangoldt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesArg {
    Mu,
    Mulog,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitSeriesArg {
    Mu,
    Mulog,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve a window into the segment cache (requires a cache directory).
    Sieve {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_parser = parse_magnitude, default_value = "1")]
        lo: u64,
        #[arg(long, value_parser = parse_magnitude)]
        hi: u64,
    },
    /// Chebyshev psi/theta/pi at one point of a progression.
    Psi {
        #[arg(long, value_parser = parse_magnitude)]
        x: u64,
        #[arg(long, value_parser = parse_magnitude, default_value = "1")]
        q: u64,
        #[arg(long, value_parser = parse_magnitude, default_value = "0")]
        a: u64,
    },
    /// pi(x; q, a) by partial summation against exact theta/psi samples.
    Pi {
        #[arg(long, value_parser = parse_magnitude)]
        x: u64,
        #[arg(long, value_parser = parse_magnitude, default_value = "1")]
        q: u64,
        #[arg(long, value_parser = parse_magnitude, default_value = "0")]
        a: u64,
        /// Initial trapezoid panel count (refined automatically).
        #[arg(long, value_parser = parse_magnitude, default_value = "256")]
        grid_points: u64,
    },
    /// Main/error decomposition of psi(x; q, a) at the sqrt threshold.
    Decompose {
        #[arg(long, value_parser = parse_magnitude)]
        x: u64,
        #[arg(long, value_parser = parse_magnitude)]
        q: u64,
        #[arg(long, value_parser = parse_magnitude)]
        a: u64,
    },
    /// Mertens partial sums at checkpoints (limits 0 and -1).
    Mertens {
        #[arg(long, value_delimiter = ',', value_parser = parse_magnitude, required = true)]
        checkpoints: Vec<u64>,
        #[arg(long, value_enum, default_value = "both")]
        series: SeriesArg,
    },
    /// Möbius progression sums with decay normalizations.
    MobiusScan {
        #[arg(long, value_parser = parse_magnitude)]
        q: u64,
        #[arg(long, value_parser = parse_magnitude)]
        a: u64,
        #[arg(long, value_delimiter = ',', value_parser = parse_magnitude, required = true)]
        grid: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_B)]
        b: f64,
        #[arg(long, default_value_t = DEFAULT_C)]
        c: f64,
        #[arg(long, default_value_t = DEFAULT_D)]
        d: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// psi residual scan under the SW/RH/Montgomery normalizations.
    Scan {
        #[arg(long, value_parser = parse_magnitude)]
        q: u64,
        #[arg(long, value_parser = parse_magnitude)]
        a: u64,
        #[arg(long, value_delimiter = ',', value_parser = parse_magnitude, required = true)]
        grid: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_B)]
        b: f64,
        #[arg(long, default_value_t = DEFAULT_C)]
        c: f64,
        #[arg(long, default_value_t = DEFAULT_D)]
        d: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Fit the log-power decay exponent of a Mertens series.
    Fit {
        #[arg(long, value_enum)]
        series: FitSeriesArg,
        #[arg(long, value_delimiter = ',', value_parser = parse_magnitude, required = true)]
        checkpoints: Vec<u64>,
    },
    /// Verify the Möbius-inversion and split identities for all n <= max-n.
    Identities {
        #[arg(long, value_parser = parse_magnitude, default_value = "100000")]
        max_n: u64,
    },
}

#[derive(Serialize)]
struct SieveRow {
    kind: String,
    lo: u64,
    hi: u64,
    segments: usize,
    fresh: usize,
    cached: usize,
}

impl CsvRow for SieveRow {
    const HEADER: &'static [&'static str] = &["kind", "lo", "hi", "segments", "fresh", "cached"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.kind.clone(),
            self.lo.to_string(),
            self.hi.to_string(),
            self.segments.to_string(),
            self.fresh.to_string(),
            self.cached.to_string(),
        ]
    }
}

#[derive(Serialize)]
struct PsiRow {
    x: u64,
    q: u64,
    a: u64,
    psi: f64,
    theta: f64,
    pi: u64,
    main: f64,
    residual: f64,
}

impl CsvRow for PsiRow {
    const HEADER: &'static [&'static str] =
        &["x", "q", "a", "psi", "theta", "pi", "main", "residual"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.x.to_string(),
            self.q.to_string(),
            self.a.to_string(),
            fmt_f64(self.psi),
            fmt_f64(self.theta),
            self.pi.to_string(),
            fmt_f64(self.main),
            fmt_f64(self.residual),
        ]
    }
}

#[derive(Serialize)]
struct PiRow {
    x: u64,
    q: u64,
    a: u64,
    pi_exact: u64,
    theta_route: f64,
    psi_route: f64,
    route_gap: f64,
    quad_error: f64,
    nodes: usize,
}

impl CsvRow for PiRow {
    const HEADER: &'static [&'static str] = &[
        "x",
        "q",
        "a",
        "pi_exact",
        "theta_route",
        "psi_route",
        "route_gap",
        "quad_error",
        "nodes",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            self.x.to_string(),
            self.q.to_string(),
            self.a.to_string(),
            self.pi_exact.to_string(),
            fmt_f64(self.theta_route),
            fmt_f64(self.psi_route),
            fmt_f64(self.route_gap),
            fmt_f64(self.quad_error),
            self.nodes.to_string(),
        ]
    }
}

#[derive(Serialize)]
struct DecomposeRow {
    x: u64,
    q: u64,
    a: u64,
    psi: f64,
    s1: f64,
    s2: f64,
    main_grouped: f64,
    error_grouped: f64,
    identity_gap: f64,
    grouping_gap: f64,
    main_smooth: f64,
}

impl CsvRow for DecomposeRow {
    const HEADER: &'static [&'static str] = &[
        "x",
        "q",
        "a",
        "psi",
        "s1",
        "s2",
        "main_grouped",
        "error_grouped",
        "identity_gap",
        "grouping_gap",
        "main_smooth",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            self.x.to_string(),
            self.q.to_string(),
            self.a.to_string(),
            fmt_f64(self.psi),
            fmt_f64(self.s1),
            fmt_f64(self.s2),
            fmt_f64(self.main_grouped),
            fmt_f64(self.error_grouped),
            fmt_f64(self.identity_gap),
            fmt_f64(self.grouping_gap),
            fmt_f64(self.main_smooth),
        ]
    }
}

#[derive(Serialize)]
struct MertensMuRow {
    y: u64,
    s_mu: f64,
}

impl CsvRow for MertensMuRow {
    const HEADER: &'static [&'static str] = &["y", "s_mu"];
    fn fields(&self) -> Vec<String> {
        vec![self.y.to_string(), fmt_f64(self.s_mu)]
    }
}

#[derive(Serialize)]
struct MertensMulogRow {
    y: u64,
    s_mulog: f64,
}

impl CsvRow for MertensMulogRow {
    const HEADER: &'static [&'static str] = &["y", "s_mulog"];
    fn fields(&self) -> Vec<String> {
        vec![self.y.to_string(), fmt_f64(self.s_mulog)]
    }
}

#[derive(Serialize)]
struct MertensBothRow {
    y: u64,
    s_mu: f64,
    s_mulog: f64,
}

impl CsvRow for MertensBothRow {
    const HEADER: &'static [&'static str] = &["y", "s_mu", "s_mulog"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.y.to_string(),
            fmt_f64(self.s_mu),
            fmt_f64(self.s_mulog),
        ]
    }
}

#[derive(Serialize)]
struct MobiusScanRowOut {
    x: u64,
    sum: i64,
    log_norm: f64,
    sqrt_norm: f64,
    q_admissible: bool,
}

impl CsvRow for MobiusScanRowOut {
    const HEADER: &'static [&'static str] = &["x", "sum", "log_norm", "sqrt_norm", "q_admissible"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.x.to_string(),
            self.sum.to_string(),
            fmt_f64(self.log_norm),
            fmt_f64(self.sqrt_norm),
            self.q_admissible.to_string(),
        ]
    }
}

#[derive(Serialize)]
struct ScanRowOut {
    x: u64,
    psi: f64,
    main: f64,
    residual: f64,
    sw_norm: f64,
    rh_norm: f64,
    mont_norm: f64,
    q_admissible: bool,
}

impl CsvRow for ScanRowOut {
    const HEADER: &'static [&'static str] = &[
        "x",
        "psi",
        "main",
        "residual",
        "sw_norm",
        "rh_norm",
        "mont_norm",
        "q_admissible",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            self.x.to_string(),
            fmt_f64(self.psi),
            fmt_f64(self.main),
            fmt_f64(self.residual),
            fmt_f64(self.sw_norm),
            fmt_f64(self.rh_norm),
            fmt_f64(self.mont_norm),
            self.q_admissible.to_string(),
        ]
    }
}

#[derive(Serialize)]
struct FitRow {
    series: String,
    limit: f64,
    b: f64,
    c: f64,
    points: usize,
}

impl CsvRow for FitRow {
    const HEADER: &'static [&'static str] = &["series", "limit", "b", "c", "points"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.series.clone(),
            fmt_f64(self.limit),
            fmt_f64(self.b),
            fmt_f64(self.c),
            self.points.to_string(),
        ]
    }
}

#[derive(Serialize)]
struct IdentityRow {
    checked: u64,
    max_inversion_gap: f64,
    max_split_gap: f64,
}

impl CsvRow for IdentityRow {
    const HEADER: &'static [&'static str] = &["checked", "max_inversion_gap", "max_split_gap"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.checked.to_string(),
            fmt_f64(self.max_inversion_gap),
            fmt_f64(self.max_split_gap),
        ]
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => process::exit(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            process::exit(2);
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            process::exit(1);
        }
    }
}

/// A coprime progression class, built at validation time so the gcd shows
/// up in usage errors.
fn coprime_class(q: u64, a: u64) -> Result<ProgressionClass, Failure> {
    ProgressionClass::new(q, a).map_err(|e| Failure::usage(e.to_string()))
}

fn validate_ascending(name: &str, xs: &[u64]) -> Result<(), Failure> {
    if xs.is_empty() {
        return Err(Failure::usage(format!("{name} must not be empty")));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::usage(format!(
            "{name} must be strictly increasing"
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    let threads = cli.threads.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let cache_dir: Option<PathBuf> = cli
        .cache
        .clone()
        .or_else(|| env::var_os("PNTLAB_CACHE").map(PathBuf::from));
    let cache: Option<SegmentCache> = match &cache_dir {
        Some(dir) => {
            Some(SegmentCache::open(dir).map_err(|e| Failure::run(format!("opening cache: {e}")))?)
        }
        None => None,
    };
    let opts = match &cache {
        Some(c) => SweepOptions::with_cache(c, threads),
        None => SweepOptions::with_threads(threads),
    };
    let format = cli.format.unwrap_or(Format::Csv);

    let mut echo = ConfigEcho::new("");
    echo.format = format.name().into();
    echo.cache = cache_dir.as_ref().map(|p| p.display().to_string());
    echo.out = cli.out.as_ref().map(|p| p.display().to_string());

    match &cli.command {
        Command::Sieve { kind, lo, hi } => {
            let cache = cache.as_ref().ok_or_else(|| {
                Failure::usage("sieve needs a cache directory (--cache or PNTLAB_CACHE)")
            })?;
            check_window(*lo, *hi).map_err(|e| Failure::usage(e.to_string()))?;
            let basis = PrimeBasis::for_window(*hi);
            let bounds = segment_bounds(*lo, *hi, opts.segment_len);
            let (mut fresh, mut cached) = (0usize, 0usize);
            for &(s_lo, s_hi) in &bounds {
                let from_disk = match kind {
                    KindArg::Mobius => {
                        cache
                            .ensure_mobius(&basis, s_lo, s_hi)
                            .map_err(|e| Failure::run(e.to_string()))?
                            .1
                    }
                    KindArg::Mangoldt => {
                        cache
                            .ensure_mangoldt(&basis, s_lo, s_hi)
                            .map_err(|e| Failure::run(e.to_string()))?
                            .1
                    }
                };
                if from_disk {
                    cached += 1;
                } else {
                    fresh += 1;
                }
            }
            let kind_name = match kind {
                KindArg::Mobius => "mobius",
                KindArg::Mangoldt => "mangoldt",
            };
            echo.command = "sieve".into();
            echo.kind = Some(kind_name.into());
            echo.lo = Some(*lo);
            echo.hi = Some(*hi);
            let rows = [SieveRow {
                kind: kind_name.into(),
                lo: *lo,
                hi: *hi,
                segments: bounds.len(),
                fresh,
                cached,
            }];
            write_output(&cli.out, &render(format, &echo, &rows)?)?;
            Ok(0)
        }
        Command::Psi { x, q, a } => {
            let cls = coprime_class(*q, *a)?;
            echo.command = "psi".into();
            echo.x = Some(*x);
            echo.q = Some(*q);
            echo.a = Some(*a);
            let points = chebyshev_checkpoints(&[*x], &cls, &opts)
                .map_err(|e| Failure::run(e.to_string()))?;
            let p = points[0];
            let rows = [PsiRow {
                x: p.x,
                q: p.q,
                a: p.a,
                psi: p.psi,
                theta: p.theta,
                pi: p.pi_count,
                main: p.main,
                residual: p.residual,
            }];
            write_output(&cli.out, &render(format, &echo, &rows)?)?;
            Ok(0)
        }
        Command::Pi {
            x,
            q,
            a,
            grid_points,
        } => {
            let cls = coprime_class(*q, *a)?;
            if *x < 3 {
                return Err(Failure::usage(format!("pi needs --x >= 3, got {x}")));
            }
            if *grid_points < 16 {
                return Err(Failure::usage(format!(
                    "pi needs --grid-points >= 16, got {grid_points}"
                )));
            }
            echo.command = "pi".into();
            echo.x = Some(*x);
            echo.q = Some(*q);
            echo.a = Some(*a);
            echo.grid_points = Some(*grid_points);
            let est = pi_from_psi(*x, &cls, *grid_points as usize)
                .map_err(|e| Failure::run(e.to_string()))?;
            let exact = chebyshev_checkpoints(&[*x], &cls, &opts)
                .map_err(|e| Failure::run(e.to_string()))?[0]
                .pi_count;
            let rows = [PiRow {
                x: est.x,
                q: est.q,
                a: est.a,
                pi_exact: exact,
                theta_route: est.theta_route,
                psi_route: est.psi_route,
                route_gap: est.route_gap,
                quad_error: est.quad_error,
                nodes: est.nodes,
            }];
            write_output(&cli.out, &render(format, &echo, &rows)?)?;
            Ok(0)
        }
        Command::Decompose { x, q, a } => {
            let cls = coprime_class(*q, *a)?;
            echo.command = "decompose".into();
            echo.x = Some(*x);
            echo.q = Some(*q);
            echo.a = Some(*a);
            let d = decompose_psi_with(*x, &cls, &opts).map_err(|e| Failure::run(e.to_string()))?;
            let rows = [DecomposeRow {
                x: d.x,
                q: d.q,
                a: d.a,
                psi: d.psi_exact,
                s1: d.s1_total,
                s2: d.s2_total,
                main_grouped: d.m_grouped,
                error_grouped: d.e_grouped,
                identity_gap: d.identity_gap,
                grouping_gap: d.grouping_gap,
                main_smooth: d.main_asymptotic,
            }];
            write_output(&cli.out, &render(format, &echo, &rows)?)?;
            Ok(0)
        }
        Command::Mertens {
            checkpoints,
            series,
        } => {
            validate_ascending("--checkpoints", checkpoints)?;
            echo.command = "mertens".into();
            echo.checkpoints = Some(checkpoints.clone());
            echo.series = Some(
                match series {
                    SeriesArg::Mu => "mu",
                    SeriesArg::Mulog => "mulog",
                    SeriesArg::Both => "both",
                }
                .into(),
            );
            let table =
                mertens_series(checkpoints, &opts).map_err(|e| Failure::run(e.to_string()))?;
            let text = match series {
                SeriesArg::Mu => {
                    let rows: Vec<MertensMuRow> = table
                        .checkpoints
                        .iter()
                        .zip(&table.s_mu)
                        .map(|(&y, &s_mu)| MertensMuRow { y, s_mu })
                        .collect();
                    render(format, &echo, &rows)?
                }
                SeriesArg::Mulog => {
                    let rows: Vec<MertensMulogRow> = table
                        .checkpoints
                        .iter()
                        .zip(&table.s_mulog)
                        .map(|(&y, &s_mulog)| MertensMulogRow { y, s_mulog })
                        .collect();
                    render(format, &echo, &rows)?
                }
                SeriesArg::Both => {
                    let rows: Vec<MertensBothRow> = table
                        .checkpoints
                        .iter()
                        .zip(table.s_mu.iter().zip(&table.s_mulog))
                        .map(|(&y, (&s_mu, &s_mulog))| MertensBothRow { y, s_mu, s_mulog })
                        .collect();
                    render(format, &echo, &rows)?
                }
            };
            write_output(&cli.out, &text)?;
            Ok(0)
        }
        Command::MobiusScan {
            q,
            a,
            grid,
            b,
            c,
            d,
            epsilon,
        } => {
            let cls = coprime_class(*q, *a)?;
            let cfg = ScanConfig::with_exponents(cls, grid.clone(), *b, *c, *d, *epsilon)
                .map_err(|e| Failure::usage(e.to_string()))?;
            echo.command = "mobius-scan".into();
            echo.q = Some(*q);
            echo.a = Some(*a);
            echo.grid = Some(grid.clone());
            echo.b = Some(*b);
            echo.c = Some(*c);
            echo.d = Some(*d);
            echo.epsilon = Some(*epsilon);
            let table = analysis::mobius_residual_scan(&cfg, &opts)
                .map_err(|e| Failure::run(e.to_string()))?;
            let rows: Vec<MobiusScanRowOut> = table
                .rows
                .iter()
                .map(|r| MobiusScanRowOut {
                    x: r.x,
                    sum: r.sum,
                    log_norm: r.log_norm,
                    sqrt_norm: r.sqrt_norm,
                    q_admissible: r.q_admissible,
                })
                .collect();
            write_output(&cli.out, &render(format, &echo, &rows)?)?;
            Ok(0)
        }
        Command::Scan {
            q,
            a,
            grid,
            b,
            c,
            d,
            epsilon,
        } => {
            let cls = coprime_class(*q, *a)?;
            let cfg = ScanConfig::with_exponents(cls, grid.clone(), *b, *c, *d, *epsilon)
                .map_err(|e| Failure::usage(e.to_string()))?;
            echo.command = "scan".into();
            echo.q = Some(*q);
            echo.a = Some(*a);
            echo.grid = Some(grid.clone());
            echo.b = Some(*b);
            echo.c = Some(*c);
            echo.d = Some(*d);
            echo.epsilon = Some(*epsilon);
            let table =
                analysis::residual_scan(&cfg, &opts).map_err(|e| Failure::run(e.to_string()))?;
            let rows: Vec<ScanRowOut> = table
                .rows
                .iter()
                .map(|r| ScanRowOut {
                    x: r.x,
                    psi: r.psi,
                    main: r.main,
                    residual: r.residual,
                    sw_norm: r.sw_norm,
                    rh_norm: r.rh_norm,
                    mont_norm: r.mont_norm,
                    q_admissible: r.q_admissible,
                })
                .collect();
            write_output(&cli.out, &render(format, &echo, &rows)?)?;
            Ok(0)
        }
        Command::Fit {
            series,
            checkpoints,
        } => {
            validate_ascending("--checkpoints", checkpoints)?;
            let (name, limit) = match series {
                FitSeriesArg::Mu => ("mu", 0.0),
                FitSeriesArg::Mulog => ("mulog", -1.0),
            };
            echo.command = "fit".into();
            echo.series = Some(name.into());
            echo.checkpoints = Some(checkpoints.clone());
            let table =
                mertens_series(checkpoints, &opts).map_err(|e| Failure::run(e.to_string()))?;
            let values = match series {
                FitSeriesArg::Mu => &table.s_mu,
                FitSeriesArg::Mulog => &table.s_mulog,
            };
            let points: Vec<(f64, f64)> = table
                .checkpoints
                .iter()
                .zip(values)
                .map(|(&y, &v)| (y as f64, v))
                .collect();
            let fit = fit_log_exponent(&points, limit).map_err(|e| Failure::run(e.to_string()))?;
            let rows = [FitRow {
                series: name.into(),
                limit,
                b: fit.b,
                c: fit.c,
                points: points.len(),
            }];
            write_output(&cli.out, &render(format, &echo, &rows)?)?;
            Ok(0)
        }
        Command::Identities { max_n } => {
            echo.command = "identities".into();
            echo.max_n = Some(*max_n);
            let report =
                verify_identities(*max_n, &opts).map_err(|e| Failure::run(e.to_string()))?;
            let worst = report.max_inversion_gap.max(report.max_split_gap);
            let text = match cli.format {
                None => format!(
                    "checked {}, max inversion gap {:.3e}, max split gap {:.3e}\n",
                    report.checked, report.max_inversion_gap, report.max_split_gap
                ),
                Some(f) => {
                    let rows = [IdentityRow {
                        checked: report.checked,
                        max_inversion_gap: report.max_inversion_gap,
                        max_split_gap: report.max_split_gap,
                    }];
                    render(f, &echo, &rows)?
                }
            };
            write_output(&cli.out, &text)?;
            Ok(if worst <= IDENTITY_TOL { 0 } else { 1 })
        }
    }
}
