//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by range checks, class construction, configuration
/// validation, fits, quadrature, and the segment cache.
#[derive(Debug, Error)]
pub enum Error {
    /// A sieve or sum was requested beyond the global range cap.
    #[error("range [{lo}, {hi}) exceeds the global cap of 2^40")]
    RangeCap { lo: u64, hi: u64 },

    /// An empty or inverted window `[lo, hi)`.
    #[error("invalid window [{lo}, {hi}): lo must satisfy 1 <= lo < hi")]
    EmptyRange { lo: u64, hi: u64 },

    /// Residue class construction with `gcd(a, q) != 1`.
    #[error("residue {a} is not coprime to modulus {q} (gcd = {gcd})")]
    NotCoprime { q: u64, a: u64, gcd: u64 },

    /// Residue class construction with `a >= q` or `q = 0`.
    #[error("invalid residue class {a} mod {q}: need q >= 1 and a < q")]
    InvalidClass { q: u64, a: u64 },

    /// A checkpoint list or grid that is empty, unsorted, or out of range.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A scan configuration that violates an exponent or grid constraint.
    #[error("invalid scan config: {0}")]
    InvalidConfig(String),

    /// All gaps handed to the exponent fit were below the resolution floor.
    #[error("exponent fit is saturated: all gaps are below {floor:e}")]
    SaturatedFit { floor: f64 },

    /// The quadrature refinement loop hit its node cap before converging.
    #[error("quadrature did not converge: error estimate {estimate} with {nodes} nodes")]
    QuadratureTooCoarse { estimate: f64, nodes: usize },

    /// A cache file whose manifest disagrees with the requested segment.
    #[error("cache manifest mismatch at {path}: {reason}")]
    CacheManifest { path: PathBuf, reason: String },

    /// A cache payload whose length disagrees with its manifest.
    #[error("corrupt cache segment at {path}: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("cache manifest is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
