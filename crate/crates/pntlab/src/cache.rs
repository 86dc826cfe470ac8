//! Optional on-disk cache for sieved segments.
//!
//! A cached segment is a pair of files in one flat directory:
//!
//! * `<kind>-<lo>-<hi>.bin` — the payload;
//! * `<kind>-<lo>-<hi>.json` — a manifest `{ "lo", "hi", "kind", "version" }`.
//!
//! Möbius payloads are one signed byte per `n` in `[lo, hi)`. Von Mangoldt
//! payloads are nine bytes per `n`: the prime `p` as little-endian `u64`
//! followed by the exponent `m` as one byte, with `p = 0` marking entries
//! where `Lambda(n) = 0`.
//!
//! Loads verify the manifest against the requested window and the payload
//! length against the manifest before handing data back; a missing segment
//! is `Ok(None)`, a damaged one is an error. The sweep drivers consume the
//! cache through [`SweepOptions`], which treats damaged segments as misses
//! and re-sieves them, so cache state can never change a numeric result.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::DEFAULT_SEGMENT_LEN;
use crate::sieve::{mangoldt_segment, mobius_segment, MangoldtTable, MobiusTable, PrimeBasis};

/// Bumped when the payload layout changes; manifests must match exactly.
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Which sieve a segment belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Mobius,
    Mangoldt,
}

impl SegmentKind {
    fn stem(self) -> &'static str {
        match self {
            SegmentKind::Mobius => "mobius",
            SegmentKind::Mangoldt => "mangoldt",
        }
    }
}

/// Sidecar metadata stored next to each payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentManifest {
    pub lo: u64,
    pub hi: u64,
    pub kind: SegmentKind,
    pub version: u32,
}

/// Handle to a cache directory.
#[derive(Debug, Clone)]
pub struct SegmentCache {
    dir: PathBuf,
}

impl SegmentCache {
    /// Open (creating if necessary) a cache directory.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn bin_path(&self, kind: SegmentKind, lo: u64, hi: u64) -> PathBuf {
        self.dir.join(format!("{}-{lo}-{hi}.bin", kind.stem()))
    }

    fn manifest_path(&self, kind: SegmentKind, lo: u64, hi: u64) -> PathBuf {
        self.dir.join(format!("{}-{lo}-{hi}.json", kind.stem()))
    }

    /// Read and validate the manifest for a segment; `Ok(None)` if absent.
    fn read_manifest(&self, kind: SegmentKind, lo: u64, hi: u64) -> Result<Option<PathBuf>> {
        let path = self.manifest_path(kind, lo, hi);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let manifest: SegmentManifest = serde_json::from_str(&text)?;
        let expect = SegmentManifest {
            lo,
            hi,
            kind,
            version: CACHE_FORMAT_VERSION,
        };
        if manifest != expect {
            return Err(Error::CacheManifest {
                path,
                reason: format!("manifest {manifest:?} does not describe segment {expect:?}"),
            });
        }
        Ok(Some(self.bin_path(kind, lo, hi)))
    }

    fn write_manifest(&self, kind: SegmentKind, lo: u64, hi: u64) -> Result<()> {
        let manifest = SegmentManifest {
            lo,
            hi,
            kind,
            version: CACHE_FORMAT_VERSION,
        };
        let mut text = serde_json::to_string(&manifest)?;
        text.push('\n');
        fs::write(self.manifest_path(kind, lo, hi), text)?;
        Ok(())
    }

    /// Persist a Möbius segment (payload first, manifest last, so a crash
    /// mid-write never leaves a manifest pointing at a short payload).
    pub fn store_mobius(&self, table: &MobiusTable) -> Result<()> {
        let (lo, hi) = (table.lo(), table.hi());
        let bytes: Vec<u8> = table.values().iter().map(|&v| v as u8).collect();
        fs::write(self.bin_path(SegmentKind::Mobius, lo, hi), bytes)?;
        self.write_manifest(SegmentKind::Mobius, lo, hi)
    }

    /// Load a Möbius segment; `Ok(None)` when it has never been stored.
    pub fn load_mobius(&self, lo: u64, hi: u64) -> Result<Option<MobiusTable>> {
        let Some(bin) = self.read_manifest(SegmentKind::Mobius, lo, hi)? else {
            return Ok(None);
        };
        let bytes = fs::read(&bin)?;
        let expect_len = (hi - lo) as usize;
        if bytes.len() != expect_len {
            return Err(Error::CacheCorrupt {
                path: bin,
                reason: format!("payload is {} bytes, expected {expect_len}", bytes.len()),
            });
        }
        let mut values = Vec::with_capacity(expect_len);
        for (i, &b) in bytes.iter().enumerate() {
            let v = b as i8;
            if !(-1..=1).contains(&v) {
                return Err(Error::CacheCorrupt {
                    path: bin,
                    reason: format!("mu value {v} at offset {i} is outside -1..=1"),
                });
            }
            values.push(v);
        }
        Ok(Some(MobiusTable::from_raw(lo, values)))
    }

    /// Persist a von Mangoldt segment.
    pub fn store_mangoldt(&self, table: &MangoldtTable) -> Result<()> {
        let (lo, hi) = (table.lo(), table.hi());
        let (base, exp) = table.columns();
        let mut bytes = Vec::with_capacity(base.len() * 9);
        for i in 0..base.len() {
            bytes.extend_from_slice(&base[i].to_le_bytes());
            bytes.push(exp[i]);
        }
        fs::write(self.bin_path(SegmentKind::Mangoldt, lo, hi), bytes)?;
        self.write_manifest(SegmentKind::Mangoldt, lo, hi)
    }

    /// Load a von Mangoldt segment; `Ok(None)` when it has never been stored.
    pub fn load_mangoldt(&self, lo: u64, hi: u64) -> Result<Option<MangoldtTable>> {
        let Some(bin) = self.read_manifest(SegmentKind::Mangoldt, lo, hi)? else {
            return Ok(None);
        };
        let bytes = fs::read(&bin)?;
        let expect_len = (hi - lo) as usize * 9;
        if bytes.len() != expect_len {
            return Err(Error::CacheCorrupt {
                path: bin,
                reason: format!("payload is {} bytes, expected {expect_len}", bytes.len()),
            });
        }
        let n = (hi - lo) as usize;
        let mut base = Vec::with_capacity(n);
        let mut exp = Vec::with_capacity(n);
        for rec in bytes.chunks_exact(9) {
            base.push(u64::from_le_bytes(rec[..8].try_into().unwrap()));
            exp.push(rec[8]);
        }
        Ok(Some(MangoldtTable::from_raw(lo, base, exp)))
    }

    /// Load a Möbius segment, sieving and storing it on a miss.
    /// Returns the table and whether it came from disk.
    pub fn ensure_mobius(
        &self,
        basis: &PrimeBasis,
        lo: u64,
        hi: u64,
    ) -> Result<(MobiusTable, bool)> {
        if let Some(t) = self.load_mobius(lo, hi)? {
            return Ok((t, true));
        }
        let t = mobius_segment(basis, lo, hi);
        self.store_mobius(&t)?;
        Ok((t, false))
    }

    /// Load a von Mangoldt segment, sieving and storing it on a miss.
    pub fn ensure_mangoldt(
        &self,
        basis: &PrimeBasis,
        lo: u64,
        hi: u64,
    ) -> Result<(MangoldtTable, bool)> {
        if let Some(t) = self.load_mangoldt(lo, hi)? {
            return Ok((t, true));
        }
        let t = mangoldt_segment(basis, lo, hi);
        self.store_mangoldt(&t)?;
        Ok((t, false))
    }
}

/// Execution knobs threaded through every segment sweep.
///
/// `segment_len` fixes the segmentation (and therefore the exact sequence of
/// partial sums); `threads` only chooses how many workers chew on that fixed
/// segmentation, so it never changes a result. When `cache` is set, sweeps
/// read segments through it — a damaged or missing segment is silently
/// re-sieved.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions<'a> {
    pub threads: usize,
    pub segment_len: u64,
    pub cache: Option<&'a SegmentCache>,
}

impl Default for SweepOptions<'_> {
    fn default() -> Self {
        Self {
            threads: 1,
            segment_len: DEFAULT_SEGMENT_LEN,
            cache: None,
        }
    }
}

impl<'a> SweepOptions<'a> {
    pub fn with_threads(threads: usize) -> Self {
        Self {
            threads: threads.max(1),
            ..Self::default()
        }
    }

    pub fn with_cache(cache: &'a SegmentCache, threads: usize) -> Self {
        Self {
            threads: threads.max(1),
            segment_len: DEFAULT_SEGMENT_LEN,
            cache: Some(cache),
        }
    }

    /// A Möbius table for `[lo, hi)`: cached copy if available and intact,
    /// otherwise sieved on the spot.
    pub fn mobius(&self, basis: &PrimeBasis, lo: u64, hi: u64) -> MobiusTable {
        if let Some(cache) = self.cache {
            if let Ok(Some(t)) = cache.load_mobius(lo, hi) {
                return t;
            }
        }
        mobius_segment(basis, lo, hi)
    }

    /// A von Mangoldt table for `[lo, hi)`, read through the cache likewise.
    pub fn mangoldt(&self, basis: &PrimeBasis, lo: u64, hi: u64) -> MangoldtTable {
        if let Some(cache) = self.cache {
            if let Ok(Some(t)) = cache.load_mangoldt(lo, hi) {
                return t;
            }
        }
        mangoldt_segment(basis, lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{sieve_mangoldt, sieve_mobius};
    use std::fs;

    #[test]
    fn mobius_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SegmentCache::open(dir.path()).unwrap();
        let t = sieve_mobius(1, 5000).unwrap();
        cache.store_mobius(&t).unwrap();
        let back = cache.load_mobius(1, 5000).unwrap().unwrap();
        assert_eq!(t, back);
        assert!(cache.load_mobius(1, 4999).unwrap().is_none());
    }

    #[test]
    fn mangoldt_round_trip_preserves_empty_entries() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SegmentCache::open(dir.path()).unwrap();
        let t = sieve_mangoldt(100, 1100).unwrap();
        cache.store_mangoldt(&t).unwrap();
        let back = cache.load_mangoldt(100, 1100).unwrap().unwrap();
        assert_eq!(t, back);
        assert_eq!(back.entry(100), None);
        assert_eq!(back.entry(128), Some((2, 7)));
    }

    #[test]
    fn manifest_shape_is_stable() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SegmentCache::open(dir.path()).unwrap();
        let t = sieve_mobius(1, 100).unwrap();
        cache.store_mobius(&t).unwrap();
        let text = fs::read_to_string(dir.path().join("mobius-1-100.json")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["lo"], 1);
        assert_eq!(v["hi"], 100);
        assert_eq!(v["kind"], "mobius");
        assert_eq!(v["version"], CACHE_FORMAT_VERSION);
    }

    #[test]
    fn tampered_manifest_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SegmentCache::open(dir.path()).unwrap();
        let t = sieve_mobius(1, 100).unwrap();
        cache.store_mobius(&t).unwrap();
        let path = dir.path().join("mobius-1-100.json");
        let tampered =
            serde_json::json!({"lo": 1, "hi": 100, "kind": "mobius", "version": 999}).to_string();
        fs::write(&path, tampered).unwrap();
        let err = cache.load_mobius(1, 100).unwrap_err();
        assert!(matches!(err, Error::CacheManifest { .. }), "{err}");
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SegmentCache::open(dir.path()).unwrap();
        let t = sieve_mangoldt(1, 100).unwrap();
        cache.store_mangoldt(&t).unwrap();
        let bin = dir.path().join("mangoldt-1-100.bin");
        let bytes = fs::read(&bin).unwrap();
        fs::write(&bin, &bytes[..bytes.len() - 9]).unwrap();
        let err = cache.load_mangoldt(1, 100).unwrap_err();
        assert!(matches!(err, Error::CacheCorrupt { .. }), "{err}");
    }

    #[test]
    fn garbage_mu_value_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SegmentCache::open(dir.path()).unwrap();
        let t = sieve_mobius(1, 50).unwrap();
        cache.store_mobius(&t).unwrap();
        let bin = dir.path().join("mobius-1-50.bin");
        let mut bytes = fs::read(&bin).unwrap();
        bytes[10] = 7;
        fs::write(&bin, bytes).unwrap();
        let err = cache.load_mobius(1, 50).unwrap_err();
        assert!(matches!(err, Error::CacheCorrupt { .. }), "{err}");
    }

    #[test]
    fn ensure_builds_once_then_hits() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SegmentCache::open(dir.path()).unwrap();
        let basis = PrimeBasis::for_window(2000);
        let (t1, hit1) = cache.ensure_mobius(&basis, 1, 2000).unwrap();
        let (t2, hit2) = cache.ensure_mobius(&basis, 1, 2000).unwrap();
        assert!(!hit1);
        assert!(hit2);
        assert_eq!(t1, t2);
        let (m1, mh1) = cache.ensure_mangoldt(&basis, 1, 2000).unwrap();
        let (m2, mh2) = cache.ensure_mangoldt(&basis, 1, 2000).unwrap();
        assert!(!mh1);
        assert!(mh2);
        assert_eq!(m1, m2);
    }

    #[test]
    fn sweep_options_fall_back_to_sieving_on_damage() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SegmentCache::open(dir.path()).unwrap();
        let basis = PrimeBasis::for_window(500);
        let t = sieve_mobius(1, 500).unwrap();
        cache.store_mobius(&t).unwrap();
        // Corrupt the payload; the sweep path must quietly re-sieve.
        let bin = dir.path().join("mobius-1-500.bin");
        let mut bytes = fs::read(&bin).unwrap();
        bytes[0] = 9;
        fs::write(&bin, bytes).unwrap();
        let opts = SweepOptions::with_cache(&cache, 1);
        let got = opts.mobius(&basis, 1, 500);
        assert_eq!(got, t);
    }
}
