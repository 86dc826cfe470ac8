//! Table serialization and flag-value parsing.
//!
//! Both output formats are deterministic: CSV renders floats with Rust's
//! shortest round-trip `Display`, and JSON goes through `serde_json`, which
//! uses the same shortest representation. Field names and column order are
//! fixed per subcommand by the row structs in `main.rs`.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

/// Exit status classification: usage errors exit 2, computation errors 1.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Run(String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn run(msg: impl Into<String>) -> Self {
        Self::Run(msg.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Parse a nonnegative integer flag, accepting scientific notation (`1e6`).
pub fn parse_magnitude(s: &str) -> Result<u64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = t.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !f.is_finite() || f < 0.0 {
        return Err(format!("`{s}` is not a nonnegative integer"));
    }
    if f.fract() != 0.0 {
        return Err(format!("`{s}` is not an integer"));
    }
    if f >= u64::MAX as f64 {
        return Err(format!("`{s}` exceeds the supported range"));
    }
    Ok(f as u64)
}

/// Echo of the parsed experiment parameters, embedded in JSON output.
///
/// Execution details that cannot change a result (thread count) are
/// deliberately absent so that equal configs imply equal outputs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_n: Option<u64>,
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl ConfigEcho {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }
}

/// One output row: a fixed CSV header plus the rendered cells.
pub trait CsvRow {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    config: &'a ConfigEcho,
    rows: &'a [R],
    version: &'a str,
}

pub fn render_csv<R: CsvRow>(rows: &[R]) -> String {
    let mut text = R::HEADER.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.fields().join(","));
        text.push('\n');
    }
    text
}

pub fn render_json<R: Serialize>(config: &ConfigEcho, rows: &[R]) -> Result<String, Failure> {
    let doc = Envelope {
        config,
        rows,
        version: env!("CARGO_PKG_VERSION"),
    };
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Failure::run(format!("serializing output: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn render<R: CsvRow + Serialize>(
    format: Format,
    config: &ConfigEcho,
    rows: &[R],
) -> Result<String, Failure> {
    match format {
        Format::Csv => Ok(render_csv(rows)),
        Format::Json => render_json(config, rows),
    }
}

/// Write `text` to `--out` if given, else stdout.
pub fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::run(format!("writing {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::run(format!("writing stdout: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn magnitude_accepts_plain_and_scientific() {
        assert_eq!(parse_magnitude("12345").unwrap(), 12345);
        assert_eq!(parse_magnitude("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_magnitude("2.5e3").unwrap(), 2500);
        assert_eq!(parse_magnitude("1E4").unwrap(), 10_000);
    }

    #[test]
    fn magnitude_rejects_junk() {
        assert!(parse_magnitude("abc").is_err());
        assert!(parse_magnitude("-5").is_err());
        assert!(parse_magnitude("1.23").is_err());
        assert!(parse_magnitude("inf").is_err());
        assert!(parse_magnitude("1e300").is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = ConfigEcho {
            command: "scan".into(),
            q: Some(3),
            a: Some(1),
            grid: Some(vec![100, 1000]),
            b: Some(3.0),
            c: Some(1.0),
            format: "json".into(),
            ..ConfigEcho::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ConfigEcho = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn csv_floats_round_trip() {
        struct R(f64);
        impl CsvRow for R {
            const HEADER: &'static [&'static str] = &["v"];
            fn fields(&self) -> Vec<String> {
                vec![fmt_f64(self.0)]
            }
        }
        let text = render_csv(&[R(0.1), R(1.0 / 3.0)]);
        let mut lines = text.lines().skip(1);
        assert_eq!(lines.next().unwrap().parse::<f64>().unwrap(), 0.1);
        assert_eq!(lines.next().unwrap().parse::<f64>().unwrap(), 1.0 / 3.0);
    }
}
