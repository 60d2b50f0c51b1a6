//! Output plumbing: 10-significant-digit numeric formatting, the
//! `mc_results.csv` schema (writer and reader), and the run manifest.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use ginibias::{Family, MCConfig, MCReport};

/// Formats with 10 significant digits, plain decimal inside
/// [1e-4, 1e10) and scientific notation outside (the `%.10g` convention).
pub fn fmt_g10(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.9e}");
    let exp: i32 = sci[sci.find('e').expect("scientific format") + 1..]
        .parse()
        .expect("valid exponent");
    if (-4..10).contains(&exp) {
        format!("{x:.*}", (9 - exp).max(0) as usize)
    } else {
        sci
    }
}

pub const MC_CSV_HEADER: &str =
    "family,param,n,estimator,relbias,rmse,mc_se,degenerate_count,seed_digest";

/// Serializes a report into the `mc_results.csv` byte format: one row per
/// cell and estimator, parameters in grid order, uncorrected first.
pub fn mc_csv(report: &MCReport) -> String {
    let mut out = String::new();
    out.push_str(MC_CSV_HEADER);
    out.push('\n');
    for cell in &report.cells {
        let digest = ginibias::derive_replication_seed(
            report.config.base_seed,
            cell.family,
            cell.param_index,
            cell.n,
            0,
        );
        for (name, stats) in [
            ("uncorrected", &cell.uncorrected),
            ("corrected", &cell.corrected),
        ] {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{:016x}",
                cell.family.name(),
                fmt_g10(cell.param),
                cell.n,
                name,
                fmt_g10(stats.relbias),
                fmt_g10(stats.rmse),
                fmt_g10(stats.mc_se),
                cell.degenerate_count,
                digest,
            )
            .expect("write to string");
        }
    }
    out
}

/// One parsed row of `mc_results.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct McCsvRow {
    pub family: String,
    pub param: f64,
    pub n: usize,
    pub corrected: bool,
    pub relbias: f64,
    pub rmse: f64,
    pub mc_se: f64,
    pub degenerate_count: usize,
}

#[derive(Debug)]
pub struct CsvError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for CsvError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

fn field_err(line: usize, field: &str, value: &str) -> CsvError {
    CsvError {
        line,
        message: format!("cannot parse {field} from '{value}'"),
    }
}

/// Parses `mc_results.csv` content; rejects bad headers, short rows, and
/// unparsable fields with a line diagnostic.
pub fn parse_mc_csv(text: &str) -> Result<Vec<McCsvRow>, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == MC_CSV_HEADER => {}
        Some((_, header)) => {
            return Err(CsvError {
                line: 1,
                message: format!("unexpected header '{}'", header.trim()),
            })
        }
        None => {
            return Err(CsvError {
                line: 1,
                message: "empty file".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 9 {
            return Err(CsvError {
                line,
                message: format!("expected 9 fields, found {}", fields.len()),
            });
        }
        let corrected = match fields[3] {
            "uncorrected" => false,
            "corrected" => true,
            other => return Err(field_err(line, "estimator", other)),
        };
        rows.push(McCsvRow {
            family: fields[0].to_string(),
            param: fields[1]
                .parse()
                .map_err(|_| field_err(line, "param", fields[1]))?,
            n: fields[2]
                .parse()
                .map_err(|_| field_err(line, "n", fields[2]))?,
            corrected,
            relbias: fields[4]
                .parse()
                .map_err(|_| field_err(line, "relbias", fields[4]))?,
            rmse: fields[5]
                .parse()
                .map_err(|_| field_err(line, "rmse", fields[5]))?,
            mc_se: fields[6]
                .parse()
                .map_err(|_| field_err(line, "mc_se", fields[6]))?,
            degenerate_count: fields[7]
                .parse()
                .map_err(|_| field_err(line, "degenerate_count", fields[7]))?,
        });
    }
    if rows.is_empty() {
        return Err(CsvError {
            line: 1,
            message: "no data rows".into(),
        });
    }
    Ok(rows)
}

/// Run provenance written next to every Monte Carlo result set.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_digest: String,
    pub tool_version: String,
    pub base_seed: u64,
    pub timestamp: String,
}

impl RunManifest {
    pub fn for_mc(config: &MCConfig) -> Self {
        Self {
            command: "mc".into(),
            config_digest: config_digest(config),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            base_seed: config.base_seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

/// Digest of the parsed configuration: stable across runs, sensitive to
/// every semantic field (floats hashed by bit pattern).
pub fn config_digest(config: &MCConfig) -> String {
    let mut canonical = String::new();
    write!(canonical, "family={};params=", config.family.name()).unwrap();
    for p in &config.params {
        write!(canonical, "{:016x},", p.to_bits()).unwrap();
    }
    canonical.push_str(";ns=");
    for n in &config.sample_sizes {
        write!(canonical, "{n},").unwrap();
    }
    write!(
        canonical,
        ";replications={};seed={};clip={}",
        config.replications, config.base_seed, config.clip_corrected
    )
    .unwrap();
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        write!(hex, "{byte:02x}").unwrap();
    }
    hex
}

/// Series parameter label per family ("lambda", "p", or "alpha").
pub fn param_symbol(family: &str) -> &'static str {
    match family {
        f if f == Family::Poisson.name() => "lambda",
        f if f == Family::Geometric.name() => "p",
        _ => "alpha",
    }
}
