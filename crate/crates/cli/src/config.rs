//! Flat key-value Monte Carlo configuration files.
//!
//! Grammar: one `key = value` pair per line; `#` starts a comment; blank
//! lines are skipped. Keys: `family` (poisson|geometric|gamma), `params`
//! (comma-separated reals), `ns` (comma-separated sample sizes ≥ 2),
//! `replications`, `seed`, and optional `clip_corrected` (true|false,
//! default false).

use std::collections::BTreeMap;

use ginibias::{Family, MCConfig};

#[derive(Debug)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: Some(line),
        message: message.into(),
    }
}

fn missing(key: &str) -> ConfigError {
    ConfigError {
        line: None,
        message: format!("missing required key '{key}'"),
    }
}

pub fn parse_config(text: &str) -> Result<MCConfig, ConfigError> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(
                line_no,
                format!("expected 'key = value', found '{line}'"),
            ));
        };
        let key = key.trim();
        let value = value.trim();
        let known = [
            "family",
            "params",
            "ns",
            "replications",
            "seed",
            "clip_corrected",
        ];
        if !known.contains(&key) {
            return Err(err(line_no, format!("unknown key '{key}'")));
        }
        if entries.insert(key, (line_no, value)).is_some() {
            return Err(err(line_no, format!("duplicate key '{key}'")));
        }
    }

    let (family_line, family_text) = entries.remove("family").ok_or_else(|| missing("family"))?;
    let family: Family = family_text
        .parse()
        .map_err(|e| err(family_line, format!("{e}")))?;

    let (params_line, params_text) = entries.remove("params").ok_or_else(|| missing("params"))?;
    let params = parse_list::<f64>(params_text)
        .map_err(|bad| err(params_line, format!("cannot parse parameter '{bad}'")))?;

    let (ns_line, ns_text) = entries.remove("ns").ok_or_else(|| missing("ns"))?;
    let sample_sizes = parse_list::<usize>(ns_text)
        .map_err(|bad| err(ns_line, format!("cannot parse sample size '{bad}'")))?;

    let (reps_line, reps_text) = entries
        .remove("replications")
        .ok_or_else(|| missing("replications"))?;
    let replications: usize = reps_text.parse().map_err(|_| {
        err(
            reps_line,
            format!("cannot parse replications '{reps_text}'"),
        )
    })?;

    let (seed_line, seed_text) = entries.remove("seed").ok_or_else(|| missing("seed"))?;
    let base_seed: u64 = seed_text
        .parse()
        .map_err(|_| err(seed_line, format!("cannot parse seed '{seed_text}'")))?;

    let clip_corrected = match entries.remove("clip_corrected") {
        None => false,
        Some((line, "true")) if line > 0 => true,
        Some((_, "false")) => false,
        Some((line, other)) => {
            return Err(err(
                line,
                format!("clip_corrected must be true or false, found '{other}'"),
            ))
        }
    };

    let config = MCConfig {
        family,
        params,
        sample_sizes,
        replications,
        base_seed,
        clip_corrected,
    };
    config.validate().map_err(|e| ConfigError {
        line: None,
        message: format!("{e}"),
    })?;
    Ok(config)
}

fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| s.to_string()))
        .collect()
}
