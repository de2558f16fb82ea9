//! Run configuration: defaults, flat key-value and JSON config files, flag
//! overrides, validation, and the canonical serialization that feeds the
//! provenance hash.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Inclusive numeric grid "start:stop:step"; a step mismatch clamps the
/// final point to stop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::config(format!(
                "grid spec \"{spec}\" must be start:stop:step"
            )));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| {
                p.trim().parse::<f64>().map_err(|_| {
                    CliError::config(format!("grid spec \"{spec}\": \"{p}\" is not a number"))
                })
            })
            .collect::<Result<_, _>>()?;
        let g = GridSpec {
            start: nums[0],
            stop: nums[1],
            step: nums[2],
        };
        g.validate(spec)?;
        Ok(g)
    }

    fn validate(&self, raw: &str) -> Result<(), CliError> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(CliError::config(format!(
                "grid spec \"{raw}\" has non-finite entries"
            )));
        }
        if self.step <= 0.0 {
            return Err(CliError::config(format!(
                "grid spec \"{raw}\": step must be positive"
            )));
        }
        if self.stop <= self.start {
            return Err(CliError::config(format!(
                "grid spec \"{raw}\": stop must exceed start"
            )));
        }
        Ok(())
    }

    /// Materialize the grid, endpoints inclusive.
    pub fn points(&self) -> Vec<f64> {
        let eps = 1e-9 * self.step.max((self.stop - self.start).abs());
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let z = self.start + k as f64 * self.step;
            if z >= self.stop - eps {
                break;
            }
            out.push(z);
            k += 1;
        }
        out.push(self.stop);
        out
    }

    pub fn canonical(&self) -> String {
        format!("{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

fn parse_formats(spec: &str) -> Result<Vec<Format>, CliError> {
    let mut out = Vec::new();
    for token in spec.split(',') {
        let f = match token.trim().to_ascii_lowercase().as_str() {
            "csv" => Format::Csv,
            "json" => Format::Json,
            "svg" => Format::Svg,
            other => {
                return Err(CliError::config(format!(
                    "unknown output format \"{other}\" (expected csv, json, svg)"
                )))
            }
        };
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err(CliError::config("formats list is empty".into()));
    }
    out.sort();
    Ok(out)
}

fn parse_f64_list(spec: &str, what: &str) -> Result<Vec<f64>, CliError> {
    spec.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("{what}: \"{t}\" is not a number")))
        })
        .collect()
}

/// Parsed "n_L,n_R" input state.
fn parse_input_state(token: &str) -> Result<(u32, u32), CliError> {
    let bad = || {
        CliError::config(format!(
            "input state \"{token}\" must be two non-negative integers \"n_L,n_R\""
        ))
    };
    let (l, r) = token.split_once(',').ok_or_else(bad)?;
    let n_l: u32 = l.trim().parse().map_err(|_| bad())?;
    let n_r: u32 = r.trim().parse().map_err(|_| bad())?;
    Ok((n_l, n_r))
}

/// Everything a run needs. Field defaults follow the two-photon scenario at
/// the example coupler rates kappa = 0.25 / cm, gamma = 0.35 / cm.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kappa: f64,
    pub gamma: f64,
    /// Loss values for the `dip` sweep; falls back to `[gamma]`.
    pub gamma_sweep: Option<Vec<f64>>,
    pub truncation: u32,
    pub input: (u32, u32),
    pub input_token: String,
    pub z_grid: GridSpec,
    pub delay_grid: GridSpec,
    pub sigma_t: f64,
    pub mu: f64,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
    pub workers: Option<usize>,
    pub metadata: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kappa: 0.25,
            gamma: 0.35,
            gamma_sweep: None,
            truncation: 2,
            input: (1, 1),
            input_token: "1,1".into(),
            z_grid: GridSpec {
                start: 0.0,
                stop: 8.0,
                step: 0.04,
            },
            delay_grid: GridSpec {
                start: -3.0,
                stop: 3.0,
                step: 0.05,
            },
            sigma_t: 1.0,
            mu: 1.0,
            out_dir: PathBuf::from("."),
            formats: vec![Format::Csv],
            workers: None,
            metadata: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    /// Load a config file on top of the defaults. JSON is detected by a
    /// leading '{'; anything else parses as flat "key = value" lines with
    /// full-line '#' comments.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        if text.trim_start().starts_with('{') {
            self.apply_json(&text)
        } else {
            self.apply_flat(&text)
        }
    }

    fn apply_flat(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!("config line {}: expected key = value", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    fn apply_json(&mut self, text: &str) -> Result<(), CliError> {
        let v: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::config(format!("config is not valid JSON: {e}")))?;
        let obj = v
            .as_object()
            .ok_or_else(|| CliError::config("JSON config must be an object".into()))?;
        for (key, value) in obj {
            if key == "metadata" {
                let meta = value
                    .as_object()
                    .ok_or_else(|| CliError::config("\"metadata\" must be a JSON object".into()))?;
                for (k, v) in meta {
                    self.metadata.insert(k.clone(), json_scalar_to_string(v)?);
                }
                continue;
            }
            if key == "gamma_sweep" {
                if let Some(arr) = value.as_array() {
                    let xs: Vec<f64> = arr
                        .iter()
                        .map(|x| {
                            x.as_f64().ok_or_else(|| {
                                CliError::config("gamma_sweep entries must be numbers".into())
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    self.gamma_sweep = Some(xs);
                    continue;
                }
            }
            self.set(key, &json_scalar_to_string(value)?)?;
        }
        Ok(())
    }

    /// Apply one key. Shared by file parsing and flag overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let num = |what: &str| -> Result<f64, CliError> {
            value
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("{what}: \"{value}\" is not a number")))
        };
        match key {
            "kappa" => self.kappa = num("kappa")?,
            "gamma" => self.gamma = num("gamma")?,
            "gamma_sweep" => self.gamma_sweep = Some(parse_f64_list(value, "gamma_sweep")?),
            "truncation" => {
                self.truncation = value.parse().map_err(|_| {
                    CliError::config(format!(
                        "truncation: \"{value}\" is not a non-negative integer"
                    ))
                })?
            }
            "input" => {
                self.input = parse_input_state(value)?;
                self.input_token = value.trim().to_string();
            }
            "z_grid" => self.z_grid = GridSpec::parse(value)?,
            "delay_grid" => self.delay_grid = GridSpec::parse(value)?,
            "sigma_t" => self.sigma_t = num("sigma_t")?,
            "mu" => self.mu = num("mu")?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "formats" => self.formats = parse_formats(value)?,
            "workers" => {
                self.workers = Some(value.parse().map_err(|_| {
                    CliError::config(format!("workers: \"{value}\" is not a positive integer"))
                })?)
            }
            _ => {
                if let Some(meta_key) = key.strip_prefix("metadata.") {
                    self.metadata
                        .insert(meta_key.to_string(), value.to_string());
                } else {
                    return Err(CliError::config(format!("unknown config key \"{key}\"")));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(CliError::config(format!(
                "kappa must be positive and finite, got {}",
                self.kappa
            )));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(CliError::config(format!(
                "gamma must be non-negative and finite, got {}",
                self.gamma
            )));
        }
        if let Some(sweep) = &self.gamma_sweep {
            if sweep.is_empty() {
                return Err(CliError::config("gamma_sweep is empty".into()));
            }
            for g in sweep {
                if !(g.is_finite() && *g >= 0.0) {
                    return Err(CliError::config(format!(
                        "gamma_sweep entries must be non-negative and finite, got {g}"
                    )));
                }
            }
        }
        if self.truncation > 16 {
            return Err(CliError::config(format!(
                "truncation {} is beyond the supported range (<= 16)",
                self.truncation
            )));
        }
        let (n_l, n_r) = self.input;
        if n_l + n_r > self.truncation {
            return Err(CliError::config(format!(
                "input state \"{}\" has {} photons, exceeding truncation {}",
                self.input_token,
                n_l + n_r,
                self.truncation
            )));
        }
        if self.z_grid.start < 0.0 {
            return Err(CliError::config(format!(
                "z grid must start at a non-negative length, got {}",
                self.z_grid.start
            )));
        }
        if !(self.sigma_t.is_finite() && self.sigma_t > 0.0) {
            return Err(CliError::config(format!(
                "sigma_t must be positive and finite, got {}",
                self.sigma_t
            )));
        }
        if !(self.mu.is_finite() && (0.0..=1.0).contains(&self.mu)) {
            return Err(CliError::config(format!(
                "mu must lie in [0, 1], got {}",
                self.mu
            )));
        }
        if self.workers == Some(0) {
            return Err(CliError::config("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Deterministic key = value serialization; the provenance hash is the
    /// SHA-256 of this string. Only inputs that shape the numbers
    /// participate — output formats, directory, and worker count do not.
    pub fn canonical_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "delay_grid = {}", self.delay_grid.canonical());
        let _ = writeln!(s, "gamma = {}", self.gamma);
        if let Some(sweep) = &self.gamma_sweep {
            let list: Vec<String> = sweep.iter().map(|g| g.to_string()).collect();
            let _ = writeln!(s, "gamma_sweep = {}", list.join(","));
        }
        let _ = writeln!(s, "input = {},{}", self.input.0, self.input.1);
        let _ = writeln!(s, "kappa = {}", self.kappa);
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "metadata.{k} = {v}");
        }
        let _ = writeln!(s, "mu = {}", self.mu);
        let _ = writeln!(s, "sigma_t = {}", self.sigma_t);
        let _ = writeln!(s, "truncation = {}", self.truncation);
        let _ = writeln!(s, "z_grid = {}", self.z_grid.canonical());
        s
    }

    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_string().as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            let _ = write!(hex, "{byte:02x}");
        }
        hex
    }
}

fn json_scalar_to_string(v: &serde_json::Value) -> Result<String, CliError> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        serde_json::Value::Bool(b) => Ok(b.to_string()),
        other => Err(CliError::config(format!(
            "config values must be scalars, got {other}"
        ))),
    }
}
