//! Result tables with an embedded provenance block, emitted as CSV (with
//! '#'-prefixed header lines) and JSON (schema-versioned). NaN cells encode
//! "no value": empty in CSV, null in JSON.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::CliError;
use crate::plot::PlotSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub command: String,
    pub engine_version: String,
    pub config_hash: String,
    pub params: BTreeMap<String, String>,
    /// Largest analytic-vs-numeric residual in this table, when it carries a
    /// residual column.
    pub residual_max: Option<f64>,
    pub residual_tolerance: Option<f64>,
    pub failed: bool,
    pub notes: Vec<String>,
}

impl Provenance {
    pub fn new(command: &str, config_hash: String) -> Self {
        Provenance {
            command: command.to_string(),
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash,
            params: BTreeMap::new(),
            residual_max: None,
            residual_tolerance: None,
            failed: false,
            notes: Vec::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: String) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    /// Output file stem, e.g. "propagate" or "hom_fits".
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub provenance: Provenance,
    pub plot: Option<PlotSpec>,
}

impl ResultTable {
    pub fn new(name: &str, columns: Vec<&str>, provenance: Provenance) -> Self {
        ResultTable {
            name: name.to_string(),
            columns: columns.into_iter().map(String::from).collect(),
            rows: Vec::new(),
            provenance,
            plot: None,
        }
    }

    /// Scan a residual column, record its maximum against the tolerance, and
    /// mark the table failed if it exceeds it. NaN cells are skipped.
    pub fn check_residual(&mut self, column: &str, tolerance: f64) -> Result<(), CliError> {
        let idx = self
            .columns
            .iter()
            .position(|c| c == column)
            .ok_or_else(|| CliError::config(format!("no residual column \"{column}\"")))?;
        let max = self
            .rows
            .iter()
            .map(|r| r[idx])
            .filter(|v| v.is_finite())
            .fold(0.0f64, f64::max);
        self.provenance.residual_max = Some(max);
        self.provenance.residual_tolerance = Some(tolerance);
        if max > tolerance {
            self.provenance.failed = true;
            self.provenance.notes.push(format!(
                "residual check failed: {max:.3e} > {tolerance:.1e}"
            ));
        }
        Ok(())
    }

    fn format_cell(v: f64) -> String {
        if v.is_nan() {
            String::new()
        } else {
            format!("{v}")
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# ptcoupler {}\n", self.provenance.command));
        out.push_str(&format!("# schema_version: {SCHEMA_VERSION}\n"));
        out.push_str(&format!(
            "# engine_version: {}\n",
            self.provenance.engine_version
        ));
        out.push_str(&format!("# config_hash: {}\n", self.provenance.config_hash));
        for (k, v) in &self.provenance.params {
            out.push_str(&format!("# param {k} = {v}\n"));
        }
        if let Some(r) = self.provenance.residual_max {
            out.push_str(&format!("# residual_max: {r:e}\n"));
        }
        if let Some(t) = self.provenance.residual_tolerance {
            out.push_str(&format!("# residual_tolerance: {t:e}\n"));
        }
        out.push_str(if self.provenance.failed {
            "# status: FAILED\n"
        } else {
            "# status: ok\n"
        });
        for n in &self.provenance.notes {
            out.push_str(&format!("# note: {n}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| Self::format_cell(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|&v| if v.is_nan() { Value::Null } else { json!(v) })
                        .collect(),
                )
            })
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "table": self.name,
            "provenance": {
                "command": self.provenance.command,
                "engine_version": self.provenance.engine_version,
                "config_hash": self.provenance.config_hash,
                "params": self.provenance.params,
                "residual_max": self.provenance.residual_max,
                "residual_tolerance": self.provenance.residual_tolerance,
                "failed": self.provenance.failed,
                "notes": self.provenance.notes,
            },
            "columns": self.columns,
            "rows": rows,
            "plot": self.plot.as_ref().map(|p| serde_json::to_value(p).expect("plot spec serializes")),
        })
    }

    /// Re-ingest an emitted JSON table (used to re-render plots).
    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        let bad = |m: &str| CliError::config(format!("table JSON: {m}"));
        if v["schema_version"].as_u64() != Some(SCHEMA_VERSION as u64) {
            return Err(bad("missing or unsupported schema_version"));
        }
        let name = v["table"]
            .as_str()
            .ok_or_else(|| bad("missing table name"))?;
        let columns: Vec<String> = v["columns"]
            .as_array()
            .ok_or_else(|| bad("missing columns"))?
            .iter()
            .map(|c| {
                c.as_str()
                    .map(String::from)
                    .ok_or_else(|| bad("column names must be strings"))
            })
            .collect::<Result<_, _>>()?;
        let rows: Vec<Vec<f64>> = v["rows"]
            .as_array()
            .ok_or_else(|| bad("missing rows"))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("rows must be arrays"))?
                    .iter()
                    .map(|cell| {
                        if cell.is_null() {
                            Ok(f64::NAN)
                        } else {
                            cell.as_f64()
                                .ok_or_else(|| bad("cells must be numbers or null"))
                        }
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let plot = match &v["plot"] {
            Value::Null => None,
            p => Some(
                serde_json::from_value::<PlotSpec>(p.clone())
                    .map_err(|e| bad(&format!("invalid plot spec: {e}")))?,
            ),
        };
        let prov = &v["provenance"];
        let mut params = BTreeMap::new();
        if let Some(obj) = prov["params"].as_object() {
            for (k, val) in obj {
                if let Some(s) = val.as_str() {
                    params.insert(k.clone(), s.to_string());
                }
            }
        }
        Ok(ResultTable {
            name: name.to_string(),
            columns,
            rows,
            provenance: Provenance {
                command: prov["command"].as_str().unwrap_or("").to_string(),
                engine_version: prov["engine_version"].as_str().unwrap_or("").to_string(),
                config_hash: prov["config_hash"].as_str().unwrap_or("").to_string(),
                params,
                residual_max: prov["residual_max"].as_f64(),
                residual_tolerance: prov["residual_tolerance"].as_f64(),
                failed: prov["failed"].as_bool().unwrap_or(false),
                notes: prov["notes"]
                    .as_array()
                    .map(|a| {
                        a.iter()
                            .filter_map(|n| n.as_str().map(String::from))
                            .collect()
                    })
                    .unwrap_or_default(),
            },
            plot,
        })
    }
}
