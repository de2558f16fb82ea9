//! `ptcoupler` — sweeps and figure data for a lossy two-waveguide quantum
//! coupler.
//!
//! Verbs: `propagate`, `hom`, `dip`, `figure <preset>`, plus `plot` to
//! re-render an SVG from an emitted JSON table. Exit codes: 0 success,
//! 1 i/o failure, 2 configuration error, 3 numerical failure.

mod commands;
mod config;
mod error;
mod plot;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, RunConfig};
use error::CliError;
use table::ResultTable;

#[derive(Parser)]
#[command(
    name = "ptcoupler",
    version,
    about = "Quantum optics of a lossy two-waveguide coupler: propagation sweeps, Hong-Ou-Mandel scans, dip positions, and figure data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate an input Fock state and tabulate observables along z
    Propagate(RunArgs),
    /// Coincidence-vs-delay scan with per-z Gaussian dip fits
    Hom(RunArgs),
    /// Analytic and located dip positions across a loss sweep
    Dip(RunArgs),
    /// Emit the data (and plot) behind a named preset:
    /// fig2a, fig2b, fig2c, fig3, fig4c
    Figure {
        /// Preset name
        preset: String,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Re-render the SVG plot from a previously emitted JSON table
    Plot {
        /// JSON table produced by another verb
        json: PathBuf,
        /// Output SVG path
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Config file (flat key = value lines, or JSON)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coupling rate (1/cm)
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    /// Loss rate of waveguide L (1/cm)
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Comma-separated loss values for the dip sweep
    #[arg(long)]
    gamma_sweep: Option<String>,
    /// Propagation grid start:stop:step (cm)
    #[arg(long, allow_hyphen_values = true)]
    z_grid: Option<String>,
    /// Delay grid start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    delay_grid: Option<String>,
    /// Input Fock state "n_L,n_R"
    #[arg(long)]
    input: Option<String>,
    /// Total-photon truncation of the Fock space
    #[arg(long)]
    truncation: Option<u32>,
    /// Photon coherence time (delay units)
    #[arg(long, allow_negative_numbers = true)]
    sigma_t: Option<f64>,
    /// Mode overlap at zero delay, in [0, 1]
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Output directory
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Output formats, comma-separated subset of csv,json,svg
    #[arg(long)]
    format: Option<String>,
    /// Worker threads for grid evaluation (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        if let Some(v) = self.kappa {
            cfg.set("kappa", &v.to_string())?;
        }
        if let Some(v) = self.gamma {
            cfg.set("gamma", &v.to_string())?;
        }
        if let Some(v) = &self.gamma_sweep {
            cfg.set("gamma_sweep", v)?;
        }
        if let Some(v) = &self.z_grid {
            cfg.set("z_grid", v)?;
        }
        if let Some(v) = &self.delay_grid {
            cfg.set("delay_grid", v)?;
        }
        if let Some(v) = &self.input {
            cfg.set("input", v)?;
        }
        if let Some(v) = self.truncation {
            cfg.set("truncation", &v.to_string())?;
        }
        if let Some(v) = self.sigma_t {
            cfg.set("sigma_t", &v.to_string())?;
        }
        if let Some(v) = self.mu {
            cfg.set("mu", &v.to_string())?;
        }
        if let Some(v) = &self.out_dir {
            cfg.out_dir = v.clone();
        }
        if let Some(v) = &self.format {
            cfg.set("formats", v)?;
        }
        if let Some(v) = self.workers {
            cfg.set("workers", &v.to_string())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write_outputs(tables: &[ResultTable], cfg: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", cfg.out_dir.display())))?;
    let mut failed: Vec<String> = Vec::new();
    for t in tables {
        for fmt in &cfg.formats {
            let path = cfg.out_dir.join(format!("{}.{}", t.name, fmt.extension()));
            let contents = match fmt {
                Format::Csv => t.to_csv(),
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&t.to_json())
                        .map_err(|e| CliError::io(format!("JSON encode failed: {e}")))?;
                    s.push('\n');
                    s
                }
                Format::Svg => match &t.plot {
                    Some(spec) => plot::render_svg(&t.columns, &t.rows, spec)?,
                    None => continue,
                },
            };
            std::fs::write(&path, contents)
                .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
            println!("wrote {}", path.display());
        }
        if t.provenance.failed {
            failed.push(t.name.clone());
        }
    }
    if !failed.is_empty() {
        return Err(CliError::numerical(format!(
            "residual check failed in table(s): {} (files are written and marked FAILED)",
            failed.join(", ")
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Propagate(args) => {
            let cfg = args.into_config()?;
            write_outputs(&commands::run_propagate(&cfg)?, &cfg)
        }
        Command::Hom(args) => {
            let cfg = args.into_config()?;
            write_outputs(&commands::run_hom(&cfg)?, &cfg)
        }
        Command::Dip(args) => {
            let cfg = args.into_config()?;
            write_outputs(&commands::run_dip(&cfg)?, &cfg)
        }
        Command::Figure { preset, args } => {
            let cfg = args.into_config()?;
            write_outputs(&commands::run_figure(&cfg, &preset)?, &cfg)
        }
        Command::Plot { json, out } => {
            let text = std::fs::read_to_string(&json)
                .map_err(|e| CliError::io(format!("cannot read {}: {e}", json.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("{} is not JSON: {e}", json.display())))?;
            let table = ResultTable::from_json(&value)?;
            let spec = table.plot.as_ref().ok_or_else(|| {
                CliError::config(format!("{} carries no plot description", json.display()))
            })?;
            let svg = plot::render_svg(&table.columns, &table.rows, spec)?;
            std::fs::write(&out, svg)
                .map_err(|e| CliError::io(format!("cannot write {}: {e}", out.display())))?;
            println!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
