//! End-to-end checks of the binary: exit codes, file emission, config
//! precedence, and the JSON -> SVG round trip.

use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ptcoupler")
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawn ptcoupler")
}

fn run_in(dir: &Path, args: &[&str]) -> std::process::Output {
    let mut all: Vec<&str> = args.to_vec();
    let out_dir = dir.to_str().unwrap();
    all.push("--out-dir");
    all.push(out_dir);
    run(&all)
}

#[test]
fn propagate_emits_requested_formats() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(
        tmp.path(),
        &[
            "propagate",
            "--z-grid",
            "0:2:0.1",
            "--format",
            "csv,json,svg",
        ],
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    for ext in ["csv", "json", "svg"] {
        assert!(
            tmp.path().join(format!("propagate.{ext}")).exists(),
            "missing .{ext}"
        );
    }
    let csv = std::fs::read_to_string(tmp.path().join("propagate.csv")).unwrap();
    assert!(csv.contains("# status: ok"));
    assert!(csv.contains("z,pop_l,pop_r,trace,coincidence"));
}

#[test]
fn invalid_input_state_exits_2_and_names_the_token() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["propagate", "--input", "3,0"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("3,0"), "stderr: {msg}");
}

#[test]
fn unknown_preset_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["figure", "fig9z"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_path = tmp.path().join("run.conf");
    std::fs::write(&cfg_path, "kappa = 0.26\ngamma = 0.2\nz_grid = 0:1:0.5\n").unwrap();
    let out = run_in(
        tmp.path(),
        &[
            "propagate",
            "--config",
            cfg_path.to_str().unwrap(),
            "--gamma",
            "0.1",
        ],
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(tmp.path().join("propagate.csv")).unwrap();
    assert!(csv.contains("# param gamma = 0.1"), "override lost:\n{csv}");
    assert!(
        csv.contains("# param kappa = 0.26"),
        "config value lost:\n{csv}"
    );
}

#[test]
fn json_config_is_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_path = tmp.path().join("run.json");
    std::fs::write(
        &cfg_path,
        r#"{"kappa": 0.3, "gamma": 0.0, "z_grid": "0:1:0.25", "input": "1,0"}"#,
    )
    .unwrap();
    let out = run_in(
        tmp.path(),
        &["propagate", "--config", cfg_path.to_str().unwrap()],
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(tmp.path().join("propagate.csv")).unwrap();
    assert!(csv.contains("# param kappa = 0.3"));
}

#[test]
fn dip_broken_rows_have_no_numbers() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(
        tmp.path(),
        &["dip", "--kappa", "0.26", "--gamma-sweep", "0.2,0.78"],
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(tmp.path().join("dip.csv")).unwrap();
    let broken_row = csv
        .lines()
        .find(|l| l.starts_with("0.78,"))
        .expect("broken row present");
    assert!(
        broken_row.contains(",1,"),
        "no_dip flag missing: {broken_row}"
    );
    assert!(
        broken_row.ends_with(",,,,"),
        "numbers leaked into broken row: {broken_row}"
    );
}

#[test]
fn hom_emits_surface_fits_and_slices() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(
        tmp.path(),
        &[
            "hom",
            "--kappa",
            "0.26",
            "--gamma",
            "0.13",
            "--mu",
            "0.9",
            "--z-grid",
            "2.5:3.5:0.25",
            "--delay-grid",
            "-2:2:0.1",
            "--format",
            "csv",
        ],
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in ["hom_surface.csv", "hom_fits.csv", "hom_slices.csv"] {
        assert!(tmp.path().join(name).exists(), "missing {name}");
    }
    let fits = std::fs::read_to_string(tmp.path().join("hom_fits.csv")).unwrap();
    // every z row converged on this smooth scan
    let (header, rows) = parse_csv(&fits);
    for v in column(&header, &rows, "fit_converged") {
        assert_eq!(v, 1.0, "unconverged fit row");
    }
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .expect("header row")
        .split(',')
        .map(String::from)
        .collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| {
                    if c.is_empty() {
                        f64::NAN
                    } else {
                        c.parse().unwrap()
                    }
                })
                .collect()
        })
        .collect();
    (header, rows)
}

fn column<'a>(header: &[String], rows: &'a [Vec<f64>], name: &str) -> Vec<f64> {
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i]).collect()
}

#[test]
fn lossless_populations_split_evenly_at_half_the_coupling_length() {
    // kappa = 0.25, single photon in L: pop_L = pop_R = 0.5 at z = L_c/2
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(
        tmp.path(),
        &[
            "propagate",
            "--kappa",
            "0.25",
            "--gamma",
            "0",
            "--input",
            "1,0",
            "--z-grid",
            "0:3.14159265358979:1.57079632679490",
        ],
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) =
        parse_csv(&std::fs::read_to_string(tmp.path().join("propagate.csv")).unwrap());
    let last = rows.last().unwrap();
    let pop_l = last[header.iter().position(|h| h == "pop_l").unwrap()];
    let pop_r = last[header.iter().position(|h| h == "pop_r").unwrap()];
    assert!((pop_l - 0.5).abs() < 1e-9, "pop_l = {pop_l}");
    assert!((pop_r - 0.5).abs() < 1e-9, "pop_r = {pop_r}");
}

#[test]
fn coincidence_column_dips_at_the_shifted_position() {
    // kappa = 0.25, gamma = 0.35: the coincidence minimum sits at z_0 ~ 2.965
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(
        tmp.path(),
        &[
            "propagate",
            "--kappa",
            "0.25",
            "--gamma",
            "0.35",
            "--input",
            "1,1",
            "--z-grid",
            "0:8:0.005",
        ],
    );
    assert!(out.status.success());
    let (header, rows) =
        parse_csv(&std::fs::read_to_string(tmp.path().join("propagate.csv")).unwrap());
    let zs = column(&header, &rows, "z");
    let coinc = column(&header, &rows, "coincidence");
    let (imin, _) = coinc
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    assert!(
        (zs[imin] - 2.9650).abs() < 0.005,
        "coincidence minimum at z = {}, expected ~2.965",
        zs[imin]
    );
}

#[test]
fn hom_surface_is_symmetric_in_delay() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(
        tmp.path(),
        &[
            "hom",
            "--kappa",
            "0.26",
            "--gamma",
            "0.13",
            "--mu",
            "0.9",
            "--z-grid",
            "2.8:3.2:0.2",
            "--delay-grid",
            "-2:2:0.1",
        ],
    );
    assert!(out.status.success());
    let (header, rows) =
        parse_csv(&std::fs::read_to_string(tmp.path().join("hom_surface.csv")).unwrap());
    let zs = column(&header, &rows, "z");
    let coinc = column(&header, &rows, "coincidence");
    let n_tau = zs.iter().filter(|&&z| z == zs[0]).count();
    for block in coinc.chunks(n_tau) {
        for j in 0..n_tau {
            let asym = (block[j] - block[n_tau - 1 - j]).abs();
            assert!(asym <= 1e-12, "delay asymmetry {asym:.2e}");
        }
    }
}

#[test]
fn fig2a_population_curves_coincide_under_input_swap() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["figure", "fig2a"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&std::fs::read_to_string(tmp.path().join("fig2a.csv")).unwrap());
    let bar_l = column(&header, &rows, "pop_l_from_l");
    let bar_r = column(&header, &rows, "pop_r_from_r");
    let cross_lr = column(&header, &rows, "pop_r_from_l");
    let cross_rl = column(&header, &rows, "pop_l_from_r");
    for i in 0..bar_l.len() {
        assert!((bar_l[i] - bar_r[i]).abs() < 1e-14);
        assert!((cross_lr[i] - cross_rl[i]).abs() < 1e-14);
    }
}

#[test]
fn hom_fitted_depth_over_baseline_reproduces_the_calibrated_visibility() {
    // lossless coupler with mu = 0.87: the fitted dip at z_H has
    // depth/baseline equal to the calibrated visibility
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(
        tmp.path(),
        &[
            "hom",
            "--kappa",
            "0.26",
            "--gamma",
            "0",
            "--mu",
            "0.87",
            "--z-grid",
            "3.0207621669132627:3.2:0.5",
            "--delay-grid",
            "-3:3:0.1",
        ],
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) =
        parse_csv(&std::fs::read_to_string(tmp.path().join("hom_fits.csv")).unwrap());
    let depth = column(&header, &rows, "fit_depth");
    let baseline = column(&header, &rows, "fit_baseline");
    let vis = column(&header, &rows, "visibility");
    assert!(
        (depth[0] / baseline[0] - 0.87).abs() < 1e-6,
        "depth/baseline = {}",
        depth[0] / baseline[0]
    );
    assert!((vis[0] - 0.87).abs() < 1e-9, "visibility = {}", vis[0]);
}

#[test]
fn plot_roundtrip_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["figure", "fig3", "--format", "json,svg"]);
    assert!(out.status.success());
    let json = tmp.path().join("fig3.json");
    let svg_original = std::fs::read(tmp.path().join("fig3.svg")).unwrap();
    let replot = tmp.path().join("replot.svg");
    let out = run(&["plot", json.to_str().unwrap(), replot.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&replot).unwrap(), svg_original);
}
