//! The four sweep commands and the figure presets.
//!
//! Grid points are evaluated in parallel through a rayon pool sized by the
//! `workers` setting; results are always assembled in grid order, so output
//! bytes are independent of the worker count.

use rayon::prelude::*;

use ptcoupler::analytic::{
    coincidence_rate, dip_positions, intensity_ratio, permanent_coincidence, transfer_matrix,
    DipKind,
};
use ptcoupler::fock::{number_expectation, DensityMatrix, FockBasis, FockState};
use ptcoupler::hom::{
    coincidence_with_delay, distinguishable_coincidence, locate_dip_z, scan,
    DistinguishabilityModel,
};
use ptcoupler::lindblad::{build_liouvillian, coincidence, propagate, Superoperator};
use ptcoupler::{CouplerParams, Mode, Regime};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::plot::{Marker, PlotSpec, Series};
use crate::table::{Provenance, ResultTable};

/// Residual tolerance for tables comparing the engine against closed forms.
const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Residual tolerance for the dip table: analytic z_0 vs the located
/// minimum.
const DIP_RESIDUAL_TOLERANCE: f64 = 1e-6;

fn make_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::io(format!("cannot build worker pool: {e}")))
}

fn coupler(cfg: &RunConfig, gamma: f64) -> Result<CouplerParams, CliError> {
    CouplerParams::new(cfg.kappa, gamma).map_err(CliError::from_setup)
}

fn base_provenance(cfg: &RunConfig, command: &str, params: &CouplerParams) -> Provenance {
    let mut p = Provenance::new(command, cfg.hash())
        .with_param("kappa", params.kappa().to_string())
        .with_param("gamma", params.gamma().to_string())
        .with_param("regime", params.regime().to_string())
        .with_param("truncation", cfg.truncation.to_string());
    for (k, v) in &cfg.metadata {
        p = p.with_param(&format!("metadata.{k}"), v.clone());
    }
    p
}

/// Closed-form observables for inputs that have one: (pop_L, pop_R,
/// coincidence when the input carries two photons).
fn analytic_observables(
    params: &CouplerParams,
    z: f64,
    input: (u32, u32),
) -> Option<(f64, f64, Option<f64>)> {
    let u = transfer_matrix(params, z);
    let (ll, lr, rl, rr) = (
        u.u_ll.norm_sqr(),
        u.u_lr.norm_sqr(),
        u.u_rl.norm_sqr(),
        u.u_rr.norm_sqr(),
    );
    match input {
        (1, 0) => Some((ll, rl, None)),
        (0, 1) => Some((lr, rr, None)),
        (1, 1) => Some((ll + lr, rl + rr, Some(coincidence_rate(params, z)))),
        (2, 0) => Some((2.0 * ll, 2.0 * rl, Some(2.0 * (u.u_ll * u.u_rl).norm_sqr()))),
        (0, 2) => Some((2.0 * lr, 2.0 * rr, Some(2.0 * (u.u_lr * u.u_rr).norm_sqr()))),
        _ => None,
    }
}

struct EngineRow {
    pop_l: f64,
    pop_r: f64,
    trace: f64,
    coincidence: Option<f64>,
}

fn engine_row(
    superop: &Superoperator,
    rho0: &DensityMatrix,
    z: f64,
    want_coincidence: bool,
) -> Result<EngineRow, CliError> {
    let rho = propagate(rho0, superop, z).map_err(CliError::from_run)?;
    Ok(EngineRow {
        pop_l: number_expectation(&rho, Mode::L).map_err(CliError::from_run)?,
        pop_r: number_expectation(&rho, Mode::R).map_err(CliError::from_run)?,
        trace: rho.trace(),
        coincidence: if want_coincidence {
            Some(coincidence(&rho).map_err(CliError::from_run)?)
        } else {
            None
        },
    })
}

/// `propagate`: engine observables along the z grid, with analytic columns
/// and a per-row residual wherever a closed form exists.
pub fn run_propagate(cfg: &RunConfig) -> Result<Vec<ResultTable>, CliError> {
    let params = coupler(cfg, cfg.gamma)?;
    let basis = FockBasis::new(cfg.truncation);
    let input_state = FockState::new(cfg.input.0, cfg.input.1);
    let rho0 = DensityMatrix::pure(&basis, input_state).map_err(CliError::from_setup)?;
    let superop = build_liouvillian(&basis, &params).map_err(CliError::from_setup)?;
    let zs = cfg.z_grid.points();

    let want_coincidence = input_state.total() >= 2;
    let has_analytic = analytic_observables(&params, 0.0, cfg.input).is_some();

    let pool = make_pool(cfg.workers)?;
    let rows: Vec<Vec<f64>> = pool.install(|| {
        zs.par_iter()
            .map(|&z| -> Result<Vec<f64>, CliError> {
                let eng = engine_row(&superop, &rho0, z, want_coincidence)?;
                let mut row = vec![z, eng.pop_l, eng.pop_r, eng.trace];
                if let Some(c) = eng.coincidence {
                    row.push(c);
                }
                if has_analytic {
                    let (pl, pr, co) =
                        analytic_observables(&params, z, cfg.input).expect("checked above");
                    row.push(pl);
                    row.push(pr);
                    let mut residual = (eng.pop_l - pl).abs().max((eng.pop_r - pr).abs());
                    if let Some(ca) = co {
                        row.push(ca);
                        if let Some(ce) = eng.coincidence {
                            residual = residual.max((ce - ca).abs());
                        }
                    }
                    row.push(residual);
                }
                Ok(row)
            })
            .collect::<Result<_, _>>()
    })?;

    let mut columns = vec!["z", "pop_l", "pop_r", "trace"];
    if want_coincidence {
        columns.push("coincidence");
    }
    if has_analytic {
        columns.push("pop_l_analytic");
        columns.push("pop_r_analytic");
        if want_coincidence
            && analytic_observables(&params, 0.0, cfg.input)
                .unwrap()
                .2
                .is_some()
        {
            columns.push("coincidence_analytic");
        }
        columns.push("residual");
    }

    let prov =
        base_provenance(cfg, "propagate", &params).with_param("input", cfg.input_token.clone());
    let mut table = ResultTable::new("propagate", columns, prov);
    table.rows = rows;
    if has_analytic {
        table.check_residual("residual", RESIDUAL_TOLERANCE)?;
    } else {
        table
            .provenance
            .notes
            .push("no closed form for this input; residual check not applicable".into());
    }

    let mut series = vec![
        Series {
            column: "pop_l".into(),
            label: "photons in L".into(),
        },
        Series {
            column: "pop_r".into(),
            label: "photons in R".into(),
        },
    ];
    if want_coincidence {
        series.push(Series {
            column: "coincidence".into(),
            label: "coincidence".into(),
        });
    }
    table.plot = Some(PlotSpec {
        title: format!(
            "propagation: kappa = {} /cm, gamma = {} /cm, input |{}>",
            params.kappa(),
            params.gamma(),
            cfg.input_token
        ),
        x_label: "z (cm)".into(),
        y_label: "expectation value".into(),
        x_column: "z".into(),
        series,
        markers: vec![Marker {
            x: params.coupling_length() / 2.0,
            label: "L_c/2".into(),
        }],
        shaded_region: None,
    });
    Ok(vec![table])
}

/// `hom`: coincidence surface over (z, tau), per-z Gaussian fits and
/// visibilities, plus a wide tau-profile table for plotting.
pub fn run_hom(cfg: &RunConfig) -> Result<Vec<ResultTable>, CliError> {
    let params = coupler(cfg, cfg.gamma)?;
    let model = DistinguishabilityModel::new(cfg.sigma_t, cfg.mu).map_err(CliError::from_setup)?;
    let zs = cfg.z_grid.points();
    let taus = cfg.delay_grid.points();

    // engine cross-check of the indistinguishable route, one per z
    let basis = FockBasis::new(cfg.truncation.max(2));
    let rho0 = DensityMatrix::pure(&basis, FockState::new(1, 1)).map_err(CliError::from_setup)?;
    let superop = build_liouvillian(&basis, &params).map_err(CliError::from_setup)?;

    let pool = make_pool(cfg.workers)?;
    let result = pool.install(|| scan(&params, &model, &zs, &taus));
    let engine_coincidences: Vec<f64> = pool.install(|| {
        zs.par_iter()
            .map(|&z| -> Result<f64, CliError> {
                let rho = propagate(&rho0, &superop, z).map_err(CliError::from_run)?;
                coincidence(&rho).map_err(CliError::from_run)
            })
            .collect::<Result<_, _>>()
    })?;

    let model_desc = format!("sigma_t = {}, mu = {}", cfg.sigma_t, cfg.mu);

    // long-format surface
    let mut surface = ResultTable::new(
        "hom_surface",
        vec!["z", "tau", "coincidence"],
        base_provenance(cfg, "hom", &params).with_param("model", model_desc.clone()),
    );
    for (i, &z) in zs.iter().enumerate() {
        for (j, &tau) in taus.iter().enumerate() {
            surface.rows.push(vec![z, tau, result.surface[i][j]]);
        }
    }
    surface
        .provenance
        .notes
        .push("long format; see hom_fits for per-z parameters".into());

    // per-z fits and visibility, with the engine residual column
    let mut fits = ResultTable::new(
        "hom_fits",
        vec![
            "z",
            "visibility",
            "fit_center",
            "fit_depth",
            "fit_width",
            "fit_baseline",
            "fit_rms_residual",
            "fit_iterations",
            "fit_converged",
            "coincidence_indist",
            "coincidence_dist",
            "residual",
        ],
        base_provenance(cfg, "hom", &params).with_param("model", model_desc.clone()),
    );
    for (i, &z) in zs.iter().enumerate() {
        let indist = permanent_coincidence(&params, z);
        let dist = distinguishable_coincidence(&params, z);
        let residual = (engine_coincidences[i] - indist).abs();
        let vis = result.visibility[i].unwrap_or(f64::NAN);
        match &result.fits[i] {
            Ok(f) => fits.rows.push(vec![
                z,
                vis,
                f.center,
                f.depth,
                f.width,
                f.baseline,
                f.residual,
                f.iterations as f64,
                1.0,
                indist,
                dist,
                residual,
            ]),
            Err(e) => {
                fits.provenance
                    .notes
                    .push(format!("fit did not converge at z = {z}: {e}"));
                fits.rows.push(vec![
                    z,
                    vis,
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                    0.0,
                    indist,
                    dist,
                    residual,
                ]);
            }
        }
    }
    fits.check_residual("residual", RESIDUAL_TOLERANCE)?;
    fits.plot = Some(PlotSpec {
        title: format!(
            "HOM visibility: kappa = {} /cm, gamma = {} /cm",
            params.kappa(),
            params.gamma()
        ),
        x_label: "z (cm)".into(),
        y_label: "visibility".into(),
        x_column: "z".into(),
        series: vec![Series {
            column: "visibility".into(),
            label: "V(z)".into(),
        }],
        markers: dip_markers(&params),
        shaded_region: None,
    });

    // wide tau profiles at a handful of z values, for the dip plot
    let picks: Vec<usize> = if zs.len() <= 6 {
        (0..zs.len()).collect()
    } else {
        (0..6).map(|k| k * (zs.len() - 1) / 5).collect()
    };
    let mut columns = vec!["tau".to_string()];
    let mut series = Vec::new();
    for &i in &picks {
        columns.push(format!("coincidence_z{i}"));
        series.push(Series {
            column: format!("coincidence_z{i}"),
            label: format!("z = {}", zs[i]),
        });
    }
    let mut slices = ResultTable {
        name: "hom_slices".into(),
        columns,
        rows: Vec::new(),
        provenance: base_provenance(cfg, "hom", &params).with_param("model", model_desc),
        plot: None,
    };
    for (j, &tau) in taus.iter().enumerate() {
        let mut row = vec![tau];
        for &i in &picks {
            row.push(result.surface[i][j]);
        }
        slices.rows.push(row);
    }
    slices.plot = Some(PlotSpec {
        title: format!(
            "HOM dips: kappa = {} /cm, gamma = {} /cm",
            params.kappa(),
            params.gamma()
        ),
        x_label: "delay tau".into(),
        y_label: "coincidence".into(),
        x_column: "tau".into(),
        series,
        markers: vec![],
        shaded_region: None,
    });

    Ok(vec![surface, fits, slices])
}

fn dip_markers(params: &CouplerParams) -> Vec<Marker> {
    match dip_positions(params) {
        Ok(r) => {
            let mut m = vec![Marker {
                x: r.z_h,
                label: "z_H".into(),
            }];
            if r.has_dip() && (r.z_h - r.z_0).abs() > 1e-9 {
                m.push(Marker {
                    x: r.z_0,
                    label: "z_0".into(),
                });
            }
            m
        }
        Err(_) => Vec::new(),
    }
}

fn regime_code(r: Regime) -> f64 {
    match r {
        Regime::Unbroken => 0.0,
        Regime::ExceptionalPoint => 1.0,
        Regime::Broken => 2.0,
    }
}

/// `dip`: one row per swept loss value, comparing the analytic dip position
/// against a derivative-free localization of the coincidence minimum.
pub fn run_dip(cfg: &RunConfig) -> Result<Vec<ResultTable>, CliError> {
    let gammas = cfg.gamma_sweep.clone().unwrap_or_else(|| vec![cfg.gamma]);
    let ideal = DistinguishabilityModel::ideal();

    let mut table = ResultTable::new(
        "dip",
        vec![
            "gamma",
            "regime_code",
            "no_dip",
            "z_h",
            "z_0",
            "z_star",
            "coincidence_min",
            "shift",
            "residual",
        ],
        base_provenance(cfg, "dip", &coupler(cfg, cfg.gamma)?)
            .with_param("gamma_sweep", format!("{gammas:?}")),
    );
    table.provenance.notes.push(
        "regime_code: 0 unbroken, 1 exceptional point, 2 broken; broken rows carry no_dip = 1"
            .into(),
    );

    for &gamma in &gammas {
        let params = coupler(cfg, gamma)?;
        let report = dip_positions(&params).map_err(CliError::from_run)?;
        match report.kind {
            DipKind::Continued => {
                table.rows.push(vec![
                    gamma,
                    regime_code(report.regime),
                    1.0,
                    report.z_h,
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                ]);
                table
                    .provenance
                    .notes
                    .push(format!("gamma = {gamma}: broken regime, no dip"));
            }
            kind => {
                let (z_star, g_min) =
                    locate_dip_z(&params, &ideal, 0.05 * report.z_h, 1.25 * report.z_h)
                        .map_err(CliError::from_run)?;
                if kind == DipKind::EpLimit {
                    table.provenance.notes.push(format!(
                        "gamma = {gamma}: at the threshold; z_0 is the limit 1/(sqrt(2) kappa)"
                    ));
                }
                table.rows.push(vec![
                    gamma,
                    regime_code(report.regime),
                    0.0,
                    report.z_h,
                    report.z_0,
                    z_star,
                    g_min,
                    report.shift,
                    (report.z_0 - z_star).abs(),
                ]);
            }
        }
    }
    table.check_residual("residual", DIP_RESIDUAL_TOLERANCE)?;
    table.plot = Some(PlotSpec {
        title: format!("HOM dip position vs loss (kappa = {} /cm)", cfg.kappa),
        x_label: "gamma (1/cm)".into(),
        y_label: "z (cm)".into(),
        x_column: "gamma".into(),
        series: vec![
            Series {
                column: "z_h".into(),
                label: "z_H".into(),
            },
            Series {
                column: "z_0".into(),
                label: "z_0 analytic".into(),
            },
            Series {
                column: "z_star".into(),
                label: "z* located".into(),
            },
        ],
        markers: vec![Marker {
            x: 2.0 * cfg.kappa,
            label: "threshold".into(),
        }],
        shaded_region: None,
    });
    Ok(vec![table])
}

/// `figure`: named presets emitting the data tables (and plots) behind the
/// standard views of this system.
pub fn run_figure(cfg: &RunConfig, preset: &str) -> Result<Vec<ResultTable>, CliError> {
    match preset {
        "fig2a" => figure_populations(cfg, preset, 0.25, 0.0),
        "fig2b" => figure_populations(cfg, preset, 0.25, 0.35),
        "fig2c" => figure_coincidence(cfg, preset, 0.25, 0.35),
        "fig3" => figure_intensity_ratio(cfg, preset, 0.26, 0.2),
        "fig4c" => figure_hom_dip_scan(cfg, preset, 0.26),
        other => Err(CliError::config(format!(
            "unknown figure preset \"{other}\" (expected fig2a, fig2b, fig2c, fig3, fig4c)"
        ))),
    }
}

/// Single-photon populations vs z for both inputs (fig2a with gamma = 0
/// collapses to one pair of curves; fig2b shows the loss asymmetry).
fn figure_populations(
    cfg: &RunConfig,
    name: &str,
    kappa: f64,
    gamma: f64,
) -> Result<Vec<ResultTable>, CliError> {
    let params = CouplerParams::new(kappa, gamma).map_err(CliError::from_setup)?;
    let zs = crate::config::GridSpec {
        start: 0.0,
        stop: 12.57,
        step: 0.01,
    }
    .points();

    let basis = FockBasis::new(cfg.truncation.max(1));
    let superop = build_liouvillian(&basis, &params).map_err(CliError::from_setup)?;
    let from_l = DensityMatrix::pure(&basis, FockState::new(1, 0)).map_err(CliError::from_setup)?;
    let from_r = DensityMatrix::pure(&basis, FockState::new(0, 1)).map_err(CliError::from_setup)?;

    let pool = make_pool(cfg.workers)?;
    let rows: Vec<Vec<f64>> = pool.install(|| {
        zs.par_iter()
            .map(|&z| -> Result<Vec<f64>, CliError> {
                let u = transfer_matrix(&params, z);
                let analytic = [
                    u.u_ll.norm_sqr(),
                    u.u_rl.norm_sqr(),
                    u.u_lr.norm_sqr(),
                    u.u_rr.norm_sqr(),
                ];
                let eng_l = engine_row(&superop, &from_l, z, false)?;
                let eng_r = engine_row(&superop, &from_r, z, false)?;
                let engine = [eng_l.pop_l, eng_l.pop_r, eng_r.pop_l, eng_r.pop_r];
                let residual = analytic
                    .iter()
                    .zip(&engine)
                    .map(|(a, e)| (a - e).abs())
                    .fold(0.0f64, f64::max);
                Ok(vec![
                    z,
                    analytic[0],
                    analytic[1],
                    analytic[2],
                    analytic[3],
                    engine[0],
                    engine[1],
                    engine[2],
                    engine[3],
                    residual,
                ])
            })
            .collect::<Result<_, _>>()
    })?;

    let prov = base_provenance(cfg, &format!("figure {name}"), &params);
    let mut table = ResultTable::new(
        name,
        vec![
            "z",
            "pop_l_from_l",
            "pop_r_from_l",
            "pop_l_from_r",
            "pop_r_from_r",
            "pop_l_from_l_engine",
            "pop_r_from_l_engine",
            "pop_l_from_r_engine",
            "pop_r_from_r_engine",
            "residual",
        ],
        prov,
    );
    table.rows = rows;
    table.check_residual("residual", RESIDUAL_TOLERANCE)?;
    table.plot = Some(PlotSpec {
        title: if gamma == 0.0 {
            format!("single photon, lossless coupler (kappa = {kappa} /cm)")
        } else {
            format!("single photon, lossy coupler (kappa = {kappa} /cm, gamma = {gamma} /cm)")
        },
        x_label: "z (cm)".into(),
        y_label: "photon population".into(),
        x_column: "z".into(),
        series: vec![
            Series {
                column: "pop_l_from_l".into(),
                label: "L input -> L".into(),
            },
            Series {
                column: "pop_r_from_l".into(),
                label: "L input -> R".into(),
            },
            Series {
                column: "pop_l_from_r".into(),
                label: "R input -> L".into(),
            },
            Series {
                column: "pop_r_from_r".into(),
                label: "R input -> R".into(),
            },
        ],
        markers: vec![Marker {
            x: params.coupling_length() / 2.0,
            label: "L_c/2".into(),
        }],
        shaded_region: None,
    });
    Ok(vec![table])
}

/// Two-photon coincidence vs z: lossless against lossy, with the dip
/// markers and the shaded band where a dip can occur.
fn figure_coincidence(
    cfg: &RunConfig,
    name: &str,
    kappa: f64,
    gamma_pt: f64,
) -> Result<Vec<ResultTable>, CliError> {
    let hermitian = CouplerParams::new(kappa, 0.0).map_err(CliError::from_setup)?;
    let pt = CouplerParams::new(kappa, gamma_pt).map_err(CliError::from_setup)?;
    let zs = crate::config::GridSpec {
        start: 0.0,
        stop: 8.0,
        step: 0.01,
    }
    .points();

    let basis = FockBasis::new(cfg.truncation.max(2));
    let superop = build_liouvillian(&basis, &pt).map_err(CliError::from_setup)?;
    let rho0 = DensityMatrix::pure(&basis, FockState::new(1, 1)).map_err(CliError::from_setup)?;

    let pool = make_pool(cfg.workers)?;
    let rows: Vec<Vec<f64>> = pool.install(|| {
        zs.par_iter()
            .map(|&z| -> Result<Vec<f64>, CliError> {
                let herm = coincidence_rate(&hermitian, z);
                let lossy = coincidence_rate(&pt, z);
                let eng = engine_row(&superop, &rho0, z, true)?;
                let engine = eng.coincidence.expect("coincidence requested");
                Ok(vec![z, herm, lossy, engine, (lossy - engine).abs()])
            })
            .collect::<Result<_, _>>()
    })?;

    let herm_dip = dip_positions(&hermitian).map_err(CliError::from_run)?;
    let pt_dip = dip_positions(&pt).map_err(CliError::from_run)?;
    let ep_bound = 1.0 / (2f64.sqrt() * kappa);

    let prov = base_provenance(cfg, &format!("figure {name}"), &pt);
    let mut table = ResultTable::new(
        name,
        vec![
            "z",
            "coincidence_hermitian",
            "coincidence_pt",
            "coincidence_pt_engine",
            "residual",
        ],
        prov,
    );
    table.rows = rows;
    table.check_residual("residual", RESIDUAL_TOLERANCE)?;
    table.provenance.notes.push(format!(
        "dip positions: z_H = {} cm, z_0(gamma = {gamma_pt}) = {} cm; dips can only occur in [1/(sqrt(2) kappa), z_H] = [{ep_bound}, {}]",
        herm_dip.z_h, pt_dip.z_0, herm_dip.z_h
    ));
    table.plot = Some(PlotSpec {
        title: format!("two-photon coincidence (kappa = {kappa} /cm; gamma = 0 vs {gamma_pt} /cm)"),
        x_label: "z (cm)".into(),
        y_label: "coincidence rate".into(),
        x_column: "z".into(),
        series: vec![
            Series {
                column: "coincidence_hermitian".into(),
                label: "lossless".into(),
            },
            Series {
                column: "coincidence_pt".into(),
                label: format!("gamma = {gamma_pt}"),
            },
        ],
        markers: vec![
            Marker {
                x: herm_dip.z_h,
                label: "z_H".into(),
            },
            Marker {
                x: pt_dip.z_0,
                label: "z_0".into(),
            },
        ],
        shaded_region: Some((ep_bound, herm_dip.z_h)),
    });
    Ok(vec![table])
}

/// Classical intensity ratios vs z: lossless reference against both inputs
/// of the lossy coupler.
fn figure_intensity_ratio(
    cfg: &RunConfig,
    name: &str,
    kappa: f64,
    gamma: f64,
) -> Result<Vec<ResultTable>, CliError> {
    let hermitian = CouplerParams::new(kappa, 0.0).map_err(CliError::from_setup)?;
    let pt = CouplerParams::new(kappa, gamma).map_err(CliError::from_setup)?;
    let zs = crate::config::GridSpec {
        start: 0.0,
        stop: 12.0,
        step: 0.01,
    }
    .points();

    let rows: Vec<Vec<f64>> = zs
        .iter()
        .map(|&z| {
            vec![
                z,
                intensity_ratio(&hermitian, z, Mode::L),
                intensity_ratio(&pt, z, Mode::R),
                intensity_ratio(&pt, z, Mode::L),
            ]
        })
        .collect();

    let prov = base_provenance(cfg, &format!("figure {name}"), &pt);
    let mut table = ResultTable::new(
        name,
        vec![
            "z",
            "ratio_hermitian",
            "ratio_pt_r_input",
            "ratio_pt_l_input",
        ],
        prov,
    );
    table.rows = rows;
    table.provenance.notes.push(
        "ratio = power in the excited waveguide over total surviving power; mean loss cancels"
            .into(),
    );
    table.plot = Some(PlotSpec {
        title: format!("intensity ratio (kappa = {kappa} /cm, gamma = {gamma} /cm)"),
        x_label: "z (cm)".into(),
        y_label: "intensity ratio".into(),
        x_column: "z".into(),
        series: vec![
            Series {
                column: "ratio_hermitian".into(),
                label: "lossless".into(),
            },
            Series {
                column: "ratio_pt_r_input".into(),
                label: "lossy, R input".into(),
            },
            Series {
                column: "ratio_pt_l_input".into(),
                label: "lossy, L input".into(),
            },
        ],
        markers: vec![Marker {
            x: hermitian.coupling_length() / 2.0,
            label: "L_c/2".into(),
        }],
        shaded_region: None,
    });
    Ok(vec![table])
}

/// Normalized zero-delay coincidence vs z for the lossless coupler and two
/// lossy couplers, showing where each HOM dip sits.
fn figure_hom_dip_scan(
    cfg: &RunConfig,
    name: &str,
    kappa: f64,
) -> Result<Vec<ResultTable>, CliError> {
    let families = [
        (0.0, 0.87, "coinc_norm_hermitian", "lossless, mu = 0.87"),
        (0.13, 0.90, "coinc_norm_pt_013", "gamma = 0.13, mu = 0.90"),
        (0.40, 0.90, "coinc_norm_pt_040", "gamma = 0.40, mu = 0.90"),
    ];
    let zs = crate::config::GridSpec {
        start: 0.0,
        stop: 6.0,
        step: 0.005,
    }
    .points();

    let mut columns = vec!["z".to_string()];
    let mut series = Vec::new();
    let mut markers = Vec::new();
    let mut params_list = Vec::new();
    for (gamma, mu, column, label) in &families {
        columns.push(column.to_string());
        series.push(Series {
            column: column.to_string(),
            label: label.to_string(),
        });
        let p = CouplerParams::new(kappa, *gamma).map_err(CliError::from_setup)?;
        let model = DistinguishabilityModel::new(cfg.sigma_t, *mu).map_err(CliError::from_setup)?;
        params_list.push((p, model));
    }

    let rows: Vec<Vec<f64>> = zs
        .iter()
        .map(|&z| {
            let mut row = vec![z];
            for (p, model) in &params_list {
                let dist = distinguishable_coincidence(p, z);
                let norm = if dist > 0.0 {
                    coincidence_with_delay(p, z, 0.0, model) / dist
                } else {
                    f64::NAN
                };
                row.push(norm);
            }
            row
        })
        .collect();

    let mut notes = Vec::new();
    for ((p, _), (gamma, ..)) in params_list.iter().zip(&families) {
        let r = dip_positions(p).map_err(CliError::from_run)?;
        markers.push(Marker {
            x: r.z_0,
            label: if *gamma == 0.0 {
                "z_H".into()
            } else {
                format!("z_0({gamma})")
            },
        });
        notes.push(format!("gamma = {gamma}: dip at z = {} cm", r.z_0));
    }
    notes.push(
        "the measured dip shift to 2.8 cm matches gamma ~ 0.4 /cm, not the quoted 0.13 /cm; both are tabulated"
            .into(),
    );

    let prov = base_provenance(
        cfg,
        &format!("figure {name}"),
        &CouplerParams::new(kappa, 0.13).map_err(CliError::from_setup)?,
    );
    let mut table = ResultTable {
        name: name.to_string(),
        columns,
        rows,
        provenance: prov,
        plot: None,
    };
    table.provenance.notes = notes;
    table.plot = Some(PlotSpec {
        title: format!("normalized zero-delay coincidence (kappa = {kappa} /cm)"),
        x_label: "z (cm)".into(),
        y_label: "coincidence / distinguishable baseline".into(),
        x_column: "z".into(),
        series,
        markers,
        shaded_region: None,
    });
    Ok(vec![table])
}
