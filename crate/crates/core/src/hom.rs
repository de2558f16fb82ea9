//! Hong-Ou-Mandel measurement model: partial photon distinguishability under
//! a relative time delay, coincidence-vs-delay scans, Gaussian dip fits, and
//! visibility extraction.
//!
//! The two-photon coincidence interpolates between the indistinguishable
//! value (amplitudes interfere, squared permanent of the transfer matrix)
//! and the distinguishable value (probabilities add):
//!
//! ```text
//! Gamma(z, tau) = zeta(tau) Gamma_indist(z) + (1 - zeta(tau)) Gamma_dist(z)
//! zeta(tau)     = mu exp(-tau^2 / (2 sigma_t^2))
//! ```
//!
//! The Gaussian overlap is a declared model choice (the dips are fitted with
//! Gaussians); `mu` is the residual indistinguishability at zero delay and
//! absorbs every source imperfection as a single scalar.

use ndarray::Array2;
use num_complex::Complex64;

use crate::analytic::{permanent_coincidence, transfer_matrix};
use crate::error::{Error, Result};
use crate::linalg;
use crate::params::CouplerParams;
use crate::tol;

/// Photon-wavepacket overlap model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinguishabilityModel {
    sigma_t: f64,
    mu: f64,
}

impl DistinguishabilityModel {
    pub fn new(sigma_t: f64, mu: f64) -> Result<Self> {
        if !(sigma_t.is_finite() && sigma_t > 0.0) {
            return Err(Error::InvalidParams(format!(
                "coherence time sigma_t must be positive and finite, got {sigma_t}"
            )));
        }
        if !(mu.is_finite() && (0.0..=1.0).contains(&mu)) {
            return Err(Error::InvalidParams(format!(
                "mode overlap mu must lie in [0, 1], got {mu}"
            )));
        }
        Ok(Self { sigma_t, mu })
    }

    /// Perfectly indistinguishable photons at zero delay.
    pub fn ideal() -> Self {
        Self {
            sigma_t: 1.0,
            mu: 1.0,
        }
    }

    pub fn sigma_t(&self) -> f64 {
        self.sigma_t
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Overlap zeta(tau) = mu exp(-tau^2 / (2 sigma_t^2)).
    pub fn overlap(&self, tau: f64) -> f64 {
        self.mu * (-tau * tau / (2.0 * self.sigma_t * self.sigma_t)).exp()
    }
}

/// Coincidence of fully distinguishable photons: the two single-photon
/// transfer processes compose by probability, not amplitude.
pub fn distinguishable_coincidence(params: &CouplerParams, z: f64) -> f64 {
    let u = transfer_matrix(params, z);
    (u.u_ll * u.u_rr).norm_sqr() + (u.u_lr * u.u_rl).norm_sqr()
}

/// Coincidence at propagation length `z` and relative delay `tau`.
pub fn coincidence_with_delay(
    params: &CouplerParams,
    z: f64,
    tau: f64,
    model: &DistinguishabilityModel,
) -> f64 {
    let zeta = model.overlap(tau);
    zeta * permanent_coincidence(params, z) + (1.0 - zeta) * distinguishable_coincidence(params, z)
}

/// Dip visibility V(z) = (Gamma_dist - Gamma(z, tau=0)) / Gamma_dist.
///
/// With mu = 1 this is the ideal quantum visibility. Past the point where
/// the interfering amplitudes exceed the classical baseline the value turns
/// negative (a coincidence peak instead of a dip); no clamping is applied.
pub fn visibility(params: &CouplerParams, z: f64, model: &DistinguishabilityModel) -> Result<f64> {
    let dist = distinguishable_coincidence(params, z);
    if dist == 0.0 {
        return Err(Error::VisibilityUndefined { z });
    }
    Ok((dist - coincidence_with_delay(params, z, 0.0, model)) / dist)
}

/// Fit `mu` so that the visibility at `z` equals `target`; recomputing
/// [`visibility`] with the returned overlap reproduces the target exactly.
// negated comparison so a NaN ideal visibility is rejected
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn calibrate_mu(params: &CouplerParams, z: f64, target: f64) -> Result<f64> {
    let ideal = visibility(params, z, &DistinguishabilityModel::ideal())?;
    if !(ideal > 0.0) {
        return Err(Error::CalibrationOutOfRange { target, ideal });
    }
    let mu = target / ideal;
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::CalibrationOutOfRange { target, ideal });
    }
    Ok(mu)
}

/// Result of a least-squares Gaussian dip fit
/// f(tau) = baseline - depth * exp(-(tau - center)^2 / (2 width^2)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub center: f64,
    pub depth: f64,
    pub width: f64,
    pub baseline: f64,
    /// Root-mean-square residual at the solution.
    pub residual: f64,
    pub iterations: usize,
}

/// Levenberg-Marquardt fit of a Gaussian dip. Converged when the parameter
/// step drops below [`tol::FIT_STEP`]; capped at [`tol::FIT_MAX_ITERATIONS`].
/// Flat data short-circuits to depth 0 with the constant baseline.
pub fn fit_gaussian_dip(taus: &[f64], coincidences: &[f64]) -> Result<GaussianFit> {
    if taus.len() < 5 || taus.len() != coincidences.len() {
        return Err(Error::TooFewSamples {
            got: taus.len().min(coincidences.len()),
            need: 5,
        });
    }
    if coincidences.iter().any(|&y| !y.is_finite() || y < 0.0) {
        return Err(Error::InvalidParams(
            "coincidence samples must be finite and non-negative".into(),
        ));
    }

    let y_max = coincidences
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let y_min = coincidences.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_min = taus.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_max = taus.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = t_max - t_min;

    if y_max - y_min <= 1e-14 * y_max.abs().max(1.0) {
        let mean = coincidences.iter().sum::<f64>() / coincidences.len() as f64;
        return Ok(GaussianFit {
            center: (t_min + t_max) / 2.0,
            depth: 0.0,
            width: if span > 0.0 { span / 4.0 } else { 1.0 },
            baseline: mean,
            residual: 0.0,
            iterations: 0,
        });
    }

    // p = [center, depth, width, baseline]. Seed against the edge level so
    // inverted dips (coincidence peaks, negative depth) start with the
    // right orientation instead of chasing a grid-edge minimum.
    let edge_level = 0.5 * (coincidences[0] + coincidences[coincidences.len() - 1]);
    let argmin = coincidences
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let argmax = coincidences
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let dip_depth = edge_level - y_min;
    let peak_depth = edge_level - y_max;
    let (center0, depth0) = if dip_depth.abs() >= peak_depth.abs() {
        (taus[argmin], dip_depth)
    } else {
        (taus[argmax], peak_depth)
    };
    let mut p = [center0, depth0, (span / 6.0).max(1e-6), edge_level];

    let model = |p: &[f64; 4], t: f64| -> (f64, [f64; 4]) {
        let dt = t - p[0];
        let w2 = p[2] * p[2];
        let e = (-dt * dt / (2.0 * w2)).exp();
        let f = p[3] - p[1] * e;
        let grad = [
            -p[1] * e * dt / w2,
            -e,
            -p[1] * e * dt * dt / (w2 * p[2]),
            1.0,
        ];
        (f, grad)
    };

    let sse = |p: &[f64; 4]| -> f64 {
        taus.iter()
            .zip(coincidences)
            .map(|(&t, &y)| {
                let (f, _) = model(p, t);
                (f - y) * (f - y)
            })
            .sum()
    };

    let mut lambda = 1e-3;
    let mut current_sse = sse(&p);
    let mut iterations = 0;
    while iterations < tol::FIT_MAX_ITERATIONS {
        iterations += 1;

        // normal equations (J^T J + lambda diag) delta = -J^T r
        let mut jtj = [[0.0f64; 4]; 4];
        let mut jtr = [0.0f64; 4];
        for (&t, &y) in taus.iter().zip(coincidences) {
            let (f, g) = model(&p, t);
            let r = f - y;
            for a in 0..4 {
                jtr[a] += g[a] * r;
                for b in 0..4 {
                    jtj[a][b] += g[a] * g[b];
                }
            }
        }
        let diag_max = (0..4).map(|a| jtj[a][a]).fold(0.0, f64::max).max(1e-300);

        let mut lhs = Array2::<Complex64>::zeros((4, 4));
        let mut rhs = Array2::<Complex64>::zeros((4, 1));
        for a in 0..4 {
            for b in 0..4 {
                lhs[[a, b]] = Complex64::new(jtj[a][b], 0.0);
            }
            lhs[[a, a]] += Complex64::new(lambda * jtj[a][a].max(1e-12 * diag_max), 0.0);
            rhs[[a, 0]] = Complex64::new(-jtr[a], 0.0);
        }

        let delta = match linalg::solve(lhs, rhs) {
            Ok(d) => d,
            Err(_) => {
                lambda *= 4.0;
                continue;
            }
        };
        let step: Vec<f64> = (0..4).map(|a| delta[[a, 0]].re).collect();
        let candidate = [
            p[0] + step[0],
            p[1] + step[1],
            p[2] + step[2],
            p[3] + step[3],
        ];
        let candidate_sse = sse(&candidate);

        if candidate_sse.is_finite() && candidate_sse <= current_sse {
            p = candidate;
            current_sse = candidate_sse;
            lambda = (lambda / 3.0).max(1e-12);
            let max_step = step.iter().map(|s| s.abs()).fold(0.0, f64::max);
            if max_step < tol::FIT_STEP {
                return Ok(GaussianFit {
                    center: p[0],
                    depth: p[1],
                    width: p[2].abs(),
                    baseline: p[3],
                    residual: (current_sse / taus.len() as f64).sqrt(),
                    iterations,
                });
            }
        } else {
            lambda *= 4.0;
        }
    }
    Err(Error::FitDidNotConverge {
        iterations,
        residual: (current_sse / taus.len() as f64).sqrt(),
    })
}

/// Locate the zero-delay coincidence minimum in `[z_lo, z_hi]` by
/// golden-section search (derivative-free: with mu < 1 the minimum is no
/// longer a root). Converges to [`tol::DIP_LOCATE_Z`] in z; a minimizer
/// pinned to the bracket edge is reported as "no interior minimum".
pub fn locate_dip_z(
    params: &CouplerParams,
    model: &DistinguishabilityModel,
    z_lo: f64,
    z_hi: f64,
) -> Result<(f64, f64)> {
    if !(z_lo.is_finite() && z_hi.is_finite() && 0.0 <= z_lo && z_lo < z_hi) {
        return Err(Error::InvalidParams(format!(
            "invalid bracket [{z_lo}, {z_hi}]"
        )));
    }
    let f = |z: f64| coincidence_with_delay(params, z, 0.0, model);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;

    let mut lo = z_lo;
    let mut hi = z_hi;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol::DIP_LOCATE_Z {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let z_star = 0.5 * (lo + hi);
    let edge = 2.0 * tol::DIP_LOCATE_Z;
    if z_star - z_lo < edge || z_hi - z_star < edge {
        return Err(Error::NoInteriorMinimum { lo: z_lo, hi: z_hi });
    }
    Ok((z_star, f(z_star)))
}

/// A coincidence surface over a (z, tau) grid with per-z dip fits and
/// visibilities. Rows follow the z grid in order; the surface is row-major.
#[derive(Debug, Clone)]
pub struct HomScanResult {
    pub z: Vec<f64>,
    pub tau: Vec<f64>,
    /// `surface[i][j]` = Gamma(`z[i]`, `tau[j]`)
    pub surface: Vec<Vec<f64>>,
    /// Per-z Gaussian fit (an Err records a non-converged fit; the scan
    /// itself continues).
    pub fits: Vec<Result<GaussianFit>>,
    /// Per-z visibility; None where the distinguishable baseline vanishes.
    pub visibility: Vec<Option<f64>>,
}

/// Evaluate a full coincidence scan. Grid points are independent pure
/// evaluations assembled in deterministic grid order.
pub fn scan(
    params: &CouplerParams,
    model: &DistinguishabilityModel,
    z_values: &[f64],
    tau_values: &[f64],
) -> HomScanResult {
    let mut surface = Vec::with_capacity(z_values.len());
    let mut fits = Vec::with_capacity(z_values.len());
    let mut vis = Vec::with_capacity(z_values.len());
    for &z in z_values {
        let row: Vec<f64> = tau_values
            .iter()
            .map(|&tau| coincidence_with_delay(params, z, tau, model))
            .collect();
        fits.push(fit_gaussian_dip(tau_values, &row));
        vis.push(visibility(params, z, model).ok());
        surface.push(row);
    }
    HomScanResult {
        z: z_values.to_vec(),
        tau: tau_values.to_vec(),
        surface,
        fits,
        visibility: vis,
    }
}
