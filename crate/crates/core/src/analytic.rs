//! Closed-form results for the lossy two-waveguide coupler: single-photon
//! transfer matrix, two-photon coincidence rate, and dip positions.
//!
//! Everything is driven by three scalar kernels in omega^2 = 4 kappa^2 -
//! gamma^2, which continue smoothly through the threshold: trigonometric
//! below it, hyperbolic above it, and series within the switch window. This
//! removes every 0/0 at the exceptional point without branching on regime in
//! the formulas themselves.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fock::Mode;
use crate::params::{CouplerParams, Regime};
use crate::tol;

/// cos(t * sqrt(u)), continued to u <= 0.
fn cos_kernel(u: f64, t: f64) -> f64 {
    let x = u * t * t;
    if x.abs() < tol::KERNEL_SERIES_SWITCH {
        1.0 - x / 2.0 + x * x / 24.0 - x * x * x / 720.0
    } else if u > 0.0 {
        (t * u.sqrt()).cos()
    } else {
        (t * (-u).sqrt()).cosh()
    }
}

/// sin(t * sqrt(u)) / sqrt(u), continued to u <= 0; equals t at u = 0.
fn sinc_kernel(u: f64, t: f64) -> f64 {
    let x = u * t * t;
    if x.abs() < tol::KERNEL_SERIES_SWITCH {
        t * (1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0)
    } else if u > 0.0 {
        let w = u.sqrt();
        (t * w).sin() / w
    } else {
        let w = (-u).sqrt();
        (t * w).sinh() / w
    }
}

/// (1 - cos(t * sqrt(u))) / u, continued to u <= 0; equals t^2/2 at u = 0.
fn versine_kernel(u: f64, t: f64) -> f64 {
    let x = u * t * t;
    if x.abs() < tol::KERNEL_SERIES_SWITCH {
        t * t * (0.5 - x / 24.0 + x * x / 720.0 - x * x * x / 40320.0)
    } else {
        (1.0 - cos_kernel(u, t)) / u
    }
}

/// Single-photon amplitude transfer matrix U(z) = exp(-i H_eff z) with
/// H_eff = [[-i gamma, kappa], [kappa, 0]].
///
/// The amplitude-decay convention is fixed by the intensity of an isolated
/// lossy guide falling off as exp(-2 gamma z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub u_ll: Complex64,
    pub u_lr: Complex64,
    pub u_rl: Complex64,
    pub u_rr: Complex64,
    pub z: f64,
    pub params: CouplerParams,
}

impl TransferMatrix {
    /// Amplitude for a photon launched into `input` to appear in `observe`.
    pub fn amplitude(&self, input: Mode, observe: Mode) -> Complex64 {
        match (observe, input) {
            (Mode::L, Mode::L) => self.u_ll,
            (Mode::L, Mode::R) => self.u_lr,
            (Mode::R, Mode::L) => self.u_rl,
            (Mode::R, Mode::R) => self.u_rr,
        }
    }

    /// Two-photon permanent U_LL U_RR + U_LR U_RL.
    pub fn permanent(&self) -> Complex64 {
        self.u_ll * self.u_rr + self.u_lr * self.u_rl
    }
}

/// Evaluate the transfer matrix at propagation length `z >= 0`.
pub fn transfer_matrix(params: &CouplerParams, z: f64) -> TransferMatrix {
    assert!(z >= 0.0, "propagation length must be non-negative");
    let u = params.omega_squared();
    let t = z / 2.0;
    let c = cos_kernel(u, t);
    let s = sinc_kernel(u, t);
    let damp = (-params.gamma() * t).exp();
    let cross = Complex64::new(0.0, -2.0 * params.kappa() * s * damp);
    TransferMatrix {
        u_ll: Complex64::new(damp * (c - params.gamma() * s), 0.0),
        u_lr: cross,
        u_rl: cross,
        u_rr: Complex64::new(damp * (c + params.gamma() * s), 0.0),
        z,
        params: *params,
    }
}

/// Probability |U_{observe,input}|^2 of finding the photon in `observe`
/// after launching it into `input`.
pub fn population(params: &CouplerParams, z: f64, input: Mode, observe: Mode) -> f64 {
    transfer_matrix(params, z)
        .amplitude(input, observe)
        .norm_sqr()
}

/// Fraction of the surviving power remaining in the excited waveguide:
/// |U_{in,in}|^2 / (|U_{L,in}|^2 + |U_{R,in}|^2). The normalization removes
/// the mean loss, leaving only the loss asymmetry.
pub fn intensity_ratio(params: &CouplerParams, z: f64, input: Mode) -> f64 {
    let u = transfer_matrix(params, z);
    let bar = u.amplitude(input, input).norm_sqr();
    let cross = match input {
        Mode::L => u.u_rl.norm_sqr(),
        Mode::R => u.u_lr.norm_sqr(),
    };
    bar / (bar + cross)
}

/// Two-photon coincidence rate for the |1,1> input,
/// Gamma(z) = exp(-2 gamma z) * ((gamma^2 - 4 kappa^2 cos(omega z)) / omega^2)^2,
/// evaluated through the versine kernel so the threshold and the broken
/// regime come out of the same expression.
pub fn coincidence_rate(params: &CouplerParams, z: f64) -> f64 {
    assert!(z >= 0.0, "propagation length must be non-negative");
    let k2 = params.kappa() * params.kappa();
    // (gamma^2 - 4k^2 cos) / omega^2 = 4k^2 (1 - cos)/omega^2 - 1
    let inner = 4.0 * k2 * versine_kernel(params.omega_squared(), z) - 1.0;
    (-2.0 * params.gamma() * z).exp() * inner * inner
}

/// Coincidence computed as the squared permanent of the transfer matrix;
/// algebraically identical to [`coincidence_rate`] because the pure-loss
/// channel factorizes over photon amplitudes.
pub fn permanent_coincidence(params: &CouplerParams, z: f64) -> f64 {
    transfer_matrix(params, z).permanent().norm_sqr()
}

/// How the reported dip position was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DipKind {
    /// Real root of the coincidence rate (unbroken regime).
    Root,
    /// Threshold limit 1/(sqrt(2) kappa) at the exceptional point.
    EpLimit,
    /// Analytic continuation into the broken regime (omega imaginary,
    /// arcsin -> arsinh); no oscillatory dip exists there.
    Continued,
}

/// Dip positions of the coincidence rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipReport {
    /// Hermitian dip position z_H = pi / (4 kappa).
    pub z_h: f64,
    /// Lossy dip position z_0 = (2/omega) arcsin(omega / (sqrt(8) kappa)).
    pub z_0: f64,
    /// Counterintuitive shift z_H - z_0 (>= 0; the dip moves earlier).
    pub shift: f64,
    pub regime: Regime,
    pub kind: DipKind,
}

impl DipReport {
    /// True when z_0 is a genuine root of the coincidence rate.
    pub fn has_dip(&self) -> bool {
        self.kind != DipKind::Continued
    }
}

/// Compute z_H and z_0. The arcsin and arccos forms of z_0 are algebraically
/// identical; both are evaluated and must agree to [`tol::DIP_FORM_IDENTITY`].
pub fn dip_positions(params: &CouplerParams) -> Result<DipReport> {
    let kappa = params.kappa();
    let gamma = params.gamma();
    let z_h = PI / (4.0 * kappa);

    let (z_0, kind) = match params.regime() {
        Regime::Unbroken => {
            let omega = params.omega().expect("unbroken regime has real omega");
            let arcsin_form = (2.0 / omega) * (omega / (8f64.sqrt() * kappa)).asin();
            let arccos_form = (gamma * gamma / (4.0 * kappa * kappa)).acos() / omega;
            // close to threshold the arccos form loses digits to the
            // cancellation in 1 - gamma^2/(4 kappa^2); one ulp of its
            // argument moves z_0 by ~ eps * kappa / omega^2, so the identity
            // tolerance carries that conditioning factor
            let conditioning = 2e-15 * kappa / params.omega_squared();
            let identity_tol = tol::DIP_FORM_IDENTITY.max(conditioning);
            let gap = (arcsin_form - arccos_form).abs();
            if gap > identity_tol {
                return Err(Error::InvariantViolation {
                    what: "arcsin and arccos dip forms disagree",
                    value: gap,
                    tolerance: identity_tol,
                });
            }
            (arcsin_form, DipKind::Root)
        }
        Regime::ExceptionalPoint => ((2f64.sqrt() * kappa).recip(), DipKind::EpLimit),
        Regime::Broken => {
            // omega = i|omega|: arcsin continues to arsinh
            let abs_omega = (-params.omega_squared()).sqrt();
            let continued = (2.0 / abs_omega) * (abs_omega / (8f64.sqrt() * kappa)).asinh();
            (continued, DipKind::Continued)
        }
    };

    Ok(DipReport {
        z_h,
        z_0,
        shift: z_h - z_0,
        regime: params.regime(),
        kind,
    })
}
