//! Coupler parameters and loss-regime classification.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::tol;

/// Loss regime relative to the threshold gamma = 2 kappa, where the
/// inter-waveguide oscillation frequency omega = sqrt(4 kappa^2 - gamma^2)
/// turns imaginary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// gamma < 2 kappa: omega real, oscillatory exchange.
    Unbroken,
    /// gamma = 2 kappa within relative tolerance: defective effective
    /// Hamiltonian, sinc-limit dynamics.
    ExceptionalPoint,
    /// gamma > 2 kappa: omega imaginary, overdamped exchange.
    Broken,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Unbroken => write!(f, "unbroken"),
            Regime::ExceptionalPoint => write!(f, "exceptional-point"),
            Regime::Broken => write!(f, "broken"),
        }
    }
}

/// Coupling rate kappa, loss rate gamma (both 1/cm), and derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerParams {
    kappa: f64,
    gamma: f64,
    regime: Regime,
}

impl CouplerParams {
    pub fn new(kappa: f64, gamma: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParams(format!(
                "coupling rate kappa must be positive and finite, got {kappa}"
            )));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "loss rate gamma must be non-negative and finite, got {gamma}"
            )));
        }
        let threshold = 2.0 * kappa;
        let regime = if (gamma - threshold).abs() <= tol::EP_RELATIVE_DISTANCE * threshold {
            Regime::ExceptionalPoint
        } else if gamma < threshold {
            Regime::Unbroken
        } else {
            Regime::Broken
        };
        Ok(Self {
            kappa,
            gamma,
            regime,
        })
    }

    /// Lossless coupler with the same coupling rate.
    pub fn hermitian(kappa: f64) -> Result<Self> {
        Self::new(kappa, 0.0)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Oscillation frequency omega = sqrt(4 kappa^2 - gamma^2); real and
    /// positive only below threshold.
    pub fn omega(&self) -> Option<f64> {
        match self.regime {
            Regime::Unbroken => Some(self.omega_squared().sqrt()),
            _ => None,
        }
    }

    /// omega^2 = 4 kappa^2 - gamma^2, valid in every regime (negative above
    /// threshold). The analytic kernels consume this directly.
    pub fn omega_squared(&self) -> f64 {
        4.0 * self.kappa * self.kappa - self.gamma * self.gamma
    }

    /// Coupling length L_c = pi / (2 kappa): full power transfer in the
    /// lossless coupler.
    pub fn coupling_length(&self) -> f64 {
        PI / (2.0 * self.kappa)
    }
}
