//! Numerical tolerances used across the crate.
//!
//! Everything here is pinned; no threshold is left to per-call-site choice.

/// Maximum entrywise |rho - rho^dagger| for a valid density matrix.
pub const HERMITICITY: f64 = 1e-12;

/// Allowed drift above the initial trace under propagation (loss only
/// removes population, so the trace must not grow beyond rounding).
pub const TRACE_DRIFT: f64 = 1e-12;

/// Smallest admissible eigenvalue of a density matrix.
pub const POSITIVITY_FLOOR: f64 = -1e-10;

/// Imaginary residue discarded when reading a real observable off a trace.
pub const IMAG_DISCARD: f64 = 1e-12;

/// Observables this far below zero indicate a corrupted state.
pub const NEGATIVE_OBSERVABLE_FLOOR: f64 = -1e-10;

/// Biorthogonality residual max |<l_i|r_j> - delta_ij| after normalization.
pub const BIORTHOGONALITY: f64 = 1e-8;

/// Eigenvalue real parts of the Liouvillian may not exceed this (the
/// generator is dissipative; nothing grows).
pub const EIGENVALUE_REAL_PART: f64 = 1e-10;

/// Eigenvector condition number beyond which the Liouvillian is treated as
/// defective and eigenmode propagation is refused.
pub const DEFECTIVE_CONDITION: f64 = 1e12;

/// Relative distance |gamma - 2 kappa| / (2 kappa) classifying the
/// exceptional point.
pub const EP_RELATIVE_DISTANCE: f64 = 1e-9;

/// |omega^2 t^2| below which the trigonometric kernels switch to their
/// series forms; keeps the closed forms finite through omega -> 0.
pub const KERNEL_SERIES_SWITCH: f64 = 1e-6;

/// Required agreement between the arcsin and arccos forms of the dip
/// position (they are algebraically identical).
pub const DIP_FORM_IDENTITY: f64 = 1e-12;

/// Default RK4 step in cm: step^4 * rate^5 * z stays far below the 1e-8
/// cross-validation tolerance for all rates used here.
pub const RK4_DEFAULT_STEP: f64 = 1e-3;

/// Gaussian dip fit: parameter step below which the fit has converged.
pub const FIT_STEP: f64 = 1e-10;

/// Gaussian dip fit: iteration cap.
pub const FIT_MAX_ITERATIONS: usize = 200;

/// Golden-section dip localization tolerance in z.
pub const DIP_LOCATE_Z: f64 = 1e-8;
