//! Quantum optics of a lossy two-waveguide directional coupler.
//!
//! The system is a pair of evanescently coupled waveguides where the left
//! guide (`L`) leaks into a reservoir at rate `gamma` while the right guide
//! (`R`) is lossless. Propagation distance `z` plays the role of time and all
//! rates are per centimetre. The crate provides three independent routes to
//! the same physics:
//!
//! * [`lindblad`] — the master-equation engine: a Liouvillian superoperator
//!   acting on vectorized density matrices over a truncated two-mode Fock
//!   space, propagated by matrix exponential, plus a fixed-step RK4
//!   integrator that works directly on density matrices as a cross-check.
//! * [`analytic`] — closed forms for the single-photon transfer matrix, the
//!   two-photon coincidence rate, and the positions of the Hong-Ou-Mandel
//!   dip, valid below, at, and above the loss threshold `gamma = 2 kappa`.
//! * [`hom`] — the Hong-Ou-Mandel measurement model: partial photon
//!   distinguishability under a time delay, coincidence-vs-delay scans,
//!   Gaussian dip fits, and visibility extraction.
//!
//! The routes are deliberately redundant; the test suites hold them against
//! each other to tight tolerances (see [`tol`]).

pub mod analytic;
pub mod error;
pub mod expm;
pub mod fock;
pub mod hom;
mod linalg;
pub mod lindblad;
pub mod params;
pub mod tol;

pub use analytic::{DipKind, DipReport, TransferMatrix};
pub use error::{Error, Result};
pub use fock::{DensityMatrix, FockBasis, FockState, Mode, OperatorMatrix};
pub use hom::{DistinguishabilityModel, GaussianFit, HomScanResult};
pub use lindblad::{SpectralDecomposition, Superoperator};
pub use params::{CouplerParams, Regime};
