//! Truncated two-mode bosonic Fock space and the operators on it.
//!
//! States |n_L, n_R> are kept up to a total photon number `N_max`. The basis
//! order is canonical — ascending total photon number, ties broken by
//! ascending n_L — so every matrix and serialized output is reproducible.
//! The dynamics of this crate never create photons (the hopping Hamiltonian
//! conserves the total and loss only lowers it), so the truncation is exact
//! for any input state inside it.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::tol;

/// Waveguide label. `L` carries the loss, `R` is lossless.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    L,
    R,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::L => write!(f, "L"),
            Mode::R => write!(f, "R"),
        }
    }
}

/// A two-mode number state |n_L, n_R>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockState {
    pub n_l: u32,
    pub n_r: u32,
}

impl FockState {
    pub fn new(n_l: u32, n_r: u32) -> Self {
        Self { n_l, n_r }
    }

    pub fn total(&self) -> u32 {
        self.n_l + self.n_r
    }

    pub fn occupation(&self, mode: Mode) -> u32 {
        match mode {
            Mode::L => self.n_l,
            Mode::R => self.n_r,
        }
    }
}

/// All states with n_L + n_R <= truncation, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    truncation: u32,
    states: Vec<FockState>,
}

impl FockBasis {
    /// Enumerate the basis for a given total-photon truncation.
    pub fn new(truncation: u32) -> Self {
        let mut states = Vec::new();
        for total in 0..=truncation {
            for n_l in 0..=total {
                states.push(FockState::new(n_l, total - n_l));
            }
        }
        Self { truncation, states }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Dimension d = (N_max+1)(N_max+2)/2.
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> FockState {
        self.states[index]
    }

    pub fn index_of(&self, state: FockState) -> Option<usize> {
        if state.total() > self.truncation {
            return None;
        }
        let total = state.total();
        // states of lower totals occupy total*(total+1)/2 slots
        let offset = (total * (total + 1) / 2) as usize;
        Some(offset + state.n_l as usize)
    }
}

/// Dense operator over a [`FockBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    basis: FockBasis,
    matrix: Array2<Complex64>,
}

impl OperatorMatrix {
    pub(crate) fn new(basis: FockBasis, matrix: Array2<Complex64>) -> Self {
        assert_eq!(matrix.nrows(), basis.dim());
        assert_eq!(matrix.ncols(), basis.dim());
        Self { basis, matrix }
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// Adjoint (conjugate transpose).
    pub fn dagger(&self) -> OperatorMatrix {
        let m = Array2::from_shape_fn(self.matrix.raw_dim(), |(i, j)| self.matrix[[j, i]].conj());
        OperatorMatrix::new(self.basis.clone(), m)
    }

    pub fn dot(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.basis, other.basis, "operators live on different bases");
        OperatorMatrix::new(self.basis.clone(), self.matrix.dot(&other.matrix))
    }
}

/// Annihilation operator for one mode: <n-1| a |n> = sqrt(n). Images beyond
/// the truncation cannot occur (lowering only).
pub fn annihilator(basis: &FockBasis, mode: Mode) -> OperatorMatrix {
    let d = basis.dim();
    let mut m = Array2::zeros((d, d));
    for (j, s) in basis.states().iter().enumerate() {
        let n = s.occupation(mode);
        if n == 0 {
            continue;
        }
        let target = match mode {
            Mode::L => FockState::new(s.n_l - 1, s.n_r),
            Mode::R => FockState::new(s.n_l, s.n_r - 1),
        };
        let i = basis.index_of(target).expect("lowering stays in basis");
        m[[i, j]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    OperatorMatrix::new(basis.clone(), m)
}

/// Creation operator; states raised past the truncation map to zero.
pub fn creator(basis: &FockBasis, mode: Mode) -> OperatorMatrix {
    annihilator(basis, mode).dagger()
}

/// Number operator a^dagger a for one mode (diagonal, exact).
pub fn number_operator(basis: &FockBasis, mode: Mode) -> OperatorMatrix {
    let d = basis.dim();
    let mut m = Array2::zeros((d, d));
    for (j, s) in basis.states().iter().enumerate() {
        m[[j, j]] = Complex64::new(s.occupation(mode) as f64, 0.0);
    }
    OperatorMatrix::new(basis.clone(), m)
}

/// Total photon number operator.
pub fn total_number_operator(basis: &FockBasis) -> OperatorMatrix {
    let d = basis.dim();
    let mut m = Array2::zeros((d, d));
    for (j, s) in basis.states().iter().enumerate() {
        m[[j, j]] = Complex64::new(s.total() as f64, 0.0);
    }
    OperatorMatrix::new(basis.clone(), m)
}

/// Hopping Hamiltonian H = kappa (a_L^dag a_R + a_L a_R^dag).
///
/// Built from exact matrix elements rather than products of the truncated
/// ladder matrices: the product form drops the number-conserving paths that
/// pass through the (N_max + 1)-photon sector, e.g. <0,2|H|1,1>.
pub fn hamiltonian(basis: &FockBasis, kappa: f64) -> Result<OperatorMatrix> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidParams(format!(
            "coupling rate kappa must be positive and finite, got {kappa}"
        )));
    }
    let d = basis.dim();
    let mut m = Array2::zeros((d, d));
    for (j, s) in basis.states().iter().enumerate() {
        // a_L^dag a_R : (n_l, n_r) -> (n_l + 1, n_r - 1)
        if s.n_r > 0 {
            let t = FockState::new(s.n_l + 1, s.n_r - 1);
            let i = basis.index_of(t).expect("hop conserves total");
            m[[i, j]] += Complex64::new(kappa * (((s.n_l + 1) * s.n_r) as f64).sqrt(), 0.0);
        }
        // a_L a_R^dag : (n_l, n_r) -> (n_l - 1, n_r + 1)
        if s.n_l > 0 {
            let t = FockState::new(s.n_l - 1, s.n_r + 1);
            let i = basis.index_of(t).expect("hop conserves total");
            m[[i, j]] += Complex64::new(kappa * ((s.n_l * (s.n_r + 1)) as f64).sqrt(), 0.0);
        }
    }
    Ok(OperatorMatrix::new(basis.clone(), m))
}

/// Pair-detection operator a_L^dag a_R^dag a_R a_L, whose expectation is the
/// two-photon coincidence rate. The normal-ordered product of truncated
/// ladder matrices is exact here: every intermediate state has a lower total
/// than the input, so nothing is clipped.
pub fn pair_detection_operator(basis: &FockBasis) -> OperatorMatrix {
    let al = annihilator(basis, Mode::L);
    let ar = annihilator(basis, Mode::R);
    creator(basis, Mode::L).dot(&creator(basis, Mode::R).dot(&ar.dot(&al)))
}

/// Density matrix over a [`FockBasis`]; validated to be Hermitian, to carry
/// trace in [0, 1], and to be positive within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    basis: FockBasis,
    matrix: Array2<Complex64>,
}

impl DensityMatrix {
    /// Pure state |s><s|.
    pub fn pure(basis: &FockBasis, state: FockState) -> Result<Self> {
        let idx = basis.index_of(state).ok_or(Error::StateOutsideTruncation {
            n_l: state.n_l,
            n_r: state.n_r,
            truncation: basis.truncation(),
        })?;
        let d = basis.dim();
        let mut m = Array2::zeros((d, d));
        m[[idx, idx]] = linalg::ONE;
        Ok(Self {
            basis: basis.clone(),
            matrix: m,
        })
    }

    /// Statistical mixture of pure number states; weights must sum to <= 1.
    pub fn mixture(basis: &FockBasis, parts: &[(FockState, f64)]) -> Result<Self> {
        let d = basis.dim();
        let mut m = Array2::zeros((d, d));
        for &(state, w) in parts {
            let idx = basis.index_of(state).ok_or(Error::StateOutsideTruncation {
                n_l: state.n_l,
                n_r: state.n_r,
                truncation: basis.truncation(),
            })?;
            m[[idx, idx]] += Complex64::new(w, 0.0);
        }
        Self::from_matrix(basis, m)
    }

    /// Wrap a raw matrix, enforcing the density-matrix invariants.
    pub fn from_matrix(basis: &FockBasis, matrix: Array2<Complex64>) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::BasisMismatch {
                expected: basis.dim(),
                got: matrix.nrows(),
            });
        }
        let rho = Self {
            basis: basis.clone(),
            matrix,
        };
        rho.validate()?;
        Ok(rho)
    }

    /// Check Hermiticity, trace, and positivity against the crate tolerances.
    // negated comparisons so NaN residuals fail validation
    #[allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_range_contains)]
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_residual();
        if !(herm <= tol::HERMITICITY) {
            return Err(Error::InvariantViolation {
                what: "hermiticity residual",
                value: herm,
                tolerance: tol::HERMITICITY,
            });
        }
        let tr = self.trace();
        if !(tr >= -tol::TRACE_DRIFT && tr <= 1.0 + tol::TRACE_DRIFT) {
            return Err(Error::InvariantViolation {
                what: "trace outside [0, 1]",
                value: tr,
                tolerance: tol::TRACE_DRIFT,
            });
        }
        let min_eig = self.min_eigenvalue();
        if !(min_eig >= tol::POSITIVITY_FLOOR) {
            return Err(Error::InvariantViolation {
                what: "minimum eigenvalue",
                value: min_eig,
                tolerance: tol::POSITIVITY_FLOOR,
            });
        }
        Ok(())
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// Real part of the trace (the imaginary part of a valid trace is zero).
    pub fn trace(&self) -> f64 {
        self.matrix.diag().iter().map(|x| x.re).sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        linalg::hermiticity_residual(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Population of a basis state.
    pub fn population(&self, state: FockState) -> Option<f64> {
        let i = self.basis.index_of(state)?;
        Some(self.matrix[[i, i]].re)
    }
}

/// Read a real observable trace(rho * op) off a state, discarding the
/// imaginary residue and flagging corrupted values.
pub(crate) fn real_expectation(
    rho: &DensityMatrix,
    op: &OperatorMatrix,
    what: &'static str,
) -> Result<f64> {
    if rho.basis() != op.basis() {
        return Err(Error::BasisMismatch {
            expected: op.basis().dim(),
            got: rho.basis().dim(),
        });
    }
    let prod = rho.matrix().dot(op.matrix());
    let tr: Complex64 = prod.diag().iter().sum();
    if tr.im.abs() > tol::IMAG_DISCARD {
        return Err(Error::InvariantViolation {
            what,
            value: tr.im,
            tolerance: tol::IMAG_DISCARD,
        });
    }
    if tr.re < tol::NEGATIVE_OBSERVABLE_FLOOR {
        return Err(Error::InvariantViolation {
            what,
            value: tr.re,
            tolerance: tol::NEGATIVE_OBSERVABLE_FLOOR,
        });
    }
    Ok(tr.re.max(0.0))
}

/// Mean photon number <a^dag a> in one mode.
pub fn number_expectation(rho: &DensityMatrix, mode: Mode) -> Result<f64> {
    real_expectation(
        rho,
        &number_operator(rho.basis(), mode),
        "imaginary or negative photon-number expectation",
    )
}
