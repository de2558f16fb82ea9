//! The master-equation engine: Liouvillian superoperator assembly,
//! propagation by matrix exponential, an independent RK4 integrator, and the
//! spectral (eigenmode) decomposition.
//!
//! The density matrix obeys
//!
//! ```text
//! d rho / dz = -i [H, rho] + gamma (2 a_L rho a_L^dag - {a_L^dag a_L, rho})
//! ```
//!
//! with H = kappa (a_L^dag a_R + a_L a_R^dag). The jump rate 2*gamma makes an
//! isolated lossy guide decay as exp(-2 gamma z) in intensity, which is the
//! convention that reproduces the closed-form coincidence rate and the
//! threshold gamma = 2 kappa.
//!
//! The dissipator is trace-preserving for every gamma: the lost photon ends
//! up as vacuum population, so the loss is visible in photon-number
//! observables, never in the trace.
//!
//! Vectorization is column-stacking, so
//!
//! ```text
//! L = -i (I (x) H - H^T (x) I)
//!     + gamma (2 conj(a_L) (x) a_L - I (x) a_L^dag a_L - (a_L^dag a_L)^T (x) I)
//! ```

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::fock::{
    annihilator, hamiltonian, pair_detection_operator, real_expectation, DensityMatrix, FockBasis,
    Mode,
};
use crate::linalg;
use crate::params::{CouplerParams, Regime};
use crate::tol;

/// The Liouvillian as a dense d^2 x d^2 matrix over vectorized density
/// matrices. Immutable after construction; share freely across workers.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    basis: FockBasis,
    params: CouplerParams,
    matrix: Array2<Complex64>,
}

impl Superoperator {
    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn params(&self) -> &CouplerParams {
        &self.params
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// Side of the superoperator matrix (= basis dimension squared).
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Apply to a vectorized density matrix.
    pub fn apply(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        self.matrix.dot(v)
    }

    /// Debug dump with complex entries as [re, im] pairs, for
    /// cross-implementation comparison.
    pub fn to_debug_json(&self) -> serde_json::Value {
        json!({
            "schema_version": 1,
            "kind": "superoperator",
            "truncation": self.basis.truncation(),
            "dim": self.dim(),
            "kappa": self.params.kappa(),
            "gamma": self.params.gamma(),
            "vectorization": "column-stacking",
            "matrix": complex_matrix_json(&self.matrix),
        })
    }
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn complex_matrix_json(m: &Array2<Complex64>) -> serde_json::Value {
    serde_json::Value::Array(
        m.rows()
            .into_iter()
            .map(|row| serde_json::Value::Array(row.iter().map(|&z| complex_json(z)).collect()))
            .collect(),
    )
}

/// Assemble the Liouvillian for the given basis and coupler parameters.
pub fn build_liouvillian(basis: &FockBasis, params: &CouplerParams) -> Result<Superoperator> {
    let d = basis.dim();
    let h = hamiltonian(basis, params.kappa())?;
    let a_l = annihilator(basis, Mode::L);
    let n_l = a_l.dagger().dot(&a_l);

    let eye = linalg::identity(d);
    let h_t = h.matrix().t().to_owned();
    let a_conj = a_l.matrix().mapv(|x| x.conj());
    let n_t = n_l.matrix().t().to_owned();

    let minus_i = Complex64::new(0.0, -1.0);
    let g = Complex64::new(params.gamma(), 0.0);
    let two = Complex64::new(2.0, 0.0);

    let unitary = (linalg::kron(&eye, h.matrix()) - linalg::kron(&h_t, &eye)) * minus_i;
    let jump = linalg::kron(&a_conj, a_l.matrix()) * two;
    let anticomm = linalg::kron(&eye, n_l.matrix()) + linalg::kron(&n_t, &eye);
    let matrix = unitary + (jump - anticomm) * g;

    debug_assert_eq!(matrix.nrows(), d * d);
    Ok(Superoperator {
        basis: basis.clone(),
        params: *params,
        matrix,
    })
}

/// Propagate by rho(z) = exp(L z) rho_0 and re-validate the result.
pub fn propagate(rho0: &DensityMatrix, superop: &Superoperator, z: f64) -> Result<DensityMatrix> {
    if !(z.is_finite() && z >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "propagation length must be non-negative and finite, got {z}"
        )));
    }
    if rho0.basis() != superop.basis() {
        return Err(Error::BasisMismatch {
            expected: superop.basis().dim(),
            got: rho0.basis().dim(),
        });
    }
    let scaled = superop.matrix() * Complex64::new(z, 0.0);
    let propagator = expm(&scaled)?;
    let v = propagator.dot(&linalg::vectorize(rho0.matrix()));
    let out = linalg::unvectorize(&v, rho0.basis().dim());
    let rho = DensityMatrix::from_matrix(rho0.basis(), out)?;
    let drift = rho.trace() - rho0.trace();
    if drift > tol::TRACE_DRIFT {
        return Err(Error::InvariantViolation {
            what: "trace increased under propagation",
            value: drift,
            tolerance: tol::TRACE_DRIFT,
        });
    }
    Ok(rho)
}

/// Fixed-step RK4 on d rho / dz = L rho, evaluated directly on matrices in
/// Hilbert space (commutator plus dissipator), never through the
/// superoperator. This keeps the integrator an independent oracle for
/// [`propagate`].
///
/// The interval is covered by ceil(z / step) equal sub-steps, so the end
/// point lands exactly on z and no sub-step exceeds `step`.
pub fn rk4_integrate(
    rho0: &DensityMatrix,
    params: &CouplerParams,
    z: f64,
    step: f64,
) -> Result<DensityMatrix> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidParams(format!(
            "step must be positive and finite, got {step}"
        )));
    }
    if !(z.is_finite() && z >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "propagation length must be non-negative and finite, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(rho0.clone());
    }
    if step > z {
        return Err(Error::StepExceedsLength { step, z });
    }

    let basis = rho0.basis();
    let h = hamiltonian(basis, params.kappa())?;
    let a_l = annihilator(basis, Mode::L);
    let a_l_dag = a_l.dagger();
    let n_l = a_l_dag.dot(&a_l);
    let gamma = params.gamma();
    let i = Complex64::new(0.0, 1.0);

    let rhs = |r: &Array2<Complex64>| -> Array2<Complex64> {
        let mut d = (h.matrix().dot(r) - r.dot(h.matrix())) * (-i);
        if gamma > 0.0 {
            let jump = a_l.matrix().dot(r).dot(a_l_dag.matrix());
            let anti = n_l.matrix().dot(r) + r.dot(n_l.matrix());
            d = d + (jump * Complex64::new(2.0, 0.0) - anti) * Complex64::new(gamma, 0.0);
        }
        d
    };

    let n_steps = (z / step).ceil() as usize;
    let h_step = z / n_steps as f64;
    let half = Complex64::new(h_step / 2.0, 0.0);
    let full = Complex64::new(h_step, 0.0);
    let sixth = Complex64::new(h_step / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);

    let mut rho = rho0.matrix().clone();
    for step_idx in 0..n_steps {
        let k1 = rhs(&rho);
        let k2 = rhs(&(&rho + &(&k1 * half)));
        let k3 = rhs(&(&rho + &(&k2 * half)));
        let k4 = rhs(&(&rho + &(&k3 * full)));
        rho = rho + (k1 + k2 * two + k3 * two + k4) * sixth;
        if step_idx % 1024 == 1023 && !rho.iter().all(|x| x.re.is_finite() && x.im.is_finite()) {
            return Err(Error::NonFinite {
                steps: step_idx + 1,
                step: h_step,
            });
        }
    }
    if !rho.iter().all(|x| x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::NonFinite {
            steps: n_steps,
            step: h_step,
        });
    }
    DensityMatrix::from_matrix(basis, rho)
}

/// Two-photon coincidence rate trace(rho a_L^dag a_R^dag a_R a_L).
pub fn coincidence(rho: &DensityMatrix) -> Result<f64> {
    real_expectation(
        rho,
        &pair_detection_operator(rho.basis()),
        "imaginary or negative coincidence",
    )
}

/// Biorthogonal eigendecomposition of a Liouvillian.
///
/// Left eigenvectors are stored as rows, normalized against the right
/// eigenvectors so that left . right = identity; the biorthogonality
/// residual records max |left . right - I|.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    basis: FockBasis,
    eigenvalues: Vec<Complex64>,
    /// Columns are right eigenvectors, in eigenvalue order.
    right: Array2<Complex64>,
    /// Rows are left eigenvectors, in eigenvalue order.
    left: Array2<Complex64>,
    biorthogonality_residual: f64,
    condition: f64,
}

impl SpectralDecomposition {
    /// Complex decay rates, sorted by descending real part, then ascending
    /// imaginary part.
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn right_eigenvectors(&self) -> &Array2<Complex64> {
        &self.right
    }

    pub fn left_eigenvectors(&self) -> &Array2<Complex64> {
        &self.left
    }

    pub fn biorthogonality_residual(&self) -> f64 {
        self.biorthogonality_residual
    }

    /// 1-norm condition estimate of the right-eigenvector matrix.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Propagate through the eigenmodes: rho(z) = sum_i e^{lambda_i z} r_i
    /// (l_i . vec(rho_0)). Cross-check path for the matrix exponential.
    pub fn evolve(&self, rho0: &DensityMatrix, z: f64) -> Result<DensityMatrix> {
        if !(z.is_finite() && z >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "propagation length must be non-negative and finite, got {z}"
            )));
        }
        if rho0.basis() != &self.basis {
            return Err(Error::BasisMismatch {
                expected: self.basis.dim(),
                got: rho0.basis().dim(),
            });
        }
        let mut coeffs = self.left.dot(&linalg::vectorize(rho0.matrix()));
        for (c, lambda) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c *= (lambda * z).exp();
        }
        let v = self.right.dot(&coeffs);
        DensityMatrix::from_matrix(&self.basis, linalg::unvectorize(&v, self.basis.dim()))
    }

    pub fn to_debug_json(&self) -> serde_json::Value {
        json!({
            "schema_version": 1,
            "kind": "spectral-decomposition",
            "dim": self.eigenvalues.len(),
            "eigenvalues": self.eigenvalues.iter().map(|&z| complex_json(z)).collect::<Vec<_>>(),
            "right_eigenvectors_columns": complex_matrix_json(&self.right),
            "left_eigenvectors_rows": complex_matrix_json(&self.left),
            "biorthogonality_residual": self.biorthogonality_residual,
            "condition": self.condition,
        })
    }
}

/// Diagonalize a Liouvillian into biorthogonal eigenmodes.
///
/// Refused at the exceptional point gamma = 2 kappa, where the generator is
/// defective: the reported condition number documents how close to
/// non-diagonalizable the eigenvector matrix is. The matrix-exponential path
/// ([`propagate`]) keeps working there.
pub fn spectral_decompose(superop: &Superoperator) -> Result<SpectralDecomposition> {
    let n = superop.dim();
    let evd = linalg::to_faer(superop.matrix())
        .eigen()
        .map_err(|e| Error::InvalidParams(format!("eigensolver failed: {e:?}")))?;

    let mut order: Vec<usize> = (0..n).collect();
    let s = evd.S();
    order.sort_by(|&i, &j| {
        s[i].re
            .total_cmp(&s[j].re)
            .reverse()
            .then(s[i].im.total_cmp(&s[j].im))
    });

    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| s[i]).collect();
    let u = evd.U();
    let right = Array2::from_shape_fn((n, n), |(i, j)| u[(i, order[j])]);

    let at_ep = superop.params().regime() == Regime::ExceptionalPoint;
    let left = match linalg::solve(right.clone(), linalg::identity(n)) {
        Ok(inv) => inv,
        Err(_) if at_ep => {
            return Err(Error::DefectiveLiouvillian {
                condition: f64::INFINITY,
            })
        }
        Err(e) => return Err(e),
    };
    let condition = linalg::norm_1(&right) * linalg::norm_1(&left);
    if at_ep || condition > tol::DEFECTIVE_CONDITION {
        return Err(Error::DefectiveLiouvillian { condition });
    }

    let residual = linalg::max_abs(&(left.dot(&right) - linalg::identity(n)));
    if residual > tol::BIORTHOGONALITY {
        return Err(Error::InvariantViolation {
            what: "biorthogonality residual",
            value: residual,
            tolerance: tol::BIORTHOGONALITY,
        });
    }
    if let Some(max_re) = eigenvalues.iter().map(|l| l.re).reduce(f64::max) {
        if max_re > tol::EIGENVALUE_REAL_PART {
            return Err(Error::InvariantViolation {
                what: "eigenvalue with positive real part",
                value: max_re,
                tolerance: tol::EIGENVALUE_REAL_PART,
            });
        }
    }

    Ok(SpectralDecomposition {
        basis: superop.basis().clone(),
        eigenvalues,
        right,
        left,
        biorthogonality_residual: residual,
        condition,
    })
}
