//! Small dense complex-matrix helpers: LU solve, Kronecker product,
//! vectorization, norms, and faer interop for eigenproblems.
//!
//! Matrices here are at most d^2 x d^2 with d = (N_max+1)(N_max+2)/2, i.e.
//! 36 x 36 at the default truncation, so everything is plain dense code.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub(crate) fn identity(n: usize) -> Array2<Complex64> {
    Array2::from_diag_elem(n, ONE)
}

/// Kronecker product, row-major convention: out[(ia*nb+ib, ja*mb+jb)] = a[ia,ja] * b[ib,jb].
pub(crate) fn kron(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (na, ma) = a.dim();
    let (nb, mb) = b.dim();
    let mut out = Array2::zeros((na * nb, ma * mb));
    for ((ia, ja), &va) in a.indexed_iter() {
        if va == Complex64::ZERO {
            continue;
        }
        for ((ib, jb), &vb) in b.indexed_iter() {
            out[[ia * nb + ib, ja * mb + jb]] = va * vb;
        }
    }
    out
}

/// Column-stack a matrix: element (i, j) lands at index i + d*j.
pub(crate) fn vectorize(m: &Array2<Complex64>) -> Array1<Complex64> {
    let (d, _) = m.dim();
    Array1::from_shape_fn(d * d, |k| m[[k % d, k / d]])
}

/// Inverse of [`vectorize`].
pub(crate) fn unvectorize(v: &Array1<Complex64>, d: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((d, d), |(i, j)| v[i + d * j])
}

/// Max column sum of absolute values.
pub(crate) fn norm_1(a: &Array2<Complex64>) -> f64 {
    let mut max = 0.0f64;
    for col in a.columns() {
        let s: f64 = col.iter().map(|x| x.norm()).sum();
        max = max.max(s);
    }
    max
}

pub(crate) fn max_abs(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Max entrywise |a - a^dagger|.
pub(crate) fn hermiticity_residual(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut max = 0.0f64;
    for i in 0..n {
        for j in i..n {
            max = max.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    max
}

/// Solve A X = B by LU with partial pivoting. A is consumed as workspace.
pub(crate) fn solve(
    mut a: Array2<Complex64>,
    mut b: Array2<Complex64>,
) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    assert_eq!(n, b.nrows());
    let m = b.ncols();
    let scale = norm_1(&a).max(1.0);

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = a[[col, col]].norm();
        for row in (col + 1)..n {
            let mag = a[[row, col]].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag < 1e-14 * scale {
            return Err(Error::SingularMatrix { pivot: pivot_mag });
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap([col, j], [pivot_row, j]);
            }
            for j in 0..m {
                b.swap([col, j], [pivot_row, j]);
            }
        }
        let pivot = a[[col, col]];
        for row in (col + 1)..n {
            let factor = a[[row, col]] / pivot;
            if factor == Complex64::ZERO {
                continue;
            }
            for j in (col + 1)..n {
                let v = a[[col, j]];
                a[[row, j]] -= factor * v;
            }
            for j in 0..m {
                let v = b[[col, j]];
                b[[row, j]] -= factor * v;
            }
        }
    }

    let mut x = Array2::<Complex64>::zeros((n, m));
    for col in (0..n).rev() {
        for j in 0..m {
            let mut sum = b[[col, j]];
            for k in (col + 1)..n {
                sum -= a[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = sum / a[[col, col]];
        }
    }
    Ok(x)
}

pub(crate) fn to_faer(a: &Array2<Complex64>) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

/// Eigenvalues of a Hermitian matrix, ascending. The caller is responsible
/// for `a` actually being Hermitian.
pub(crate) fn hermitian_eigenvalues(a: &Array2<Complex64>) -> Vec<f64> {
    to_faer(a)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("self-adjoint eigensolver failed on a finite matrix")
}
