//! Matrix exponential by scaling-and-squaring with a Pade(13) approximant
//! (Higham 2005). Targets better than 1e-12 relative accuracy; the matrices
//! here are at most 36 x 36, so no effort is spent on larger-scale tricks.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

/// 1-norm bound below which Pade(13) alone meets the accuracy target.
const THETA_13: f64 = 5.371920351148152;

/// Pade(13,13) numerator coefficients b_0..b_13; all exactly representable.
const B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Compute exp(A) for a square complex matrix.
pub fn expm(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return Ok(Array2::zeros((0, 0)));
    }

    let norm = linalg::norm_1(a);
    if !norm.is_finite() {
        return Err(Error::ExpmFailure {
            norm,
            squarings: 0,
            reason: "input has non-finite entries".into(),
        });
    }

    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new((0.5f64).powi(squarings as i32), 0.0);
    let a_scaled = a * scale;

    let mut result = pade_13(&a_scaled).map_err(|e| match e {
        Error::SingularMatrix { pivot } => Error::ExpmFailure {
            norm,
            squarings,
            reason: format!("Pade denominator solve hit pivot {pivot:.3e}"),
        },
        other => other,
    })?;
    for _ in 0..squarings {
        result = result.dot(&result);
    }

    if result
        .iter()
        .any(|x| !x.re.is_finite() || !x.im.is_finite())
    {
        return Err(Error::ExpmFailure {
            norm,
            squarings,
            reason: "non-finite entries after squaring".into(),
        });
    }
    Ok(result)
}

fn pade_13(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    let eye = linalg::identity(n);
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let c = |k: usize| Complex64::new(B[k], 0.0);

    let u_inner = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let u = a.dot(&(a6.dot(&u_inner) + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &eye * c(1)));

    let v_inner = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = a6.dot(&v_inner) + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &eye * c(0);

    linalg::solve(&v - &u, &v + &u)
}
