//! Minimal engine-vs-closed-form cross-check; mirrors the README example.

use ptcoupler::analytic::coincidence_rate;
use ptcoupler::fock::{DensityMatrix, FockState};
use ptcoupler::lindblad::{build_liouvillian, coincidence, propagate};
use ptcoupler::{CouplerParams, FockBasis, Result};

fn main() -> Result<()> {
    let params = CouplerParams::new(0.25, 0.35)?;
    let basis = FockBasis::new(2);
    let rho0 = DensityMatrix::pure(&basis, FockState::new(1, 1))?;
    let liouvillian = build_liouvillian(&basis, &params)?;

    let rho = propagate(&rho0, &liouvillian, 1.0)?;
    let engine = coincidence(&rho)?;
    let closed_form = coincidence_rate(&params, 1.0);
    assert!((engine - closed_form).abs() < 1e-10);
    println!("coincidence at z = 1 cm: engine {engine:.12}, closed form {closed_form:.12}");
    Ok(())
}
