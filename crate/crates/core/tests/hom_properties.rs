//! Measurement-model properties held against the engine and the closed
//! forms: the distinguishable baseline against two independent single-photon
//! propagations, mixing convexity, dip monotonicity, visibility invariance
//! under mean loss, and dip localization against the analytic positions.

use ptcoupler::analytic::{coincidence_rate, dip_positions};
use ptcoupler::fock::{number_expectation, DensityMatrix, FockBasis, FockState};
use ptcoupler::hom::{
    calibrate_mu, coincidence_with_delay, distinguishable_coincidence, locate_dip_z, scan,
    visibility,
};
use ptcoupler::lindblad::{build_liouvillian, propagate};
use ptcoupler::{CouplerParams, DistinguishabilityModel, Mode};

fn params(kappa: f64, gamma: f64) -> CouplerParams {
    CouplerParams::new(kappa, gamma).unwrap()
}

#[test]
fn distinguishable_baseline_matches_two_independent_propagations() {
    // oracle: each photon propagates alone through the engine; the pair
    // coincidence is the sum of the two product routes
    let basis = FockBasis::new(2);
    for (kappa, gamma) in [(0.25, 0.0), (0.25, 0.35), (0.26, 0.13)] {
        let p = params(kappa, gamma);
        let sup = build_liouvillian(&basis, &p).unwrap();
        let from_l = DensityMatrix::pure(&basis, FockState::new(1, 0)).unwrap();
        let from_r = DensityMatrix::pure(&basis, FockState::new(0, 1)).unwrap();
        for i in 0..=40 {
            let z = 0.15 * i as f64;
            let rho_l = propagate(&from_l, &sup, z).unwrap();
            let rho_r = propagate(&from_r, &sup, z).unwrap();
            let p_ll = number_expectation(&rho_l, Mode::L).unwrap();
            let p_lr = number_expectation(&rho_l, Mode::R).unwrap();
            let p_rl = number_expectation(&rho_r, Mode::L).unwrap();
            let p_rr = number_expectation(&rho_r, Mode::R).unwrap();
            let oracle = p_ll * p_rr + p_lr * p_rl;
            let got = distinguishable_coincidence(&p, z);
            assert!(
                (got - oracle).abs() < 1e-10,
                "kappa={kappa} gamma={gamma} z={z}: {got} vs oracle {oracle}"
            );
        }
    }
}

#[test]
fn mixing_is_convex() {
    let p = params(0.26, 0.13);
    let m = DistinguishabilityModel::new(1.2, 0.85).unwrap();
    for i in 0..=30 {
        let z = 0.2 * i as f64;
        let indist = coincidence_rate(&p, z);
        let dist = distinguishable_coincidence(&p, z);
        let (lo, hi) = if indist < dist {
            (indist, dist)
        } else {
            (dist, indist)
        };
        for j in 0..=20 {
            let tau = -3.0 + 0.3 * j as f64;
            let g = coincidence_with_delay(&p, z, tau, &m);
            assert!(
                (lo - 1e-14..=hi + 1e-14).contains(&g),
                "z={z} tau={tau}: {g} outside [{lo}, {hi}]"
            );
        }
    }
}

#[test]
fn dip_is_monotone_in_absolute_delay() {
    let p = params(0.26, 0.13);
    let m = DistinguishabilityModel::new(1.0, 0.9).unwrap();
    // pick z in the dip region where indistinguishable < distinguishable
    for z in [2.0, 2.9956, 3.5] {
        assert!(coincidence_rate(&p, z) < distinguishable_coincidence(&p, z));
        let mut prev = coincidence_with_delay(&p, z, 0.0, &m);
        for j in 1..=40 {
            let tau = 0.15 * j as f64;
            let g = coincidence_with_delay(&p, z, tau, &m);
            assert!(g + 1e-15 >= prev, "z={z} tau={tau}: dip not monotone");
            prev = g;
        }
    }
}

#[test]
fn visibility_is_invariant_under_uniform_loss() {
    // adding mean loss multiplies both coincidence routes by exp(-2 gbar z),
    // so the visibility ratio cannot move
    let p = params(0.26, 0.13);
    let m = DistinguishabilityModel::new(1.0, 0.9).unwrap();
    let gbar = 0.21;
    for i in 1..=30 {
        let z = 0.2 * i as f64;
        let v = visibility(&p, z, &m).unwrap();
        let damp = (-2.0 * gbar * z).exp();
        let dist = damp * distinguishable_coincidence(&p, z);
        let at_zero = damp * coincidence_with_delay(&p, z, 0.0, &m);
        let v_scaled = (dist - at_zero) / dist;
        assert!(
            (v - v_scaled).abs() < 1e-12,
            "z={z}: visibility moved from {v} to {v_scaled}"
        );
    }
}

#[test]
fn locate_dip_reduces_to_the_analytic_position() {
    let kappa = 0.26;
    let m = DistinguishabilityModel::ideal();
    for gamma in [0.05, 0.13, 0.2, 0.3, 0.4, 0.5] {
        let p = params(kappa, gamma);
        let analytic = dip_positions(&p).unwrap().z_0;
        let (z_star, _) = locate_dip_z(&p, &m, 1.5, 3.5).unwrap();
        assert!(
            (z_star - analytic).abs() < 1e-6,
            "gamma={gamma}: located {z_star} vs analytic {analytic}"
        );
    }
}

#[test]
fn pt_family_calibration_is_self_consistent() {
    // locate the dip, calibrate the overlap to the 0.90 target there, and
    // recompute
    let p = params(0.26, 0.13);
    let m1 = DistinguishabilityModel::ideal();
    let (z_star, _) = locate_dip_z(&p, &m1, 1.5, 3.5).unwrap();
    let mu = calibrate_mu(&p, z_star, 0.90).unwrap();
    let m = DistinguishabilityModel::new(1.0, mu).unwrap();
    let v = visibility(&p, z_star, &m).unwrap();
    assert!((v - 0.90).abs() < 1e-9, "recomputed visibility {v}");
}

#[test]
fn scan_fits_recover_the_overlap_width_everywhere() {
    let p = params(0.26, 0.13);
    let sigma = 0.8;
    let m = DistinguishabilityModel::new(sigma, 0.9).unwrap();
    let zs = [2.2, 2.9956, 3.4];
    let taus: Vec<f64> = (0..81).map(|i| -3.0 + 0.075 * i as f64).collect();
    let result = scan(&p, &m, &zs, &taus);
    for (i, fit) in result.fits.iter().enumerate() {
        let fit = fit.as_ref().unwrap();
        assert!(
            fit.center.abs() < 1e-7,
            "z={}: center {}",
            zs[i],
            fit.center
        );
        assert!(
            (fit.width - sigma).abs() < 1e-6,
            "z={}: width {}",
            zs[i],
            fit.width
        );
        // fitted dip depth over baseline reproduces the visibility
        let v = result.visibility[i].unwrap();
        assert!(
            (fit.depth / fit.baseline - v).abs() < 1e-7,
            "z={}: depth/baseline {} vs visibility {v}",
            zs[i],
            fit.depth / fit.baseline
        );
    }
}
