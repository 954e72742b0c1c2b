mod common;

use approx::assert_abs_diff_eq;
use common::*;
use nalgebra::DMatrix;
use pgtomo::gates::{calibrated_povms, choi_of_unitary};
use pgtomo::measurement::{
    born_probabilities, build_design, exact_frequencies, povm_decompose, Povm, PovmSet,
};
use pgtomo::operator::{
    bloch_to_density, density_to_bloch, gell_mann_basis, hermitian_eig, hs_distance, partial_trace,
    ComplexMatrix, Keep,
};
use pgtomo::process::{
    apply_choi_raw, assemble_choi, decompose_coefficients, delta_bound, project_physical,
    random_pure_state,
};
use pgtomo::state::{confidence_level_raw, enm_project, lls_from_frequencies, EnmMode};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn bloch_round_trip(d in 2usize..=4, seed: u64) {
        let mut r = rng(seed);
        let basis = gell_mann_basis(d);
        let rho = random_state(d, d, &mut r);
        let s = density_to_bloch(rho.matrix(), &basis).unwrap();
        let back = bloch_to_density(&s, &basis).unwrap();
        prop_assert!(back.is_physical);
        prop_assert!(back.matrix.max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn hs_distance_is_a_metric(seed: u64) {
        let mut r = rng(seed);
        let a = random_state(3, 2, &mut r);
        let b = random_state(3, 3, &mut r);
        let c = random_state(3, 1, &mut r);
        let ab = hs_distance(a.matrix(), b.matrix()).unwrap();
        let bc = hs_distance(b.matrix(), c.matrix()).unwrap();
        let ac = hs_distance(a.matrix(), c.matrix()).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert_eq!(ab, hs_distance(b.matrix(), a.matrix()).unwrap());
        prop_assert!(hs_distance(a.matrix(), a.matrix()).unwrap() < 1e-15);
        prop_assert!(ab <= 1.0 + 1e-12);
    }

    #[test]
    fn effects_rebuild_from_decomposition(d in 2usize..=3, outcomes in 2usize..=5, seed: u64) {
        let mut r = rng(seed);
        let povm = Povm::new(random_povm_effects(d, outcomes, &mut r)).unwrap();
        let basis = gell_mann_basis(d);
        for (dec, effect) in povm_decompose(&povm, &basis).unwrap().iter().zip(povm.effects()) {
            let rebuilt = &ComplexMatrix::identity(d).scale_real(dec.a0) + &basis.combine(&dec.a);
            prop_assert!(rebuilt.max_abs_diff(effect) < 1e-12);
        }
        let rho = random_state(d, d, &mut r);
        let p = born_probabilities(&rho, &povm).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn left_inverse_inverts_design(seed: u64) {
        let mut r = rng(seed);
        let povms = PovmSet::new(vec![
            Povm::new(random_povm_effects(2, 4, &mut r)).unwrap(),
            Povm::new(random_povm_effects(2, 3, &mut r)).unwrap(),
        ]).unwrap();
        let design = build_design(&povms, &gell_mann_basis(2)).unwrap();
        let prod = design.left_inverse() * design.a();
        prop_assert!((prod - DMatrix::<f64>::identity(3, 3)).amax() < 1e-9);
    }

    #[test]
    fn exact_frequencies_recover_state(d in 2usize..=3, seed: u64) {
        let mut r = rng(seed);
        let basis = gell_mann_basis(d);
        let povms = PovmSet::new(
            (0..d + 1).map(|_| Povm::new(random_povm_effects(d, d + 1, &mut r)).unwrap()).collect(),
        ).unwrap();
        let design = build_design(&povms, &basis).unwrap();
        let rho = random_state(d, d, &mut r);
        let lls = lls_from_frequencies(&exact_frequencies(&rho, &povms).unwrap(), &design, &basis).unwrap();
        prop_assert!(lls.rho_lls.max_abs_diff(rho.matrix()) < 1e-10);
        let enm = enm_project(&lls.rho_lls, EnmMode::HsProjection).unwrap();
        prop_assert!(enm.matrix().max_abs_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn enm_matches_threshold_oracle(d in 2usize..=4, seed: u64) {
        let mut r = rng(seed);
        let raw = random_unit_trace_hermitian(d, 0.4, &mut r);
        let enm = enm_project(&raw, EnmMode::HsProjection).unwrap();
        let oracle = simplex_projection_oracle(&raw);
        prop_assert!(enm.matrix().max_abs_diff(&oracle) < 1e-9);
        let best = hs_distance(&raw, enm.matrix()).unwrap();
        for rank in 1..=d {
            let other = random_state(d, rank, &mut r);
            prop_assert!(best <= hs_distance(&raw, other.matrix()).unwrap() + 1e-12);
        }
    }

    #[test]
    fn truncation_drops_negative_weight(seed: u64) {
        let mut r = rng(seed);
        let raw = random_unit_trace_hermitian(3, 0.5, &mut r);
        let eig = hermitian_eig(&raw).unwrap();
        let kept: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
        let total: f64 = kept.iter().sum();
        let expected = eig.reconstruct_with(&kept.iter().map(|v| v / total).collect::<Vec<_>>());
        let out = enm_project(&raw, EnmMode::TruncateRenormalize).unwrap();
        prop_assert!(out.matrix().max_abs_diff(&expected) < 1e-10);
    }

    #[test]
    fn confidence_is_monotone(delta in 0.0f64..0.2, extra in 0.0f64..0.05, n in 100u64..100_000) {
        let c = [15.5, 14.0, 16.2];
        let base = confidence_level_raw(delta, n, &c, 2);
        prop_assert!(confidence_level_raw(delta + extra, n, &c, 2) >= base);
        prop_assert!(confidence_level_raw(delta, n + 1000, &c, 2) >= base);
    }

    #[test]
    fn unitary_choi_acts_by_conjugation(d in 2usize..=3, seed: u64) {
        let mut r = rng(seed);
        let u = random_unitary(d, &mut r);
        let choi = choi_of_unitary(&u).unwrap();
        let rho = random_state(d, d, &mut r);
        let out = apply_choi_raw(&choi, rho.matrix()).unwrap();
        prop_assert!(out.max_abs_diff(&rho.matrix().conjugate_by(&u)) < 1e-10);
    }

    #[test]
    fn probe_coefficients_rebuild_matrix_units(d in 2usize..=3, extra in 0usize..3, seed: u64) {
        let mut r = rng(seed);
        let probes: Vec<_> = (0..d * d + extra).map(|_| random_pure_state(d, &mut r)).collect();
        let coeffs = decompose_coefficients(&probes).unwrap();
        for n in 0..d {
            for m in 0..d {
                let mut sum = ComplexMatrix::zeros(d, d);
                for (k, p) in probes.iter().enumerate() {
                    sum = &sum + &p.matrix().scale(coeffs.get(n, m, k));
                }
                prop_assert!(sum.max_abs_diff(&ComplexMatrix::unit(d, n, m)) < 1e-8);
            }
        }
    }

    #[test]
    fn exact_outputs_rebuild_choi(seed: u64) {
        let mut r = rng(seed);
        let truth = random_choi(2, 2, &mut r);
        let probes: Vec<_> = (0..5).map(|_| random_pure_state(2, &mut r)).collect();
        let coeffs = decompose_coefficients(&probes).unwrap();
        let outputs: Vec<_> = probes.iter().map(|p| apply_choi_raw(&truth, p.matrix()).unwrap()).collect();
        let choi = assemble_choi(&coeffs, &outputs).unwrap();
        prop_assert!(choi.max_abs_diff(truth.matrix()) < 1e-9);
    }

    #[test]
    fn projection_is_physical_idempotent_and_nonexpansive(seed: u64) {
        let mut r = rng(seed);
        let truth = random_choi(2, 2, &mut r);
        let noisy = &truth.matrix().clone() + &random_hermitian(4, &mut r).scale_real(0.1);
        let proj = project_physical(&noisy, 2, 2).unwrap();
        let choi = proj.choi.matrix();
        prop_assert!(proj.choi.min_eigenvalue() >= -1e-8);
        let reduced = partial_trace(choi, 2, 2, Keep::First).unwrap();
        prop_assert!(reduced.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-8);
        let again = project_physical(choi, 2, 2).unwrap();
        prop_assert!(again.choi.matrix().max_abs_diff(choi) < 1e-8);
        let reference = random_choi(2, 2, &mut r);
        let before = hs_distance(&noisy.hermitian_part(), reference.matrix()).unwrap();
        let after = hs_distance(choi, reference.matrix()).unwrap();
        prop_assert!(after <= before + 1e-8);
    }
}

#[test]
fn calibrated_setup_certificate_invariant() {
    let probes = pgtomo::gates::tetrahedron_probes();
    let coeffs = decompose_coefficients(&probes).unwrap();
    for delta in [0.0, 0.01, 0.03, 0.5] {
        let (big, score) = delta_bound(&coeffs, delta);
        assert_eq!(big, delta * score / 2.0);
    }
    let design = build_design(&calibrated_povms(), &gell_mann_basis(2)).unwrap();
    assert!(design.condition() < 10.0);
    assert_abs_diff_eq!(design.a0().iter().sum::<f64>(), 3.0, epsilon = 1e-12);
}
