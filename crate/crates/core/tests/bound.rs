mod common;

use common::*;
use proptest::prelude::*;
use qfibound::bound::*;
use qfibound::channels::*;
use qfibound::liouville::{tensor_power, vectorize};
use qfibound::numerics::{Complex64, ComplexMatrix};
use qfibound::qfi_oracle::exact_qfi;
use qfibound::sampling::*;
use qfibound::states::{ghz_state, pure_state};
use qfibound::Error;
use rand::Rng;

#[test]
fn pure_unitary_bound_is_half_qfi_with_orthogonal_derivative() {
    let mut rng = rng_from_seed(31);
    for i in 0..100 {
        let d = if i % 2 == 0 { 2 } else { 4 };
        let fam = random_unitary_family(&mut rng, d);
        let (rho, drho) = outputs(
            &fam,
            rng.gen_range(-2.0..2.0),
            &random_pure_state(&mut rng, d),
        );
        let b = lower_bound_from_state(&rho, &drho).unwrap();
        let exact = exact_qfi(&rho, &drho).unwrap().qfi;
        assert!(rel(b.f_lower, 0.5 * exact) < 1e-9);
        let overlap = vectorize(&rho)
            .unwrap()
            .inner(&vectorize(&drho).unwrap())
            .unwrap();
        assert!(overlap.norm() < 1e-10);
    }
}

#[test]
fn bound_never_exceeds_exact_qfi_or_gradient_term() {
    let mut rng = rng_from_seed(32);
    for i in 0..300 {
        let d = if i % 2 == 0 { 2 } else { 4 };
        let fam = random_channel_family(&mut rng, d);
        let (rho, drho) = outputs(&fam, rng.gen_range(-2.0..2.0), &random_state(&mut rng, d));
        let b = lower_bound_from_state(&rho, &drho).unwrap();
        assert!(b.f_lower <= exact_qfi(&rho, &drho).unwrap().qfi + 1e-9);
        assert!(b.f_lower <= hs_norm_sq(&drho) + 1e-12);
        assert!(b.term_proj >= 0.0);
        assert!((b.f_lower - (b.term_grad - b.term_proj)).abs() <= 1e-12 * b.term_grad.max(1.0));
    }
}

#[test]
fn bound_and_associated_qfi_agree() {
    let mut rng = rng_from_seed(33);
    for _ in 0..100 {
        let d = rng.gen_range(2..=4);
        let fam = random_channel_family(&mut rng, d);
        let (rho, drho) = outputs(&fam, rng.gen_range(-1.0..1.0), &random_state(&mut rng, d));
        let b = lower_bound_from_state(&rho, &drho).unwrap();
        let ft = associated_qfi(&rho, &drho).unwrap();
        assert!((b.purity * ft / 4.0 - b.f_lower).abs() <= 1e-12 * b.f_lower.max(1e-12));
        assert!((b.associated_qfi() - ft).abs() <= 1e-12 * ft.max(1.0));
    }
}

#[test]
fn associated_qfi_is_additive_and_bound_subadditive() {
    let mut rng = rng_from_seed(34);
    for _ in 0..30 {
        let fam = random_channel_family(&mut rng, 2);
        let (rho, drho) = outputs(&fam, rng.gen_range(-1.0..1.0), &random_state(&mut rng, 2));
        let ft = associated_qfi(&rho, &drho).unwrap();
        let f = lower_bound_from_state(&rho, &drho).unwrap().f_lower;
        for nu in 2..=3 {
            let (p, dp) = product_pair(&rho, &drho, nu);
            assert!(
                (associated_qfi(&p, &dp).unwrap() - nu as f64 * ft).abs() <= 1e-9 * ft.max(1.0)
            );
            assert!(lower_bound_from_state(&p, &dp).unwrap().f_lower <= nu as f64 * f + 1e-9);
        }
    }
}

#[test]
fn channel_routes_match_state_route() {
    let mut rng = rng_from_seed(35);
    for _ in 0..20 {
        let p = random_phase_covariant_params(&mut rng, 0.5);
        let fam = phase_covariant_family(rng.gen_range(0.1..2.0), p, CoherenceLayout::Swapped);
        let x = rng.gen_range(-1.0..1.0);
        let rho0 = random_state(&mut rng, 2);
        let (rho, drho) = outputs(&fam, x, &rho0);
        let a = lower_bound_from_channel(&fam, x, &rho0).unwrap();
        let b = lower_bound_from_state(&rho, &drho).unwrap();
        assert!(rel(a.f_lower, b.f_lower) < 1e-10 || b.f_lower < 1e-14);
        // N-fold product state through the tensor power
        let rho2 = qfibound::numerics::kron(&rho0, &rho0);
        let via_power = lower_bound_tensor_power(&fam, x, 2, &rho2).unwrap();
        let dense = fam.tensor_power(2).unwrap();
        let via_dense = lower_bound_from_channel(&dense, x, &rho2).unwrap();
        assert!((via_power.f_lower - via_dense.f_lower).abs() < 1e-10 * via_dense.f_lower.max(1.0));
    }
}

#[test]
fn noise_keeps_extreme_coherence_subspace() {
    let mut rng = rng_from_seed(36);
    for _ in 0..5 {
        let p = random_phase_covariant_params(&mut rng, 0.8);
        let j = phase_covariant_superop(0.0, 1.0, &p, CoherenceLayout::Swapped);
        for n in 1..=3 {
            let jn = tensor_power(&j, n).unwrap();
            let dim = 1usize << n;
            let ld = dim * dim;
            let mut proj = ComplexMatrix::zeros(ld, ld);
            for idx in [dim - 1, (dim - 1) * dim] {
                proj[(idx, idx)] = Complex64::new(1.0, 0.0);
            }
            let lhs = jn.matrix().matmul(&proj).unwrap();
            let rhs = proj.matmul(jn.matrix()).unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
        }
    }
}

#[test]
fn ghz_attains_half_norm_inside_tau_regime() {
    let mut rng = rng_from_seed(37);
    for n in 1..=4 {
        for _ in 0..5 {
            let p = random_phase_covariant_within_tau(&mut rng, n, 0.3);
            let t = rng.gen_range(0.1..2.0);
            let fam = phase_covariant_family(t, p, CoherenceLayout::Swapped);
            let x = rng.gen_range(-1.0..1.0);
            let r = max_bound_over_states(&fam, x, n).unwrap();
            let f = lower_bound_tensor_power(&fam, x, n, &ghz_state(n).unwrap())
                .unwrap()
                .f_lower;
            assert!(rel(f, 0.5 * r.norm_bound) < 1e-9);
            let analytic = analytic_max_phase_covariant(n, t, p.eta_perp()).unwrap();
            assert!(rel(r.norm_bound, analytic) < 1e-9);
            let state = r.require_state().unwrap();
            assert!(rel(r.state_bound.unwrap(), 0.5 * r.norm_bound) < 1e-9);
            assert!((state.trace().re - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn unitary_norm_is_heisenberg() {
    for n in 1..=4 {
        for t in [0.1, 1.0, 2.0] {
            let r = max_bound_over_states(&rotation_family(t), 0.3, n).unwrap();
            let expected = (n * n) as f64 * t * t;
            assert!(rel(r.norm_bound, expected) < 1e-10);
            assert!(rel(r.state_bound.unwrap(), 0.5 * expected) < 1e-9);
        }
    }
}

#[test]
fn zero_derivative_gives_empty_result() {
    let r = max_bound_over_states(&rotation_family(0.0), 0.0, 2).unwrap();
    assert_eq!(r.norm_bound, 0.0);
    assert!(matches!(r.require_state(), Err(Error::NoPhysicalState)));
}

#[test]
fn bures_liouville_rejects_bad_inputs() {
    let z = ComplexMatrix::zeros(2, 2);
    let rho = pure_state(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
    assert!(matches!(
        bures_distance_liouville(&z, &rho),
        Err(Error::ZeroOperator)
    ));
    let mut skew = rho.clone();
    skew[(0, 1)] = Complex64::new(0.5, 0.0);
    assert!(matches!(
        bures_distance_liouville(&skew, &rho),
        Err(Error::NonHermitian { .. })
    ));
    assert_eq!(bures_distance_liouville(&rho, &rho).unwrap(), 0.0);
    let other = pure_state(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
    assert!((bures_distance_liouville(&rho, &other).unwrap() - 2.0).abs() < 1e-15);
}

#[test]
fn liouville_bures_second_difference_gives_associated_qfi() {
    let mut rng = rng_from_seed(38);
    for _ in 0..30 {
        let fam = random_channel_family(&mut rng, 2);
        let rho0 = random_state(&mut rng, 2);
        let x = rng.gen_range(-1.0..1.0);
        let dx = 1e-4;
        let (rho, drho) = outputs(&fam, x, &rho0);
        let ft = associated_qfi(&rho, &drho).unwrap();
        if ft < 1e-6 {
            continue;
        }
        // symmetric pair: the distance is even in dx, so the error is O(dx²)
        let db = bures_distance_liouville(
            &evolve(&fam, x - dx / 2.0, &rho0),
            &evolve(&fam, x + dx / 2.0, &rho0),
        )
        .unwrap();
        assert!(
            rel(4.0 * db / (dx * dx), ft) < 1e-4,
            "{} vs {ft}",
            4.0 * db / (dx * dx)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bound_is_scale_covariant(seed in any::<u64>(), s in 0.1f64..10.0) {
        // F↓ is quadratic in ρ′ and homogeneous of degree zero in ρ's scale of purity terms
        let mut rng = rng_from_seed(seed);
        let fam = random_channel_family(&mut rng, 2);
        let (rho, drho) = outputs(&fam, 0.2, &random_state(&mut rng, 2));
        let a = lower_bound_from_state(&rho, &drho).unwrap().f_lower;
        let b = lower_bound_from_state(&rho, &drho.scale_real(s)).unwrap().f_lower;
        prop_assert!((b - s * s * a).abs() <= 1e-10 * (s * s * a).max(1e-12));
    }

    #[test]
    fn bound_is_unitarily_invariant(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let fam = random_channel_family(&mut rng, 2);
        let (rho, drho) = outputs(&fam, -0.4, &random_state(&mut rng, 2));
        let u = random_unitary(&mut rng, 2);
        let conj = |m: &ComplexMatrix| u.matmul(&m.matmul(&u.adjoint()).unwrap()).unwrap();
        let a = lower_bound_from_state(&rho, &drho).unwrap().f_lower;
        let b = lower_bound_from_state(&conj(&rho), &conj(&drho)).unwrap().f_lower;
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }
}
