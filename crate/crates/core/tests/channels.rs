use qfibound::channels::*;
use qfibound::liouville::{gram_tensor_power, gram_triple, superop_from_kraus, ChannelFamily};
use qfibound::numerics::{largest_eigval_psd, Complex64};
use qfibound::sampling::{random_phase_covariant_params, rng_from_seed};
use rand::Rng;

const TP_TOL: f64 = 1e-9;

fn assert_tp(fam: &ChannelFamily, xs: &[f64]) {
    for &x in xs {
        let s = fam.evaluate(x).unwrap();
        assert!(
            s.is_trace_preserving(TP_TOL),
            "defect {}",
            s.trace_preservation_defect()
        );
    }
}

#[test]
fn every_channel_is_trace_preserving() {
    let xs = [-1.3, 0.0, 0.4, 2.9];
    assert_tp(&rotation_family(0.7), &xs);
    let mut rng = rng_from_seed(21);
    for _ in 0..50 {
        let p = random_phase_covariant_params(&mut rng, 0.9);
        for layout in [CoherenceLayout::Swapped, CoherenceLayout::Diagonal] {
            assert_tp(
                &phase_covariant_family(rng.gen_range(0.0..3.0), p, layout),
                &xs,
            );
        }
    }
    for kind in [
        NoiseKind::Dephasing,
        NoiseKind::Depolarizing,
        NoiseKind::AmplitudeDamping,
    ] {
        for g in [0.0, 0.3, 5.0] {
            let p = named_noise(kind, g, 1.1).unwrap();
            assert_tp(
                &phase_covariant_family(1.1, p, CoherenceLayout::Swapped),
                &xs,
            );
        }
    }
    for pairs in 1..=2 {
        let c = CorrelatedDephasing::new(pairs, 0.3, 0.2, 1.5).unwrap();
        assert_tp(&c.family().unwrap(), &xs);
    }
    for n in [1, 5, 12] {
        for eta in [0.0, 0.5, 0.93, 1.0] {
            let spec = InterferometerSpec::new(n, eta, 0.0).unwrap();
            assert_tp(&interferometer_family(&spec).unwrap(), &xs);
        }
    }
    for eta in [0.0, 0.6, 1.0] {
        assert!(superop_from_kraus(&loss_kraus(6, eta).unwrap(), true)
            .unwrap()
            .is_trace_preserving(TP_TOL));
        assert!(
            superop_from_kraus(&two_mode_loss_kraus(3, eta).unwrap(), true)
                .unwrap()
                .is_trace_preserving(TP_TOL)
        );
    }
}

#[test]
fn noiseless_diagonal_layout_is_the_rotation() {
    let p = NoiseParams::new(0.0, 1.0, 1.0, 0.0).unwrap();
    for (omega, t) in [(0.3, 1.0), (-2.0, 0.25), (1.7, 3.0)] {
        let a = phase_covariant_superop(omega, t, &p, CoherenceLayout::Diagonal);
        let b = rotation_superop(omega, t);
        assert!(a.matrix().max_abs_diff(b.matrix()).unwrap() < 1e-15);
        let da = phase_covariant_derivative(omega, t, &p, CoherenceLayout::Diagonal);
        let db = rotation_superop_derivative(omega, t);
        assert!(da.matrix().max_abs_diff(db.matrix()).unwrap() < 1e-15);
    }
}

#[test]
fn cptp_checks() {
    assert!(matches!(
        NoiseParams::new(0.5, 0.8, 0.9, 0.0),
        Err(qfibound::Error::CptpViolation(_))
    ));
    assert!(NoiseParams::new(0.3, 0.8, 0.1, 0.0).is_err());
    assert!(NoiseParams::new(0.0, -1.0, 0.0, 0.0).is_ok());
    let mut rng = rng_from_seed(22);
    for _ in 0..200 {
        let kind = [
            NoiseKind::Dephasing,
            NoiseKind::Depolarizing,
            NoiseKind::AmplitudeDamping,
        ][rng.gen_range(0..3)];
        assert!(named_noise(kind, rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)).is_ok());
    }
}

#[test]
fn layouts_share_derivative_gram_and_norms() {
    let mut rng = rng_from_seed(23);
    for _ in 0..20 {
        let p = random_phase_covariant_params(&mut rng, 0.7);
        let t = rng.gen_range(0.1..2.0);
        let x = rng.gen_range(-2.0..2.0);
        let swapped = phase_covariant_family(t, p, CoherenceLayout::Swapped);
        let diagonal = phase_covariant_family(t, p, CoherenceLayout::Diagonal);
        let gs = gram_triple(&swapped, x).unwrap();
        let gd = gram_triple(&diagonal, x).unwrap();
        let g1s = gram_tensor_power(&gs, 1).unwrap();
        let g1d = gram_tensor_power(&gd, 1).unwrap();
        assert!(g1s.matrix().max_abs_diff(g1d.matrix()).unwrap() < 1e-12);
        for n in 1..=3 {
            let ns = largest_eigval_psd(gram_tensor_power(&gs, n).unwrap().matrix())
                .unwrap()
                .value;
            let nd = largest_eigval_psd(gram_tensor_power(&gd, n).unwrap().matrix())
                .unwrap()
                .value;
            assert!(
                (ns - nd).abs() <= 1e-10 * ns.max(1.0),
                "N={n}: {ns} vs {nd}"
            );
        }
    }
}

#[test]
fn correlated_elements_are_contractions() {
    for pairs in 1..=3 {
        let c = CorrelatedDephasing::new(pairs, 0.4, 0.7, 1.3).unwrap();
        let d = c.hilbert_dim();
        for mu in 0..d {
            for nu in 0..d {
                let (a1, a2) = c.charges(mu, nu);
                let mag = c.element(0.9, mu, nu).norm();
                assert!(mag <= 1.0 + 1e-15);
                if a1 + a2 == 0 {
                    assert_eq!(mag, 1.0);
                } else {
                    assert!(mag < 1.0);
                }
            }
        }
    }
}

#[test]
fn correlated_derivative_matches_finite_difference() {
    let c = CorrelatedDephasing::new(2, 0.4, 0.3, 0.8).unwrap();
    let h = 1e-6;
    let d = c.hilbert_dim();
    for mu in 0..d {
        for nu in 0..d {
            let fd = (c.element(0.5 + h, mu, nu) - c.element(0.5 - h, mu, nu))
                / Complex64::new(2.0 * h, 0.0);
            assert!((fd - c.derivative_element(0.5, mu, nu)).norm() < 1e-8);
        }
    }
}

#[test]
fn short_time_model_reaches_requested_level() {
    for form in [ExpansionForm::Truncated, ExpansionForm::Exponential] {
        let m = ShortTimeModel::perp_only(0.5, 1.5, form).unwrap();
        let t = m.time_for_eta_perp(0.01);
        assert!((m.eta_perp_at(t) - 0.01).abs() < 1e-12);
        let h = 1e-6;
        let fd = (m.eta_perp_at(0.3 + h) - m.eta_perp_at(0.3 - h)) / (2.0 * h);
        assert!((fd - m.eta_perp_derivative_at(0.3)).abs() < 1e-8);
    }
}
