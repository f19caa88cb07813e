use lpadm_core::criteria::{power_law_threshold, resolvent_norm};
use lpadm_core::embedding::{
    default_family, embedding_lower_bound, embedding_ratio, embedding_ratio_scaled,
};
use lpadm_core::fit::classify_log_terms;
use lpadm_core::model::{shift_system, MultiplierSystem};
use lpadm_core::oracle::{admissibility_constant, state_response, Probe};
use lpadm_core::quad::Tolerance;
use lpadm_core::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn finite_system(eigs: &[f64], coefs: &[f64]) -> DiagonalSystem {
    DiagonalSystem::new(
        Sequence::explicit_real(eigs.iter().map(|e| -e)),
        Sequence::explicit_real(coefs.iter().copied()),
        2.0,
    )
}

fn atoms() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    prop::collection::vec((1e-3f64..1e4, 0.01f64..10.0), 1..40).prop_map(|v| v.into_iter().unzip())
}

fn cfg() -> MeasureConfig {
    MeasureConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn strips_tile_squares((eigs, coefs) in atoms(), top in -8i32..16) {
        let s = SystemDescriptor::diagonal("x", finite_system(&eigs, &coefs));
        let m = build_measure(&s, &cfg()).unwrap();
        let strips: f64 = (-30..=top).map(|n| m.strip_mass(n)).sum();
        let square = m.square_mass(2f64.powi(top - 1));
        prop_assert!((strips - square).abs() <= 1e-12 * square.max(1.0), "{strips} vs {square}");
    }

    #[test]
    fn square_mass_is_monotone((eigs, coefs) in atoms(), a in 1e-4f64..1e4, f in 1.0f64..4.0) {
        let s = SystemDescriptor::diagonal("x", finite_system(&eigs, &coefs));
        let m = build_measure(&s, &cfg()).unwrap();
        prop_assert!(m.square_mass(a) <= m.square_mass(a * f));
    }

    #[test]
    fn multiplier_pushforward_equals_diagonal((eigs, coefs) in atoms()) {
        let d = finite_system(&eigs, &coefs);
        let diag = build_measure(&SystemDescriptor::diagonal("d", d.clone()), &cfg()).unwrap();
        let mult = MultiplierSystem::from_diagonal(&d).unwrap();
        let pushed = build_measure(&SystemDescriptor::new("m", SystemKind::Multiplier(mult)), &cfg()).unwrap();
        prop_assert_eq!(diag.atoms().len(), pushed.atoms().len());
        for (a, b) in diag.atoms().iter().zip(pushed.atoms()) {
            prop_assert_eq!(a.location, b.location);
            prop_assert_eq!(a.mass.to_bits(), b.mass.to_bits());
        }
    }

    #[test]
    fn shift_translates_the_measure((eigs, coefs) in atoms(), omega in 0.01f64..50.0, lambda in 0.01f64..100.0) {
        let s = SystemDescriptor::diagonal("x", finite_system(&eigs, &coefs));
        let shifted = shift_system(&s, omega).unwrap();
        let m = build_measure(&s, &cfg()).unwrap();
        let ms = build_measure(&shifted, &cfg()).unwrap();
        let tol = Tolerance::default();
        let f = |z: Complex64| 1.0 / (z + lambda).norm_sqr();
        let direct = ms.integrate(f, tol).unwrap().value;
        let moved = m.integrate(|z| f(z + omega), tol).unwrap().value;
        prop_assert!((direct - moved).abs() <= 1e-10 * direct, "{direct} vs {moved}");
    }

    #[test]
    fn embedding_bound_dominates_members((eigs, coefs) in atoms(), p in 1.1f64..6.0) {
        let s = SystemDescriptor::diagonal("x", finite_system(&eigs, &coefs));
        let m = build_measure(&s, &cfg()).unwrap();
        let family = default_family();
        let b = embedding_lower_bound(&m, p, 2.0, &family).unwrap();
        for u in family.iter().step_by(7) {
            prop_assert!(embedding_ratio(u, &m, p, 2.0).unwrap() <= b.bound);
        }
    }

    #[test]
    fn embedding_ratio_is_scale_free((eigs, coefs) in atoms(), rate in 1e-2f64..1e3, p in 1.1f64..6.0) {
        let s = SystemDescriptor::diagonal("x", finite_system(&eigs, &coefs));
        let m = build_measure(&s, &cfg()).unwrap();
        let u = TestInput::exponential(rate);
        let base = embedding_ratio(&u, &m, p, 2.0).unwrap();
        for c in [2.0, 10.0] {
            let scaled = embedding_ratio_scaled(&u.scaled(c), &m, p, 2.0).unwrap();
            prop_assert!((scaled - base).abs() <= 1e-12 * base);
        }
    }

    #[test]
    fn power_law_threshold_increases(a in -0.99f64..0.99, b in -0.99f64..0.99) {
        prop_assume!(a < b);
        prop_assert!(power_law_threshold(a).unwrap() < power_law_threshold(b).unwrap());
    }

    #[test]
    fn power_series_classified(s in -4.0f64..0.5) {
        prop_assume!((s + 1.0).abs() > 0.1);
        let terms: Vec<(f64, f64)> = (1..=50).map(|j| {
            let k = 1000.0 * 10f64.powf(j as f64 / 50.0);
            (k, s * k.ln())
        }).collect();
        let v = classify_log_terms(&terms, 0.0);
        if s < -1.0 {
            prop_assert_eq!(v.classification, Classification::Convergent);
        } else {
            prop_assert_eq!(v.classification, Classification::Divergent);
        }
    }

    #[test]
    fn single_mode_state_matches_quadrature(mu in 0.05f64..5.0, rate in 0.05f64..5.0, t in 0.1f64..8.0) {
        let d = DiagonalSystem::single_mode(-mu, 1.0, 2.0);
        let v = state_response(&d, &TestInput::exponential(rate), t, &cfg()).unwrap();
        let n = 10_000;
        let h = t / n as f64;
        let mid: f64 = (0..n).map(|i| {
            let s = (i as f64 + 0.5) * h;
            (-mu * (t - s)).exp() * (-rate * s).exp()
        }).sum::<f64>() * h;
        prop_assert!((v - mid).abs() <= 1e-6 * v, "{v} vs {mid}");
    }

    #[test]
    fn constants_dominate_the_resolvent_bound((eigs, coefs) in atoms(), p in 1.1f64..6.0, j in -6i32..12) {
        // long horizon: a reversed exponential is the normalized e^(-lambda s) input of the resolvent argument
        let d = finite_system(&eigs, &coefs);
        let lambda = 2f64.powi(j);
        let t = 60.0 / lambda.min(eigs.iter().copied().fold(f64::INFINITY, f64::min)).min(1.0) + 60.0;
        let c = admissibility_constant(&d, p, t, &[Probe::reversed(TestInput::exponential(lambda))], &cfg()).unwrap();
        let m = build_measure(&SystemDescriptor::diagonal("x", d.clone()), &cfg()).unwrap();
        let bound = (p * lambda).powf(1.0 / p) * resolvent_norm(&m, 2.0, Complex64::new(lambda, 0.0)).unwrap();
        prop_assert!(c >= bound * (1.0 - 1e-9), "{c} < {bound}");
    }
}

#[test]
fn beta_integral_against_density() {
    use lpadm_core::model::Density;
    for gamma in [-0.5, 0.5] {
        let m = HalfPlaneMeasure::new(
            Vec::new(),
            Some(Density {
                gamma,
                scale: 1.0,
                cutoff: 0.0,
            }),
            None,
        )
        .unwrap();
        for lambda in [0.1, 1.0, 10.0] {
            let v = m
                .integrate(|z| 1.0 / (z + lambda).norm_sqr(), Tolerance::default())
                .unwrap()
                .value;
            let pi = std::f64::consts::PI;
            let exact = lambda.powf(gamma - 1.0) * pi * gamma / (pi * gamma).sin();
            assert!(
                (v / exact - 1.0).abs() < 1e-8,
                "gamma {gamma}, lambda {lambda}: {v} vs {exact}"
            );
        }
    }
}
