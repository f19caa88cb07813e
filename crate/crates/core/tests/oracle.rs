use lpadm_core::model::catalog::lookup;
use lpadm_core::model::CatalogParams;
use lpadm_core::oracle::*;
use lpadm_core::*;

fn heat() -> SystemDescriptor {
    lookup("heat1d-dirichlet", CatalogParams::default()).unwrap()
}

#[test]
fn closed_form_matches_eigen_sum() {
    let n = 1_000_000;
    for i in 0..=20 {
        let mu = 0.1 * 100f64.powf(i as f64 / 20.0);
        let partial = weiss_eigen_sum(mu, n);
        let tail = weiss_eigen_tail(mu, n);
        let closed = weiss_closed_form(mu);
        assert!((closed - partial - tail).abs() < 1e-8, "mu = {mu}");
        // the raw gap is the omitted tail, about 2 mu / (pi^2 n)
        assert!(((closed - partial) / tail - 1.0).abs() < 1e-4, "mu = {mu}");
    }
}

#[test]
fn closed_form_stays_below_one_half() {
    let sup = (0..200)
        .map(|i| weiss_closed_form(10f64.powf(-3.0 + 7.0 * i as f64 / 199.0)))
        .fold(0.0, f64::max);
    assert!(sup <= 0.5 + 1e-12);
    assert!(sup > 0.5 - 1e-12);
}

#[test]
fn heat_profiles_split_at_the_threshold() {
    let cfg = AnalysisConfig::default().oracle_measure();
    let times = dyadic_times(1024.0);
    let above = constant_growth_profile(&heat(), 5.0, &times, &cfg).unwrap();
    assert_eq!(above.classification, ProfileClass::Plateau);
    let below = constant_growth_profile(&heat(), 3.0, &times, &cfg).unwrap();
    assert_eq!(below.classification, ProfileClass::Growing);
    for p in [&above, &below] {
        assert!(p.constants.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn zero_column_profile_is_flat() {
    let s = SystemDescriptor::diagonal(
        "zero",
        DiagonalSystem::new(Sequence::power(1.0, 2.0), Sequence::power(0.0, 0.0), 2.0),
    );
    let p =
        constant_growth_profile(&s, 3.0, &dyadic_times(16.0), &MeasureConfig::default()).unwrap();
    assert_eq!(p.classification, ProfileClass::Plateau);
    assert!(p.constants.iter().all(|&c| c == 0.0));
}

#[test]
fn heat_constant_is_stable_under_truncation() {
    let d = heat().as_diagonal().unwrap().clone();
    let family = probe_family(10.0);
    let at = |k| {
        let cfg = MeasureConfig {
            k_max: k,
            ..MeasureConfig::default()
        };
        admissibility_constant(&d, 5.0, 10.0, &family, &cfg).unwrap()
    };
    let (a, b) = (at(50_000), at(100_000));
    assert!((a / b - 1.0).abs() < 1e-6, "{a} vs {b}");
}

#[test]
fn direction_scan() {
    let cfg = MeasureConfig {
        k_max: 100_000,
        ..MeasureConfig::default()
    };
    let heat = heat().as_diagonal().unwrap().clone();
    let zero = DiagonalSystem {
        coefficients: Sequence::power(0.0, 0.0),
        ..heat.clone()
    };
    let alone = uniform_direction_scan(
        &[Direction {
            system: heat.clone(),
            input_norm: 1.0,
        }],
        1.5,
        10.0,
        &cfg,
    )
    .unwrap();
    let with_zero = uniform_direction_scan(
        &[
            Direction {
                system: heat.clone(),
                input_norm: 1.0,
            },
            Direction {
                system: zero,
                input_norm: 1.0,
            },
        ],
        1.5,
        10.0,
        &cfg,
    )
    .unwrap();
    assert_eq!(with_zero.sup, alone.sup);
    assert_eq!(with_zero.constants[1], 0.0);
    assert!(!with_zero.notes.is_empty());

    let doubled = DiagonalSystem {
        coefficients: Sequence::power(2.0 * 2f64.sqrt() * std::f64::consts::PI, 1.0).alternating(),
        ..heat.clone()
    };
    let pair = uniform_direction_scan(
        &[
            Direction {
                system: heat.clone(),
                input_norm: 1.0,
            },
            Direction {
                system: doubled,
                input_norm: 2.0,
            },
        ],
        1.5,
        10.0,
        &cfg,
    )
    .unwrap();
    assert!((pair.constants[0] / pair.constants[1] - 1.0).abs() < 1e-12);

    let bounded = DiagonalSystem {
        coefficients: Sequence::power(1.0, -1.0),
        ..heat.clone()
    };
    let mixed = uniform_direction_scan(
        &[
            Direction {
                system: heat,
                input_norm: 1.0,
            },
            Direction {
                system: bounded,
                input_norm: 1.0,
            },
        ],
        1.5,
        10.0,
        &cfg,
    )
    .unwrap();
    assert_eq!(mixed.argmax, 0);
}
