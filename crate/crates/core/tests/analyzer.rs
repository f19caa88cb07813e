use lpadm_core::analyzer::{audit_measure, consistency_audit, threshold_scan};
use lpadm_core::model::catalog::{all_systems, lookup};
use lpadm_core::model::{Atom, CatalogParams};
use lpadm_core::*;
use num_complex::Complex64;

fn heat() -> SystemDescriptor {
    lookup("heat1d-dirichlet", CatalogParams::default()).unwrap()
}

#[test]
fn heat_verdicts() {
    let a = Analyzer::new(heat(), AnalysisConfig::default()).unwrap();
    let at4 = a.analyze(4.0).unwrap();
    assert_eq!(at4.admissible, Admissible::No);
    assert!(at4
        .evidence
        .iter()
        .any(|r| r.criterion == CriterionId::DyadicStrip && r.proves_not_admissible()));
    let at5 = a.analyze(5.0).unwrap();
    assert_eq!(at5.admissible, Admissible::Yes);
    assert!(at5
        .report(CriterionId::Interpolation)
        .unwrap()
        .proves_admissible());
    let trace: Vec<Admissible> = [3.9, 4.0, 4.1]
        .iter()
        .map(|&p| a.analyze(p).unwrap().admissible)
        .collect();
    assert_eq!(&trace[..2], &[Admissible::No, Admissible::No]);
    assert_ne!(trace[2], Admissible::No);
}

#[test]
fn heat_threshold() {
    let s = threshold_scan(&heat(), 2.0, 8.0, 0.02, &AnalysisConfig::default()).unwrap();
    assert!((s.p_star - 4.0).abs() <= 0.02, "{s:?}");
    assert!(s.p_high - s.p_low <= 0.04);
    assert!(s.halted_at.is_none());
    let a = Analyzer::new(heat(), AnalysisConfig::default()).unwrap();
    assert_eq!(a.analyze(s.p_low).unwrap().admissible, Admissible::No);
    assert_eq!(a.analyze(s.p_high).unwrap().admissible, Admissible::Yes);
}

#[test]
fn laplacian_thresholds() {
    for (n, lo, hi, expected) in [
        (1, 1.05, 3.0, 4.0 / 3.0),
        (2, 1.05, 4.0, 2.0),
        (3, 2.0, 8.0, 4.0),
    ] {
        let s = lookup(
            "laplacian-Rn",
            CatalogParams {
                n: Some(n),
                p0: None,
            },
        )
        .unwrap();
        let scan = threshold_scan(&s, lo, hi, 0.02, &AnalysisConfig::default()).unwrap();
        assert!(scan.sufficient_only);
        assert!(
            scan.p_low <= expected && expected <= scan.p_high,
            "n = {n}: {scan:?}"
        );
        assert!((scan.p_star - expected).abs() <= 0.02, "n = {n}: {scan:?}");
    }
}

#[test]
fn bounded_mode_has_no_bracket() {
    let s = SystemDescriptor::diagonal("one", DiagonalSystem::single_mode(-1.0, 1.0, 2.0));
    let r = threshold_scan(&s, 1.1, 8.0, 0.02, &AnalysisConfig::default());
    assert!(matches!(r, Err(Error::NoBracket(_))));
}

#[test]
fn catalog_audit_is_clean() {
    let grid = [1.2, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0];
    for s in all_systems() {
        let found = consistency_audit(&s, &grid, &AnalysisConfig::default()).unwrap();
        assert!(found.is_empty(), "{}: {found:?}", s.name);
    }
}

#[test]
fn verdicts_justify_themselves() {
    let a = Analyzer::new(heat(), AnalysisConfig::default()).unwrap();
    for p in [1.5, 2.5, 3.5, 4.5, 6.0] {
        let v = a.analyze(p).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        let back: Verdict = serde_json::from_str(&json).unwrap();
        match back.admissible {
            Admissible::Yes => assert!(back.evidence.iter().any(|r| r.proves_admissible())),
            Admissible::No => assert!(back.evidence.iter().any(|r| r.proves_not_admissible())),
            Admissible::Unknown => {}
        }
    }
}

#[test]
fn sign_flip_is_caught() {
    let atoms = (1..=50)
        .map(|k| Atom {
            location: Complex64::new((k * k) as f64, 0.0),
            mass: if k == 20 {
                -((k * k) as f64)
            } else {
                (k * k) as f64
            },
            index: k,
        })
        .collect();
    let m = HalfPlaneMeasure::new_unchecked(atoms, None, None);
    assert!(!audit_measure(&m, &ScanConfig::default()).is_empty());
}
