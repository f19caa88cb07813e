use crate::error::{Error, Result};

use super::{check_p, CriterionId, CriterionReport, Evidence, Sufficiency, TimeScope};

/// `p* = 2 / (1 - gamma)` for a spectral density `s^gamma`.
///
/// The Hoelder bound on the Laplace transform against `s^gamma ds` is finite
/// exactly when `gamma - 2/p' < -1`.
pub fn power_law_threshold(gamma: f64) -> Result<f64> {
    if !(gamma > -1.0 && gamma < 1.0) {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
            allowed: "-1 < gamma < 1",
        });
    }
    Ok(2.0 / (1.0 - gamma))
}

/// Finite-time report for a power-law density at `p`. Sufficient only: below
/// the threshold nothing is claimed.
pub fn power_law_report(gamma: f64, p: f64) -> Result<CriterionReport> {
    check_p(p)?;
    let p_star = power_law_threshold(gamma)?;
    let verdict = if p > p_star {
        Evidence::AdmissibleEvidence
    } else {
        Evidence::Inconclusive
    };
    let mut r = CriterionReport::new(
        CriterionId::PowerLawHolder,
        verdict,
        p_star,
        Sufficiency::Sufficient,
    );
    r.time_scope = TimeScope::FiniteTime;
    r.growth_exponent = Some(gamma - 2.0 / super::conjugate(p));
    r.notes
        .push(format!("density s^{gamma}: admissible for p > {p_star:.6}"));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_thresholds() {
        assert_eq!(power_law_threshold(-0.5).unwrap(), 4.0 / 3.0);
        assert_eq!(power_law_threshold(0.0).unwrap(), 2.0);
        assert_eq!(power_law_threshold(0.5).unwrap(), 4.0);
        assert!(power_law_threshold(1.0).is_err());
        assert!(power_law_threshold(-1.0).is_err());
    }

    #[test]
    fn report_is_sufficient_only() {
        let above = power_law_report(0.5, 4.5).unwrap();
        assert!(above.proves_admissible());
        let below = power_law_report(0.5, 3.0).unwrap();
        assert_eq!(below.verdict, Evidence::Inconclusive);
        assert!(!below.proves_not_admissible());
    }
}
