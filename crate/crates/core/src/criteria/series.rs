use serde::{Deserialize, Serialize};

use crate::config::MeasureConfig;
use crate::error::{Error, Result};
use crate::fit::{classify_log_terms, SeriesVerdict};
use crate::model::{build_measure, HalfPlaneMeasure, SystemDescriptor};
use crate::quad::Tolerance;

use super::{CriterionId, CriterionReport, Evidence, Sufficiency, TimeScope};

const WINDOW_SAMPLES: usize = 200;

/// Tail window of the atom family: `(k, ln m_k, ln |s_k|)` over the last
/// decade of materialized indices.
#[derive(Debug, Clone)]
struct MembershipWindow {
    samples: Vec<(f64, f64, f64)>,
    finite: bool,
}

impl MembershipWindow {
    fn new(measure: &HalfPlaneMeasure) -> Self {
        if !measure.is_infinite() || measure.atoms().is_empty() && measure.tail().is_none() {
            return MembershipWindow {
                samples: Vec::new(),
                finite: true,
            };
        }
        let top = measure.atoms().iter().map(|a| a.index).max().unwrap_or(0);
        let bottom = top / 10;
        let mut window: Vec<(f64, f64, f64)> = measure
            .atoms()
            .iter()
            .filter(|a| a.index >= bottom.max(1) && a.index <= top)
            .map(|a| (a.index as f64, a.mass.ln(), a.location.norm().ln()))
            .collect();
        window.sort_by(|a, b| a.0.total_cmp(&b.0));
        if window.len() < 20 {
            if let Some(t) = measure.tail() {
                let start = t.start as f64;
                window = (0..WINDOW_SAMPLES)
                    .map(|j| {
                        let k =
                            (start * 10f64.powf(j as f64 / (WINDOW_SAMPLES - 1) as f64)).round();
                        (k, t.mass(k).ln(), t.location(k).ln())
                    })
                    .collect();
                window.dedup_by(|a, b| a.0 == b.0);
            }
        }
        if window.len() > 2 * WINDOW_SAMPLES {
            let lo = window[0].0;
            let hi = window[window.len() - 1].0;
            let mut thinned = Vec::with_capacity(WINDOW_SAMPLES);
            for j in 0..WINDOW_SAMPLES {
                let target = lo * (hi / lo).powf(j as f64 / (WINDOW_SAMPLES - 1) as f64);
                let i = window
                    .partition_point(|s| s.0 < target)
                    .min(window.len() - 1);
                if thinned.last().map(|s: &(f64, f64, f64)| s.0) != Some(window[i].0) {
                    thinned.push(window[i]);
                }
            }
            window = thinned;
        }
        MembershipWindow {
            samples: window,
            finite: false,
        }
    }

    fn classify(&self, beta: f64, q: f64, partial_value: f64) -> SeriesVerdict {
        if self.finite {
            return SeriesVerdict::finite(partial_value);
        }
        let logs: Vec<(f64, f64)> = self
            .samples
            .iter()
            .map(|&(k, ln_m, ln_s)| (k, ln_m - beta * q * ln_s))
            .collect();
        classify_log_terms(&logs, partial_value)
    }
}

fn membership_sum(measure: &HalfPlaneMeasure, beta: f64, q: f64) -> Result<f64> {
    let e = -beta * q;
    measure
        .integrate(|s| s.norm().powf(e), Tolerance::default())
        .map(|r| r.value)
}

fn atoms_only_sum(measure: &HalfPlaneMeasure, beta: f64, q: f64) -> f64 {
    let e = -beta * q;
    measure
        .atoms()
        .iter()
        .map(|a| a.mass * a.location.norm().powf(e))
        .sum()
}

/// Classifies `sum_k |b_k|^q |lambda_k|^(-beta q)` for the atoms of `measure`.
pub fn membership_on(measure: &HalfPlaneMeasure, q: f64, beta: f64) -> Result<SeriesVerdict> {
    if measure.density().is_some() {
        return Err(Error::WrongSystemKind {
            expected: "diagonal",
            found: "power-law",
        });
    }
    let window = MembershipWindow::new(measure);
    let mut verdict = window.classify(beta, q, 0.0);
    verdict.partial_value = if verdict.is_convergent() {
        membership_sum(measure, beta, q).unwrap_or_else(|_| atoms_only_sum(measure, beta, q))
    } else {
        atoms_only_sum(measure, beta, q)
    };
    Ok(verdict)
}

/// Membership of the control sequence in the fractional space `X_(-beta)`.
pub fn sobolev_membership(
    system: &SystemDescriptor,
    beta: f64,
    config: &MeasureConfig,
) -> Result<SeriesVerdict> {
    let d = system.as_diagonal()?;
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
            allowed: "0 < beta < 1",
        });
    }
    let measure = build_measure(system, config)?;
    membership_on(&measure, d.q, beta)
}

/// Smallest fractional order with a convergent membership sum, and the
/// exponent above which interpolation gives admissibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationThreshold {
    pub beta_star: f64,
    pub p_star: f64,
    /// Largest order found with a divergent sum (lower end of the bracket).
    pub beta_low: f64,
}

const BETA_TOL: f64 = 1e-4;
const BETA_TOP: f64 = 1.0 - 1e-6;

/// Bisects on divergence of the membership sum. The reported `beta_star`
/// is the upper end of the final bracket, so `p > p_star` is safely inside
/// the region where the interpolation argument applies.
pub fn interpolation_threshold_on(
    measure: &HalfPlaneMeasure,
    q: f64,
) -> Result<InterpolationThreshold> {
    if measure.density().is_some() {
        return Err(Error::WrongSystemKind {
            expected: "diagonal",
            found: "power-law",
        });
    }
    if measure.is_empty() {
        return Err(Error::InvalidInput(
            "coefficients vanish identically".into(),
        ));
    }
    let window = MembershipWindow::new(measure);
    let divergent = |beta: f64| window.classify(beta, q, 0.0).is_divergent();
    if window.finite || !divergent(0.0) {
        return Ok(InterpolationThreshold {
            beta_star: 0.0,
            p_star: 1.0,
            beta_low: 0.0,
        });
    }
    if divergent(BETA_TOP) {
        return Err(Error::NoMembership);
    }
    let (mut lo, mut hi) = (0.0, BETA_TOP);
    while hi - lo > BETA_TOL {
        let mid = 0.5 * (lo + hi);
        if divergent(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(InterpolationThreshold {
        beta_star: hi,
        p_star: 1.0 / (1.0 - hi),
        beta_low: lo,
    })
}

pub fn interpolation_threshold(
    system: &SystemDescriptor,
    config: &MeasureConfig,
) -> Result<InterpolationThreshold> {
    let d = system.as_diagonal()?;
    let measure = build_measure(system, config)?;
    interpolation_threshold_on(&measure, d.q)
}

/// Interpolation report at `p`: admissible for every `p > p_star`.
pub fn interpolation_report(threshold: &InterpolationThreshold, p: f64) -> CriterionReport {
    let verdict = if p > threshold.p_star {
        Evidence::AdmissibleEvidence
    } else {
        Evidence::Inconclusive
    };
    let mut r = CriterionReport::new(
        CriterionId::Interpolation,
        verdict,
        threshold.beta_star,
        Sufficiency::Sufficient,
    );
    r.time_scope = TimeScope::FiniteTime;
    r.growth_exponent = Some(threshold.p_star);
    r.notes.push(format!(
        "b in X_(-beta) for beta > {:.4}; admissible for p > {:.4}",
        threshold.beta_star, threshold.p_star
    ));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::Classification;
    use crate::model::{DiagonalSystem, Sequence};
    use approx::assert_relative_eq;

    fn cfg() -> MeasureConfig {
        MeasureConfig {
            k_max: 20_000,
            ..MeasureConfig::default()
        }
    }

    #[test]
    fn bounded_coefficients_quarter() {
        let s = SystemDescriptor::diagonal(
            "sq",
            DiagonalSystem::new(Sequence::power(1.0, 2.0), Sequence::power(1.0, 0.0), 2.0),
        );
        let t = interpolation_threshold(&s, &cfg()).unwrap();
        assert!((t.beta_star - 0.25).abs() < 1e-3, "{t:?}");
    }

    #[test]
    fn single_atom_is_trivial() {
        let s = SystemDescriptor::diagonal("one", DiagonalSystem::single_mode(-1.0, 1.0, 2.0));
        let t = interpolation_threshold(&s, &cfg()).unwrap();
        assert_eq!((t.beta_star, t.p_star), (0.0, 1.0));
    }

    #[test]
    fn zero_coefficients_converge_to_zero() {
        let s = SystemDescriptor::diagonal(
            "zero",
            DiagonalSystem::new(Sequence::power(1.0, 2.0), Sequence::power(0.0, 0.0), 2.0),
        );
        let v = sobolev_membership(&s, 0.5, &cfg()).unwrap();
        assert_eq!(v.classification, Classification::Convergent);
        assert_eq!(v.partial_value, 0.0);
    }

    #[test]
    fn convergent_value_includes_tail() {
        // sum k^-2 over lambda_k = -k^2, b_k = 1, beta = 1/2
        let s = SystemDescriptor::diagonal(
            "sq",
            DiagonalSystem::new(Sequence::power(1.0, 2.0), Sequence::power(1.0, 0.0), 2.0),
        );
        let v = sobolev_membership(&s, 0.5, &cfg()).unwrap();
        assert!(v.is_convergent());
        assert_relative_eq!(
            v.partial_value,
            std::f64::consts::PI.powi(2) / 6.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn beta_range_checked() {
        let s = SystemDescriptor::diagonal("one", DiagonalSystem::single_mode(-1.0, 1.0, 2.0));
        assert!(sobolev_membership(&s, 1.0, &cfg()).is_err());
    }
}
