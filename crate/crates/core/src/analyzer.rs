//! Fuses criterion reports into verdicts, scans for critical exponents and
//! audits the implications between criteria.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::AnalysisConfig;
use crate::criteria::{
    carleson_square_criterion, check_p, dyadic_strip_criterion, interpolation_report,
    interpolation_threshold_on, power_law_report, resolvent_report, weiss_rule_applicable,
    CriterionId, CriterionReport, Evidence, InterpolationThreshold, ResolventScan, Sufficiency,
    TimeScope,
};
use crate::embedding::{default_family, TestInput};
use crate::error::{Error, Result};
use crate::fit::least_squares;
use crate::model::{build_measure, HalfPlaneMeasure, SystemDescriptor, SystemKind};
use crate::oracle::{constant_growth_profile_on, dyadic_times, ProfileClass};
use crate::quad::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Admissible {
    Yes,
    No,
    Unknown,
}

impl Admissible {
    pub fn as_str(self) -> &'static str {
        match self {
            Admissible::Yes => "Yes",
            Admissible::No => "No",
            Admissible::Unknown => "Unknown",
        }
    }
}

/// Fused outcome at one exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub system: String,
    pub p: f64,
    pub admissible: Admissible,
    pub time_scope: TimeScope,
    pub evidence: Vec<CriterionReport>,
    pub contradictions: Vec<String>,
}

impl Verdict {
    pub fn report(&self, id: CriterionId) -> Option<&CriterionReport> {
        self.evidence.iter().find(|r| r.criterion == id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub p: f64,
    pub admissible: Admissible,
    /// Reports that decided the verdict.
    pub deciding: Vec<CriterionId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdScan {
    pub system: String,
    pub p_low: f64,
    pub p_high: f64,
    pub p_star: f64,
    pub resolution: f64,
    pub trace: Vec<TracePoint>,
    /// Set when an `Unknown` midpoint stopped the bisection early.
    pub halted_at: Option<f64>,
    /// `Unknown` below the threshold was accepted as the lower side of the
    /// bracket because the system only has a sufficient criterion.
    pub sufficient_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contradiction {
    pub p: Option<f64>,
    pub rule: String,
    pub first: String,
    pub second: String,
}

impl std::fmt::Display for Contradiction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.p {
            Some(p) => write!(
                f,
                "p = {p}: {} ({} vs {})",
                self.rule, self.first, self.second
            ),
            None => write!(f, "{} ({} vs {})", self.rule, self.first, self.second),
        }
    }
}

/// Trend at or above which the embedding sweep is reported as growing.
pub const EMBEDDING_GROWTH: f64 = 0.02;
/// Lowest exponential-family trend tolerated next to an equivalent negative verdict.
pub const EMBEDDING_CROSS_CHECK: f64 = -0.05;
const MEMBERSHIP_SLACK: f64 = 1e-3;

/// Per-system analysis state; expensive p-independent pieces are computed once.
pub struct Analyzer {
    system: SystemDescriptor,
    config: AnalysisConfig,
    oracle_advisory: bool,
    measure: OnceLock<Result<HalfPlaneMeasure>>,
    interpolation: OnceLock<Result<InterpolationThreshold>>,
    resolvent: OnceLock<Result<ResolventScan>>,
    embedding: OnceLock<Vec<(TestInput, Result<f64>)>>,
}

impl Analyzer {
    pub fn new(system: SystemDescriptor, config: AnalysisConfig) -> Result<Self> {
        system.validate()?;
        Ok(Analyzer {
            system,
            config,
            oracle_advisory: false,
            measure: OnceLock::new(),
            interpolation: OnceLock::new(),
            resolvent: OnceLock::new(),
            embedding: OnceLock::new(),
        })
    }

    /// Attach the simulated constant profile to every verdict as advisory evidence.
    pub fn with_oracle(mut self, on: bool) -> Self {
        self.oracle_advisory = on;
        self
    }

    pub fn system(&self) -> &SystemDescriptor {
        &self.system
    }

    pub fn config(&self) -> &AnalysisConfig {
        &self.config
    }

    pub fn measure(&self) -> Result<&HalfPlaneMeasure> {
        self.measure
            .get_or_init(|| build_measure(&self.system, &self.config.measure))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn q(&self) -> f64 {
        self.system.q()
    }

    /// Only a sufficient criterion is available: below its threshold the
    /// verdict stays `Unknown`.
    pub fn sufficient_only(&self) -> bool {
        matches!(self.system.kind, SystemKind::PowerLaw(_))
    }

    pub fn interpolation(&self) -> Result<&InterpolationThreshold> {
        self.interpolation
            .get_or_init(|| interpolation_threshold_on(self.measure()?, self.q()))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn resolvent_scan(&self) -> Result<&ResolventScan> {
        self.resolvent
            .get_or_init(|| ResolventScan::compute(self.measure()?, self.q(), &self.config.scan))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `||L u||_(L^q(mu))` for each member of the default family.
    fn embedding_norms(&self) -> Result<&[(TestInput, Result<f64>)]> {
        let measure = self.measure()?;
        let q = self.q();
        Ok(self.embedding.get_or_init(|| {
            default_family()
                .into_par_iter()
                .map(|u| {
                    let r = measure
                        .integrate(
                            |s| u.laplace_at(s).map_or(f64::NAN, |v| v.norm().powf(q)),
                            Tolerance {
                                abs: 1e-300,
                                rel: 1e-9,
                            },
                        )
                        .map(|r| r.value.max(0.0).powf(1.0 / q))
                        .map_err(|e| match e {
                            Error::IntegralDiverges(m) => Error::EmbeddingIntegralDiverges(m),
                            other => other,
                        });
                    (u, r)
                })
                .collect()
        }))
    }

    fn embedding_report(&self, p: f64) -> Result<CriterionReport> {
        let norms = self.embedding_norms()?;
        let mut points = Vec::with_capacity(norms.len());
        let mut diverged = None;
        for (u, r) in norms {
            match r {
                Ok(v) => {
                    if let TestInput::Exponential { rate } = u {
                        points.push((*rate, v / u.lp_norm(p)));
                    }
                }
                Err(Error::EmbeddingIntegralDiverges(m)) => diverged = Some(m.clone()),
                Err(e) => return Err(e.clone()),
            }
        }
        let bound = points.iter().map(|x| x.1).fold(0.0, f64::max);
        let top = points.iter().map(|x| x.0).fold(0.0, f64::max);
        let (x, y): (Vec<f64>, Vec<f64>) = points
            .iter()
            .filter(|(r, v)| *r >= top / 10.0 * (1.0 - 1e-12) && *v > 0.0)
            .map(|(r, v)| (r.ln(), v.ln()))
            .unzip();
        let trend = least_squares(&x, &y).map_or(0.0, |f| f.slope);
        let verdict = if diverged.is_some() || trend >= EMBEDDING_GROWTH {
            Evidence::NotAdmissibleEvidence
        } else {
            Evidence::Inconclusive
        };
        let mut r = CriterionReport::new(
            CriterionId::EmbeddingTrend,
            verdict,
            bound,
            Sufficiency::Necessary,
        );
        r.advisory = true;
        r.growth_exponent = Some(trend);
        if let Some(m) = diverged {
            r.notes.push(format!(
                "embedding integral diverges for some exponential input: {m}"
            ));
        }
        r.notes
            .push("exponential-family lower bound; heuristic trend only".into());
        Ok(r)
    }

    fn oracle_report(&self, p: f64) -> Result<CriterionReport> {
        let oracle_cfg = self.config.oracle_measure();
        let measure = build_measure(&self.system, &oracle_cfg)?;
        let profile = constant_growth_profile_on(&measure, self.q(), p, &dyadic_times(1024.0))?;
        let verdict = match profile.classification {
            ProfileClass::Growing => Evidence::NotAdmissibleEvidence,
            ProfileClass::Plateau => Evidence::AdmissibleEvidence,
            ProfileClass::Inconclusive => Evidence::Inconclusive,
        };
        let witness = profile.constants.last().copied().unwrap_or(0.0);
        let mut r = CriterionReport::new(
            CriterionId::OracleProfile,
            verdict,
            witness,
            Sufficiency::Necessary,
        );
        r.advisory = true;
        r.growth_exponent = profile.terminal_slope;
        r.notes.push(format!(
            "simulated C_est(t) over t in [1, 1024]: {:?}",
            profile.classification
        ));
        Ok(r)
    }

    fn atom_reports(&self, measure: &HalfPlaneMeasure, p: f64) -> Result<Vec<CriterionReport>> {
        let q = self.q();
        let scan = &self.config.scan;
        let mut reports = Vec::new();
        let branch = if p <= q {
            carleson_square_criterion(measure, p, q, scan)?
        } else {
            dyadic_strip_criterion(measure, p, q, scan)?
        };
        reports.push(branch);
        match self.interpolation() {
            Ok(t) => reports.push(interpolation_report(t, p)),
            Err(Error::NoMembership) => {
                let mut r = CriterionReport::new(
                    CriterionId::Interpolation,
                    Evidence::Inconclusive,
                    1.0,
                    Sufficiency::Sufficient,
                );
                r.time_scope = TimeScope::FiniteTime;
                r.notes
                    .push("control belongs to no X_(-beta) with beta < 1".into());
                reports.push(r);
            }
            Err(e) => return Err(e),
        }
        let scan_data = self.resolvent_scan()?;
        reports.push(resolvent_report(
            measure,
            scan_data,
            p,
            weiss_rule_applicable(&self.system, p),
            scan,
        )?);
        Ok(reports)
    }

    fn density_reports(&self, measure: &HalfPlaneMeasure, p: f64) -> Result<Vec<CriterionReport>> {
        let SystemKind::PowerLaw(pl) = &self.system.kind else {
            unreachable!("density measures come from power-law systems")
        };
        let mut reports = vec![power_law_report(pl.gamma, p)?];
        let scan_data = self.resolvent_scan()?;
        let mut r = resolvent_report(
            measure,
            scan_data,
            p,
            weiss_rule_applicable(&self.system, p),
            &self.config.scan,
        )?;
        r.advisory = true;
        r.notes
            .push("power-law systems are decided by the Hoelder bound alone; resolvent shown for reference".into());
        reports.push(r);
        Ok(reports)
    }

    /// Fused verdict at `p`.
    pub fn analyze(&self, p: f64) -> Result<Verdict> {
        check_p(p)?;
        let measure = self.measure()?;
        let mut evidence = if measure.is_empty() {
            let mut r = CriterionReport::new(
                CriterionId::Trivial,
                Evidence::AdmissibleEvidence,
                0.0,
                Sufficiency::Equivalent,
            );
            r.notes.push("coefficients vanish: B = 0".into());
            vec![r]
        } else if measure.density().is_some() {
            self.density_reports(measure, p)?
        } else {
            self.atom_reports(measure, p)?
        };
        if !measure.is_empty() {
            evidence.push(self.embedding_report(p)?);
            if self.oracle_advisory && measure.density().is_none() {
                evidence.push(self.oracle_report(p)?);
            }
        }
        if self.system.is_shifted() {
            for r in &mut evidence {
                r.time_scope = TimeScope::FiniteTime;
            }
        }
        Ok(fuse(&self.system, p, evidence))
    }

    /// Bisection for the critical exponent on `[p_min, p_max]`.
    pub fn threshold_scan(&self, p_min: f64, p_max: f64, resolution: f64) -> Result<ThresholdScan> {
        check_p(p_min)?;
        check_p(p_max)?;
        if !(p_min < p_max) {
            return Err(Error::NoBracket(format!(
                "p_min = {p_min} is not below p_max = {p_max}"
            )));
        }
        if !(resolution > 0.0) {
            return Err(Error::OutOfRange {
                name: "resolution",
                value: resolution,
                allowed: "resolution > 0",
            });
        }
        let sufficient_only = self.sufficient_only();
        let below =
            |a: Admissible| a == Admissible::No || (sufficient_only && a == Admissible::Unknown);
        let mut trace = Vec::new();
        let mut eval = |p: f64| -> Result<Admissible> {
            let v = self.analyze(p)?;
            trace.push(trace_point(&v));
            Ok(v.admissible)
        };
        let lo_v = eval(p_min)?;
        let hi_v = eval(p_max)?;
        if !below(lo_v) || hi_v != Admissible::Yes {
            return Err(Error::NoBracket(format!(
                "{} at p = {p_min} and {} at p = {p_max}; need No then Yes",
                lo_v.as_str(),
                hi_v.as_str()
            )));
        }
        let (mut lo, mut hi) = (p_min, p_max);
        let mut halted_at = None;
        while hi - lo > 2.0 * resolution {
            let mid = 0.5 * (lo + hi);
            let v = eval(mid)?;
            if v == Admissible::Yes {
                hi = mid;
            } else if below(v) {
                lo = mid;
            } else {
                halted_at = Some(mid);
                break;
            }
        }
        Ok(ThresholdScan {
            system: self.system.name.clone(),
            p_low: lo,
            p_high: hi,
            p_star: 0.5 * (lo + hi),
            resolution,
            trace,
            halted_at,
            sufficient_only,
        })
    }

    /// Checks the implications between criteria over `p_grid`; an empty
    /// result means no contradiction was found.
    pub fn consistency_audit(&self, p_grid: &[f64]) -> Result<Vec<Contradiction>> {
        let mut grid = p_grid.to_vec();
        grid.sort_by(f64::total_cmp);
        let mut out = audit_measure(self.measure()?, &self.config.scan);
        let verdicts = grid
            .iter()
            .map(|&p| self.analyze(p))
            .collect::<Result<Vec<_>>>()?;

        for v in &verdicts {
            for c in &v.contradictions {
                out.push(Contradiction {
                    p: Some(v.p),
                    rule: "criteria disagree".into(),
                    first: c.clone(),
                    second: String::new(),
                });
            }
            let resolvent = v.report(CriterionId::ResolventWeiss);
            let unbounded = resolvent.is_some_and(|r| r.verdict == Evidence::NotAdmissibleEvidence);
            for r in &v.evidence {
                if !r.advisory
                    && r.sufficiency == Sufficiency::Equivalent
                    && r.verdict == Evidence::AdmissibleEvidence
                    && unbounded
                {
                    out.push(Contradiction {
                        p: Some(v.p),
                        rule: "equivalent admissibility requires a bounded resolvent".into(),
                        first: r.criterion.as_str().into(),
                        second: CriterionId::ResolventWeiss.as_str().into(),
                    });
                }
                let branch = matches!(
                    r.criterion,
                    CriterionId::CarlesonSquare | CriterionId::DyadicStrip
                );
                if branch
                    && r.sufficiency == Sufficiency::Equivalent
                    && r.verdict == Evidence::NotAdmissibleEvidence
                {
                    if let Some(e) = v.report(CriterionId::EmbeddingTrend) {
                        let trend = e.growth_exponent.unwrap_or(0.0);
                        if trend < EMBEDDING_CROSS_CHECK {
                            out.push(Contradiction {
                                p: Some(v.p),
                                rule: format!("equivalent non-admissibility with embedding trend {trend:.3} < {EMBEDDING_CROSS_CHECK}"),
                                first: r.criterion.as_str().into(),
                                second: CriterionId::EmbeddingTrend.as_str().into(),
                            });
                        }
                    }
                }
            }
        }

        for (i, v) in verdicts.iter().enumerate() {
            for w in &verdicts[i + 1..] {
                if v.admissible == Admissible::Yes && w.admissible == Admissible::No {
                    out.push(Contradiction {
                        p: Some(w.p),
                        rule: format!(
                            "verdict not monotone: Yes at p = {} but No at p = {}",
                            v.p, w.p
                        ),
                        first: deciding(v).join(","),
                        second: deciding(w).join(","),
                    });
                }
                let interp_yes = v
                    .report(CriterionId::Interpolation)
                    .is_some_and(|r| r.verdict == Evidence::AdmissibleEvidence);
                if interp_yes {
                    for r in &w.evidence {
                        if !r.advisory
                            && r.sufficiency == Sufficiency::Equivalent
                            && r.verdict == Evidence::NotAdmissibleEvidence
                        {
                            out.push(Contradiction {
                                p: Some(w.p),
                                rule: format!("interpolation admissible at p = {} but equivalent No at larger p", v.p),
                                first: CriterionId::Interpolation.as_str().into(),
                                second: r.criterion.as_str().into(),
                            });
                        }
                    }
                }
            }
        }

        if let (SystemKind::Diagonal(_), true) =
            (&self.system.kind, self.system.has_real_spectrum())
        {
            if let Ok(t) = self.interpolation() {
                // A resolvent bounded at p and above puts b in X_(-alpha) for alpha > 1 - 1/p.
                let mut all_bounded_above = true;
                for v in verdicts.iter().rev() {
                    let bounded = v
                        .report(CriterionId::ResolventWeiss)
                        .is_some_and(|r| r.verdict == Evidence::AdmissibleEvidence);
                    all_bounded_above &= bounded;
                    if !all_bounded_above {
                        break;
                    }
                    let alpha = 1.0 - 1.0 / v.p;
                    if t.beta_star > alpha + MEMBERSHIP_SLACK {
                        out.push(Contradiction {
                            p: Some(v.p),
                            rule: format!(
                                "bounded resolvent implies membership for beta > {alpha:.4}, but the sum diverges up to beta = {:.4}",
                                t.beta_star
                            ),
                            first: CriterionId::ResolventWeiss.as_str().into(),
                            second: CriterionId::Interpolation.as_str().into(),
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

fn deciding(v: &Verdict) -> Vec<&'static str> {
    v.evidence
        .iter()
        .filter(|r| match v.admissible {
            Admissible::Yes => r.proves_admissible(),
            Admissible::No => r.proves_not_admissible(),
            Admissible::Unknown => false,
        })
        .map(|r| r.criterion.as_str())
        .collect()
}

fn trace_point(v: &Verdict) -> TracePoint {
    TracePoint {
        p: v.p,
        admissible: v.admissible,
        deciding: v
            .evidence
            .iter()
            .filter(|r| match v.admissible {
                Admissible::Yes => r.proves_admissible(),
                Admissible::No => r.proves_not_admissible(),
                Admissible::Unknown => false,
            })
            .map(|r| r.criterion)
            .collect(),
    }
}

fn fuse(system: &SystemDescriptor, p: f64, evidence: Vec<CriterionReport>) -> Verdict {
    let yes: Vec<&CriterionReport> = evidence.iter().filter(|r| r.proves_admissible()).collect();
    let no: Vec<&CriterionReport> = evidence
        .iter()
        .filter(|r| r.proves_not_admissible())
        .collect();
    let mut contradictions = Vec::new();
    for y in &yes {
        for n in &no {
            contradictions.push(format!(
                "{} proves admissible, {} proves not admissible",
                y.criterion.as_str(),
                n.criterion.as_str()
            ));
        }
    }
    let admissible = match (yes.is_empty(), no.is_empty()) {
        (false, true) => Admissible::Yes,
        (true, false) => Admissible::No,
        _ => Admissible::Unknown,
    };
    let deciders: Vec<&&CriterionReport> = match admissible {
        Admissible::Yes => yes.iter().collect(),
        Admissible::No => no.iter().collect(),
        Admissible::Unknown => Vec::new(),
    };
    let time_scope = if !system.is_shifted()
        && deciders
            .iter()
            .any(|r| r.time_scope == TimeScope::InfiniteTime)
    {
        TimeScope::InfiniteTime
    } else {
        TimeScope::FiniteTime
    };
    Verdict {
        system: system.name.clone(),
        p,
        admissible,
        time_scope,
        evidence,
        contradictions,
    }
}

/// Structural checks on a measure: positive masses and square masses
/// nondecreasing in the scale.
pub fn audit_measure(
    measure: &HalfPlaneMeasure,
    scan: &crate::config::ScanConfig,
) -> Vec<Contradiction> {
    let mut out = Vec::new();
    for a in measure.atoms() {
        if !(a.mass > 0.0 && a.mass.is_finite()) {
            out.push(Contradiction {
                p: None,
                rule: format!("atom {} has mass {}", a.index, a.mass),
                first: "measure".into(),
                second: "positivity".into(),
            });
        }
    }
    let mut prev = 0.0;
    for j in scan.j_min..=scan.j_max {
        for sub in 0..4 {
            let a = 2f64.powf(j as f64 + sub as f64 / 4.0);
            let m = measure.square_mass(a);
            if m < prev {
                out.push(Contradiction {
                    p: None,
                    rule: format!("square mass decreases at a = {a:e}: {m:e} < {prev:e}"),
                    first: "square mass".into(),
                    second: "monotonicity".into(),
                });
                return out;
            }
            prev = m;
        }
    }
    out
}

/// `analyze` for a one-off evaluation.
pub fn analyze(system: &SystemDescriptor, p: f64, config: &AnalysisConfig) -> Result<Verdict> {
    Analyzer::new(system.clone(), *config)?.analyze(p)
}

pub fn threshold_scan(
    system: &SystemDescriptor,
    p_min: f64,
    p_max: f64,
    resolution: f64,
    config: &AnalysisConfig,
) -> Result<ThresholdScan> {
    Analyzer::new(system.clone(), *config)?.threshold_scan(p_min, p_max, resolution)
}

pub fn consistency_audit(
    system: &SystemDescriptor,
    p_grid: &[f64],
    config: &AnalysisConfig,
) -> Result<Vec<Contradiction>> {
    Analyzer::new(system.clone(), *config)?.consistency_audit(p_grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::MeasureConfig;
    use crate::model::catalog::lookup;
    use crate::model::{Atom, DiagonalSystem, Sequence};
    use num_complex::Complex64;

    fn small() -> AnalysisConfig {
        AnalysisConfig {
            measure: MeasureConfig {
                k_max: 20_000,
                ..MeasureConfig::default()
            },
            ..AnalysisConfig::default()
        }
    }

    #[test]
    fn zero_operator_is_admissible() {
        let s = SystemDescriptor::diagonal(
            "zero",
            DiagonalSystem::new(Sequence::power(1.0, 2.0), Sequence::power(0.0, 0.0), 2.0),
        );
        for p in [1.1, 2.0, 7.0] {
            let v = analyze(&s, p, &small()).unwrap();
            assert_eq!(v.admissible, Admissible::Yes);
            assert_eq!(v.evidence[0].criterion, CriterionId::Trivial);
        }
    }

    #[test]
    fn p_domain() {
        let s = lookup("heat1d-dirichlet", Default::default()).unwrap();
        assert!(matches!(
            analyze(&s, 1.0, &small()),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn single_mode_has_no_bracket() {
        let s = SystemDescriptor::diagonal("one", DiagonalSystem::single_mode(-1.0, 1.0, 2.0));
        assert!(matches!(
            threshold_scan(&s, 1.1, 8.0, 0.02, &small()),
            Err(Error::NoBracket(_))
        ));
    }

    #[test]
    fn fusion_forces_unknown_on_conflict() {
        let s = SystemDescriptor::diagonal("one", DiagonalSystem::single_mode(-1.0, 1.0, 2.0));
        let yes = CriterionReport::new(
            CriterionId::DyadicStrip,
            Evidence::AdmissibleEvidence,
            1.0,
            Sufficiency::Equivalent,
        );
        let no = CriterionReport::new(
            CriterionId::ResolventWeiss,
            Evidence::NotAdmissibleEvidence,
            1.0,
            Sufficiency::Necessary,
        );
        let v = fuse(&s, 3.0, vec![yes, no]);
        assert_eq!(v.admissible, Admissible::Unknown);
        assert_eq!(v.contradictions.len(), 1);
    }

    #[test]
    fn corrupted_measure_is_flagged() {
        let atoms = (1..=10)
            .map(|k| Atom {
                location: Complex64::new((k * k) as f64, 0.0),
                mass: if k == 4 { -1.0 } else { 1.0 },
                index: k,
            })
            .collect();
        let m = HalfPlaneMeasure::new_unchecked(atoms, None, None);
        let found = audit_measure(&m, &Default::default());
        assert!(found.len() >= 2, "{found:?}");
    }
}
