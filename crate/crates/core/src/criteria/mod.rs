//! Admissibility tests and the reports they produce.

mod carleson;
mod favard;
mod power_law;
mod resolvent;
mod series;

pub use carleson::{
    carleson_square_criterion, dyadic_strip_criterion, square_ratio_scan, ScalePoint,
};
pub use favard::{favard_norm, favard_norm_on, FavardLevel, FavardNorm};
pub use power_law::{power_law_report, power_law_threshold};
pub use resolvent::{
    resolvent_norm, resolvent_report, resolvent_weiss_sup, weiss_rule_applicable, ResolventBound,
    ResolventScan, WeissRule,
};
pub use series::{
    interpolation_report, interpolation_threshold, interpolation_threshold_on, membership_on,
    sobolev_membership, InterpolationThreshold,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::SeriesVerdict;

/// What a criterion's outcome says about admissibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Evidence {
    AdmissibleEvidence,
    NotAdmissibleEvidence,
    Inconclusive,
}

/// Logical strength of a criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sufficiency {
    /// A positive outcome implies admissibility.
    Sufficient,
    /// A negative outcome implies non-admissibility.
    Necessary,
    /// Both directions hold.
    Equivalent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeScope {
    FiniteTime,
    InfiniteTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionId {
    Interpolation,
    CarlesonSquare,
    DyadicStrip,
    ResolventWeiss,
    PowerLawHolder,
    EmbeddingTrend,
    OracleProfile,
    Trivial,
}

impl CriterionId {
    pub fn as_str(self) -> &'static str {
        match self {
            CriterionId::Interpolation => "interpolation",
            CriterionId::CarlesonSquare => "carleson-square",
            CriterionId::DyadicStrip => "dyadic-strip",
            CriterionId::ResolventWeiss => "resolvent-weiss",
            CriterionId::PowerLawHolder => "power-law-holder",
            CriterionId::EmbeddingTrend => "embedding-trend",
            CriterionId::OracleProfile => "oracle-profile",
            CriterionId::Trivial => "zero-operator",
        }
    }
}

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: CriterionId,
    pub verdict: Evidence,
    /// The supremum, ratio or sum the criterion is about.
    pub witness: f64,
    /// Estimated growth exponent of the scanned quantity.
    pub growth_exponent: Option<f64>,
    pub series: Option<SeriesVerdict>,
    pub sufficiency: Sufficiency,
    pub time_scope: TimeScope,
    /// Advisory reports are shown but never decide a verdict.
    pub advisory: bool,
    pub notes: Vec<String>,
}

impl CriterionReport {
    pub fn new(
        criterion: CriterionId,
        verdict: Evidence,
        witness: f64,
        sufficiency: Sufficiency,
    ) -> Self {
        CriterionReport {
            criterion,
            verdict,
            witness,
            growth_exponent: None,
            series: None,
            sufficiency,
            time_scope: TimeScope::InfiniteTime,
            advisory: false,
            notes: Vec::new(),
        }
    }

    /// The report, taken at face value, proves admissibility.
    pub fn proves_admissible(&self) -> bool {
        !self.advisory
            && self.verdict == Evidence::AdmissibleEvidence
            && matches!(
                self.sufficiency,
                Sufficiency::Sufficient | Sufficiency::Equivalent
            )
    }

    /// The report, taken at face value, proves non-admissibility.
    pub fn proves_not_admissible(&self) -> bool {
        !self.advisory
            && self.verdict == Evidence::NotAdmissibleEvidence
            && matches!(
                self.sufficiency,
                Sufficiency::Necessary | Sufficiency::Equivalent
            )
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            allowed: "1 < p < inf",
        });
    }
    Ok(())
}

/// Hoelder conjugate `p' = p / (p - 1)`.
pub fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}
