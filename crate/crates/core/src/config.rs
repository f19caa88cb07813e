//! Numerical settings shared by measure construction and the criteria.

use serde::{Deserialize, Serialize};

/// Horizon for materializing infinite atom families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    /// Largest number of atoms materialized from a parametric family.
    pub k_max: usize,
    /// Atoms with `|lambda_k|` above this cap are not materialized.
    pub lambda_cap: f64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            k_max: 1_000_000,
            lambda_cap: 1e30,
        }
    }
}

/// Scan windows and decision tolerances for the criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Dyadic square half-widths `a = 2^j`, `j` in `[j_min, j_max]`.
    pub j_min: i32,
    pub j_max: i32,
    /// Dyadic strip indices.
    pub n_min: i32,
    pub n_max: i32,
    /// Resolvent grid over `log2(lambda)`.
    pub log2_lambda_min: f64,
    pub log2_lambda_max: f64,
    pub lambda_points_per_octave: usize,
    /// Growth slope at or below which a scanned supremum counts as bounded.
    pub bounded_slope: f64,
    /// Growth slope at or above which a resolvent supremum counts as unbounded.
    pub unbounded_slope: f64,
    /// Scan the resolvent off the real axis as well.
    pub complex_resolvent: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            j_min: -20,
            j_max: 60,
            n_min: -20,
            n_max: 80,
            log2_lambda_min: -10.0,
            log2_lambda_max: 20.0,
            lambda_points_per_octave: 16,
            bounded_slope: 1e-3,
            unbounded_slope: 0.02,
            complex_resolvent: false,
        }
    }
}

/// Everything an analysis run needs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub measure: MeasureConfig,
    pub scan: ScanConfig,
    /// Horizon used by the simulation oracle; smaller than the analysis
    /// horizon because the remainder is closed by the analytic tail.
    pub oracle_k_max: Option<usize>,
}

impl AnalysisConfig {
    pub fn oracle_measure(&self) -> MeasureConfig {
        MeasureConfig {
            k_max: self.oracle_k_max.unwrap_or(100_000).min(self.measure.k_max),
            ..self.measure
        }
    }
}
