//! Decides L^p-admissibility of control operators for diagonal,
//! multiplication and normal semigroups.

// `!(x > 0.0)` style checks are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analyzer;
pub mod config;
pub mod criteria;
pub mod embedding;
pub mod error;
pub mod fit;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod sums;

pub use analyzer::{Admissible, Analyzer, Contradiction, ThresholdScan, TracePoint, Verdict};
pub use config::{AnalysisConfig, MeasureConfig, ScanConfig};
pub use criteria::{CriterionId, CriterionReport, Evidence, Sufficiency, TimeScope};
pub use embedding::TestInput;
pub use error::{Error, Result};
pub use fit::{Classification, SeriesVerdict, TailMode};
pub use model::{
    build_measure, DiagonalSystem, HalfPlaneMeasure, MultiplierSystem, PowerLawDensitySystem,
    Sequence, SystemDescriptor, SystemKind,
};
