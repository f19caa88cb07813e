//! Fixtures shared by the benchmarks.

use lpadm_core::model::catalog::lookup;
use lpadm_core::model::CatalogParams;
use lpadm_core::{AnalysisConfig, MeasureConfig, SystemDescriptor};

pub fn heat() -> SystemDescriptor {
    lookup("heat1d-dirichlet", CatalogParams::default()).expect("catalog entry")
}

pub fn laplacian(n: u32) -> SystemDescriptor {
    lookup(
        "laplacian-Rn",
        CatalogParams {
            n: Some(n),
            p0: None,
        },
    )
    .expect("catalog entry")
}

/// Analysis settings with a smaller horizon so a sample finishes quickly.
pub fn config(k_max: usize) -> AnalysisConfig {
    AnalysisConfig {
        measure: MeasureConfig {
            k_max,
            ..MeasureConfig::default()
        },
        ..AnalysisConfig::default()
    }
}
