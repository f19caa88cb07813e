//! System descriptors and the half-plane measures built from them.

pub mod catalog;
pub mod file;
pub mod measure;
pub mod system;

pub use catalog::{lookup, CatalogListing, CatalogParams};
pub use file::{load_system, parse_json, parse_toml};
pub use measure::{build_measure, Atom, AtomTail, Density, HalfPlaneMeasure, MeasureIntegral};
pub use system::{
    shift_system, DiagonalSystem, MultiplierAtom, MultiplierSystem, PowerLawDensitySystem,
    Sequence, SystemDescriptor, SystemKind,
};
