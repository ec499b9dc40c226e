//! Co-analysis workbench for classifying algorithms by combined algorithmic,
//! software and hardware characteristics.
//!
//! Key Indicator measurements are normalized against a reference algorithm
//! and aggregated into Combined Measurement Indicators with weighted
//! geometric means. The crate bundles the published lightweight-cipher study
//! dataset, implementations of the eleven ciphers involved, a software timing
//! harness, and report/chart rendering.

pub mod bench;
pub mod chart;
pub mod ciphers;
pub mod composite;
pub mod dataset;
pub mod error;
pub mod indicator;
pub mod io;
pub mod report;
pub mod table;

pub use composite::{
    builtin_composite, builtin_composites, evaluate_composite, geometric_mean, ratio, reconcile_terms,
    weighted_geometric_mean, CompositeDef, CompositeScoreSet, Orientation, Term,
};
pub use error::{Error, Result};
pub use indicator::{map_rubric, IndicatorDef, IndicatorRegistry, Profile, RubricScale};
pub use report::{BenchmarkDescriptor, IndicatorReport, ReportFormat};
pub use table::MeasurementTable;
