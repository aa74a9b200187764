//! Batch evaluation on top of `tagc`: dataset manifests, paired and unpaired
//! runs, report rendering and histogram export.

mod error;
pub mod eval;
pub mod histogram;
pub mod manifest;
pub mod report;

pub use error::{HarnessError, Result};
pub use eval::{cross_dataset_average, run_eval, run_paired_eval, run_unpaired_eval, EvalMethod};
pub use histogram::{export_histogram, intensity_histogram};
pub use manifest::{load_manifest, DatasetManifest, ManifestEntry, Mode};
pub use report::{format_value, render_report, render_summary, EvalReport, ImageRow, MetricMeans, ReportFormat};
