//! Inverse problems and derived quantities: Fano fitting, ξ̄ extraction,
//! spectrum extrema and experimental feasibility estimates.

mod feasibility;
mod fit;
mod metrics;

pub use feasibility::{feasibility, FeasibilityInput, FeasibilityReport, CLASSICAL_FRACTION};
pub use fit::{extract_xibar, fit_fano, fit_fano_with, FanoFitResult, FitOptions};
pub use metrics::{effective_cross_section, spectrum_metrics, spectrum_metrics_with_baseline, SpectrumMetrics};
