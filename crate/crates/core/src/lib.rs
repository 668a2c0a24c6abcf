//! Exact analysis of singular holomorphic foliation germs at the origin of
//! the complex plane: resolution by blow-ups, local classification,
//! holonomy germs, and the first-integral / real-logarithmic dichotomy.

pub mod classify;
pub mod error;
pub mod exactalg;
pub mod holonomy;
pub mod pipeline;
pub mod reduction;
pub mod report;
pub mod request;
pub mod stability;

pub use error::{Error, Result};
pub use pipeline::{run_pipeline, Stage, StageError};
pub use report::Report;
pub use request::{parse_group_request, parse_orbit_request, parse_request, AnalysisRequest, OutputFormat};
