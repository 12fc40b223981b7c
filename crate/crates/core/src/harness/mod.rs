//! Run configuration, stage orchestration, acceptance records and file outputs.

pub mod config;
mod criteria;
pub mod output;
pub mod pipeline;
pub mod report;

pub use config::RunConfig;
pub use output::{emit_outputs, read_summary, summary_path, Summary};
pub use pipeline::{run_pipeline, run_stages, RunOutput, Stage, CRITERIA};
pub use report::{AcceptanceReport, CheckRecord, RegimeEntry, StageStatus, Status, Table};
