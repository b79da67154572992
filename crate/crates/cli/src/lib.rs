//! Scenario runner for `lefschetz-core`: reads a TOML scenario, runs its
//! tasks and renders a report.

pub mod report;
pub mod run;
pub mod scenario;
pub mod triangulation;

pub use report::{emit_report, Format, RunReport};
pub use run::{run_scenario, Overrides};
