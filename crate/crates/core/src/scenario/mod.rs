//! Scenario configuration, the design pipeline and its outputs.

pub mod config;
pub mod emit;
pub mod run;

pub use config::{ScenarioConfig, ScenarioKind, SweepSection, TargetProfile};
pub use emit::{emit_run, emit_sweep, verify_phase, Manifest, Verification};
pub use run::{run_scenario, sweep, Design, ScenarioResult, Summary, SweepResult};
