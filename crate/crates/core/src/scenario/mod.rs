//! Declarative scenarios: config parsing, presets, and the run pipeline.

pub mod config;
mod expect;
pub mod presets;
mod run;

pub use config::{parse_scenario, Analysis, ApertureChoice, LensConfig, OutputFormat, PlateConfig, Scenario, Source};
pub use expect::{Expectation, ExpectationOutcome};
pub use presets::{preset, Preset, FIGURE_PRESETS, PRESETS};
pub use run::{
    inspect_run_dir, run_checked, run_scenario, sha256_file, simulate, GouyCheck, ManifestEntry, Observables,
    OrientationResult, PowerLedger, RelativeGouy, RingResult, RunDirectory, RunReport, Setup, Simulation,
    WindingProbe, GOUY_PLANES, REPORT_FILE, WINDING_FRACTIONS,
};
