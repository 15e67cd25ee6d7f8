//! File formats, verification suites, JSON reports and the command-line
//! front end for `rigidlab-core`.

pub mod cli;
pub mod envelope;
pub mod formats;
pub mod suite;

pub use envelope::ReportEnvelope;
pub use suite::{parse_manifest, run_suite, RunContext};
