//! Verification harness for the `modmot` library: a deterministic corpus of
//! curves with modulus, property suites over it and report rendering.

pub mod config;
pub mod corpus;
pub mod report;
pub mod suites;

pub use config::SuiteConfig;
pub use corpus::{corpus_generate, Corpus, CORPUS_VERSION};
pub use report::{Check, Report, Status};
pub use suites::{run_suite, SUITES};
