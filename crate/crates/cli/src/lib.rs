//! Corpus harness, report formats and CLI plumbing for `hermite-robin-core`.

pub mod corpus;
pub mod harness;
pub mod mesh_io;
pub mod report;

pub use corpus::{load_corpus, parse_corpus, ConfigError, CorpusEntry};
pub use harness::{run_corpus, verify_faber_krahn, HarnessError, Settings};
pub use report::{write_report, ReportRow, VerificationReport};
