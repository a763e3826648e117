//! Differential testing of the two conductor pipelines over generated
//! corpora, plus the record and report formats behind the `swan` binary.

pub mod case;
pub mod corpus;
pub mod kummer;
pub mod report;
pub mod suites;

pub use case::{CaseDescriptor, Stratum};
pub use corpus::{generate_corpus, CorpusConfig};
pub use report::{emit_report, Report, Verdict, VerificationRecord};
