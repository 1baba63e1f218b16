//! Report types and the verify-suite registry behind the `stgo-kit` binary.

pub mod report;
pub mod suites;
