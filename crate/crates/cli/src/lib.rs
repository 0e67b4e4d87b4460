//! Counts files, run reports and the verification sweep behind the `schmidt` binary.

pub mod format;
pub mod report;
pub mod verify;

pub use format::{parse, serialize};
pub use report::{digest, RunReport};
