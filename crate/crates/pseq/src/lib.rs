//! Standard-library companion to `pseq_core`: sequence file formats, the
//! floating-point FFT correlation path, a multi-threaded search driver,
//! JSON reports and the `pseq` command line tool.

pub mod cli;
pub mod format;
pub mod parallel;
pub mod report;
pub mod spectrum;

pub use pseq_core;
