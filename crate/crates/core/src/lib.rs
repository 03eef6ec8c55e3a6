//! Exact analysis of periodic p-ary sequences with ideal two-level
//! autocorrelation.
//!
//! The crate is `no_std` and needs only `alloc`. It provides
//!
//! - [`gf`]: arithmetic in GF(p^m), primitive polynomial discovery and the
//!   trace map,
//! - [`cyclotomic`]: exact arithmetic in Z[ω] for a p-th root of unity ω,
//! - [`sequence`]: the [`Sequence`] type, m-sequences and the shift actions,
//! - [`analysis`]: balance profiles, correlation values and verdicts,
//! - [`search`]: exhaustive enumeration of ideal sequences.
//!
//! Floating point never enters a decision; the companion `pseq` crate
//! carries the FFT cross-check, file formats and the command line tool.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod cyclotomic;
pub mod gf;
pub mod search;
pub mod sequence;

pub use analysis::{analyze, AnalysisReport, BalanceVerdict, MultiplicityProfile};
pub use cyclotomic::CyclotomicInt;
pub use gf::{find_primitive_poly, FieldCtx, FieldElement};
pub use search::{canonical_form, search_itla, SearchResult, SearchSpec};
pub use sequence::{mseq_generate, Sequence};
