//! Stepwise enumerators and combinators that reshape their delay.
//!
//! An [`Enumerator`] advances one charged step at a time. The combinators in
//! [`regularize`] turn incremental enumerators into bounded-delay ones,
//! [`sampling`] turns random generators into randomized enumerators, and
//! [`analysis`] measures delays, gaps and incremental-time fits on recorded
//! traces.

pub mod analysis;
pub mod cost;
pub mod enumerator;
pub mod error;
pub mod poly;
pub mod problems;
pub mod regularize;
pub mod sampling;
pub mod scripted;
pub mod sketch;
pub mod solution;
pub mod trace;

pub use enumerator::{Enumerator, Snapshot, Step, StepOutcome};
pub use error::{EnumError, Result};
pub use poly::Polynomial;
pub use solution::Solution;
pub use trace::{record_trace, run_to_end, EnumerationTrace};
