//! Combinators that turn incremental enumerators into bounded-delay ones,
//! and the bridges between enumerators and "another solution" procedures.
//!
//! The declared polynomials `p` (delay target), `h` (average delay) and `q`
//! (gap count or density) are inputs; each combinator evaluates them at the
//! inner enumerator's input size, rounding up, and fails loudly when a
//! precondition is observed to break.

mod another_sol;
mod queue;
mod shortcut;
mod stock;

pub use another_sol::{
    another_sol_from_enumerator, enumerator_from_another_sol, AnotherSol, AnotherSolEnumerator,
    Answer, EnumeratorAnotherSol, IncrementalBounds,
};
pub use queue::{queue_amortize, QueueAmortizer};
pub use shortcut::{shortcut_regularize, ShortcutRegularizer};
pub use stock::{stock_regularize, StockRegularizer, StockStats};

use serde::{Deserialize, Serialize};

use crate::error::{EnumError, Result};
use crate::poly::Polynomial;

/// Bookkeeping charged per output by the combinators on top of solution
/// writes and state copies: counter comparisons and index updates on values
/// of at most 64 bits each.
pub const C_BOOK: u64 = 128;

/// Declared delay, average-delay and gap polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayBound {
    pub p: Polynomial,
    pub h: Polynomial,
    pub q: Polynomial,
}

/// A [`DelayBound`] evaluated at one input size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluated {
    pub p: u64,
    pub h: u64,
    pub q: u64,
}

impl DelayBound {
    pub fn new(p: Polynomial, h: Polynomial, q: Polynomial) -> Self {
        Self { p, h, q }
    }

    pub fn eval(&self, n: usize) -> Result<Evaluated> {
        Ok(Evaluated {
            p: self.p.eval_positive(n, "p")?,
            h: self.h.eval_positive(n, "h")?,
            q: self.q.eval_positive(n, "q")?,
        })
    }
}

pub(crate) fn require_forkable(e: &dyn crate::enumerator::Enumerator) -> Result<()> {
    e.fork().map(|_| ()).ok_or(EnumError::NotSnapshottable)
}
