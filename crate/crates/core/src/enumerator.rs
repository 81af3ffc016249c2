//! The stepwise enumerator abstraction.
//!
//! An enumerator is a resumable computation advanced one charged step at a
//! time. A step either does internal work, outputs exactly one solution, or
//! signals termination. Every combinator in this crate is itself an
//! enumerator driving inner enumerators by explicit stepping, so several
//! logical simulations interleave within one thread of control.

use crate::cost;
use crate::error::{EnumError, Result};
use crate::solution::Solution;

/// What a single step produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    NoOutput,
    Output(Solution),
    Done,
}

/// One executed step: its outcome and the cost charged for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub outcome: StepOutcome,
    /// Charged cost of the step, always at least one.
    pub charge: u64,
    /// Set on the step that ends precomputation. Delay accounting starts
    /// after this step; an enumerator raises it at most once.
    pub fence: bool,
}

impl Step {
    pub fn idle(charge: u64) -> Self {
        Self::new(StepOutcome::NoOutput, charge)
    }

    pub fn output(solution: Solution, charge: u64) -> Self {
        Self::new(StepOutcome::Output(solution), charge)
    }

    pub fn done(charge: u64) -> Self {
        Self::new(StepOutcome::Done, charge)
    }

    fn new(outcome: StepOutcome, charge: u64) -> Self {
        Self {
            outcome,
            charge: charge.max(1),
            fence: false,
        }
    }

    /// Marks this step as the end of precomputation.
    pub fn fenced(mut self) -> Self {
        self.fence = true;
        self
    }

    pub fn is_done(&self) -> bool {
        matches!(self.outcome, StepOutcome::Done)
    }

    pub fn solution(&self) -> Option<&Solution> {
        match &self.outcome {
            StepOutcome::Output(s) => Some(s),
            _ => None,
        }
    }
}

/// A resumable enumeration algorithm.
///
/// Implementations must return [`EnumError::Terminated`] from every call to
/// [`step`](Enumerator::step) made after the step that returned `Done`.
pub trait Enumerator: Send {
    /// Size of the instance, the `n` at which declared polynomials are
    /// evaluated.
    fn input_size(&self) -> usize;

    /// Declared upper bound on the length of every solution.
    fn solution_bound(&self) -> usize;

    fn step(&mut self) -> Result<Step>;

    /// Bits of working memory currently held, excluding emitted output.
    fn space_bits(&self) -> u64;

    /// Deep copy of the full state, or `None` when the enumerator does not
    /// support snapshots.
    fn fork(&self) -> Option<Box<dyn Enumerator>> {
        None
    }
}

impl<E: Enumerator + ?Sized> Enumerator for Box<E> {
    fn input_size(&self) -> usize {
        (**self).input_size()
    }

    fn solution_bound(&self) -> usize {
        (**self).solution_bound()
    }

    fn step(&mut self) -> Result<Step> {
        (**self).step()
    }

    fn space_bits(&self) -> u64 {
        (**self).space_bits()
    }

    fn fork(&self) -> Option<Box<dyn Enumerator>> {
        (**self).fork()
    }
}

/// A copy of an enumerator's state taken right after its `index`-th output
/// (or before the first step when `index` is zero).
pub struct Snapshot {
    index: u64,
    state: Box<dyn Enumerator>,
    size_bits: u64,
}

impl Snapshot {
    /// Captures `e`, which has emitted `index` solutions so far.
    pub fn capture(e: &dyn Enumerator, index: u64) -> Result<Self> {
        let state = e.fork().ok_or(EnumError::NotSnapshottable)?;
        let size_bits = state.space_bits();
        Ok(Self {
            index,
            state,
            size_bits,
        })
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Measured size of the captured state.
    pub fn size_bits(&self) -> u64 {
        self.size_bits
    }

    /// Charged cost of copying this state (one unit per machine word).
    pub fn copy_charge(&self) -> u64 {
        cost::copy_charge(self.size_bits)
    }

    /// Continues from the captured state, consuming the snapshot.
    pub fn resume(self) -> Box<dyn Enumerator> {
        self.state
    }

    /// Continues from a copy of the captured state, keeping the snapshot.
    pub fn resume_copy(&self) -> Box<dyn Enumerator> {
        self.state
            .fork()
            .expect("a captured state is snapshottable by construction")
    }
}

impl Clone for Snapshot {
    fn clone(&self) -> Self {
        Self {
            index: self.index,
            state: self.resume_copy(),
            size_bits: self.size_bits,
        }
    }
}

impl std::fmt::Debug for Snapshot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Snapshot")
            .field("index", &self.index)
            .field("size_bits", &self.size_bits)
            .finish()
    }
}

/// Tracks termination so implementations share one "step after Done" rule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Lifecycle {
    done: bool,
}

impl Lifecycle {
    pub(crate) fn check(&self) -> Result<()> {
        if self.done {
            Err(EnumError::Terminated)
        } else {
            Ok(())
        }
    }

    pub(crate) fn finish(&mut self, charge: u64) -> Step {
        self.done = true;
        Step::done(charge)
    }
}

/// An inner enumerator wrapped with its emitted-output index and elapsed
/// charge since the last output. Combinators drive their simulations through
/// this.
pub(crate) struct Sim {
    pub(crate) inner: Box<dyn Enumerator>,
    /// Solutions emitted so far (the absolute index of the last one).
    pub(crate) index: u64,
    /// Charge accumulated since the last output, or since the fence (or the
    /// start) before the first output.
    pub(crate) elapsed: u64,
    /// Cumulative charge of all steps taken by this simulation.
    pub(crate) clock: u64,
    /// Delay that preceded the most recent output.
    pub(crate) last_delay: u64,
    pub(crate) done: bool,
}

impl Sim {
    pub(crate) fn new(inner: Box<dyn Enumerator>) -> Self {
        Self::at(inner, 0)
    }

    /// A simulation resumed from a state that already emitted `index`
    /// solutions.
    pub(crate) fn at(inner: Box<dyn Enumerator>, index: u64) -> Self {
        Self {
            inner,
            index,
            elapsed: 0,
            clock: 0,
            last_delay: 0,
            done: false,
        }
    }

    pub(crate) fn step(&mut self) -> Result<Step> {
        let step = self.inner.step()?;
        self.clock += step.charge;
        if step.fence {
            self.elapsed = 0;
        } else {
            self.elapsed += step.charge;
        }
        match step.outcome {
            StepOutcome::Output(_) => {
                self.index += 1;
                self.last_delay = self.elapsed;
                self.elapsed = 0;
            }
            StepOutcome::Done => self.done = true,
            StepOutcome::NoOutput => {}
        }
        Ok(step)
    }

    pub(crate) fn snapshot(&self) -> Result<Snapshot> {
        Snapshot::capture(self.inner.as_ref(), self.index)
    }

    pub(crate) fn space_bits(&self) -> u64 {
        self.inner.space_bits() + 3 * 64
    }

    pub(crate) fn fork(&self) -> Option<Self> {
        Some(Self {
            inner: self.inner.fork()?,
            index: self.index,
            elapsed: self.elapsed,
            clock: self.clock,
            last_delay: self.last_delay,
            done: self.done,
        })
    }
}
