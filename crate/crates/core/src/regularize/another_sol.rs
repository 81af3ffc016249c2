//! Bridges between enumerators and procedures that, given a set of known
//! solutions, find one more or report that none is left.

use std::collections::BTreeSet;

use crate::cost;
use crate::enumerator::{Enumerator, Lifecycle, Step, StepOutcome};
use crate::error::{EnumError, Result};
use crate::solution::Solution;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Found(Solution),
    NoMore,
}

/// Finds a solution outside `known`, or answers that `known` covers them all.
pub trait AnotherSol: Send {
    /// Returns the answer and the charged steps it took.
    fn find(&mut self, known: &BTreeSet<Solution>) -> Result<(Answer, u64)>;

    /// Membership test used to catch bad answers, when one is available.
    fn is_solution(&self, _s: &Solution) -> Option<bool> {
        None
    }

    fn input_size(&self) -> usize;

    fn solution_bound(&self) -> usize;
}

/// Calls the procedure with the growing set of emitted solutions until it
/// answers [`Answer::NoMore`]. One call per step.
pub struct AnotherSolEnumerator {
    proc: Box<dyn AnotherSol>,
    known: BTreeSet<Solution>,
    known_bits: u64,
    life: Lifecycle,
}

pub fn enumerator_from_another_sol(proc: Box<dyn AnotherSol>) -> AnotherSolEnumerator {
    AnotherSolEnumerator {
        proc,
        known: BTreeSet::new(),
        known_bits: 0,
        life: Lifecycle::default(),
    }
}

impl AnotherSolEnumerator {
    pub fn known(&self) -> &BTreeSet<Solution> {
        &self.known
    }
}

impl Enumerator for AnotherSolEnumerator {
    fn input_size(&self) -> usize {
        self.proc.input_size()
    }

    fn solution_bound(&self) -> usize {
        self.proc.solution_bound()
    }

    fn step(&mut self) -> Result<Step> {
        self.life.check()?;
        let (answer, work) = self.proc.find(&self.known)?;
        let charge = work.max(1);
        match answer {
            Answer::NoMore => Ok(self.life.finish(charge)),
            Answer::Found(s) => {
                if self.known.contains(&s) {
                    return Err(EnumError::ContractViolation(format!(
                        "procedure returned known solution {s}"
                    )));
                }
                if self.proc.is_solution(&s) == Some(false) {
                    return Err(EnumError::ContractViolation(format!(
                        "procedure returned non-solution {s}"
                    )));
                }
                self.known_bits += cost::solution_bits(s.len());
                self.known.insert(s.clone());
                let write = cost::write_charge(s.len());
                Ok(Step::output(s, charge + write))
            }
        }
    }

    fn space_bits(&self) -> u64 {
        self.known_bits + 64 * self.known.len() as u64 + 64
    }
}

/// Declared incremental time: `k` solutions within `c * n^a * k^b` steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementalBounds {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl IncrementalBounds {
    /// Step budget for a query with `known` solutions: `c * n^a * (1 + known)^b`.
    pub fn budget(&self, n: usize, known: usize) -> u64 {
        let v = self.c * (n as f64).powf(self.a) * (1.0 + known as f64).powf(self.b);
        if v >= u64::MAX as f64 {
            u64::MAX
        } else {
            (v - 1e-9).ceil().max(1.0) as u64
        }
    }
}

/// Answers queries by rerunning a fresh copy of an enumerator within the
/// declared budget.
pub struct EnumeratorAnotherSol {
    prototype: Box<dyn Enumerator>,
    bounds: IncrementalBounds,
    warnings: usize,
}

pub fn another_sol_from_enumerator(
    prototype: Box<dyn Enumerator>,
    bounds: IncrementalBounds,
) -> Result<EnumeratorAnotherSol> {
    if !(bounds.c > 0.0 && bounds.a >= 0.0 && bounds.b >= 0.0) {
        return Err(EnumError::InvalidParameter(format!(
            "incremental bounds must be nonnegative with c > 0, got {bounds:?}"
        )));
    }
    crate::regularize::require_forkable(prototype.as_ref())?;
    Ok(EnumeratorAnotherSol {
        prototype,
        bounds,
        warnings: 0,
    })
}

impl EnumeratorAnotherSol {
    /// Queries that ran out of budget before the enumerator terminated.
    pub fn warnings(&self) -> usize {
        self.warnings
    }
}

impl AnotherSol for EnumeratorAnotherSol {
    fn find(&mut self, known: &BTreeSet<Solution>) -> Result<(Answer, u64)> {
        let mut e = self.prototype.fork().ok_or(EnumError::NotSnapshottable)?;
        let mut spent = cost::copy_charge(self.prototype.space_bits());
        let budget = self.bounds.budget(self.prototype.input_size(), known.len());
        let mut run = 0u64;
        while run < budget {
            let step = e.step()?;
            run += step.charge;
            match step.outcome {
                StepOutcome::Output(s) => {
                    spent += cost::write_charge(s.len());
                    if !known.contains(&s) {
                        return Ok((Answer::Found(s), spent + run));
                    }
                }
                StepOutcome::Done => return Ok((Answer::NoMore, spent + run)),
                StepOutcome::NoOutput => {}
            }
        }
        self.warnings += 1;
        log::warn!(
            "enumerator did not finish within {budget} steps with {} known solutions; \
             its declared incremental bound does not hold",
            known.len()
        );
        Ok((Answer::NoMore, spent + run))
    }

    fn input_size(&self) -> usize {
        self.prototype.input_size()
    }

    fn solution_bound(&self) -> usize {
        self.prototype.solution_bound()
    }
}
