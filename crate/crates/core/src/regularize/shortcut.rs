//! Shortcut regularization for enumerators with few large gaps.
//!
//! Two copies of the inner enumerator run side by side. `I1` produces the
//! output. `I2` runs `2h` charged steps ahead for every unit of `I1` work and
//! watches its own delays; when output `i + 1` arrives more than `p` after
//! output `i`, it stores the pair `(i, state after output i + 1)` together
//! with solution `i + 1`. Whenever `I1` has just emitted output `i` and a
//! pair for `i` is stored, `I1` jumps over the gap by resuming from the
//! stored state and emitting the stored solution.

use std::collections::BTreeMap;

use crate::cost;
use crate::enumerator::{Enumerator, Lifecycle, Sim, Snapshot, Step, StepOutcome};
use crate::error::{EnumError, Result};
use crate::regularize::{require_forkable, DelayBound, Evaluated, C_BOOK};
use crate::solution::Solution;

struct Shortcut {
    solution: Solution,
    state: Snapshot,
}

impl Shortcut {
    fn bits(&self) -> u64 {
        self.state.size_bits() + cost::solution_bits(self.solution.len()) + 64
    }

    fn clone_state(&self) -> Self {
        Self {
            solution: self.solution.clone(),
            state: self.state.clone(),
        }
    }
}

pub struct ShortcutRegularizer {
    bounds: Evaluated,
    i1: Sim,
    i2: Option<Sim>,
    /// I1 charge plus one unit per jump.
    work1: u64,
    pairs: BTreeMap<u64, Shortcut>,
    pair_bits: u64,
    stored: usize,
    jumps: usize,
    max_snapshot_bits: u64,
    check_pair: bool,
    life: Lifecycle,
}

/// Wraps a snapshottable `e` with average delay `h` and at most `q` `p`-gaps.
pub fn shortcut_regularize(
    e: Box<dyn Enumerator>,
    bounds: &DelayBound,
) -> Result<ShortcutRegularizer> {
    require_forkable(e.as_ref())?;
    let bounds = bounds.eval(e.input_size())?;
    let i2 = Sim::new(e.fork().ok_or(EnumError::NotSnapshottable)?);
    Ok(ShortcutRegularizer {
        bounds,
        i1: Sim::new(e),
        i2: Some(i2),
        work1: 0,
        pairs: BTreeMap::new(),
        pair_bits: 0,
        stored: 0,
        jumps: 0,
        max_snapshot_bits: 0,
        check_pair: true,
        life: Lifecycle::default(),
    })
}

impl ShortcutRegularizer {
    pub fn bounds(&self) -> Evaluated {
        self.bounds
    }

    /// Pairs stored by the look-ahead copy so far.
    pub fn stored_pairs(&self) -> usize {
        self.stored
    }

    pub fn jumps(&self) -> usize {
        self.jumps
    }

    /// Largest state snapshot stored so far.
    pub fn max_snapshot_bits(&self) -> u64 {
        self.max_snapshot_bits
    }

    /// Delay bound for unit-charge inner steps: `p (2h + 1)` for a gap-free
    /// stretch of `I1` and its coupled look-ahead, plus a jump's state copy,
    /// solution write and bookkeeping.
    pub fn delay_bound(&self) -> u64 {
        let Evaluated { p, h, .. } = self.bounds;
        p * (2 * h + 1)
            + cost::copy_charge(self.max_snapshot_bits)
            + self.i1.inner.solution_bound() as u64
            + C_BOOK
    }

    /// Runs `I2` until its clock reaches `2h * work1`. Returns the charge.
    fn advance_lookahead(&mut self) -> Result<u64> {
        let target = 2 * self.bounds.h * self.work1;
        let mut charge = 0;
        while let Some(i2) = &mut self.i2 {
            if i2.clock >= target {
                break;
            }
            let step = i2.step()?;
            charge += step.charge;
            match step.outcome {
                StepOutcome::Output(s) if i2.last_delay > self.bounds.p => {
                    let state = i2.snapshot()?;
                    let gap = i2.index - 1;
                    charge += state.copy_charge();
                    self.store(gap, s, state)?;
                }
                StepOutcome::Done => self.i2 = None,
                _ => {}
            }
        }
        Ok(charge)
    }

    fn store(&mut self, gap: u64, solution: Solution, state: Snapshot) -> Result<()> {
        self.stored += 1;
        if self.stored as u64 > self.bounds.q {
            return Err(EnumError::GapBudgetExceeded {
                stored: self.stored,
                budget: self.bounds.q,
            });
        }
        self.max_snapshot_bits = self.max_snapshot_bits.max(state.size_bits());
        if gap < self.i1.index {
            // I1 is already past this gap.
            return Ok(());
        }
        let pair = Shortcut { solution, state };
        self.pair_bits += pair.bits();
        self.pairs.insert(gap, pair);
        Ok(())
    }
}

impl Enumerator for ShortcutRegularizer {
    fn input_size(&self) -> usize {
        self.i1.inner.input_size()
    }

    fn solution_bound(&self) -> usize {
        self.i1.inner.solution_bound()
    }

    fn step(&mut self) -> Result<Step> {
        self.life.check()?;
        let mut charge = 0;
        if self.work1 == 0 {
            // Give the look-ahead a head start of 2h before I1 moves.
            self.work1 = 1;
            charge += self.advance_lookahead()?;
            self.work1 = 0;
        }
        if std::mem::take(&mut self.check_pair) {
            if let Some(pair) = self.pairs.remove(&self.i1.index) {
                self.pair_bits -= pair.bits();
                let index = self.i1.index + 1;
                charge += pair.state.copy_charge()
                    + cost::write_charge(pair.solution.len())
                    + cost::bit_len(index);
                self.i1 = Sim::at(pair.state.resume(), index);
                self.jumps += 1;
                self.work1 += 1;
                self.check_pair = true;
                charge += self.advance_lookahead()?;
                return Ok(Step::output(pair.solution, charge));
            }
        }
        let step = self.i1.step()?;
        self.work1 += step.charge;
        charge += step.charge;
        if step.is_done() {
            return Ok(self.life.finish(charge));
        }
        charge += self.advance_lookahead()?;
        if step.fence || step.solution().is_some() {
            self.check_pair = true;
        }
        let mut out = match step.outcome {
            StepOutcome::Output(s) => Step::output(s, charge),
            _ => Step::idle(charge),
        };
        out.fence = step.fence;
        Ok(out)
    }

    fn space_bits(&self) -> u64 {
        self.i1.space_bits() + self.i2.as_ref().map_or(0, Sim::space_bits) + self.pair_bits + 6 * 64
    }

    fn fork(&self) -> Option<Box<dyn Enumerator>> {
        let i2 = match &self.i2 {
            Some(s) => Some(s.fork()?),
            None => None,
        };
        Some(Box::new(Self {
            bounds: self.bounds,
            i1: self.i1.fork()?,
            i2,
            work1: self.work1,
            pairs: self
                .pairs
                .iter()
                .map(|(k, v)| (*k, v.clone_state()))
                .collect(),
            pair_bits: self.pair_bits,
            stored: self.stored,
            jumps: self.jumps,
            max_snapshot_bits: self.max_snapshot_bits,
            check_pair: self.check_pair,
            life: self.life,
        }))
    }
}
