//! Queue amortization: buffer the inner outputs and release the `k`-th one
//! when the inner step counter reaches `p * k^(a+1)`.

use std::collections::VecDeque;

use crate::cost;
use crate::enumerator::{Enumerator, Lifecycle, Sim, Step, StepOutcome};
use crate::error::{EnumError, Result};
use crate::poly::Polynomial;
use crate::regularize::C_BOOK;
use crate::solution::Solution;

/// Releases buffered inner outputs on the schedule `p * k^(a+1)`.
pub struct QueueAmortizer {
    inner: Sim,
    queue: VecDeque<Solution>,
    queued_bits: u64,
    a: u32,
    p: u64,
    /// Inner charge since the inner fence.
    counter: u64,
    emitted: u64,
    /// Counter values at which each output was released.
    release_counters: Vec<u64>,
    life: Lifecycle,
}

/// Wraps `e`, asserted to produce `k` solutions within `p(n) k^(a+1)` steps.
pub fn queue_amortize(e: Box<dyn Enumerator>, a: u32, p: &Polynomial) -> Result<QueueAmortizer> {
    let p = p.eval_positive(e.input_size(), "p")?;
    Ok(QueueAmortizer {
        inner: Sim::new(e),
        queue: VecDeque::new(),
        queued_bits: 0,
        a,
        p,
        counter: 0,
        emitted: 0,
        release_counters: Vec::new(),
        life: Lifecycle::default(),
    })
}

impl QueueAmortizer {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// Counter value at which output `k` is due.
    pub fn threshold(&self, k: u64) -> u64 {
        self.p.saturating_mul(k.saturating_pow(self.a + 1))
    }

    /// Inner counter values at which each output so far was released.
    pub fn release_counters(&self) -> &[u64] {
        &self.release_counters
    }

    /// Largest delay this wrapper may show between outputs `k` and `k + 1`
    /// when every inner step costs one: the schedule increment plus the
    /// solution write and bookkeeping.
    pub fn delay_bound(&self, k: u64) -> u64 {
        self.threshold(k + 1) - self.threshold(k)
            + self.inner.inner.solution_bound() as u64
            + C_BOOK
    }

    fn release(&mut self, extra: u64) -> Step {
        let s = self
            .queue
            .pop_front()
            .expect("release requires a queued solution");
        self.queued_bits -= cost::solution_bits(s.len());
        self.emitted += 1;
        self.release_counters.push(self.counter);
        let book = cost::bit_len(self.threshold(self.emitted)) + cost::bit_len(self.emitted);
        let charge = extra + cost::write_charge(s.len()) + book;
        Step::output(s, charge)
    }
}

impl Enumerator for QueueAmortizer {
    fn input_size(&self) -> usize {
        self.inner.inner.input_size()
    }

    fn solution_bound(&self) -> usize {
        self.inner.inner.solution_bound()
    }

    fn step(&mut self) -> Result<Step> {
        self.life.check()?;
        if self.inner.done {
            // Flush the backlog one solution per step.
            return Ok(if self.queue.is_empty() {
                self.life.finish(1)
            } else {
                self.release(0)
            });
        }
        let due = self.threshold(self.emitted + 1);
        if self.counter >= due && !self.queue.is_empty() {
            // The counter already crossed the next threshold: bookkeeping only.
            return Ok(self.release(0));
        }
        let step = self.inner.step()?;
        let fence = step.fence;
        if fence {
            self.counter = 0;
        } else {
            self.counter += step.charge;
        }
        match step.outcome {
            StepOutcome::Output(s) => {
                self.queued_bits += cost::solution_bits(s.len());
                self.queue.push_back(s);
            }
            StepOutcome::Done => {
                if self.queue.is_empty() {
                    return Ok(self.life.finish(step.charge));
                }
            }
            StepOutcome::NoOutput => {}
        }
        let out = if self.counter >= due && !self.inner.done {
            if self.queue.is_empty() {
                return Err(EnumError::BoundViolation(format!(
                    "queue empty when the counter reached {due} for output {}",
                    self.emitted + 1
                )));
            }
            self.release(step.charge)
        } else {
            Step::idle(step.charge)
        };
        Ok(if fence { out.fenced() } else { out })
    }

    fn space_bits(&self) -> u64 {
        self.inner.space_bits() + self.queued_bits + 64 * self.queue.len() as u64 + 4 * 64
    }

    fn fork(&self) -> Option<Box<dyn Enumerator>> {
        Some(Box::new(Self {
            inner: self.inner.fork()?,
            queue: self.queue.clone(),
            queued_bits: self.queued_bits,
            a: self.a,
            p: self.p,
            counter: self.counter,
            emitted: self.emitted,
            release_counters: self.release_counters.clone(),
            life: self.life,
        }))
    }
}
