//! Scripted enumerators that emit at prescribed step counts.
//!
//! They are the test substrate for the regularizers: any output schedule can
//! be written down directly, including bursts, isolated gaps and the
//! dense/gap patterns the stock regularizer is designed for.

use std::sync::Arc;

use crate::enumerator::{Enumerator, Lifecycle, Step};
use crate::error::Result;
use crate::solution::Solution;

#[derive(Debug)]
struct Script {
    times: Vec<u64>,
    solutions: Vec<Solution>,
    fence: Option<u64>,
    input_size: usize,
    bound: usize,
}

/// Emits solution `i` exactly at unit step `times[i]`, then terminates on
/// the following step.
#[derive(Debug, Clone)]
pub struct Scripted {
    script: Arc<Script>,
    clock: u64,
    next: usize,
    life: Lifecycle,
}

impl Scripted {
    /// Solutions are the output indices in fixed-width binary.
    pub fn from_output_times(times: Vec<u64>) -> Self {
        let width = (usize::BITS - times.len().leading_zeros()).max(1) as usize;
        let solutions = (1..=times.len() as u64)
            .map(|i| Solution::from_uint(i, width))
            .collect();
        Self::with_solutions(times, solutions)
    }

    pub fn with_solutions(times: Vec<u64>, solutions: Vec<Solution>) -> Self {
        assert_eq!(times.len(), solutions.len(), "one solution per output time");
        assert!(
            times.first().is_none_or(|&t| t >= 1) && times.windows(2).all(|w| w[0] < w[1]),
            "output times must be positive and strictly increasing"
        );
        let bound = solutions.iter().map(Solution::len).max().unwrap_or(0);
        Self {
            script: Arc::new(Script {
                input_size: times.len().max(1),
                times,
                solutions,
                fence: None,
                bound,
            }),
            clock: 0,
            next: 0,
            life: Lifecycle::default(),
        }
    }

    /// Outputs separated by the given delays; the first delay is the wait
    /// before the first output.
    pub fn from_delays(delays: &[u64]) -> Self {
        let times = delays
            .iter()
            .scan(0u64, |t, d| {
                *t += d.max(&1);
                Some(*t)
            })
            .collect();
        Self::from_output_times(times)
    }

    /// Works silently for `n - 1` steps, then emits all `n` solutions on
    /// consecutive steps.
    pub fn burst(n: u64) -> Self {
        Self::from_output_times((n..2 * n).collect())
    }

    /// Repeated blocks: `dense` outputs at delay 1, then a wait of `gap`
    /// steps before the next block's first output.
    pub fn dense_blocks(blocks: &[(u64, u64)]) -> Self {
        let mut delays = Vec::new();
        for &(dense, gap) in blocks {
            if dense == 0 {
                continue;
            }
            delays.push(if delays.is_empty() { 1 } else { gap });
            delays.extend(std::iter::repeat_n(1, dense as usize - 1));
        }
        Self::from_delays(&delays)
    }

    /// Declares the first `steps` steps as precomputation.
    pub fn with_fence(mut self, steps: u64) -> Self {
        let script = Arc::get_mut(&mut self.script).expect("fence set before cloning");
        assert!(
            steps >= 1 && script.times.first().is_none_or(|&t| t > steps),
            "the fence must precede the first output"
        );
        script.fence = Some(steps);
        self
    }

    /// Overrides the declared instance size.
    pub fn with_input_size(mut self, n: usize) -> Self {
        Arc::get_mut(&mut self.script)
            .expect("input size set before cloning")
            .input_size = n;
        self
    }

    pub fn output_times(&self) -> &[u64] {
        &self.script.times
    }

    pub fn solutions(&self) -> &[Solution] {
        &self.script.solutions
    }
}

impl Enumerator for Scripted {
    fn input_size(&self) -> usize {
        self.script.input_size
    }

    fn solution_bound(&self) -> usize {
        self.script.bound
    }

    fn step(&mut self) -> Result<Step> {
        self.life.check()?;
        if self.next == self.script.times.len() {
            return Ok(self.life.finish(1));
        }
        self.clock += 1;
        let step = if self.script.times[self.next] == self.clock {
            self.next += 1;
            Step::output(self.script.solutions[self.next - 1].clone(), 1)
        } else {
            Step::idle(1)
        };
        Ok(if self.script.fence == Some(self.clock) {
            step.fenced()
        } else {
            step
        })
    }

    fn space_bits(&self) -> u64 {
        // Step clock and script cursor.
        2 * 64
    }

    fn fork(&self) -> Option<Box<dyn Enumerator>> {
        Some(Box::new(self.clone()))
    }
}
