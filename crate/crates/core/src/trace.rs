//! Recording runs and the trace file format.
//!
//! A trace file is a one-line JSON header prefixed with `# `, followed by a
//! CSV table with columns `index,cumulative_steps,solution_hex`. Indices are
//! 1-based output indices; `cumulative_steps` is `T(i)`, the total charge of
//! all steps up to and including the one that emitted output `i`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::cost::CostModel;
use crate::enumerator::{Enumerator, StepOutcome};
use crate::error::{EnumError, Result};
use crate::solution::Solution;

/// The output schedule of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationTrace {
    /// `T(1..k)`, strictly increasing.
    pub output_times: Vec<u64>,
    pub solutions: Vec<Solution>,
    pub total_steps: u64,
    /// Number of `step` calls made.
    pub step_calls: u64,
    pub peak_space_bits: u64,
    /// Cumulative charge at the precomputation fence, zero when the
    /// enumerator declared none.
    pub fence: u64,
    /// The budget ran out before the enumerator signalled termination.
    pub truncated: bool,
    pub input_size: usize,
}

impl EnumerationTrace {
    pub fn len(&self) -> usize {
        self.output_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.output_times.is_empty()
    }

    /// Time of output `i` measured from the fence, with `T(0) = 0`.
    pub fn relative_time(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.output_times[i - 1] - self.fence
        }
    }

    /// Delays `T(i+1) - T(i)` for `i = 0..k-1`, where entry 0 is the wait
    /// from the fence to the first output.
    pub fn delays(&self) -> Vec<u64> {
        (0..self.len())
            .map(|i| self.relative_time(i + 1) - self.relative_time(i))
            .collect()
    }

    pub fn max_delay(&self) -> u64 {
        self.delays().into_iter().max().unwrap_or(0)
    }
}

/// Runs `e` until it terminates or `step_budget` charged steps have elapsed.
///
/// Errors raised by the enumerator itself (contract or bound violations)
/// are propagated; budget exhaustion is reported through
/// [`EnumerationTrace::truncated`].
pub fn record_trace(e: &mut dyn Enumerator, step_budget: u64) -> Result<EnumerationTrace> {
    let bound = e.solution_bound();
    let mut trace = EnumerationTrace {
        output_times: Vec::new(),
        solutions: Vec::new(),
        total_steps: 0,
        step_calls: 0,
        peak_space_bits: e.space_bits(),
        fence: 0,
        truncated: false,
        input_size: e.input_size(),
    };
    let mut fenced = false;
    loop {
        if trace.total_steps >= step_budget {
            trace.truncated = true;
            break;
        }
        let step = e.step()?;
        trace.total_steps += step.charge;
        trace.step_calls += 1;
        trace.peak_space_bits = trace.peak_space_bits.max(e.space_bits());
        if step.fence {
            if fenced {
                return Err(EnumError::ContractViolation(
                    "precomputation fence declared twice".into(),
                ));
            }
            fenced = true;
            trace.fence = trace.total_steps;
        }
        match step.outcome {
            StepOutcome::Output(s) => {
                if s.len() > bound {
                    return Err(EnumError::ContractViolation(format!(
                        "solution of length {} exceeds the declared bound {bound}",
                        s.len()
                    )));
                }
                trace.output_times.push(trace.total_steps);
                trace.solutions.push(s);
            }
            StepOutcome::Done => break,
            StepOutcome::NoOutput => {}
        }
    }
    Ok(trace)
}

/// Runs `e` to completion with no budget.
pub fn run_to_end(e: &mut dyn Enumerator) -> Result<EnumerationTrace> {
    record_trace(e, u64::MAX)
}

/// JSON header of a trace file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub instance: String,
    pub n: usize,
    pub cost_model: CostModel,
    pub peak_space_bits: u64,
    pub truncated: bool,
    pub total_steps: u64,
    pub fence: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct TraceRow {
    index: u64,
    cumulative_steps: u64,
    solution_hex: String,
}

/// Writes `trace` in the trace file format.
pub fn write_trace<W: Write>(
    mut out: W,
    instance: &str,
    trace: &EnumerationTrace,
) -> std::io::Result<()> {
    let header = TraceHeader {
        instance: instance.to_owned(),
        n: trace.input_size,
        cost_model: CostModel::default(),
        peak_space_bits: trace.peak_space_bits,
        truncated: trace.truncated,
        total_steps: trace.total_steps,
        fence: trace.fence,
    };
    writeln!(out, "# {}", serde_json::to_string(&header)?)?;
    let mut w = csv::Writer::from_writer(out);
    for (i, (t, s)) in trace.output_times.iter().zip(&trace.solutions).enumerate() {
        w.serialize(TraceRow {
            index: i as u64 + 1,
            cumulative_steps: *t,
            solution_hex: s.to_hex(),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a trace file back. Step-call counts are not stored and read as zero.
pub fn read_trace<R: BufRead>(mut input: R) -> Result<(TraceHeader, EnumerationTrace)> {
    let bad = |msg: String| EnumError::InvalidParameter(format!("trace file: {msg}"));
    let mut first = String::new();
    input
        .read_line(&mut first)
        .map_err(|e| bad(e.to_string()))?;
    let json = first
        .trim_end()
        .strip_prefix("# ")
        .ok_or_else(|| bad("missing '# ' header line".into()))?;
    let header: TraceHeader = serde_json::from_str(json).map_err(|e| bad(e.to_string()))?;
    let mut trace = EnumerationTrace {
        output_times: Vec::new(),
        solutions: Vec::new(),
        total_steps: header.total_steps,
        step_calls: 0,
        peak_space_bits: header.peak_space_bits,
        fence: header.fence,
        truncated: header.truncated,
        input_size: header.n,
    };
    let mut reader = csv::Reader::from_reader(input);
    for (i, row) in reader.deserialize::<TraceRow>().enumerate() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        if row.index != i as u64 + 1 {
            return Err(bad(format!("row {} has index {}", i + 1, row.index)));
        }
        trace.output_times.push(row.cumulative_steps);
        trace.solutions.push(Solution::from_hex(&row.solution_hex)?);
    }
    if trace.output_times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("cumulative steps are not strictly increasing".into()));
    }
    Ok((header, trace))
}
