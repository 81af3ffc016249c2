//! Delay measurements on recorded traces: p-gaps, incremental-time fits,
//! and empirical estimates of the average delay and gap density that the
//! regularizers take as declared inputs.

use serde::{Deserialize, Serialize};

use crate::trace::EnumerationTrace;

/// Indices `i` with `T(i+1) - T(i) > p`. Index 0 is the wait from the fence
/// (or the start) to the first output.
pub fn detect_gaps(trace: &EnumerationTrace, p: u64) -> Vec<usize> {
    assert!(p > 0, "gap threshold must be positive");
    trace
        .delays()
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d > p)
        .map(|(i, _)| i)
        .collect()
}

/// Limits under which an incremental-time bound `T(m) <= c * m^a * n^b` is
/// searched for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementalLimits {
    /// Largest exponent `b` of the input size that may be used.
    pub max_n_exponent: u32,
    /// Largest acceptable constant `c`.
    pub max_constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementalFit {
    /// Tightest constant for the chosen exponents.
    pub c: f64,
    pub n_exponent: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IncrementalVerdict {
    Fits(IncrementalFit),
    /// No admissible `b` works. `m` is the first output index exceeding
    /// `max_constant * m^a * n^max_n_exponent`; `required_c` is the constant
    /// that exponent would need.
    Violated {
        m: usize,
        required_c: f64,
    },
    /// The trace was truncated, so the bound cannot be judged.
    Incomplete,
}

impl IncrementalVerdict {
    pub fn fits(&self) -> bool {
        matches!(self, Self::Fits(_))
    }
}

/// Smallest `c` with `T(m) <= c * m^a * n^b` for every output `m`.
pub fn tightest_constant(trace: &EnumerationTrace, a: f64, n: usize, b: u32) -> f64 {
    let scale = (n.max(1) as f64).powi(b as i32);
    (1..=trace.len())
        .map(|m| trace.relative_time(m) as f64 / ((m as f64).powf(a) * scale))
        .fold(0.0, f64::max)
}

/// Checks that the trace runs in incremental time `c * m^a * n^b`, trying
/// `b = 0, 1, ..., max_n_exponent` and keeping the first that fits.
pub fn check_incremental(
    trace: &EnumerationTrace,
    a: f64,
    n: usize,
    limits: IncrementalLimits,
) -> IncrementalVerdict {
    if trace.truncated {
        return IncrementalVerdict::Incomplete;
    }
    for b in 0..=limits.max_n_exponent {
        let c = tightest_constant(trace, a, n, b);
        if c <= limits.max_constant {
            return IncrementalVerdict::Fits(IncrementalFit { c, n_exponent: b });
        }
    }
    let b = limits.max_n_exponent;
    let scale = (n.max(1) as f64).powi(b as i32);
    let m = (1..=trace.len())
        .find(|&m| trace.relative_time(m) as f64 > limits.max_constant * (m as f64).powf(a) * scale)
        .expect("some output exceeds the limit when no constant fits");
    IncrementalVerdict::Violated {
        m,
        required_c: tightest_constant(trace, a, n, b),
    }
}

/// Smallest integer `h` with `T(k) <= k * h` for every output `k`.
pub fn average_delay(trace: &EnumerationTrace) -> u64 {
    (1..=trace.len())
        .map(|k| trace.relative_time(k).div_ceil(k as u64))
        .max()
        .unwrap_or(0)
}

/// Smallest integer `q` such that every prefix of `k` outputs contains a
/// gap-free interval `(a, b]` with `b - a > k / q`. `None` when some prefix
/// is made of gaps only.
pub fn gap_density(trace: &EnumerationTrace, p: u64) -> Option<u64> {
    let mut longest = 0u64;
    let mut current = 0u64;
    let mut worst = 0.0f64;
    for (i, d) in trace.delays().into_iter().enumerate() {
        if d > p {
            current = 0;
        } else {
            current += 1;
            longest = longest.max(current);
        }
        let k = (i + 1) as f64;
        if longest == 0 {
            return None;
        }
        worst = worst.max(k / longest as f64);
    }
    Some(worst.floor() as u64 + 1)
}

/// Delay measurements surfaced by the profiler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub outputs: usize,
    pub total_steps: u64,
    pub fence: u64,
    pub max_delay: u64,
    pub mean_delay: f64,
    pub average_delay_bound: u64,
    pub gap_threshold: u64,
    pub gaps: Vec<usize>,
    pub gap_density: Option<u64>,
    pub peak_space_bits: u64,
    pub truncated: bool,
}

pub fn summarize(trace: &EnumerationTrace, p: u64) -> ProfileSummary {
    let k = trace.len();
    ProfileSummary {
        outputs: k,
        total_steps: trace.total_steps,
        fence: trace.fence,
        max_delay: trace.max_delay(),
        mean_delay: if k == 0 {
            0.0
        } else {
            trace.relative_time(k) as f64 / k as f64
        },
        average_delay_bound: average_delay(trace),
        gap_threshold: p,
        gaps: detect_gaps(trace, p),
        gap_density: gap_density(trace, p),
        peak_space_bits: trace.peak_space_bits,
        truncated: trace.truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scripted::Scripted;
    use crate::trace::run_to_end;
    use proptest::prelude::*;

    fn trace_of(times: Vec<u64>) -> EnumerationTrace {
        run_to_end(&mut Scripted::from_output_times(times)).unwrap()
    }

    #[test]
    fn no_gaps_in_dense_trace() {
        assert!(detect_gaps(&trace_of(vec![1, 2, 3]), 5).is_empty());
    }

    #[test]
    fn single_late_gap() {
        assert_eq!(detect_gaps(&trace_of(vec![1, 2, 100]), 34), vec![2]);
    }

    #[test]
    fn threshold_at_max_delay_is_strict() {
        let t = trace_of(vec![4, 9, 11, 30]);
        assert!(detect_gaps(&t, t.max_delay()).is_empty());
        assert_eq!(detect_gaps(&t, t.max_delay() - 1), vec![3]);
    }

    #[test]
    fn linear_trace_is_incremental_linear() {
        let t = trace_of((1..=20).collect());
        let limits = IncrementalLimits {
            max_n_exponent: 0,
            max_constant: 1.0,
        };
        match check_incremental(&t, 1.0, 5, limits) {
            IncrementalVerdict::Fits(fit) => assert_eq!(fit.c, 1.0),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn cubic_trace_needs_cubic_exponent() {
        let t = trace_of(vec![1, 8, 27]);
        let strict = IncrementalLimits {
            max_n_exponent: 0,
            max_constant: 1.0,
        };
        assert!(matches!(
            check_incremental(&t, 3.0, 1, strict),
            IncrementalVerdict::Fits(IncrementalFit { c, .. }) if c == 1.0
        ));
        let below_four = IncrementalLimits {
            max_n_exponent: 0,
            max_constant: 3.9,
        };
        assert_eq!(
            check_incremental(&t, 1.0, 1, below_four),
            IncrementalVerdict::Violated {
                m: 2,
                required_c: 9.0
            }
        );
        // T(2) = 8 needs c >= 4 at m = 2.
        let four = IncrementalLimits {
            max_n_exponent: 0,
            max_constant: 4.0,
        };
        assert!(matches!(
            check_incremental(&t, 1.0, 1, four),
            IncrementalVerdict::Violated { m: 3, .. }
        ));
    }

    #[test]
    fn truncated_traces_are_not_judged() {
        let mut e = Scripted::from_output_times(vec![1, 2, 3]);
        let t = crate::trace::record_trace(&mut e, 2).unwrap();
        let limits = IncrementalLimits {
            max_n_exponent: 0,
            max_constant: 10.0,
        };
        assert_eq!(
            check_incremental(&t, 1.0, 1, limits),
            IncrementalVerdict::Incomplete
        );
    }

    #[test]
    fn average_delay_and_density() {
        // Three dense outputs, a gap of 20, then two more.
        let t = trace_of(vec![1, 2, 3, 23, 24]);
        // T(4) = 23 dominates: ceil(23 / 4) = 6.
        assert_eq!(average_delay(&t), 6);
        assert_eq!(gap_density(&t, 2), Some(2));
    }

    proptest! {
        #[test]
        fn gaps_match_definition(delays in prop::collection::vec(1u64..50, 0..40), p in 1u64..60) {
            let t = run_to_end(&mut Scripted::from_delays(&delays)).unwrap();
            let mut expected = Vec::new();
            let mut prev = 0;
            for (i, &time) in t.output_times.iter().enumerate() {
                if time - prev > p {
                    expected.push(i);
                }
                prev = time;
            }
            prop_assert_eq!(detect_gaps(&t, p), expected);
        }

        #[test]
        fn traces_are_strictly_increasing(delays in prop::collection::vec(1u64..50, 0..40)) {
            let t = run_to_end(&mut Scripted::from_delays(&delays)).unwrap();
            prop_assert!(t.output_times.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(t.output_times.len(), t.solutions.len());
        }
    }
}
