//! The padded instance family: `ceil(2^(n t)) - 1` padding words followed by
//! every satisfying assignment repeated `2^n` times.
//!
//! Padding word `i` is `#` followed by `i` in binary. Copy `j` of assignment
//! `y` is `y # j` with `j` written over `n` bits, so the two kinds of
//! solution never collide.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::enumerator::{Enumerator, Lifecycle, Step};
use crate::error::{EnumError, Result};
use crate::problems::cnf::{index_to_bits, CnfFormula};
use crate::problems::DEFAULT_MAX_VARS;
use crate::solution::Solution;

/// A rational exponent `num / den` in `(0, 1]`, kept reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num > den {
            return Err(EnumError::InvalidParameter(format!(
                "t = {num}/{den} must lie in (0, 1]"
            )));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FromStr for Ratio {
    type Err = EnumError;

    /// Accepts `p/q` or an integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || EnumError::InvalidParameter(format!("bad ratio {s:?}, expected p/q"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        Self::new(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `ceil(2^(e_num / e_den))`, exactly.
pub fn ceil_pow2(e_num: u64, e_den: u64) -> BigUint {
    assert!(e_den > 0);
    // Smallest m with m^den >= 2^num, found by bisection on [1, 2^ceil(num/den)].
    let target = BigUint::from(1u8) << e_num;
    let den = u32::try_from(e_den).expect("exponent denominator fits in u32");
    let mut lo = BigUint::from(1u8);
    let mut hi = BigUint::from(1u8) << e_num.div_ceil(e_den);
    while lo < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        if mid.pow(den) >= target {
            hi = mid;
        } else {
            lo = mid + 1u8;
        }
    }
    lo
}

/// A formula together with its padding exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedInstance {
    pub phi: Arc<CnfFormula>,
    pub t: Ratio,
}

impl PaddedInstance {
    pub fn new(phi: Arc<CnfFormula>, t: Ratio) -> Self {
        Self { phi, t }
    }

    pub fn n(&self) -> usize {
        self.phi.n_vars()
    }

    /// `ceil(2^(n t)) - 1`.
    pub fn padding_count(&self) -> BigUint {
        ceil_pow2(self.n() as u64 * self.t.num, self.t.den) - 1u8
    }

    /// Expected number of solutions given the model count of `phi`.
    pub fn expected_len(&self, models: u64) -> BigUint {
        self.padding_count() + BigUint::from(models) * (BigUint::from(1u8) << self.n())
    }
}

/// Finds one satisfying assignment, reporting the work it took.
pub trait SatSolver: Send {
    /// Index of a satisfying assignment (variable 1 most significant) and the
    /// number of assignments examined.
    fn solve(&mut self, phi: &CnfFormula) -> (Option<u64>, u64);

    fn clone_box(&self) -> Box<dyn SatSolver>;
}

/// Scans assignments in index order.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForceSat;

impl SatSolver for BruteForceSat {
    fn solve(&mut self, phi: &CnfFormula) -> (Option<u64>, u64) {
        let total = 1u64 << phi.n_vars();
        for i in 0..total {
            if phi.is_satisfied_by_index(i) {
                return (Some(i), i + 1);
            }
        }
        (None, total)
    }

    fn clone_box(&self) -> Box<dyn SatSolver> {
        Box::new(*self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Padding {
        next: u64,
    },
    Solve,
    Copies {
        assignment: u64,
        copy: u64,
        scan_from: u64,
    },
    Scan {
        next: u64,
    },
}

/// The padded enumerator: padding words at one step each, one solver call
/// charged its work, then the copies of every satisfying assignment.
pub struct PadEnumerator {
    inst: PaddedInstance,
    solver: Box<dyn SatSolver>,
    padding: u64,
    first: Option<u64>,
    phase: Phase,
    life: Lifecycle,
}

impl PadEnumerator {
    pub fn new(inst: PaddedInstance) -> Result<Self> {
        Self::with_solver(inst, Box::new(BruteForceSat), DEFAULT_MAX_VARS)
    }

    pub fn with_solver(
        inst: PaddedInstance,
        solver: Box<dyn SatSolver>,
        max_vars: usize,
    ) -> Result<Self> {
        if inst.n() > max_vars || inst.n() > 31 {
            return Err(EnumError::InstanceTooLarge(format!(
                "{} variables, cap is {}",
                inst.n(),
                max_vars.min(31)
            )));
        }
        let padding =
            u64::try_from(inst.padding_count()).expect("padding count is below 2^n for t <= 1");
        Ok(Self {
            inst,
            solver,
            padding,
            first: None,
            phase: Phase::Padding { next: 1 },
            life: Lifecycle::default(),
        })
    }

    pub fn padding_count(&self) -> u64 {
        self.padding
    }

    fn copy_word(&self, assignment: u64, copy: u64) -> Solution {
        let n = self.inst.n();
        let mut word = Solution::from_bits(&index_to_bits(assignment, n))
            .symbols()
            .to_vec();
        word.push(b'#');
        word.extend_from_slice(Solution::from_uint(copy, n).symbols());
        Solution::from_ascii_unchecked(word)
    }
}

fn padding_word(i: u64) -> Solution {
    let width = (64 - i.leading_zeros()) as usize;
    let mut word = vec![b'#'];
    word.extend_from_slice(Solution::from_uint(i, width).symbols());
    Solution::from_ascii_unchecked(word)
}

impl Enumerator for PadEnumerator {
    fn input_size(&self) -> usize {
        self.inst.n().max(1)
    }

    fn solution_bound(&self) -> usize {
        2 * self.inst.n() + 1
    }

    fn step(&mut self) -> Result<Step> {
        self.life.check()?;
        let n = self.inst.n();
        let total = 1u64 << n;
        match self.phase {
            Phase::Padding { next } => {
                if next > self.padding {
                    self.phase = Phase::Solve;
                    return self.step();
                }
                self.phase = Phase::Padding { next: next + 1 };
                Ok(Step::output(padding_word(next), 1))
            }
            Phase::Solve => {
                let (found, work) = self.solver.solve(&self.inst.phi);
                match found {
                    None => Ok(self.life.finish(work)),
                    Some(a) => {
                        self.first = Some(a);
                        self.phase = Phase::Copies {
                            assignment: a,
                            copy: 0,
                            scan_from: 0,
                        };
                        Ok(Step::idle(work))
                    }
                }
            }
            Phase::Copies {
                assignment,
                copy,
                scan_from,
            } => {
                self.phase = if copy + 1 == total {
                    Phase::Scan { next: scan_from }
                } else {
                    Phase::Copies {
                        assignment,
                        copy: copy + 1,
                        scan_from,
                    }
                };
                Ok(Step::output(self.copy_word(assignment, copy), 1))
            }
            Phase::Scan { next } => {
                if next == total {
                    return Ok(self.life.finish(1));
                }
                if Some(next) != self.first && self.inst.phi.is_satisfied_by_index(next) {
                    self.phase = Phase::Copies {
                        assignment: next,
                        copy: 0,
                        scan_from: next + 1,
                    };
                } else {
                    self.phase = Phase::Scan { next: next + 1 };
                }
                Ok(Step::idle(1))
            }
        }
    }

    fn space_bits(&self) -> u64 {
        4 * 64 + self.inst.n() as u64
    }

    fn fork(&self) -> Option<Box<dyn Enumerator>> {
        Some(Box::new(Self {
            inst: self.inst.clone(),
            solver: self.solver.clone_box(),
            padding: self.padding,
            first: self.first,
            phase: self.phase,
            life: self.life,
        }))
    }
}
