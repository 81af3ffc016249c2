//! Flashlight (backtrack) search for all satisfying assignments.

use std::sync::Arc;

use crate::enumerator::{Enumerator, Lifecycle, Step};
use crate::error::{EnumError, Result};
use crate::problems::cnf::CnfFormula;
use crate::problems::DEFAULT_MAX_VARS;
use crate::solution::Solution;

/// How an extension-oracle call is charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleCharge {
    /// One unit per call, as for a polynomial-time oracle.
    #[default]
    Unit,
    /// The number of search nodes the oracle actually visited.
    Actual,
}

/// Decides whether a prefix assignment of variables `1..=prefix.len()`
/// extends to a satisfying assignment.
pub trait ExtensionOracle: Send {
    /// Returns the decision and the work it took, in search nodes.
    fn extends(&mut self, phi: &CnfFormula, prefix: &[bool]) -> (bool, u64);

    fn clone_box(&self) -> Box<dyn ExtensionOracle>;
}

/// Exhaustive search over the free variables with clause pruning.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForceOracle;

impl ExtensionOracle for BruteForceOracle {
    fn extends(&mut self, phi: &CnfFormula, prefix: &[bool]) -> (bool, u64) {
        let mut values: Vec<Option<bool>> = vec![None; phi.n_vars()];
        for (v, &b) in values.iter_mut().zip(prefix) {
            *v = Some(b);
        }
        let mut work = 0;
        let found = search(phi, &mut values, prefix.len(), &mut work);
        (found, work)
    }

    fn clone_box(&self) -> Box<dyn ExtensionOracle> {
        Box::new(*self)
    }
}

#[derive(PartialEq)]
enum Status {
    Falsified,
    Satisfied,
    Open,
}

fn status(phi: &CnfFormula, values: &[Option<bool>]) -> Status {
    let mut all_sat = true;
    for clause in phi.clauses() {
        let mut sat = false;
        let mut open = false;
        for &lit in clause {
            match values[lit.unsigned_abs() as usize - 1] {
                Some(v) if v == (lit > 0) => {
                    sat = true;
                    break;
                }
                Some(_) => {}
                None => open = true,
            }
        }
        if !sat {
            if !open {
                return Status::Falsified;
            }
            all_sat = false;
        }
    }
    if all_sat {
        Status::Satisfied
    } else {
        Status::Open
    }
}

fn search(phi: &CnfFormula, values: &mut [Option<bool>], depth: usize, work: &mut u64) -> bool {
    *work += 1;
    match status(phi, values) {
        Status::Falsified => return false,
        Status::Satisfied => return true,
        Status::Open => {}
    }
    for b in [false, true] {
        values[depth] = Some(b);
        let found = search(phi, values, depth + 1, work);
        values[depth] = None;
        if found {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Root,
    /// The current prefix extends; descend or output.
    Descend,
    /// The 0-child failed; the 1-child must extend.
    TryOne,
    /// Leave the current leaf and find the next open branch.
    Backtrack,
}

/// Enumerates the satisfying assignments of a formula in lexicographic
/// order (variable 1 most significant, 0 before 1). Every step makes one
/// oracle call or one backtracking move, so with a unit-charge oracle
/// every step costs one.
pub struct FlashlightAllSat {
    phi: Arc<CnfFormula>,
    oracle: Box<dyn ExtensionOracle>,
    charge: OracleCharge,
    prefix: Vec<bool>,
    phase: Phase,
    life: Lifecycle,
}

impl FlashlightAllSat {
    /// Uses the brute-force oracle at unit charge.
    pub fn new(phi: Arc<CnfFormula>) -> Result<Self> {
        Self::with_oracle(
            phi,
            Box::new(BruteForceOracle),
            OracleCharge::Unit,
            DEFAULT_MAX_VARS,
        )
    }

    pub fn with_oracle(
        phi: Arc<CnfFormula>,
        oracle: Box<dyn ExtensionOracle>,
        charge: OracleCharge,
        max_vars: usize,
    ) -> Result<Self> {
        if phi.n_vars() > max_vars {
            return Err(EnumError::InstanceTooLarge(format!(
                "{} variables, cap is {max_vars}",
                phi.n_vars()
            )));
        }
        Ok(Self {
            phi,
            oracle,
            charge,
            prefix: Vec::new(),
            phase: Phase::Root,
            life: Lifecycle::default(),
        })
    }

    fn ask(&mut self, prefix_extra: Option<bool>) -> (bool, u64) {
        if let Some(b) = prefix_extra {
            self.prefix.push(b);
        }
        let (ok, work) = self.oracle.extends(&self.phi, &self.prefix);
        if prefix_extra.is_some() {
            self.prefix.pop();
        }
        let charge = match self.charge {
            OracleCharge::Unit => 1,
            OracleCharge::Actual => work,
        };
        (ok, charge)
    }

    fn inconsistent(&self) -> EnumError {
        EnumError::ContractViolation(format!(
            "oracle claimed prefix {:?} extends but neither child does",
            Solution::from_bits(&self.prefix).as_str()
        ))
    }
}

impl Enumerator for FlashlightAllSat {
    fn input_size(&self) -> usize {
        self.phi.n_vars().max(1)
    }

    fn solution_bound(&self) -> usize {
        self.phi.n_vars()
    }

    fn step(&mut self) -> Result<Step> {
        self.life.check()?;
        match self.phase {
            Phase::Root => {
                let (ok, c) = self.ask(None);
                if !ok {
                    return Ok(self.life.finish(c));
                }
                self.phase = Phase::Descend;
                Ok(Step::idle(c))
            }
            Phase::Descend => {
                if self.prefix.len() == self.phi.n_vars() {
                    self.phase = Phase::Backtrack;
                    return Ok(Step::output(Solution::from_bits(&self.prefix), 1));
                }
                let (ok, c) = self.ask(Some(false));
                if ok {
                    self.prefix.push(false);
                } else {
                    self.phase = Phase::TryOne;
                }
                Ok(Step::idle(c))
            }
            Phase::TryOne => {
                let (ok, c) = self.ask(Some(true));
                if !ok {
                    return Err(self.inconsistent());
                }
                self.prefix.push(true);
                self.phase = Phase::Descend;
                Ok(Step::idle(c))
            }
            Phase::Backtrack => match self.prefix.pop() {
                None => Ok(self.life.finish(1)),
                Some(true) => Ok(Step::idle(1)),
                Some(false) => {
                    let (ok, c) = self.ask(Some(true));
                    // Either way this level is now on its 1-branch.
                    self.prefix.push(true);
                    if ok {
                        self.phase = Phase::Descend;
                    }
                    Ok(Step::idle(c))
                }
            },
        }
    }

    fn space_bits(&self) -> u64 {
        self.phi.n_vars() as u64 + 64
    }

    fn fork(&self) -> Option<Box<dyn Enumerator>> {
        Some(Box::new(Self {
            phi: Arc::clone(&self.phi),
            oracle: self.oracle.clone_box(),
            charge: self.charge,
            prefix: self.prefix.clone(),
            phase: self.phase,
            life: self.life,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::cnf::{brute_force_models, index_to_bits, parse_dimacs};
    use crate::trace::run_to_end;

    fn models(text: &str) -> (Vec<Solution>, Vec<Solution>) {
        let phi = Arc::new(parse_dimacs(text).unwrap());
        let t = run_to_end(&mut FlashlightAllSat::new(phi.clone()).unwrap()).unwrap();
        let expected = brute_force_models(&phi)
            .into_iter()
            .map(|i| Solution::from_bits(&index_to_bits(i, phi.n_vars())))
            .collect();
        (t.solutions, expected)
    }

    #[test]
    fn conjunction_has_one_model() {
        let (got, want) = models("p cnf 2 2\n1 0\n2 0\n");
        assert_eq!(got, vec![Solution::from_symbols("11").unwrap()]);
        assert_eq!(got, want);
    }

    #[test]
    fn unsatisfiable_stops_after_root_call() {
        let phi = Arc::new(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap());
        let mut e = FlashlightAllSat::new(phi).unwrap();
        assert!(e.step().unwrap().is_done());
    }

    #[test]
    fn tautology_gives_the_cube_in_order() {
        let (got, want) = models("p cnf 3 0\n");
        assert_eq!(got.len(), 8);
        assert_eq!(got, want);
        assert!(got.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mixed_formula_matches_brute_force() {
        let (got, want) = models("p cnf 4 3\n1 -2 0\n2 3 -4 0\n-1 4 0\n");
        assert_eq!(got, want);
    }

    #[test]
    fn lying_oracle_is_caught() {
        #[derive(Clone)]
        struct Liar;
        impl ExtensionOracle for Liar {
            fn extends(&mut self, _: &CnfFormula, prefix: &[bool]) -> (bool, u64) {
                (prefix.is_empty(), 1)
            }
            fn clone_box(&self) -> Box<dyn ExtensionOracle> {
                Box::new(Liar)
            }
        }
        let phi = Arc::new(parse_dimacs("p cnf 2 0\n").unwrap());
        let mut e =
            FlashlightAllSat::with_oracle(phi, Box::new(Liar), OracleCharge::Unit, 24).unwrap();
        let err = (0..5).find_map(|_| e.step().err()).unwrap();
        assert!(matches!(err, EnumError::ContractViolation(_)));
    }

    #[test]
    fn over_the_cap_is_rejected() {
        let phi = Arc::new(CnfFormula::new(30, vec![]));
        assert!(matches!(
            FlashlightAllSat::new(phi),
            Err(EnumError::InstanceTooLarge(_))
        ));
    }
}
