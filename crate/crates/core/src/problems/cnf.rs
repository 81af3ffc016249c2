//! CNF formulas in DIMACS format.

use std::fmt::Write as _;

use thiserror::Error;

use crate::solution::Solution;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: malformed problem line: {msg}")]
    Header { line: usize, msg: String },
    #[error("line {line}: clause before the problem line")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate problem line")]
    DuplicateHeader { line: usize },
    #[error("line {line}: bad literal {token:?}")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: literal {lit} out of range for {n_vars} variables")]
    LiteralOutOfRange {
        line: usize,
        lit: i64,
        n_vars: usize,
    },
    #[error("line {line}: last clause is missing its terminating 0")]
    MissingTerminator { line: usize },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("no problem line")]
    NoHeader,
}

/// A CNF formula over variables `1..=n_vars`, clauses as DIMACS literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    n_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    /// Panics if a literal is zero or out of range.
    pub fn new(n_vars: usize, clauses: Vec<Vec<i32>>) -> Self {
        for lit in clauses.iter().flatten() {
            assert!(
                *lit != 0 && lit.unsigned_abs() as usize <= n_vars,
                "literal {lit} invalid for {n_vars} variables"
            );
        }
        Self { n_vars, clauses }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Whether `bits` (bit `i` is variable `i + 1`) satisfies every clause.
    pub fn is_satisfied_by(&self, bits: &[bool]) -> bool {
        debug_assert_eq!(bits.len(), self.n_vars);
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| lit_value(l, bits)))
    }

    /// Evaluates the assignment with index `index`, where variable 1 is the
    /// most significant bit.
    pub fn is_satisfied_by_index(&self, index: u64) -> bool {
        self.is_satisfied_by(&index_to_bits(index, self.n_vars))
    }
}

fn lit_value(lit: i32, bits: &[bool]) -> bool {
    let v = bits[lit.unsigned_abs() as usize - 1];
    if lit > 0 {
        v
    } else {
        !v
    }
}

/// Bits of assignment `index`, variable 1 first (most significant).
pub fn index_to_bits(index: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| index >> (n - 1 - i) & 1 == 1).collect()
}

/// A total assignment of a formula's variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn from_index(index: u64, n: usize) -> Self {
        Self(index_to_bits(index, n))
    }

    pub fn to_solution(&self) -> Solution {
        Solution::from_bits(&self.0)
    }

    pub fn satisfies(&self, phi: &CnfFormula) -> bool {
        phi.is_satisfied_by(&self.0)
    }
}

/// Parses DIMACS CNF text. Lines starting with `c` are comments, a line
/// starting with `%` ends the input, and clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut open_since = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line });
            }
            header = Some(parse_header(trimmed, line)?);
            continue;
        }
        let (n_vars, _) = header.ok_or(DimacsError::MissingHeader { line })?;
        for token in trimmed.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| DimacsError::BadLiteral {
                line,
                token: token.to_owned(),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                open_since = None;
                continue;
            }
            if lit.unsigned_abs() as usize > n_vars {
                return Err(DimacsError::LiteralOutOfRange { line, lit, n_vars });
            }
            open_since.get_or_insert(line);
            current.push(lit as i32);
        }
    }
    if let Some(line) = open_since {
        return Err(DimacsError::MissingTerminator {
            line: line.max(last_line.min(line)),
        });
    }
    let (n_vars, declared) = header.ok_or(DimacsError::NoHeader)?;
    if declared != clauses.len() {
        return Err(DimacsError::ClauseCount {
            declared,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula { n_vars, clauses })
}

fn parse_header(line_text: &str, line: usize) -> Result<(usize, usize), DimacsError> {
    let bad = |msg: &str| DimacsError::Header {
        line,
        msg: msg.to_owned(),
    };
    let parts: Vec<&str> = line_text.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
        return Err(bad("expected `p cnf <vars> <clauses>`"));
    }
    let vars = parts[2].parse().map_err(|_| bad("variable count"))?;
    let count = parts[3].parse().map_err(|_| bad("clause count"))?;
    Ok((vars, count))
}

/// Writes `phi` in DIMACS CNF format, one clause per line.
pub fn emit_dimacs(phi: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", phi.n_vars, phi.clauses.len());
    for clause in &phi.clauses {
        for lit in clause {
            write!(out, "{lit} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// All satisfying assignment indices, by exhaustive evaluation.
pub fn brute_force_models(phi: &CnfFormula) -> Vec<u64> {
    (0..1u64 << phi.n_vars)
        .filter(|&i| phi.is_satisfied_by_index(i))
        .collect()
}
