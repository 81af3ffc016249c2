//! Explicitly listed solution sets and generators drawing from them.
//!
//! File format: one element per line, a hex byte payload optionally followed
//! by whitespace and a positive weight. Blank lines and lines starting with
//! `#` are skipped. Payload bytes become solution bits, most significant
//! bit first.

use std::collections::HashSet;
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost;
use crate::error::{EnumError, Result};
use crate::sampling::{GeneratorKind, SolutionGenerator};
use crate::solution::Solution;

/// A finite set of distinct solutions with optional draw weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitSet {
    elements: Vec<Solution>,
    weights: Option<Vec<f64>>,
    bias: Option<f64>,
}

impl ExplicitSet {
    pub fn new(elements: Vec<Solution>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(elements.len());
        if let Some(dup) = elements.iter().find(|e| !seen.insert(*e)) {
            return Err(EnumError::InvalidParameter(format!(
                "duplicate element {dup} in explicit set"
            )));
        }
        Ok(Self {
            elements,
            weights: None,
            bias: None,
        })
    }

    /// Attaches draw weights. With a declared bias `b`, every element must
    /// have probability at least `1 / (s b)`; without one, the smallest such
    /// `b` is used.
    pub fn with_weights(mut self, weights: Vec<f64>, declared_bias: Option<f64>) -> Result<Self> {
        if weights.len() != self.elements.len() {
            return Err(EnumError::InvalidParameter(format!(
                "{} weights for {} elements",
                weights.len(),
                self.elements.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(EnumError::InvalidParameter(
                "weights must be positive".into(),
            ));
        }
        let s = self.elements.len() as f64;
        let total: f64 = weights.iter().sum();
        let min_p = weights.iter().copied().fold(f64::INFINITY, f64::min) / total;
        let needed = 1.0 / (s * min_p);
        let bias = match declared_bias {
            Some(b) if min_p * s * b < 1.0 - 1e-12 => {
                return Err(EnumError::InvalidParameter(format!(
                    "declared bias {b} too small: minimum probability {min_p} < 1/({s} * {b})"
                )))
            }
            Some(b) => b,
            None => needed,
        };
        self.weights = Some(weights);
        self.bias = Some(bias);
        Ok(self)
    }

    /// Parses the explicit-set file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut elements = Vec::new();
        let mut weights = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| EnumError::InvalidParameter(format!("line {}: {msg}", i + 1));
            let mut parts = line.split_whitespace();
            let payload = parts.next().unwrap_or_default();
            let bytes =
                hex::decode(payload).map_err(|e| bad(format!("bad hex {payload:?}: {e}")))?;
            elements.push(Solution::from_bytes(&bytes));
            if let Some(w) = parts.next() {
                weights.push(
                    w.parse::<f64>()
                        .map_err(|_| bad(format!("bad weight {w:?}")))?,
                );
            }
            if parts.next().is_some() {
                return Err(bad("too many columns".into()));
            }
        }
        let set = Self::new(elements)?;
        match weights.len() {
            0 => Ok(set),
            n if n == set.len() => set.with_weights(weights, None),
            _ => Err(EnumError::InvalidParameter(
                "either every line or no line carries a weight".into(),
            )),
        }
    }

    pub fn elements(&self) -> &[Solution] {
        &self.elements
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn bias(&self) -> Option<f64> {
        self.bias
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Longest element.
    pub fn max_len(&self) -> usize {
        self.elements.iter().map(Solution::len).max().unwrap_or(0)
    }
}

struct Shared {
    set: ExplicitSet,
    members: HashSet<Solution>,
    dist: Option<WeightedIndex<f64>>,
}

/// Draws from an [`ExplicitSet`]: uniformly when unweighted, proportionally
/// to the weights otherwise.
#[derive(Clone)]
pub struct ExplicitGenerator {
    shared: Arc<Shared>,
    rng: ChaCha8Rng,
}

/// Generator over `set` seeded with `seed`. Empty sets are rejected.
pub fn explicit_generator(set: ExplicitSet, seed: u64) -> Result<ExplicitGenerator> {
    if set.is_empty() {
        return Err(EnumError::EmptyInstance(
            "a generator needs at least one element to draw".into(),
        ));
    }
    let members = set.elements.iter().cloned().collect();
    let dist = match &set.weights {
        Some(w) => Some(
            WeightedIndex::new(w.iter().copied())
                .map_err(|e| EnumError::InvalidParameter(e.to_string()))?,
        ),
        None => None,
    };
    Ok(ExplicitGenerator {
        shared: Arc::new(Shared { set, members, dist }),
        rng: ChaCha8Rng::seed_from_u64(seed),
    })
}

impl ExplicitGenerator {
    pub fn set(&self) -> &ExplicitSet {
        &self.shared.set
    }
}

impl SolutionGenerator for ExplicitGenerator {
    fn kind(&self) -> GeneratorKind {
        match self.shared.set.bias {
            Some(b) => GeneratorKind::Biased(b),
            None => GeneratorKind::Uniform,
        }
    }

    fn draw(&mut self) -> Solution {
        let i = match &self.shared.dist {
            Some(d) => d.sample(&mut self.rng),
            None => self.rng.gen_range(0..self.shared.set.len()),
        };
        self.shared.set.elements[i].clone()
    }

    fn draw_charge(&self) -> u64 {
        cost::arith_charge(&[self.shared.set.len() as u64]) + self.shared.set.max_len() as u64
    }

    fn is_member(&self, s: &Solution) -> bool {
        self.shared.members.contains(s)
    }

    fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    fn input_size(&self) -> usize {
        self.shared.set.len()
    }

    fn solution_bound(&self) -> usize {
        self.shared.set.max_len()
    }

    fn space_bits(&self) -> u64 {
        // ChaCha8 key, counter and buffer position.
        512
    }

    fn clone_box(&self) -> Box<dyn SolutionGenerator> {
        Box::new(self.clone())
    }
}
