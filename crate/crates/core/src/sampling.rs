//! Randomized enumeration from random generators.
//!
//! [`SampleEnumerator`] draws from a generator until the number of draws `r`
//! exceeds `K` times the number of distinct solutions seen. In exact mode it
//! keeps every seen solution in a trie and emits each one once; in sketch
//! mode it emits every draw and only tracks an estimate of the distinct
//! count, so its bookkeeping stays logarithmic in the size of the set.

use serde::{Deserialize, Serialize};

use crate::cost;
use crate::enumerator::{Enumerator, Lifecycle, Step};
use crate::error::{EnumError, Result};
use crate::sketch::DistinctSketch;
use crate::solution::Solution;

/// Distribution of a generator's draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GeneratorKind {
    Uniform,
    /// Every solution has probability at least `1 / (s * b)` per draw,
    /// `b` evaluated at the instance size.
    Biased(f64),
}

impl GeneratorKind {
    pub fn bias(&self) -> f64 {
        match *self {
            Self::Uniform => 1.0,
            Self::Biased(b) => b,
        }
    }
}

/// A randomized procedure returning one solution per call. The generator
/// owns its pseudorandom source.
pub trait SolutionGenerator: Send {
    fn kind(&self) -> GeneratorKind;

    fn draw(&mut self) -> Solution;

    /// Charged cost of one draw.
    fn draw_charge(&self) -> u64;

    /// Membership predicate of the underlying problem.
    fn is_member(&self, s: &Solution) -> bool;

    /// Restarts the pseudorandom source from `seed`.
    fn reseed(&mut self, seed: u64);

    fn input_size(&self) -> usize;

    fn solution_bound(&self) -> usize;

    /// Bits of generator state.
    fn space_bits(&self) -> u64;

    fn clone_box(&self) -> Box<dyn SolutionGenerator>;
}

/// Failure probability, solution size bound and optional seed override.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    epsilon: f64,
    p_bits: u64,
    seed: Option<u64>,
}

impl SamplingConfig {
    pub fn new(epsilon: f64, p_bits: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(EnumError::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        if p_bits == 0 {
            return Err(EnumError::InvalidParameter(
                "p_bits must be at least 1".into(),
            ));
        }
        Ok(Self {
            epsilon,
            p_bits,
            seed: None,
        })
    }

    /// Reseeds the generator when the enumerator is built.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn p_bits(&self) -> u64 {
        self.p_bits
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

fn ceil_k(x: f64) -> u64 {
    (x - 1e-9).ceil() as u64
}

/// `ceil(2 (p - log2(eps / 2)))`.
pub fn k_uniform(p_bits: u64, epsilon: f64) -> u64 {
    ceil_k(2.0 * (p_bits as f64 - (epsilon / 2.0).log2()))
}

/// `ceil(2 b (p - log2(eps / 2)))`.
pub fn k_biased(p_bits: u64, epsilon: f64, b: f64) -> u64 {
    ceil_k(2.0 * b * (p_bits as f64 - (epsilon / 2.0).log2()))
}

/// `ceil(4 (p - log2(eps / 4)))`.
pub fn k_sketch(p_bits: u64, epsilon: f64) -> u64 {
    ceil_k(4.0 * (p_bits as f64 - (epsilon / 4.0).log2()))
}

/// A ternary trie over `{#, 0, 1}` words, stored as an arena.
#[derive(Debug, Clone, Default)]
pub struct SymbolTrie {
    children: Vec<[u32; 3]>,
    terminal: Vec<bool>,
    len: usize,
}

const NONE: u32 = u32::MAX;

fn symbol_slot(c: u8) -> usize {
    match c {
        b'#' => 0,
        b'0' => 1,
        _ => 2,
    }
}

impl SymbolTrie {
    pub fn new() -> Self {
        Self {
            children: vec![[NONE; 3]],
            terminal: vec![false],
            len: 0,
        }
    }

    /// Inserts `s`, returning whether it was absent.
    pub fn insert(&mut self, s: &Solution) -> bool {
        let mut node = 0usize;
        for &c in s.symbols() {
            let slot = symbol_slot(c);
            let next = self.children[node][slot];
            node = if next == NONE {
                let id = self.children.len();
                self.children.push([NONE; 3]);
                self.terminal.push(false);
                self.children[node][slot] = id as u32;
                id
            } else {
                next as usize
            };
        }
        let fresh = !self.terminal[node];
        self.terminal[node] = true;
        self.len += fresh as usize;
        fresh
    }

    pub fn contains(&self, s: &Solution) -> bool {
        let mut node = 0usize;
        for &c in s.symbols() {
            match self.children[node][symbol_slot(c)] {
                NONE => return false,
                next => node = next as usize,
            }
        }
        self.terminal[node]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Three 32-bit child links and a terminal bit per node.
    pub fn space_bits(&self) -> u64 {
        self.children.len() as u64 * (3 * 32 + 1)
    }
}

/// One evaluation of the loop condition, for replay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    /// Draws made before the check.
    pub r: u64,
    /// `|E|` in exact mode, the sketch estimate otherwise.
    pub size: f64,
    pub k: u64,
    pub proceed: bool,
}

impl Decision {
    /// Recomputes the literal condition `r <= K * size`.
    pub fn replays(&self) -> bool {
        (self.r as f64 <= self.k as f64 * self.size) == self.proceed
    }
}

enum Store {
    Exact(SymbolTrie),
    Sketch(DistinctSketch),
}

/// Draw-until-saturated randomized enumerator. Each step is one loop
/// iteration: the stopping check, one draw and the store update.
pub struct SampleEnumerator {
    generator: Box<dyn SolutionGenerator>,
    store: Store,
    k: u64,
    r: u64,
    p_bits: u64,
    log: Option<Vec<Decision>>,
    life: Lifecycle,
}

/// Draws uniformly and emits each distinct solution once.
pub fn sample_enumerate(
    g: Box<dyn SolutionGenerator>,
    cfg: SamplingConfig,
) -> Result<SampleEnumerator> {
    let k = k_uniform(cfg.p_bits, cfg.epsilon);
    SampleEnumerator::build(g, cfg, k, Store::Exact(SymbolTrie::new()))
}

/// Like [`sample_enumerate`] with `K` scaled by the generator's bias.
pub fn sample_enumerate_biased(
    g: Box<dyn SolutionGenerator>,
    cfg: SamplingConfig,
) -> Result<SampleEnumerator> {
    let b = g.kind().bias();
    if !(b.is_finite() && b >= 1.0) {
        return Err(EnumError::InvalidParameter(format!(
            "bias must be at least 1, got {b}"
        )));
    }
    let k = k_biased(cfg.p_bits, cfg.epsilon, b);
    SampleEnumerator::build(g, cfg, k, Store::Exact(SymbolTrie::new()))
}

/// Emits every draw and tracks the distinct count with `sk`.
pub fn sample_enumerate_sketch(
    g: Box<dyn SolutionGenerator>,
    cfg: SamplingConfig,
    sk: DistinctSketch,
) -> Result<SampleEnumerator> {
    let k = k_sketch(cfg.p_bits, cfg.epsilon);
    SampleEnumerator::build(g, cfg, k, Store::Sketch(sk))
}

impl SampleEnumerator {
    fn build(
        mut generator: Box<dyn SolutionGenerator>,
        cfg: SamplingConfig,
        k: u64,
        store: Store,
    ) -> Result<Self> {
        if let Some(seed) = cfg.seed {
            generator.reseed(seed);
        }
        Ok(Self {
            generator,
            store,
            k,
            r: 0,
            p_bits: cfg.p_bits,
            log: None,
            life: Lifecycle::default(),
        })
    }

    /// Records every stopping decision.
    pub fn with_decision_log(mut self) -> Self {
        self.log = Some(Vec::new());
        self
    }

    pub fn decisions(&self) -> &[Decision] {
        self.log.as_deref().unwrap_or(&[])
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Draws made so far.
    pub fn draws(&self) -> u64 {
        self.r
    }

    /// Current `|E|`, or the sketch estimate.
    pub fn size_estimate(&self) -> f64 {
        match &self.store {
            Store::Exact(t) => t.len() as f64,
            Store::Sketch(s) => s.estimate(),
        }
    }

    /// Bits held by the dedup trie or the sketch.
    pub fn store_bits(&self) -> u64 {
        match &self.store {
            Store::Exact(t) => t.space_bits(),
            Store::Sketch(s) => s.space_bits(),
        }
    }

    /// Working memory excluding the generator.
    pub fn bookkeeping_bits(&self) -> u64 {
        self.store_bits() + 3 * 64
    }
}

impl Enumerator for SampleEnumerator {
    fn input_size(&self) -> usize {
        self.generator.input_size()
    }

    fn solution_bound(&self) -> usize {
        self.generator.solution_bound()
    }

    fn step(&mut self) -> Result<Step> {
        self.life.check()?;
        let size = self.size_estimate();
        let bound = self.k as f64 * size;
        let proceed = self.r as f64 <= bound;
        if let Some(log) = &mut self.log {
            log.push(Decision {
                r: self.r,
                size,
                k: self.k,
                proceed,
            });
        }
        // Computing K * size and comparing it with r.
        let check = cost::arith_charge(&[self.k, bound as u64, self.r]) * 2;
        if !proceed {
            return Ok(self.life.finish(check));
        }
        let e = self.generator.draw();
        self.r += 1;
        if !self.generator.is_member(&e) {
            return Err(EnumError::ContractViolation(format!(
                "generator drew {e}, which is not a solution"
            )));
        }
        let mut charge = check + self.generator.draw_charge() + cost::arith_charge(&[self.r]);
        match &mut self.store {
            Store::Exact(trie) => {
                charge += e.len().max(self.p_bits as usize) as u64;
                if trie.insert(&e) {
                    charge += cost::write_charge(e.len());
                    Ok(Step::output(e, charge))
                } else {
                    Ok(Step::idle(charge))
                }
            }
            Store::Sketch(sk) => {
                charge += sk.update(&e) + cost::write_charge(e.len());
                Ok(Step::output(e, charge))
            }
        }
    }

    fn space_bits(&self) -> u64 {
        self.bookkeeping_bits() + self.generator.space_bits()
    }

    fn fork(&self) -> Option<Box<dyn Enumerator>> {
        Some(Box::new(Self {
            generator: self.generator.clone_box(),
            store: match &self.store {
                Store::Exact(t) => Store::Exact(t.clone()),
                Store::Sketch(s) => Store::Sketch(s.clone()),
            },
            k: self.k,
            r: self.r,
            p_bits: self.p_bits,
            log: self.log.clone(),
            life: self.life,
        }))
    }
}
