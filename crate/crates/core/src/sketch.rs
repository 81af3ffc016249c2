//! k-minimum-values distinct-count sketch with a median over repetitions.
//!
//! Each solution is fingerprinted by a seeded polynomial hash over its
//! 8-byte words modulo `2^61 - 1`. Every repetition maps the fingerprint
//! through its own affine function `a x + b mod P` and keeps the `k`
//! smallest results. A repetition estimates the distinct count exactly while
//! it holds fewer than `k` values and as `(k - 1) / v_k` afterwards, where
//! `v_k = (h_k + 1) / P` is the scaled `k`-th smallest value. The sketch
//! reports the median over repetitions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost;
use crate::error::{EnumError, Result};
use crate::solution::Solution;

/// The Mersenne prime `2^61 - 1`.
pub const MODULUS: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    let p = u128::from(a) * u128::from(b);
    let lo = (p as u64) & MODULUS;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

/// Sketch size: values kept per repetition and number of repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchParams {
    pub k_min: usize,
    pub reps: usize,
}

/// One calibrated table entry: at failure budget `delta`, the parameters
/// whose measured all-times failure rate stayed below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub delta: f64,
    pub params: SketchParams,
    /// Failure rate measured by the calibration sweep.
    pub measured_failure: f64,
}

/// Calibration table, version 1. Produced by the `calibrate_sketch`
/// example over 2000 seeded streams of 2^16 distinct updates, checking the
/// factor-2 bound after every update. Each entry is the smallest
/// `k_min * reps` whose measured failure rate stayed below `0.75 * delta`.
pub const CALIBRATION_VERSION: u8 = 1;
pub const CALIBRATION: [Calibration; 3] = [
    Calibration {
        delta: 0.25,
        params: SketchParams { k_min: 20, reps: 1 },
        measured_failure: 0.153,
    },
    Calibration {
        delta: 0.1,
        params: SketchParams { k_min: 32, reps: 1 },
        measured_failure: 0.0535,
    },
    Calibration {
        delta: 0.05,
        params: SketchParams { k_min: 8, reps: 5 },
        measured_failure: 0.0345,
    },
];

impl SketchParams {
    /// Calibrated parameters for failure budget `delta`. Below the smallest
    /// calibrated budget the repetition count grows with `log(1/delta)`.
    pub fn for_delta(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(EnumError::InvalidParameter(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        if let Some(c) = CALIBRATION.iter().find(|c| delta >= c.delta) {
            return Ok(c.params);
        }
        let last = CALIBRATION[CALIBRATION.len() - 1];
        let scale = (delta.ln() / last.delta.ln()).ceil() as usize;
        let reps = (last.params.reps * scale) | 1;
        Ok(Self {
            k_min: last.params.k_min,
            reps,
        })
    }
}

/// The `k` smallest distinct values inserted so far, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmvRegisters {
    k: usize,
    values: Vec<u64>,
}

impl KmvRegisters {
    pub fn new(k: usize) -> Self {
        assert!(k >= 2, "k must be at least 2");
        Self {
            k,
            values: Vec::with_capacity(k),
        }
    }

    /// Inserts a hash value in `[0, P)`; returns whether the registers changed.
    pub fn insert(&mut self, h: u64) -> bool {
        if self.values.len() == self.k && h >= self.values[self.k - 1] {
            return false;
        }
        match self.values.binary_search(&h) {
            Ok(_) => false,
            Err(pos) => {
                if self.values.len() == self.k {
                    self.values.pop();
                }
                self.values.insert(pos, h);
                true
            }
        }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn estimate(&self) -> f64 {
        if self.values.len() < self.k {
            self.values.len() as f64
        } else {
            let v = (self.values[self.k - 1] + 1) as f64 / MODULUS as f64;
            (self.k - 1) as f64 / v
        }
    }
}

/// Bounded-space estimator of the number of distinct solutions seen.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinctSketch {
    params: SketchParams,
    seed: u64,
    base: u64,
    affine: Vec<(u64, u64)>,
    registers: Vec<KmvRegisters>,
    cached: f64,
}

impl DistinctSketch {
    pub fn new(params: SketchParams, seed: u64) -> Result<Self> {
        if params.k_min < 2 || params.reps == 0 || params.reps.is_multiple_of(2) {
            return Err(EnumError::InvalidParameter(format!(
                "sketch needs k_min >= 2 and an odd repetition count, got {params:?}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = rng.gen_range(2..MODULUS);
        let affine = (0..params.reps)
            .map(|_| (rng.gen_range(1..MODULUS), rng.gen_range(0..MODULUS)))
            .collect();
        Ok(Self {
            params,
            seed,
            base,
            affine,
            registers: vec![KmvRegisters::new(params.k_min); params.reps],
            cached: 0.0,
        })
    }

    /// Sketch calibrated for failure probability `delta`.
    pub fn for_delta(delta: f64, seed: u64) -> Result<Self> {
        Self::new(SketchParams::for_delta(delta)?, seed)
    }

    pub fn params(&self) -> SketchParams {
        self.params
    }

    /// Seeded polynomial fingerprint of `s`.
    pub fn fingerprint(&self, s: &Solution) -> u64 {
        let bytes = s.symbols();
        // Length first so that zero-padded tails cannot collide.
        let mut h = add_mod(bytes.len() as u64 % MODULUS, 1);
        for chunk in bytes.chunks(8) {
            let mut word = [0u8; 8];
            word[..chunk.len()].copy_from_slice(chunk);
            let w = u64::from_le_bytes(word) % MODULUS;
            h = add_mod(mul_mod(h, self.base), w);
        }
        h
    }

    /// Adds `s` to the stream. Returns the charged cost.
    pub fn update(&mut self, s: &Solution) -> u64 {
        let fp = self.fingerprint(s);
        let words = s.len().div_ceil(8) as u64 + 1;
        words * cost::arith_charge(&[MODULUS]) + self.update_fingerprint(fp)
    }

    /// Adds an already fingerprinted element, any value in `[0, P)`.
    /// Returns the charged cost.
    pub fn update_fingerprint(&mut self, fp: u64) -> u64 {
        let fp = fp % MODULUS;
        let mut changed = false;
        for ((a, b), reg) in self.affine.iter().zip(&mut self.registers) {
            changed |= reg.insert(add_mod(mul_mod(*a, fp), *b));
        }
        if changed {
            self.cached = self.median();
        }
        2 * self.params.reps as u64 * cost::arith_charge(&[MODULUS])
    }

    fn median(&self) -> f64 {
        let mut e: Vec<f64> = self.registers.iter().map(KmvRegisters::estimate).collect();
        e.sort_by(f64::total_cmp);
        e[e.len() / 2]
    }

    pub fn estimate(&self) -> f64 {
        self.cached
    }

    pub fn registers(&self) -> &[KmvRegisters] {
        &self.registers
    }

    /// Register memory plus hash parameters.
    pub fn space_bits(&self) -> u64 {
        let held: usize = self.registers.iter().map(|r| r.values.len()).sum();
        64 * (held as u64 + 2 * self.params.reps as u64 + 2)
    }

    /// Upper bound on [`space_bits`](Self::space_bits) for any stream.
    pub fn max_space_bits(&self) -> u64 {
        64 * ((self.params.k_min * self.params.reps) as u64 + 2 * self.params.reps as u64 + 2)
    }

    /// Versioned binary encoding: `EDSK`, version byte, `k_min`, `reps`,
    /// seed, then each repetition's register count and values.
    pub fn to_blob(&self) -> Vec<u8> {
        let mut out = b"EDSK".to_vec();
        out.push(BLOB_VERSION);
        out.extend_from_slice(&(self.params.k_min as u32).to_le_bytes());
        out.extend_from_slice(&(self.params.reps as u32).to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        for reg in &self.registers {
            out.extend_from_slice(&(reg.values.len() as u32).to_le_bytes());
            for v in &reg.values {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_blob(blob: &[u8]) -> Result<Self> {
        let mut r = BlobReader { rest: blob };
        if r.take(4)? != b"EDSK" {
            return Err(blob_error("bad magic"));
        }
        if r.take(1)?[0] != BLOB_VERSION {
            return Err(blob_error("unsupported version"));
        }
        let k_min = r.u32()? as usize;
        let reps = r.u32()? as usize;
        let seed = r.u64()?;
        let mut sk = Self::new(SketchParams { k_min, reps }, seed)?;
        for reg in &mut sk.registers {
            let count = r.u32()? as usize;
            if count > k_min {
                return Err(blob_error("register overflow"));
            }
            let values = (0..count).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
            if values.windows(2).any(|w| w[0] >= w[1]) || values.iter().any(|&v| v >= MODULUS) {
                return Err(blob_error("registers not sorted below the modulus"));
            }
            reg.values = values;
        }
        if !r.rest.is_empty() {
            return Err(blob_error("trailing bytes"));
        }
        sk.cached = sk.median();
        Ok(sk)
    }
}

fn blob_error(msg: &str) -> EnumError {
    EnumError::InvalidParameter(format!("sketch blob: {msg}"))
}

struct BlobReader<'a> {
    rest: &'a [u8],
}

impl<'a> BlobReader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.rest.len() < n {
            return Err(blob_error("truncated"));
        }
        let (head, tail) = self.rest.split_at(n);
        self.rest = tail;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

const BLOB_VERSION: u8 = 1;
