//! Cost model.
//!
//! Each step declared by an enumerator is charged one unit unless the
//! implementation reports more. Arithmetic on combinator bookkeeping values
//! is charged linearly in the bit length of its operands. Copying state is
//! charged one unit per 64-bit machine word. The per-step tick of a
//! simulation counter is folded into the simulated step's own charge.

use serde::{Deserialize, Serialize};

/// Width of a machine word, used for copy charges.
pub const WORD_BITS: u64 = 64;

/// Name recorded in trace headers.
pub const COST_MODEL: &str = "unit-step/bitlen-arith/word-copy";

/// Bit length of `v` (at least one).
pub fn bit_len(v: u64) -> u64 {
    u64::from(64 - v.leading_zeros()).max(1)
}

/// Charge of an arithmetic operation on the given operands.
pub fn arith_charge(operands: &[u64]) -> u64 {
    operands.iter().map(|&v| bit_len(v)).max().unwrap_or(1)
}

/// Charge of copying `bits` of state.
pub fn copy_charge(bits: u64) -> u64 {
    bits.div_ceil(WORD_BITS).max(1)
}

/// Charge of writing a solution of `len` symbols to the output registers.
pub fn write_charge(len: usize) -> u64 {
    (len as u64).max(1)
}

/// Bits needed to hold a solution of `len` symbols over a three-letter
/// alphabet.
pub fn solution_bits(len: usize) -> u64 {
    2 * len as u64
}

/// Description of the cost model, serialized into trace headers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    pub name: String,
    pub word_bits: u64,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            name: COST_MODEL.to_owned(),
            word_bits: WORD_BITS,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_lengths() {
        assert_eq!(bit_len(0), 1);
        assert_eq!(bit_len(1), 1);
        assert_eq!(bit_len(255), 8);
        assert_eq!(bit_len(256), 9);
        assert_eq!(bit_len(u64::MAX), 64);
    }

    #[test]
    fn copies_round_up_to_words() {
        assert_eq!(copy_charge(0), 1);
        assert_eq!(copy_charge(64), 1);
        assert_eq!(copy_charge(65), 2);
    }
}
