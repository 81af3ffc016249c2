//! Solutions are finite words over the alphabet `{0, 1, #}`.

use std::fmt;

use crate::error::{EnumError, Result};

/// A word over `{0, 1, #}`, stored as its ASCII symbols.
///
/// Equality, hashing and ordering are those of the payload, so two solutions
/// are equal iff their words are identical. The order is lexicographic with
/// `# < 0 < 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution(Box<[u8]>);

impl Solution {
    /// Parses a word. Only `0`, `1` and `#` are accepted.
    pub fn from_symbols(word: &str) -> Result<Self> {
        if let Some(c) = word.chars().find(|c| !matches!(c, '0' | '1' | '#')) {
            return Err(EnumError::InvalidParameter(format!(
                "symbol {c:?} is outside the alphabet {{0,1,#}}"
            )));
        }
        Ok(Self(word.as_bytes().into()))
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self(bits.iter().map(|&b| if b { b'1' } else { b'0' }).collect())
    }

    /// The bits of `bytes`, most significant bit first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut word = Vec::with_capacity(bytes.len() * 8);
        for byte in bytes {
            for shift in (0..8).rev() {
                word.push(if byte >> shift & 1 == 1 { b'1' } else { b'0' });
            }
        }
        Self(word.into())
    }

    /// `value` in binary over exactly `width` symbols (leading zeros kept).
    pub fn from_uint(value: u64, width: usize) -> Self {
        let word: Vec<u8> = (0..width)
            .rev()
            .map(|i| {
                if i < 64 && value >> i & 1 == 1 {
                    b'1'
                } else {
                    b'0'
                }
            })
            .collect();
        Self(word.into())
    }

    /// Builds a word from pre-validated ASCII symbols.
    pub(crate) fn from_ascii_unchecked(word: Vec<u8>) -> Self {
        debug_assert!(word.iter().all(|c| matches!(c, b'0' | b'1' | b'#')));
        Self(word.into())
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_str(&self) -> &str {
        // Only ASCII symbols are ever stored.
        std::str::from_utf8(&self.0).expect("solution payload is ASCII")
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    /// Hex encoding of the ASCII payload, as written in trace files.
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        let bytes = hex::decode(text)
            .map_err(|e| EnumError::InvalidParameter(format!("bad solution hex {text:?}: {e}")))?;
        let word = String::from_utf8(bytes).map_err(|_| {
            EnumError::InvalidParameter(format!("solution hex {text:?} is not ASCII"))
        })?;
        Self::from_symbols(&word)
    }
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Solution({})", self.as_str())
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
