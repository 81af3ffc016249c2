use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EnumError, Result};

/// A polynomial with nonnegative coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(EnumError::InvalidParameter(format!(
                "polynomial coefficients must be finite and nonnegative, got {coeffs:?}"
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: u64) -> Self {
        Self {
            coeffs: vec![c as f64],
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Value at `n`, rounded up to an integer.
    pub fn eval(&self, n: usize) -> u64 {
        let x = n as f64;
        let v = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        // Absorb float noise before rounding up.
        (v - 1e-9).ceil().max(0.0) as u64
    }

    /// Value at `n`, rejecting polynomials that vanish there.
    pub fn eval_positive(&self, n: usize, what: &str) -> Result<u64> {
        match self.eval(n) {
            0 => Err(EnumError::InvalidParameter(format!(
                "{what}({n}) must be positive"
            ))),
            v => Ok(v),
        }
    }
}

impl FromStr for Polynomial {
    type Err = EnumError;

    /// Parses a comma-separated coefficient list, lowest degree first.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| EnumError::InvalidParameter(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}
