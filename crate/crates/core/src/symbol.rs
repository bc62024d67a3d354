//! Root-of-unity valued symbols recorded as exponents.

use std::fmt;

use serde::{Deserialize, Serialize};

/// The root of unity `zeta_m^exponent`, with `exponent` in `[0, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolValue {
    pub m: u64,
    pub exponent: u64,
}

impl SymbolValue {
    /// Panics if `m == 0`.
    pub fn new(m: u64, exponent: i128) -> Self {
        assert!(m > 0, "modulus must be positive");
        SymbolValue { m, exponent: exponent.rem_euclid(m as i128) as u64 }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.m, -(self.exponent as i128))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "symbols of different moduli");
        Self::new(self.m, self.exponent as i128 + other.exponent as i128)
    }

    /// `+1` or `-1` for `m = 2`.
    pub fn sign(&self) -> Option<i8> {
        (self.m == 2).then_some(if self.exponent == 0 { 1 } else { -1 })
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.m, self.exponent) {
            (_, 0) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (m, 1) => write!(f, "zeta{m}"),
            (m, t) => write!(f, "zeta{m}^{t}"),
        }
    }
}
