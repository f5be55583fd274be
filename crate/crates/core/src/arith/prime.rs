use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime number, verified by trial division at construction.
///
/// Primes are capped below 2^31 so that products of two residues fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub const MAX: u64 = (1 << 31) - 1;

    pub fn new(value: u64) -> Result<Self> {
        if !(2..=Self::MAX).contains(&value) {
            return Err(Error::NotPrime(value));
        }
        let mut q = 2;
        while q * q <= value {
            if value.is_multiple_of(q) {
                return Err(Error::NotPrime(value));
            }
            q += 1;
        }
        Ok(Prime(value))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^k`, or `None` on overflow.
    pub fn checked_pow(self, k: u32) -> Option<u64> {
        self.0.checked_pow(k)
    }

    /// Largest power of `p` dividing `n` (with `n > 0`), returned as `(exponent, p^exponent)`.
    pub fn valuation(self, mut n: u64) -> (u32, u64) {
        assert!(n > 0, "valuation of zero");
        let mut e = 0;
        let mut q = 1;
        while n.is_multiple_of(self.0) {
            n /= self.0;
            e += 1;
            q *= self.0;
        }
        (e, q)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(value: u64) -> Result<Self> {
        Prime::new(value)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl FromStr for Prime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("expected a prime, got {s:?}")))?;
        Prime::new(v)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_primes_rejects_composites() {
        for p in [2, 3, 5, 7, 11, 13, 101, 7919] {
            assert!(Prime::new(p).is_ok(), "{p}");
        }
        for n in [0, 1, 4, 6, 9, 15, 91, 7917] {
            assert!(Prime::new(n).is_err(), "{n}");
        }
    }

    #[test]
    fn valuation() {
        let p = Prime::new(3).unwrap();
        assert_eq!(p.valuation(54), (3, 27));
        assert_eq!(p.valuation(5), (0, 1));
    }
}
