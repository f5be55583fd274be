use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Prime;

/// An element of the prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    residue: u64,
    modulus: Prime,
}

impl Fp {
    pub fn new(value: i64, modulus: Prime) -> Self {
        let p = modulus.get() as i64;
        Fp {
            residue: value.rem_euclid(p) as u64,
            modulus,
        }
    }

    pub fn from_residue(residue: u64, modulus: Prime) -> Self {
        Fp {
            residue: residue % modulus.get(),
            modulus,
        }
    }

    pub fn zero(modulus: Prime) -> Self {
        Fp { residue: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Self {
        Fp { residue: 1, modulus }
    }

    #[inline]
    pub fn residue(self) -> u64 {
        self.residue
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let p = self.modulus.get();
        let mut base = self.residue;
        let mut acc = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp {
            residue: acc,
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus.get() - 2))
        }
    }

    fn check(self, other: Fp) {
        debug_assert_eq!(self.modulus, other.modulus, "mixed moduli");
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.check(rhs);
        Fp::from_residue(self.residue + rhs.residue, self.modulus)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.check(rhs);
        Fp::from_residue(self.residue + self.modulus.get() - rhs.residue, self.modulus)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.check(rhs);
        Fp::from_residue(self.residue * rhs.residue, self.modulus)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::from_residue(self.modulus.get() - self.residue, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let p = Prime::new(7).unwrap();
        let a = Fp::new(-3, p);
        assert_eq!(a.residue(), 4);
        assert_eq!((a + Fp::new(5, p)).residue(), 2);
        assert_eq!((a - Fp::new(6, p)).residue(), 5);
        assert_eq!((a * a).residue(), 2);
        assert_eq!((-a).residue(), 3);
        for x in 1..7 {
            let v = Fp::new(x, p);
            assert_eq!((v * v.inv().unwrap()).residue(), 1);
        }
        assert!(Fp::zero(p).inv().is_none());
    }
}
