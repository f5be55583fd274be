use std::ops::{Add, Mul, Sub};

use super::CohPoly;
use crate::error::{Error, Result};

/// Polynomial in `t` with signed integer coefficients, stored densely by exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedPoly(Vec<i64>);

impl SignedPoly {
    pub fn zero() -> Self {
        SignedPoly(Vec::new())
    }

    pub fn monomial(exp: usize, coeff: i64) -> Self {
        let mut v = vec![0; exp + 1];
        v[exp] = coeff;
        SignedPoly(v).trimmed()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.0);
        SignedPoly(v)
    }

    /// Converts to a [`CohPoly`], failing if any coefficient is negative.
    pub fn to_coh(&self) -> Result<CohPoly> {
        let mut out = CohPoly::zero();
        for (e, &c) in self.0.iter().enumerate() {
            if c < 0 {
                return Err(Error::Internal(format!("negative coefficient {c} at t^{e}")));
            }
            out.add_term(e as u32, c as u64);
        }
        Ok(out)
    }
}

impl From<&CohPoly> for SignedPoly {
    fn from(p: &CohPoly) -> Self {
        let mut v = vec![0i64; p.degree().map_or(0, |d| d as usize + 1)];
        for (e, c) in p.terms() {
            v[e as usize] = i64::try_from(c).expect("coefficient exceeds i64");
        }
        SignedPoly(v).trimmed()
    }
}

impl Add for &SignedPoly {
    type Output = SignedPoly;
    fn add(self, rhs: &SignedPoly) -> SignedPoly {
        let n = self.0.len().max(rhs.0.len());
        let v = (0..n)
            .map(|i| {
                let a = self.0.get(i).copied().unwrap_or(0);
                let b = rhs.0.get(i).copied().unwrap_or(0);
                a.checked_add(b).expect("series coefficient overflow")
            })
            .collect();
        SignedPoly(v).trimmed()
    }
}

impl Sub for &SignedPoly {
    type Output = SignedPoly;
    fn sub(self, rhs: &SignedPoly) -> SignedPoly {
        let neg = SignedPoly(rhs.0.iter().map(|c| -c).collect());
        self + &neg
    }
}

impl Mul for &SignedPoly {
    type Output = SignedPoly;
    fn mul(self, rhs: &SignedPoly) -> SignedPoly {
        if self.is_zero() || rhs.is_zero() {
            return SignedPoly::zero();
        }
        let mut v = vec![0i64; self.0.len() + rhs.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.0.iter().enumerate() {
                let prod = a.checked_mul(b).expect("series coefficient overflow");
                v[i + j] = v[i + j].checked_add(prod).expect("series coefficient overflow");
            }
        }
        SignedPoly(v).trimmed()
    }
}

/// Bivariate series `sum_k c_k(t) u^k`, truncated at `u`-degree `order`.
///
/// Every operation discards `u`-degrees above the truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTU {
    order: usize,
    coeffs: Vec<SignedPoly>,
}

impl SeriesTU {
    pub fn zero(order: usize) -> Self {
        SeriesTU {
            order,
            coeffs: vec![SignedPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, 0, 1, order)
    }

    /// `coeff * t^t_exp * u^u_exp` (zero if `u_exp` exceeds the order).
    pub fn monomial(t_exp: usize, u_exp: usize, coeff: i64, order: usize) -> Self {
        let mut s = Self::zero(order);
        if u_exp <= order {
            s.coeffs[u_exp] = SignedPoly::monomial(t_exp, coeff);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `u^k` (zero beyond the order).
    pub fn coeff(&self, k: usize) -> SignedPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn set_coeff(&mut self, k: usize, c: SignedPoly) {
        if k <= self.order {
            self.coeffs[k] = c;
        }
    }

    /// Re-truncates at a (possibly different) order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut s = Self::zero(order);
        for k in 0..=order.min(self.order) {
            s.coeffs[k] = self.coeffs[k].clone();
        }
        s
    }

    /// `S(t, u^q)` truncated at `order`; requires `order / q <= self.order`.
    pub fn substitute_u_pow(&self, q: usize, order: usize) -> Self {
        assert!(q >= 1);
        assert!(order / q <= self.order, "source series truncated too early");
        let mut s = Self::zero(order);
        for k in 0..=order / q {
            s.coeffs[k * q] = self.coeffs[k].clone();
        }
        s
    }

    /// Multiplies by `t^k`.
    pub fn mul_t_pow(&self, k: usize) -> Self {
        SeriesTU {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.shift(k)).collect(),
        }
    }

    fn zip(&self, rhs: &SeriesTU, f: impl Fn(&SignedPoly, &SignedPoly) -> SignedPoly) -> SeriesTU {
        assert_eq!(self.order, rhs.order, "series truncation orders differ");
        SeriesTU {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl Add for &SeriesTU {
    type Output = SeriesTU;
    fn add(self, rhs: &SeriesTU) -> SeriesTU {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &SeriesTU {
    type Output = SeriesTU;
    fn sub(self, rhs: &SeriesTU) -> SeriesTU {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul for &SeriesTU {
    type Output = SeriesTU;
    fn mul(self, rhs: &SeriesTU) -> SeriesTU {
        assert_eq!(self.order, rhs.order, "series truncation orders differ");
        let n = self.order;
        let mut out = SeriesTU::zero(n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &rhs.coeffs[j];
                out.coeffs[i + j] = &out.coeffs[i + j] + &prod;
            }
        }
        out
    }
}
