use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};

/// A polynomial in `t` with nonnegative integer coefficients, the generating
/// function `sum_j dim H^j * t^j` of a stable cohomology computation.
///
/// Zero coefficients are never stored. Coefficients are 64-bit counters; the
/// arithmetic panics on overflow instead of wrapping.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CohPoly {
    coeffs: BTreeMap<u32, u64>,
}

impl CohPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `coeff * t^exp`.
    pub fn monomial(exp: u32, coeff: u64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `t^exp`.
    pub fn t_pow(exp: u32) -> Self {
        Self::monomial(exp, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Builds from a coefficient list indexed by exponent.
    pub fn from_dense(coeffs: &[u64]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(e, &c)| (e as u32, c)))
    }

    pub fn add_term(&mut self, exp: u32, coeff: u64) {
        if coeff == 0 {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert(0);
        *slot = slot.checked_add(coeff).expect("CohPoly coefficient overflow");
    }

    pub fn coeff(&self, exp: u32) -> u64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_exponent(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    /// Terms `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    /// Value at `t = 1`: the total dimension.
    pub fn total(&self) -> u64 {
        self.coeffs.values().sum()
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: u32) -> Self {
        CohPoly {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// Maximal runs of consecutive exponents in the support, as inclusive ranges.
    pub fn support_intervals(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &e in self.coeffs.keys() {
            match out.last_mut() {
                Some((_, hi)) if *hi + 1 == e => *hi = e,
                _ => out.push((e, e)),
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        self.render(|e| match e {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{{{e}}}"),
        })
    }

    fn render(&self, var: impl Fn(u32) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .terms()
            .map(|(e, c)| match (e, c) {
                (0, c) => c.to_string(),
                (e, 1) => var(e),
                (e, c) => format!("{c}{}", var(e)),
            })
            .collect();
        terms.join(" + ")
    }
}

/// Text form: ascending exponents, terms `c t^e` joined by `" + "`, `t` for
/// `t^1`, and `0` for the zero polynomial.
impl fmt::Display for CohPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.render(|e| match e {
            1 => "t".into(),
            _ => format!("t^{e}"),
        });
        f.write_str(&s)
    }
}

/// Serialized as a list of `[exponent, coefficient]` pairs.
impl Serialize for CohPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for (e, c) in self.terms() {
            seq.serialize_element(&[e as u64, c])?;
        }
        seq.end()
    }
}

impl Add for &CohPoly {
    type Output = CohPoly;
    fn add(self, rhs: &CohPoly) -> CohPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Add for CohPoly {
    type Output = CohPoly;
    fn add(self, rhs: CohPoly) -> CohPoly {
        &self + &rhs
    }
}

impl Mul for &CohPoly {
    type Output = CohPoly;
    fn mul(self, rhs: &CohPoly) -> CohPoly {
        poly_mul(self, rhs)
    }
}

impl Mul for CohPoly {
    type Output = CohPoly;
    fn mul(self, rhs: CohPoly) -> CohPoly {
        poly_mul(&self, &rhs)
    }
}

/// Ordinary polynomial product. Tensoring bundles multiplies their
/// cohomology polynomials, so this is the Künneth operation.
pub fn poly_mul(a: &CohPoly, b: &CohPoly) -> CohPoly {
    let mut out = CohPoly::zero();
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let c = ca.checked_mul(cb).expect("CohPoly coefficient overflow");
            out.add_term(ea + eb, c);
        }
    }
    out
}

/// `t^n * P(1/t)`: the exponent map `e -> n - e`. Rejects `deg P > n`.
pub fn poly_reverse(p: &CohPoly, n: u32) -> Result<CohPoly> {
    if let Some(d) = p.degree() {
        if d > n {
            return invalid(format!("cannot reverse degree-{d} polynomial at N = {n}"));
        }
    }
    Ok(CohPoly::from_terms(p.terms().map(|(e, c)| (n - e, c))))
}
