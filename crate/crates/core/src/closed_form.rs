//! Closed formulas built from base-`p` digit expansions, and the bivariate
//! generating functions for hook weights.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::arith::{CohPoly, Prime, SeriesTU, SignedPoly};
use crate::error::{invalid, Error, Result};

/// `|m|_p = 2a + b` where `m = pa + b` with `b` in `{0, 1}`.
pub fn p_index(m: u64, p: Prime) -> Result<u64> {
    let p = p.get();
    match m % p {
        0 => Ok(2 * (m / p)),
        1 => Ok(2 * (m / p) + 1),
        r => invalid(format!("{m} is {r} mod {p}; the p-index needs residue 0 or 1")),
    }
}

/// Digits `(a_0, ..., a_k)` with `sum a_i p^i = d` and every `a_i` congruent
/// to 0 or 1 mod `p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitTuple {
    digits: Vec<u64>,
}

impl DigitTuple {
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// `sum_i |a_i|_p`.
    pub fn index(&self, p: Prime) -> u64 {
        self.digits
            .iter()
            .map(|&a| p_index(a, p).expect("digit tuple residues are 0 or 1"))
            .sum()
    }

    pub fn value(&self, p: Prime) -> u64 {
        self.digits
            .iter()
            .rev()
            .fold(0, |acc, &a| acc * p.get() + a)
    }
}

/// All digit tuples for `d`, in lexicographic order.
pub fn enumerate_apd(p: Prime, d: u64) -> Vec<DigitTuple> {
    fn go(rest: u64, p: u64, cur: &mut Vec<u64>, out: &mut Vec<DigitTuple>) {
        if rest == 0 {
            out.push(DigitTuple { digits: cur.clone() });
            return;
        }
        let r = rest % p;
        if r > 1 {
            return;
        }
        let mut a = r;
        while a <= rest {
            cur.push(a);
            go((rest - a) / p, p, cur, out);
            cur.pop();
            a += p;
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        out.push(DigitTuple { digits: vec![0] });
    } else {
        go(d, p.get(), &mut Vec::new(), &mut out);
    }
    out.sort();
    for tuple in &out {
        debug_assert_eq!(tuple.value(p), d);
        debug_assert!(tuple.digits.last() != Some(&0) || tuple.digits == [0]);
    }
    out
}

/// Stable cohomology polynomial of `Sym^d(Omega)`.
pub fn sym_stable_poly(d: u64, p: Prime) -> CohPoly {
    let mut poly = CohPoly::zero();
    for tuple in enumerate_apd(p, d) {
        poly.add_term(exp32(tuple.index(p)), 1);
    }
    poly
}

/// Stable cohomology polynomial of the truncated power `T_p Sym^d(Omega)`.
pub fn truncated_sym_poly(d: u64, p: Prime) -> CohPoly {
    match p_index(d, p) {
        Ok(e) => CohPoly::t_pow(exp32(e)),
        Err(_) => CohPoly::zero(),
    }
}

/// Whether the hook weight `(a, 1^b)` has nonzero stable cohomology: with
/// `q` the largest power of `p` dividing `b + 1`, either `pq | a - 1` or
/// `pq | a + b`.
pub fn hook_nonvanishing(a: u64, b: u64, p: Prime) -> bool {
    assert!(a >= 1, "hook_nonvanishing needs a >= 1");
    let (_, q) = p.valuation(b + 1);
    let pq = p.get() * q;
    (a - 1).is_multiple_of(pq) || (a + b).is_multiple_of(pq)
}

fn exp32(e: u64) -> u32 {
    u32::try_from(e).expect("exponent exceeds u32")
}

type SeriesCache = RwLock<HashMap<(u64, u64, usize), Arc<SeriesTU>>>;

fn a_cache() -> &'static SeriesCache {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn n_cache() -> &'static SeriesCache {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cached(
    cache: &SeriesCache,
    key: (u64, u64, usize),
    build: impl FnOnce() -> SeriesTU,
) -> Arc<SeriesTU> {
    if let Some(s) = cache.read().expect("series cache poisoned").get(&key) {
        return Arc::clone(s);
    }
    let s = Arc::new(build());
    let mut w = cache.write().expect("series cache poisoned");
    Arc::clone(w.entry(key).or_insert(s))
}

/// `prod_{i>=1} (1 + t u^{p^i}) / (1 - t^2 u^{p^i})`, truncated at `u`-degree `order`.
pub fn series_a(p: Prime, order: usize) -> SeriesTU {
    (*series_a_shared(p, order)).clone()
}

fn series_a_shared(p: Prime, order: usize) -> Arc<SeriesTU> {
    cached(a_cache(), (p.get(), 0, order), || {
        let mut acc = SeriesTU::one(order);
        let mut q = p.get() as usize;
        while q <= order {
            let mut geometric = SeriesTU::zero(order);
            for k in 0..=order / q {
                geometric.set_coeff(k * q, SignedPoly::monomial(2 * k, 1));
            }
            let numerator = &SeriesTU::one(order) + &SeriesTU::monomial(1, q, 1, order);
            acc = &(&acc * &numerator) * &geometric;
            q = match q.checked_mul(p.get() as usize) {
                Some(next) => next,
                None => break,
            };
        }
        acc
    })
}

/// `N_b(t, u) = (u/t)^b sum_{a>=1} H_{a,b}(t) u^a`, truncated at `order`.
fn series_n(b: u64, p: Prime, order: usize) -> Arc<SeriesTU> {
    cached(n_cache(), (p.get(), b, order), || {
        let a = series_a_shared(p, order);
        if b == 0 {
            let one_plus_tu = &SeriesTU::one(order) + &SeriesTU::monomial(1, 1, 1, order);
            return &(&one_plus_tu * &a) - &SeriesTU::one(order);
        }
        let pp = p.get();
        let (inner, i) = (b / pp, b % pp);
        let q = pp as usize;
        let lifted = series_n(inner, p, order / q).substitute_u_pow(q, order);
        if i == pp - 1 {
            return lifted;
        }
        let base = (pp * inner) as usize;
        let corr = &SeriesTU::monomial(1, base + i as usize + 1, 1, order)
            + &SeriesTU::monomial(2, base + q, 1, order);
        &lifted + &(&corr * &a)
    })
}

/// Series whose `u^a` coefficient is `H_{a,b}(t)` for `1 <= a <= order`.
///
/// Fails if the generating function has a nonzero term below `u^{b+1}` or a
/// negative coefficient, either of which would indicate an arithmetic bug.
pub fn series_h(b: u64, p: Prime, order: usize) -> Result<SeriesTU> {
    if order < 1 {
        return invalid("series order must be at least 1");
    }
    let shift = usize::try_from(b).map_err(|_| Error::InvalidArgument("b too large".into()))?;
    let n = series_n(b, p, order + shift);
    for k in 0..=shift {
        if !n.coeff(k).is_zero() {
            return Err(Error::Internal(format!(
                "N_{b} has a nonzero u^{k} term; division by u^{b} is not exact"
            )));
        }
    }
    let mut out = SeriesTU::zero(order);
    for a in 1..=order {
        let c = n.coeff(a + shift).shift(shift);
        c.to_coh()?;
        out.set_coeff(a, c);
    }
    Ok(out)
}

/// `H_{a,b}(t)` read off the generating function.
pub fn hook_from_series(a: u64, b: u64, p: Prime) -> Result<CohPoly> {
    if a == 0 {
        return invalid("the generating function only covers a >= 1");
    }
    let order = usize::try_from(a).map_err(|_| Error::InvalidArgument("a too large".into()))?;
    series_h(b, p, order)?.coeff(order).to_coh()
}

/// Drops all memoized series.
pub fn clear_series_cache() {
    a_cache().write().expect("series cache poisoned").clear();
    n_cache().write().expect("series cache poisoned").clear();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn poly(terms: &[(u32, u64)]) -> CohPoly {
        CohPoly::from_terms(terms.iter().copied())
    }

    fn tuples(p: u64, d: u64) -> Vec<Vec<u64>> {
        enumerate_apd(pr(p), d).into_iter().map(|t| t.digits).collect()
    }

    #[test]
    fn p_index_values() {
        assert_eq!(p_index(4, pr(3)).unwrap(), 3);
        assert_eq!(p_index(0, pr(7)).unwrap(), 0);
        assert_eq!(p_index(6, pr(2)).unwrap(), 6);
        assert_eq!(p_index(6, pr(3)).unwrap(), 4);
        assert!(p_index(5, pr(3)).is_err());
        for m in 0..50 {
            assert_eq!(p_index(m, pr(2)).unwrap(), m);
        }
    }

    #[test]
    fn digit_tuples() {
        let mut expect = vec![
            vec![0, 1, 1],
            vec![2, 0, 1],
            vec![0, 3],
            vec![2, 2],
            vec![4, 1],
            vec![6],
        ];
        expect.sort();
        assert_eq!(tuples(2, 6), expect);
        assert_eq!(tuples(3, 6), vec![vec![3, 1], vec![6]]);
        for p in [3u64, 5] {
            let mut expect = vec![vec![0, 0, 1], vec![0, p], vec![p * p - p, 1], vec![p * p]];
            expect.sort();
            assert_eq!(tuples(p, p * p), expect);
        }
        assert_eq!(tuples(5, 0), vec![vec![0]]);
        assert!(tuples(5, 7).is_empty());
    }

    #[test]
    fn sym_examples() {
        assert_eq!(sym_stable_poly(6, pr(2)), poly(&[(2, 1), (3, 2), (4, 1), (5, 1), (6, 1)]));
        assert_eq!(sym_stable_poly(6, pr(5)), poly(&[(2, 1), (3, 1)]));
        assert!(sym_stable_poly(7, pr(5)).is_zero());
        assert_eq!(sym_stable_poly(0, pr(3)), CohPoly::one());
        for p in [2u64, 3, 5, 7] {
            let q = p as u32;
            let expect = poly(&[(1, 1), (2, 1), (2 * q - 1, 1), (2 * q, 1)]);
            assert_eq!(sym_stable_poly(p * p, pr(p)), expect);
        }
    }

    #[test]
    fn truncated_examples() {
        assert_eq!(truncated_sym_poly(6, pr(3)), CohPoly::t_pow(4));
        assert!(truncated_sym_poly(5, pr(3)).is_zero());
        for d in 0..20 {
            assert_eq!(truncated_sym_poly(d, pr(2)), CohPoly::t_pow(d as u32));
        }
    }

    #[test]
    fn nonvanishing_examples() {
        assert!(!hook_nonvanishing(2, 1, pr(2)));
        assert!(hook_nonvanishing(4, 3, pr(3)));
        assert!(hook_nonvanishing(5, 1, pr(3)));
        assert!(!hook_nonvanishing(3, 3, pr(2)));
        for b in 0..10 {
            assert!(hook_nonvanishing(1, b, pr(5)));
        }
    }

    #[test]
    fn sym_shape_invariants() {
        for p in [2u64, 3, 5, 7] {
            for d in 0..=40u64 {
                let s = sym_stable_poly(d, pr(p));
                if d >= 1 && !s.is_zero() {
                    assert!(s.min_exponent().unwrap() >= 1);
                    assert!(s.degree().unwrap() as u64 <= d);
                }
                if d >= 2 {
                    assert_eq!(s.is_zero(), d % p > 1, "d={d} p={p}");
                }
            }
        }
    }

    #[test]
    fn sym_frobenius_recursion() {
        for p in [2u64, 3, 5, 7] {
            for d in 1..=12u64 {
                let lhs = sym_stable_poly(p * d, pr(p));
                let rhs = &sym_stable_poly(p * d - p + 1, pr(p)).shift(1) + &sym_stable_poly(d, pr(p));
                assert_eq!(lhs, rhs, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn index_is_additive() {
        for p in [2u64, 3, 5] {
            for d in 0..=30 {
                for t in enumerate_apd(pr(p), d) {
                    let sum: u64 = t.digits().iter().map(|&a| p_index(a, pr(p)).unwrap()).sum();
                    assert_eq!(t.index(pr(p)), sum);
                    assert_eq!(t.value(pr(p)), d);
                }
            }
        }
    }

    #[test]
    fn series_a_matches_sym() {
        for p in [2u64, 3, 5] {
            let a = series_a(pr(p), 30);
            assert_eq!(a.coeff(0).to_coh().unwrap(), CohPoly::one());
            assert_eq!(a.coeff(p as usize).to_coh().unwrap(), poly(&[(1, 1), (2, 1)]));
            for k in 1..=30u64 {
                let c = a.coeff(k as usize).to_coh().unwrap();
                if k % p == 0 {
                    assert_eq!(c, sym_stable_poly(k, pr(p)), "k={k} p={p}");
                } else {
                    assert!(c.is_zero());
                }
            }
        }
    }

    #[test]
    fn series_h_base_values() {
        let h0 = series_h(0, pr(2), 10).unwrap();
        assert_eq!(h0.coeff(6).to_coh().unwrap(), sym_stable_poly(6, pr(2)));
        for p in [2u64, 3, 5] {
            for b in 0..=10u64 {
                let h = series_h(b, pr(p), 20).unwrap();
                assert_eq!(h.coeff(1).to_coh().unwrap(), CohPoly::t_pow(b as u32 + 1));
                for a in 1..=20u64 {
                    let c = h.coeff(a as usize).to_coh().unwrap();
                    assert_eq!(!c.is_zero(), hook_nonvanishing(a, b, pr(p)), "a={a} b={b} p={p}");
                }
            }
        }
    }

    #[test]
    fn series_h_b_zero_is_sym() {
        for p in [2u64, 3, 5, 7] {
            let h = series_h(0, pr(p), 30).unwrap();
            for d in 1..=30u64 {
                assert_eq!(h.coeff(d as usize).to_coh().unwrap(), sym_stable_poly(d, pr(p)));
            }
        }
    }

    #[test]
    fn hook_from_series_spot_values() {
        assert_eq!(hook_from_series(4, 3, pr(3)).unwrap(), poly(&[(5, 1), (6, 1)]));
        assert_eq!(hook_from_series(2, 2, pr(2)).unwrap(), poly(&[(3, 1), (4, 1)]));
        assert!(hook_from_series(3, 3, pr(2)).unwrap().is_zero());
        assert_eq!(hook_from_series(5, 1, pr(3)).unwrap(), poly(&[(4, 1), (5, 1)]));
    }
}
