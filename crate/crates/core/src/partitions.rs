//! Partitions, rim hooks and p-cores, and the dictionary between hook
//! partitions and ribbon compositions.

use std::fmt;
use std::str::FromStr;

use crate::arith::Prime;
use crate::error::{invalid, Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Validates weak decrease; trailing zeros are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("parts {parts:?} are not weakly decreasing"));
        }
        if parts.contains(&0) {
            return invalid("zero part before a positive part");
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The hook `(a, 1^b)`; `a = 0` is only allowed with `b = 0`.
    pub fn hook(a: u32, b: u32) -> Self {
        assert!(a >= 1 || b == 0, "hook (0, 1^{b}) is not a partition");
        let mut parts = Vec::with_capacity(b as usize + 1);
        if a > 0 {
            parts.push(a);
        }
        parts.extend(std::iter::repeat_n(1, b as usize));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn first(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// The conjugate partition.
    pub fn transpose(&self) -> Partition {
        let parts = (1..=self.first())
            .map(|c| self.parts.iter().take_while(|&&x| x >= c).count() as u32)
            .collect();
        Partition { parts }
    }

    /// First-column hook lengths `lambda_i + r - i` (strictly decreasing).
    pub fn beta_numbers(&self) -> Vec<u32> {
        let r = self.parts.len() as u32;
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &x)| x + r - 1 - i as u32)
            .collect()
    }

    fn from_beta(mut beta: Vec<u32>) -> Partition {
        beta.sort_unstable_by(|a, b| b.cmp(a));
        let r = beta.len() as u32;
        let parts = beta
            .iter()
            .enumerate()
            .map(|(i, &b)| b - (r - 1 - i as u32))
            .filter(|&x| x > 0)
            .collect();
        Partition { parts }
    }

    /// Rows (0-indexed) from which a rim `p`-hook can be removed, in row order.
    ///
    /// A rim `p`-hook whose top box lies in row `i` exists iff `beta_i - p` is
    /// nonnegative and not itself a beta-number.
    pub fn removable_rim_hooks(&self, p: u32) -> Vec<usize> {
        let beta = self.beta_numbers();
        (0..beta.len())
            .filter(|&i| beta[i] >= p && !beta.contains(&(beta[i] - p)))
            .collect()
    }

    /// Removes the rim `p`-hook whose top row is `row`.
    pub fn remove_rim_hook(&self, row: usize, p: u32) -> Result<Partition> {
        let mut beta = self.beta_numbers();
        if row >= beta.len() || beta[row] < p || beta.contains(&(beta[row] - p)) {
            return invalid(format!("no rim {p}-hook starts in row {row} of {self}"));
        }
        beta[row] -= p;
        Ok(Partition::from_beta(beta))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("()");
        }
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "()" || s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition part {x:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// The `p`-core: strip rim `p`-hooks (topmost removable first) until none remain.
pub fn p_core(lambda: &Partition, p: Prime) -> Partition {
    let p = p.get() as u32;
    let mut cur = lambda.clone();
    while let Some(&row) = cur.removable_rim_hooks(p).first() {
        cur = cur.remove_rim_hook(row, p).expect("hook reported removable");
    }
    cur
}

/// True when the `p`-core has a row of length at least two, which forces
/// every stable cohomology group of `S_lambda(Omega)` to vanish.
pub fn core_vanishing(lambda: &Partition, p: Prime) -> bool {
    p_core(lambda, p).first() >= 2
}

/// A ribbon recorded by its column lengths, left to right; every entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RibbonComposition(Vec<u32>);

impl RibbonComposition {
    pub fn new(w: Vec<u32>) -> Result<Self> {
        if w.is_empty() {
            return invalid("a ribbon composition needs at least one column");
        }
        if w.contains(&0) {
            return invalid(format!("ribbon composition {w:?} has an empty column"));
        }
        Ok(RibbonComposition(w))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Integer weights for building the arithmetic complex.
    pub fn weights(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }
}

/// The hook `(a, 1^b)` as a ribbon: a first column of `b + 1` boxes followed
/// by `a - 1` single boxes, i.e. the composition `(b+1, 1^(a-1))`.
pub fn hook_to_composition(a: u32, b: u32) -> Result<RibbonComposition> {
    if a == 0 {
        return invalid("hook needs a >= 1");
    }
    let mut w = vec![b + 1];
    w.extend(std::iter::repeat_n(1, a as usize - 1));
    RibbonComposition::new(w)
}

/// Inverse of [`hook_to_composition`]; `None` unless `w = (k, 1^j)`.
pub fn composition_to_hook(w: &RibbonComposition) -> Option<(u32, u32)> {
    let parts = w.parts();
    if parts[1..].iter().all(|&x| x == 1) {
        Some((parts.len() as u32, parts[0] - 1))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(part("4,3,1").transpose(), part("3,2,2,1"));
        assert_eq!(part("5").transpose(), part("1,1,1,1,1"));
        assert_eq!(part("5,5,3,2").transpose().transpose(), part("5,5,3,2"));
        assert_eq!(Partition::empty().transpose(), Partition::empty());
    }

    #[test]
    fn core_examples() {
        assert_eq!(p_core(&part("5,5,3,2"), pr(7)), part("1"));
        assert_eq!(p_core(&part("3,1,1,1"), pr(2)), Partition::empty());
        let small = part("3,2");
        assert_eq!(p_core(&small, pr(7)), small);
        // two distinct 7-hook removal orders exist for (5,5,3,2)
        assert_eq!(part("5,5,3,2").removable_rim_hooks(7).len(), 2);
    }

    #[test]
    fn vanishing_examples() {
        assert!(core_vanishing(&part("2"), pr(5)));
        assert!(!core_vanishing(&part("6"), pr(5)));
        assert!(!core_vanishing(&part("2"), pr(2)));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(Partition::empty().to_string(), "()");
        assert_eq!(part("()"), Partition::empty());
        assert_eq!(part("5,5,3,2").to_string(), "5,5,3,2");
        assert!("3,4".parse::<Partition>().is_err());
        assert!("3,x".parse::<Partition>().is_err());
    }

    #[test]
    fn hook_compositions() {
        assert_eq!(hook_to_composition(3, 3).unwrap().parts(), &[4, 1, 1]);
        assert_eq!(hook_to_composition(3, 3).unwrap().size(), 6);
        assert_eq!(hook_to_composition(1, 5).unwrap().parts(), &[6]);
        for p in [2u32, 3, 5] {
            for (a, b) in [(1u32, 1u32), (2, 3)] {
                let w = hook_to_composition(p * a + 1, p * b - 1).unwrap();
                let mut expect = vec![p * b];
                expect.extend(std::iter::repeat_n(1, (p * a) as usize));
                assert_eq!(w.parts(), &expect[..]);
            }
        }
        assert!(hook_to_composition(0, 2).is_err());
        assert!(composition_to_hook(&RibbonComposition::new(vec![2, 2]).unwrap()).is_none());
    }

    #[test]
    fn hook_roundtrip_grid() {
        for a in 1..=12 {
            for b in 0..=12 {
                let w = hook_to_composition(a, b).unwrap();
                assert_eq!(composition_to_hook(&w), Some((a, b)));
            }
        }
    }

    /// All partitions of `n`.
    fn partitions_of(n: u32) -> Vec<Partition> {
        fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for k in (1..=n.min(max)).rev() {
                cur.push(k);
                go(n - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn core_size_congruence() {
        for n in 0..=20 {
            for lam in partitions_of(n) {
                for p in [2u64, 3, 5, 7] {
                    let core = p_core(&lam, pr(p));
                    assert_eq!(core.size() as u64 % p, n as u64 % p, "{lam} p={p}");
                    assert!(core.removable_rim_hooks(p as u32).is_empty());
                }
            }
        }
    }

    #[test]
    fn core_independent_of_removal_order() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let all: Vec<Partition> = (0..=20).flat_map(partitions_of).collect();
        for _ in 0..200 {
            let lam = all.choose(&mut rng).unwrap().clone();
            let p = *[2u32, 3, 5, 7].choose(&mut rng).unwrap();
            let mut cur = lam.clone();
            loop {
                let rows = cur.removable_rim_hooks(p);
                let Some(&row) = rows.choose(&mut rng) else { break };
                let next = cur.remove_rim_hook(row, p).unwrap();
                assert_eq!(next.size() + p, cur.size());
                cur = next;
            }
            assert_eq!(cur, p_core(&lam, pr(p as u64)), "{lam} p={p}");
        }
    }

    proptest! {
        #[test]
        fn transpose_is_involution(mut parts in proptest::collection::vec(1u32..10, 0..8)) {
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts).unwrap();
            prop_assert_eq!(lam.transpose().size(), lam.size());
            prop_assert_eq!(lam.transpose().transpose(), lam);
        }
    }
}
