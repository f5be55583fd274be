//! The arithmetic chain complexes `C(w)` and `G(m, d)` over `F_p`.
//!
//! A basis element of `C(w_0, ..., w_d)` is a set `J` of edges of the path
//! with vertices `0..=d` (edge `j` joins vertices `j - 1` and `j`), stored as a
//! bitmask with bit `j - 1` for edge `j`. Removing edge `j` from `J` splits a
//! connected component into two; the differential coefficient is the
//! binomial of the component weight over the weight of its left half, with
//! sign `(-1)^s` where `s` counts the edges missing from `J` left of `j`.

use std::fmt::Write as _;

use crate::arith::{binom_mod_p, poly_reverse, rank_mod_p, CohPoly, Fp, Prime, SparseMat};
use crate::error::{invalid, Error, Result};
use crate::partitions::RibbonComposition;

/// Largest supported number of edges; the basis has `2^d` elements.
pub const MAX_EDGES: usize = 24;

/// Vertex weights `(w_0, ..., w_d)`; all but the last must be nonnegative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedComposition(Vec<i64>);

impl WeightedComposition {
    pub fn new(w: Vec<i64>) -> Result<Self> {
        if w.is_empty() {
            return invalid("a weighted composition needs at least one vertex");
        }
        if w[..w.len() - 1].iter().any(|&x| x < 0) {
            return invalid(format!("only the last weight of {w:?} may be negative"));
        }
        Ok(WeightedComposition(w))
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    /// Number of edges `d`.
    pub fn edges(&self) -> usize {
        self.0.len() - 1
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl From<&RibbonComposition> for WeightedComposition {
    fn from(r: &RibbonComposition) -> Self {
        WeightedComposition(r.weights())
    }
}

/// A bounded complex `C_d -> ... -> C_0` whose basis in degree `k` is the set
/// of `k`-element subsets of `[d]`, ordered by bitmask value.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    prime: Prime,
    length: usize,
    bases: Vec<Vec<u32>>,
    /// `diffs[k - 1]` is the matrix of `C_k -> C_{k-1}`, rows indexed by `C_{k-1}`.
    diffs: Vec<SparseMat>,
}

/// Homology ranks `h_0..h_d` and `P = sum h_k t^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    pub ranks: Vec<u64>,
    pub poly: CohPoly,
}

fn subsets_by_size(d: usize) -> (Vec<Vec<u32>>, Vec<u32>) {
    let mut bases = vec![Vec::new(); d + 1];
    let mut pos = vec![0u32; 1 << d];
    for mask in 0..(1u32 << d) {
        let k = mask.count_ones() as usize;
        pos[mask as usize] = bases[k].len() as u32;
        bases[k].push(mask);
    }
    (bases, pos)
}

impl ChainComplex {
    /// Builds the complex on subsets of `[d]` with `coeff(mask, e)` the
    /// coefficient of `mask - {e}` in the differential of `mask` (edges
    /// 1-based), then checks that the differential squares to zero.
    fn from_coefficients(
        d: usize,
        prime: Prime,
        coeff: impl Fn(u32, usize) -> Fp,
    ) -> Result<ChainComplex> {
        if d > MAX_EDGES {
            return invalid(format!("complex length {d} exceeds the supported {MAX_EDGES}"));
        }
        let (bases, pos) = subsets_by_size(d);
        let mut diffs = Vec::with_capacity(d);
        for k in 1..=d {
            let mut triplets = Vec::new();
            for (col, &mask) in bases[k].iter().enumerate() {
                let mut rest = mask;
                while rest != 0 {
                    let bit = rest.trailing_zeros();
                    rest &= rest - 1;
                    let c = coeff(mask, bit as usize + 1);
                    if !c.is_zero() {
                        let row = pos[(mask & !(1 << bit)) as usize] as usize;
                        triplets.push((row, col, c.residue() as i64));
                    }
                }
            }
            diffs.push(SparseMat::from_triplets(
                bases[k - 1].len(),
                bases[k].len(),
                prime,
                triplets,
            ));
        }
        let cx = ChainComplex { prime, length: d, bases, diffs };
        cx.check_square_zero()?;
        Ok(cx)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Number of edges `d`; the complex lives in degrees `0..=d`.
    pub fn length(&self) -> usize {
        self.length
    }

    /// Basis of `C_k` as bitmasks, in matrix order.
    pub fn basis(&self, k: usize) -> &[u32] {
        &self.bases[k]
    }

    pub fn dim(&self, k: usize) -> usize {
        self.bases.get(k).map_or(0, Vec::len)
    }

    /// Position of a subset inside the basis of its degree.
    pub fn index_of(&self, mask: u32) -> usize {
        let k = mask.count_ones() as usize;
        self.bases[k]
            .binary_search(&mask)
            .expect("subset outside the complex")
    }

    /// Matrix of `C_k -> C_{k-1}` for `1 <= k <= d`.
    pub fn differential(&self, k: usize) -> Option<&SparseMat> {
        if k == 0 {
            None
        } else {
            self.diffs.get(k - 1)
        }
    }

    fn check_square_zero(&self) -> Result<()> {
        for k in 2..=self.length {
            let prod = self.diffs[k - 2].mul(&self.diffs[k - 1]);
            if !prod.is_zero() {
                return Err(Error::Internal(format!(
                    "differential does not square to zero in degree {k}"
                )));
            }
        }
        Ok(())
    }

    /// Homology ranks `dim C_k - rank M_k - rank M_{k+1}`.
    pub fn homology(&self) -> HomologyProfile {
        let d = self.length;
        let mut rank = vec![0usize; d + 2];
        for k in 1..=d {
            rank[k] = rank_mod_p(&self.diffs[k - 1]);
        }
        let ranks: Vec<u64> = (0..=d)
            .map(|k| (self.dim(k) - rank[k] - rank[k + 1]) as u64)
            .collect();
        let poly = CohPoly::from_terms(ranks.iter().enumerate().map(|(k, &h)| (k as u32, h)));
        HomologyProfile { ranks, poly }
    }

    /// Text dump: a header `d p`, then `k row col value` per nonzero entry of
    /// each differential `C_k -> C_{k-1}`.
    pub fn dump(&self) -> String {
        let mut out = format!("{} {}\n", self.length, self.prime);
        for k in 1..=self.length {
            for (r, c, v) in self.diffs[k - 1].entries() {
                writeln!(out, "{k} {r} {c} {}", v.residue()).expect("write to string");
            }
        }
        out
    }
}

/// The complex `C(w)` over `F_p`.
pub fn build_c(w: &WeightedComposition, p: Prime) -> Result<ChainComplex> {
    let d = w.edges();
    let weights = w.weights();
    let mut prefix = vec![0i64; d + 2];
    for (i, &x) in weights.iter().enumerate() {
        prefix[i + 1] = prefix[i] + x;
    }
    let full: u32 = if d == 0 { 0 } else { u32::MAX >> (32 - d) };
    ChainComplex::from_coefficients(d, p, |mask, j| {
        let missing = !mask & full;
        let left_missing = missing & ((1u32 << (j - 1)) - 1);
        let right_missing = missing & !((1u32 << j) - 1);
        let lo = if left_missing == 0 {
            0
        } else {
            32 - left_missing.leading_zeros() as usize
        };
        let hi = if right_missing == 0 {
            d
        } else {
            right_missing.trailing_zeros() as usize
        };
        let whole = prefix[hi + 1] - prefix[lo];
        let left = prefix[j] - prefix[lo];
        debug_assert!(left >= 0);
        let c = binom_mod_p(whole, left as u64, p);
        if left_missing.count_ones() % 2 == 1 {
            -c
        } else {
            c
        }
    })
}

/// `P(w)`, the Poincare polynomial of the homology of `C(w)`.
pub fn homology_poly(w: &WeightedComposition, p: Prime) -> Result<HomologyProfile> {
    Ok(build_c(w, p)?.homology())
}

/// Stable cohomology of the ribbon Schur functor of `w`: `P(w)` reversed at `|w|`.
pub fn ribbon_stable_poly(w: &RibbonComposition, p: Prime) -> Result<CohPoly> {
    let profile = homology_poly(&w.into(), p)?;
    poly_reverse(&profile.poly, w.size())
}

/// The complex `G(m, d)` on subsets `D` of `[d]`.
pub fn build_g(m: u64, d: usize, p: Prime) -> Result<ChainComplex> {
    if m < 1 {
        return invalid("G(m, d) needs m >= 1");
    }
    ChainComplex::from_coefficients(d, p, |mask, e| {
        let elems: Vec<i64> = (0..d).filter(|&b| mask >> b & 1 == 1).map(|b| b as i64 + 1).collect();
        let t = elems.len();
        let j = elems.iter().position(|&x| x == e as i64).expect("removed element in D") + 1;
        let at = |i: usize| if i == 0 { 0 } else { elems[i - 1] };
        let (prev, cur) = (at(j - 1), at(j));
        if j < t {
            let c = binom_mod_p(at(j + 1) - prev, (cur - prev) as u64, p);
            if j % 2 == 0 {
                -c
            } else {
                c
            }
        } else {
            let c = binom_mod_p(m as i64 + cur, (cur - prev) as u64, p);
            if (t as i64 + 1 + cur - prev) % 2 == 1 {
                -c
            } else {
                c
            }
        }
    })
}

/// Result of a structural comparison between complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Holds,
    Fails(String),
}

impl CheckOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, CheckOutcome::Holds)
    }
}

/// Checks that `D -> [d] - D` identifies `G(m, d)` with the shifted dual of
/// `C(1^d, -m-d-1)`, entry by entry and sign by sign.
pub fn duality_witness(m: u64, d: usize, p: Prime) -> Result<CheckOutcome> {
    if d > 16 {
        return invalid("duality check supports d <= 16");
    }
    let g = build_g(m, d, p)?;
    let mut w = vec![1i64; d];
    w.push(-(m as i64) - d as i64 - 1);
    let c = build_c(&WeightedComposition::new(w)?, p)?;
    let full: u32 = if d == 0 { 0 } else { u32::MAX >> (32 - d) };
    for t in 1..=d {
        let gm = g.differential(t).expect("degree within range");
        let cm = c.differential(d - t + 1).expect("degree within range");
        for (col, &dm) in g.basis(t).iter().enumerate() {
            for (row, &dm_prime) in g.basis(t - 1).iter().enumerate() {
                let lhs = gm.get(row, col);
                let rhs = cm.get(c.index_of(full & !dm), c.index_of(full & !dm_prime));
                if lhs != rhs {
                    return Ok(CheckOutcome::Fails(format!(
                        "degree {t}: G entry {:#b} -> {:#b} is {lhs}, dual C entry is {rhs}",
                        dm, dm_prime
                    )));
                }
            }
        }
    }
    Ok(CheckOutcome::Holds)
}

/// Stable cohomology of `S_lambda(Omega)` for the two-column partition
/// `lambda = (2^d, 1^(m-d))`: the homology of `C(1^d, -m-d-1)` shifted up by `m`.
pub fn twocol_stable_poly(m: u64, d: u64, p: Prime) -> Result<CohPoly> {
    if d > m {
        return invalid(format!("two-column shape needs d <= m, got m={m} d={d}"));
    }
    let mut w = vec![1i64; d as usize];
    w.push(-(m as i64) - d as i64 - 1);
    let profile = homology_poly(&WeightedComposition::new(w)?, p)?;
    Ok(profile.poly.shift(u32::try_from(m).map_err(|_| Error::InvalidArgument("m too large".into()))?))
}

/// Checks that `J -> J^(p)` embeds `C(pb, p^a)` into `C(pb, 1^(pa))` as a
/// subcomplex with matching coefficients, and that the homology of the large
/// complex is that of the small one shifted by `a(p-1)`.
pub fn frobenius_embedding_check(b: u64, a: usize, p: Prime) -> Result<CheckOutcome> {
    if b < 1 {
        return invalid("embedding check needs b >= 1");
    }
    let pp = p.get() as usize;
    let big_d = pp * a;
    if big_d > 20 {
        return invalid("embedding check supports pa <= 20");
    }
    let head = (pp as u64 * b) as i64;
    let mut small_w = vec![head];
    small_w.extend(std::iter::repeat_n(pp as i64, a));
    let mut big_w = vec![head];
    big_w.extend(std::iter::repeat_n(1, big_d));
    let small = build_c(&WeightedComposition::new(small_w)?, p)?;
    let big = build_c(&WeightedComposition::new(big_w)?, p)?;

    let fixed: u32 = (1..=big_d)
        .filter(|j| j % pp != 1 % pp)
        .fold(0, |acc, j| acc | 1 << (j - 1));
    let lift_edge = |j: usize| j * pp - pp + 1;
    let lift = |mask: u32| {
        (1..=a)
            .filter(|&j| mask >> (j - 1) & 1 == 1)
            .fold(fixed, |acc, j| acc | 1 << (lift_edge(j) - 1))
    };
    let shift = a * (pp - 1);

    for k in 1..=a {
        let sm = small.differential(k).expect("degree within range");
        let bm = big.differential(k + shift).expect("degree within range");
        for (col, &mask) in small.basis(k).iter().enumerate() {
            let lifted = lift(mask);
            let big_col = big.index_of(lifted);
            for e in 1..=big_d {
                if lifted >> (e - 1) & 1 == 0 {
                    continue;
                }
                let big_entry = bm.get(big.index_of(lifted & !(1 << (e - 1))), big_col);
                let expect = match (1..=a).find(|&j| lift_edge(j) == e && mask >> (j - 1) & 1 == 1) {
                    Some(j) => sm.get(small.index_of(mask & !(1 << (j - 1))), col),
                    None => Fp::zero(p),
                };
                if big_entry != expect {
                    return Ok(CheckOutcome::Fails(format!(
                        "degree {k}: removing edge {e} from the image of {mask:#b} gives {big_entry}, expected {expect}"
                    )));
                }
            }
        }
    }

    let hs = small.homology().ranks;
    let hb = big.homology().ranks;
    for (i, &h) in hb.iter().enumerate() {
        let expect = if i >= shift { hs.get(i - shift).copied().unwrap_or(0) } else { 0 };
        if h != expect {
            return Ok(CheckOutcome::Fails(format!(
                "homology rank {i} of the large complex is {h}, expected {expect}"
            )));
        }
    }
    Ok(CheckOutcome::Holds)
}
