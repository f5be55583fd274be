use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use super::{Fp, Prime};

/// Sparse matrix over `F_p`, stored row-major with column-sorted rows.
///
/// Each row holds `(col, residue)` pairs with nonzero residues and at most
/// one entry per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    prime: Prime,
    data: Vec<Vec<(u32, u32)>>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize, prime: Prime) -> Self {
        assert!(rows <= u32::MAX as usize && cols <= u32::MAX as usize);
        SparseMat {
            rows,
            cols,
            prime,
            data: vec![Vec::new(); rows],
        }
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed
    /// and zero results dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, prime: Prime, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let p = prime.get() as i64;
        let mut acc: Vec<BTreeMap<u32, i64>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            let slot = acc[r].entry(c as u32).or_insert(0);
            *slot = (*slot + v.rem_euclid(p)) % p;
        }
        let data = acc
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .filter(|&(_, v)| v != 0)
                    .map(|(c, v)| (c, v as u32))
                    .collect()
            })
            .collect();
        let mut m = SparseMat::zero(rows, cols, prime);
        m.data = data;
        m
    }

    /// Builds from already-sorted rows of nonzero residues `< p`.
    pub fn from_sorted_rows(cols: usize, prime: Prime, data: Vec<Vec<(u32, u32)>>) -> Self {
        debug_assert!(data.iter().all(|row| {
            row.windows(2).all(|w| w[0].0 < w[1].0)
                && row.iter().all(|&(c, v)| (c as usize) < cols && v != 0 && (v as u64) < prime.get())
        }));
        SparseMat {
            rows: data.len(),
            cols,
            prime,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn row(&self, r: usize) -> &[(u32, u32)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Fp {
        let row = &self.data[r];
        match row.binary_search_by_key(&(c as u32), |&(k, _)| k) {
            Ok(i) => Fp::from_residue(row[i].1 as u64, self.prime),
            Err(_) => Fp::zero(self.prime),
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Fp)> + '_ {
        self.data.iter().enumerate().flat_map(move |(r, row)| {
            row.iter()
                .map(move |&(c, v)| (r, c as usize, Fp::from_residue(v as u64, self.prime)))
        })
    }

    pub fn transpose(&self) -> SparseMat {
        let mut data: Vec<Vec<(u32, u32)>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                data[c as usize].push((r as u32, v));
            }
        }
        SparseMat {
            rows: self.cols,
            cols: self.rows,
            prime: self.prime,
            data,
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        assert_eq!(self.prime, rhs.prime, "mixed moduli in product");
        let p = self.prime.get();
        let mut acc = vec![0u64; rhs.cols];
        let mut touched: Vec<u32> = Vec::new();
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for &(k, a) in row {
                for &(c, b) in &rhs.data[k as usize] {
                    let slot = &mut acc[c as usize];
                    if *slot == 0 {
                        touched.push(c);
                    }
                    // keep the slot nonzero while touched so it is listed once
                    *slot = (*slot % p + a as u64 * b as u64) % p + p;
                }
            }
            touched.sort_unstable();
            let out: Vec<(u32, u32)> = touched
                .iter()
                .filter_map(|&c| {
                    let v = acc[c as usize] % p;
                    acc[c as usize] = 0;
                    (v != 0).then_some((c, v as u32))
                })
                .collect();
            touched.clear();
            data.push(out);
        }
        SparseMat {
            rows: self.rows,
            cols: rhs.cols,
            prime: self.prime,
            data,
        }
    }

    /// Dense residue array, for tests and small dumps.
    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.residue();
        }
        out
    }
}

/// Rank of `m` over `F_p`.
///
/// Sparse Gaussian elimination on leading terms: vectors are processed in
/// order of increasing entry count, so the first vector to claim a column is
/// the sparsest candidate pivot for it; later vectors are reduced only until
/// their leading column is free. Large matrices over `F_2` go through a
/// packed dense path instead. The shorter side of the matrix supplies the
/// vectors.
pub fn rank_mod_p(m: &SparseMat) -> usize {
    if use_packed_gf2(m) {
        return super::gf2::rank_gf2_dense(m);
    }
    if m.rows <= m.cols {
        rank_of_rows(&m.data, m.cols, m.prime)
    } else {
        let t = m.transpose();
        rank_of_rows(&t.data, t.cols, t.prime)
    }
}

fn rank_of_rows(rows: &[Vec<(u32, u32)>], width: usize, prime: Prime) -> usize {
    let p = prime.get();
    let mut order: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    order.sort_by_key(|&i| (rows[i].len(), rows[i][0].0));

    let mut pivot_of: Vec<u32> = vec![u32::MAX; width];
    let mut pivots: Vec<Vec<(u32, u32)>> = Vec::new();
    let mut acc = vec![0u64; width];
    let mut seen = vec![false; width];
    let mut touched: Vec<u32> = Vec::new();
    let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::new();

    for i in order {
        for &(c, v) in &rows[i] {
            acc[c as usize] = v as u64;
            seen[c as usize] = true;
            touched.push(c);
            heap.push(Reverse(c));
        }
        while let Some(Reverse(c)) = heap.pop() {
            let f = acc[c as usize];
            if f == 0 {
                continue;
            }
            let pi = pivot_of[c as usize];
            if pi == u32::MAX {
                let inv = Fp::from_residue(f, prime).inv().expect("nonzero").residue();
                let mut new_row: Vec<(u32, u32)> = touched
                    .iter()
                    .copied()
                    .filter(|&k| k >= c && acc[k as usize] != 0)
                    .map(|k| (k, (acc[k as usize] * inv % p) as u32))
                    .collect();
                new_row.sort_unstable_by_key(|&(k, _)| k);
                pivot_of[c as usize] = pivots.len() as u32;
                pivots.push(new_row);
                heap.clear();
                break;
            }
            let neg = p - f;
            for &(k, v) in &pivots[pi as usize] {
                let slot = &mut acc[k as usize];
                *slot = (*slot + neg * v as u64) % p;
                if !seen[k as usize] {
                    seen[k as usize] = true;
                    touched.push(k);
                    heap.push(Reverse(k));
                }
            }
        }
        for &k in &touched {
            acc[k as usize] = 0;
            seen[k as usize] = false;
        }
        touched.clear();
        heap.clear();
    }
    pivots.len()
}

const PACKED_MIN_SIDE: usize = 512;
const PACKED_MAX_BYTES: usize = 1 << 30;

/// Whether `rank_mod_p` takes the packed `F_2` path for this matrix.
pub(crate) fn use_packed_gf2(m: &SparseMat) -> bool {
    m.prime.get() == 2
        && m.rows.min(m.cols) >= PACKED_MIN_SIDE
        && packed_gf2_bytes(m.rows, m.cols) <= PACKED_MAX_BYTES
}

pub(crate) fn packed_gf2_bytes(rows: usize, cols: usize) -> usize {
    let (short, long) = (rows.min(cols), rows.max(cols));
    short.saturating_mul(long.div_ceil(64)).saturating_mul(16)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    /// Textbook dense elimination, the reference for rank.
    fn dense_rank(mut a: Vec<Vec<u64>>, p: u64) -> usize {
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_multiple_of(p)) else { continue };
            a.swap(rank, piv);
            let inv = Fp::from_residue(a[rank][c], pr(p)).inv().unwrap().residue();
            for r in 0..rows {
                if r != rank && !a[r][c].is_multiple_of(p) {
                    let f = a[r][c] * inv % p;
                    for k in 0..cols {
                        a[r][k] = (a[r][k] + p * p - f * a[rank][k] % p) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_ranks() {
        let id = SparseMat::from_triplets(2, 2, pr(3), [(0, 0, 1), (1, 1, 1)]);
        assert_eq!(rank_mod_p(&id), 2);
        assert_eq!(rank_mod_p(&SparseMat::zero(3, 4, pr(5))), 0);
        let ones = SparseMat::from_triplets(2, 2, pr(2), [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]);
        assert_eq!(rank_mod_p(&ones), 1);
        assert_eq!(rank_mod_p(&SparseMat::zero(0, 0, pr(2))), 0);
    }

    #[test]
    fn triplets_sum_and_reduce() {
        let m = SparseMat::from_triplets(1, 3, pr(3), [(0, 0, 2), (0, 0, 1), (0, 2, -1)]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 2).residue(), 2);
        assert_eq!(m.transpose().get(2, 0).residue(), 2);
    }

    #[test]
    fn product_matches_dense() {
        let p = pr(5);
        let a = SparseMat::from_triplets(2, 3, p, [(0, 0, 1), (0, 2, 3), (1, 1, 4)]);
        let b = SparseMat::from_triplets(3, 2, p, [(0, 0, 2), (1, 1, 1), (2, 0, 1), (2, 1, 4)]);
        assert_eq!(a.mul(&b).to_dense(), vec![vec![0, 2], vec![0, 4]]);
    }

    fn arb_matrix() -> impl Strategy<Value = (u64, Vec<Vec<u64>>)> {
        (0usize..3, 1usize..50, 1usize..50, 0.02f64..0.6).prop_flat_map(|(pi, r, c, density)| {
            let p = [2u64, 3, 5][pi];
            let cell = (0.0f64..1.0, 1..p).prop_map(move |(x, v)| if x < density { v } else { 0 });
            (Just(p), proptest::collection::vec(proptest::collection::vec(cell, c), r))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn rank_matches_dense_oracle((p, a) in arb_matrix()) {
            let rows = a.len();
            let cols = a[0].len();
            let trip = a.iter().enumerate().flat_map(|(r, row)| {
                row.iter().enumerate().map(move |(c, &v)| (r, c, v as i64))
            });
            let m = SparseMat::from_triplets(rows, cols, pr(p), trip);
            prop_assert_eq!(rank_mod_p(&m), dense_rank(a, p));
        }

        #[test]
        fn low_rank_products((p, a) in arb_matrix(), k in 1usize..6) {
            // A * B has rank at most k when B has k rows
            let rows = a.len();
            let cols = a[0].len();
            let kk = k.min(cols).min(rows);
            let left: Vec<Vec<u64>> = a.iter().map(|r| r[..kk].to_vec()).collect();
            let right: Vec<Vec<u64>> = a.iter().take(kk).cloned().collect();
            let lm = SparseMat::from_triplets(rows, kk, pr(p), left.iter().enumerate().flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v as i64))));
            let rm = SparseMat::from_triplets(right.len(), cols, pr(p), right.iter().enumerate().flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v as i64))));
            let prod = lm.mul(&rm);
            prop_assert!(rank_mod_p(&prod) <= kk);
            prop_assert_eq!(rank_mod_p(&prod), dense_rank(prod.to_dense(), p));
        }
    }
}
