//! Incremental row echelon form over `F_p`, with a packed-bit path for `p = 2`.

use super::{Fp, Prime};

const NONE: u32 = u32::MAX;

enum Rows {
    Bits { words: usize, rows: Vec<Vec<u64>> },
    Residues(Vec<Vec<u32>>),
}

/// Rows kept in echelon form: each stored row has a leading 1 at its pivot
/// column and zeros before it. Reducing a vector against the pivots in
/// increasing column order yields a canonical representative that vanishes
/// at every pivot column, so the non-pivot columns coordinatize the quotient.
pub struct Echelon {
    prime: Prime,
    width: usize,
    pivot_of: Vec<u32>,
    rows: Rows,
}

impl Echelon {
    pub fn new(width: usize, prime: Prime) -> Self {
        let rows = if prime.get() == 2 {
            Rows::Bits { words: width.div_ceil(64), rows: Vec::new() }
        } else {
            Rows::Residues(Vec::new())
        };
        Echelon { prime, width, pivot_of: vec![NONE; width], rows }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        match &self.rows {
            Rows::Bits { rows, .. } => rows.len(),
            Rows::Residues(rows) => rows.len(),
        }
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.width).filter(|&c| self.pivot_of[c] == NONE).collect()
    }

    /// Adds a vector of residues; returns whether it was independent.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let p = self.prime.get();
        match &mut self.rows {
            Rows::Bits { words, rows } => {
                let mut bits = pack(v, *words);
                reduce_bits(&mut bits, &self.pivot_of, rows);
                let Some(lead) = first_bit(&bits) else { return false };
                self.pivot_of[lead] = rows.len() as u32;
                rows.push(bits);
                true
            }
            Rows::Residues(rows) => {
                let mut r: Vec<u32> = v.iter().map(|&x| (x as u64 % p) as u32).collect();
                reduce_residues(&mut r, &self.pivot_of, rows, p);
                let Some(lead) = r.iter().position(|&x| x != 0) else { return false };
                let inv = Fp::from_residue(r[lead] as u64, self.prime)
                    .inv()
                    .expect("nonzero pivot")
                    .residue();
                for x in &mut r[lead..] {
                    *x = (*x as u64 * inv % p) as u32;
                }
                self.pivot_of[lead] = rows.len() as u32;
                rows.push(r);
                true
            }
        }
    }

    /// Canonical reduction of `v`, restricted to the free columns.
    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let p = self.prime.get();
        let reduced: Vec<u32> = match &self.rows {
            Rows::Bits { words, rows } => {
                let mut bits = pack(v, *words);
                reduce_bits(&mut bits, &self.pivot_of, rows);
                (0..self.width).map(|c| (bits[c / 64] >> (c % 64) & 1) as u32).collect()
            }
            Rows::Residues(rows) => {
                let mut r: Vec<u32> = v.iter().map(|&x| (x as u64 % p) as u32).collect();
                reduce_residues(&mut r, &self.pivot_of, rows, p);
                r
            }
        };
        (0..self.width)
            .filter(|&c| self.pivot_of[c] == NONE)
            .map(|c| reduced[c])
            .collect()
    }
}

fn pack(v: &[u32], words: usize) -> Vec<u64> {
    let mut bits = vec![0u64; words];
    for (c, &x) in v.iter().enumerate() {
        if x & 1 == 1 {
            bits[c / 64] |= 1 << (c % 64);
        }
    }
    bits
}

fn first_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .position(|&w| w != 0)
        .map(|i| i * 64 + bits[i].trailing_zeros() as usize)
}

fn reduce_bits(bits: &mut [u64], pivot_of: &[u32], rows: &[Vec<u64>]) {
    for wi in 0..bits.len() {
        loop {
            let mut live = bits[wi];
            let mut hit = None;
            while live != 0 {
                let c = wi * 64 + live.trailing_zeros() as usize;
                if pivot_of[c] != NONE {
                    hit = Some(c);
                    break;
                }
                live &= live - 1;
            }
            let Some(c) = hit else { break };
            let row = &rows[pivot_of[c] as usize];
            for k in wi..bits.len() {
                bits[k] ^= row[k];
            }
        }
    }
}

fn reduce_residues(r: &mut [u32], pivot_of: &[u32], rows: &[Vec<u32>], p: u64) {
    for c in 0..r.len() {
        let f = r[c] as u64;
        if f == 0 || pivot_of[c] == NONE {
            continue;
        }
        let neg = p - f;
        let row = &rows[pivot_of[c] as usize];
        for k in c..r.len() {
            if row[k] != 0 {
                r[k] = ((r[k] as u64 + neg * row[k] as u64) % p) as u32;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn quotient_coordinates() {
        let mut e = Echelon::new(3, pr(5));
        assert!(e.insert(&[1, 1, 0]));
        assert!(!e.insert(&[2, 2, 0]));
        assert_eq!(e.rank(), 1);
        assert_eq!(e.free_columns(), vec![1, 2]);
        // e_0 = -e_1 modulo the relation
        assert_eq!(e.project(&[1, 0, 0]), vec![4, 0]);
        assert_eq!(e.project(&[0, 0, 3]), vec![0, 3]);
    }

    proptest! {
        #[test]
        fn projection_kills_inserted_rows(
            rows in proptest::collection::vec(proptest::collection::vec(0u32..3, 70), 1..12),
            pi in 0usize..2,
        ) {
            let p = [2u64, 3][pi];
            let rows: Vec<Vec<u32>> = rows.into_iter()
                .map(|r| r.into_iter().map(|x| x % p as u32).collect())
                .collect();
            let mut e = Echelon::new(70, pr(p));
            for r in &rows {
                e.insert(r);
            }
            for r in &rows {
                prop_assert!(e.project(r).iter().all(|&x| x == 0));
            }
            let m = crate::arith::SparseMat::from_triplets(
                rows.len(), 70, pr(p),
                rows.iter().enumerate().flat_map(|(i, r)| {
                    r.iter().enumerate().map(move |(j, &x)| (i, j, x as i64))
                }),
            );
            prop_assert_eq!(e.rank(), crate::arith::rank_mod_p(&m));
        }
    }
}
