//! Dense rank over `F_2` on packed 64-bit words, eliminating eight columns
//! at a time through a table of all combinations of the block's pivot rows.

use super::SparseMat;

/// Rank of a matrix over `F_2` held as packed rows.
pub(crate) fn rank_gf2_packed(mut data: Vec<u64>, nrows: usize, width: usize) -> usize {
    let words = width.div_ceil(64);
    debug_assert_eq!(data.len(), nrows * words);
    let mut r = 0;
    let mut table = vec![0u64; 256 * words];
    let mut col = 0;
    while col < width && r < nrows {
        let wi = col / 64;
        let shift = col % 64;
        let span = (width - col).min(8);
        let byte_mask = (1u64 << span) - 1;
        let byte = |data: &[u64], i: usize| (data[i * words + wi] >> shift) & byte_mask;

        // find up to eight pivots in this block, keeping them in echelon form
        let mut pivots: Vec<usize> = Vec::with_capacity(8);
        let mut leads: Vec<u32> = Vec::with_capacity(8);
        let mut i = r;
        while i < nrows && pivots.len() < span {
            let mut b = byte(&data, i);
            for (k, &lead) in leads.iter().enumerate() {
                if b >> lead & 1 == 1 {
                    b ^= byte(&data, pivots[k]);
                }
            }
            if b != 0 {
                // make row i carry its reduced form
                for k in 0..leads.len() {
                    let cur = byte(&data, i);
                    if cur >> leads[k] & 1 == 1 {
                        xor_rows(&mut data, i, pivots[k], words, wi);
                    }
                }
                let dst = r + pivots.len();
                swap_rows(&mut data, i, dst, words);
                pivots.push(dst);
                leads.push(byte(&data, dst).trailing_zeros());
            }
            i += 1;
        }
        let t = pivots.len();
        if t == 0 {
            col += span;
            continue;
        }
        // fully reduce the pivots against each other inside the block
        for a in 0..t {
            for b in 0..t {
                if a != b && byte(&data, pivots[b]) >> leads[a] & 1 == 1 {
                    xor_rows(&mut data, pivots[b], pivots[a], words, wi);
                }
            }
        }
        // table[mask] = xor of the pivots selected by mask, from word wi on
        let tail = words - wi;
        for mask in 1usize..(1 << t) {
            let low = mask.trailing_zeros() as usize;
            let prev = mask & (mask - 1);
            let src = pivots[low] * words + wi;
            for k in 0..tail {
                table[mask * words + k] = table[prev * words + k] ^ data[src + k];
            }
        }
        for row in r + t..nrows {
            let b = byte(&data, row);
            if b == 0 {
                continue;
            }
            let mut mask = 0usize;
            for (k, &lead) in leads.iter().enumerate() {
                mask |= ((b >> lead & 1) as usize) << k;
            }
            if mask == 0 {
                continue;
            }
            let dst = row * words + wi;
            let (rows_part, tab) = (&mut data[dst..dst + tail], &table[mask * words..mask * words + tail]);
            for (x, y) in rows_part.iter_mut().zip(tab) {
                *x ^= *y;
            }
        }
        r += t;
        col += span;
    }
    r
}

fn xor_rows(data: &mut [u64], dst: usize, src: usize, words: usize, from: usize) {
    for k in from..words {
        let v = data[src * words + k];
        data[dst * words + k] ^= v;
    }
}

fn swap_rows(data: &mut [u64], a: usize, b: usize, words: usize) {
    if a == b {
        return;
    }
    for k in 0..words {
        data.swap(a * words + k, b * words + k);
    }
}

/// Rank over `F_2` by dense packed elimination; the longer side of the
/// matrix becomes the bit width.
pub(crate) fn rank_gf2_dense(m: &SparseMat) -> usize {
    debug_assert_eq!(m.prime().get(), 2);
    let t;
    let src = if m.rows() <= m.cols() {
        m
    } else {
        t = m.transpose();
        &t
    };
    let width = src.cols();
    let words = width.div_ceil(64);
    let mut data = vec![0u64; src.rows() * words];
    for (r, c, v) in src.entries() {
        if v.residue() & 1 == 1 {
            data[r * words + c / 64] |= 1 << (c % 64);
        }
    }
    rank_gf2_packed(data, src.rows(), width)
}
