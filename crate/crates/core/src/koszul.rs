//! Hilbert functions of Koszul modules `W(V, K)` over `F_p`.
//!
//! For `V = k^n`, `S = Sym V` and `K` a subspace of `Lambda^2 V`, the module
//! `W(V, K)` is the middle homology of `K (x) S -> V (x) S(1) -> S(2)`, where
//! the first map sends `(v ^ v') (x) f` to `v (x) v'f - v' (x) vf` and the
//! second is multiplication. Its degree-`j` piece lives in `V (x) S_{j+1}`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{packed_gf2_bytes, rank_mod_p, Echelon, Prime, SparseMat};
use crate::closed_form::sym_stable_poly;
use crate::error::{invalid, Error, Result};

pub const MIN_N: usize = 3;
pub const MAX_N: usize = 8;
const MAX_RESAMPLES: usize = 64;
const DEFAULT_BUDGET_MB: u64 = 4096;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Pairs `(i, j)` with `i < j < n` in lexicographic order: the basis
/// `e_i ^ e_j` of `Lambda^2 V`.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// A subspace `K` of `Lambda^2 k^n` given by `m` independent rows of coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulInstance {
    n: usize,
    prime: Prime,
    rows: Vec<Vec<u32>>,
    seed: Option<u64>,
}

impl KoszulInstance {
    /// Validates the shape and that the rows are independent over `F_p`.
    pub fn new(n: usize, prime: Prime, rows: Vec<Vec<u32>>) -> Result<Self> {
        if !(MIN_N..=MAX_N).contains(&n) {
            return invalid(format!("n must lie in {MIN_N}..={MAX_N}, got {n}"));
        }
        let width = binom(n, 2);
        if rows.len() > width {
            return invalid(format!("dim K = {} exceeds dim Lambda^2 V = {width}", rows.len()));
        }
        let mut ech = Echelon::new(width, prime);
        for row in &rows {
            if row.len() != width {
                return invalid(format!("K rows need {width} entries, got {}", row.len()));
            }
            if row.iter().any(|&x| x as u64 >= prime.get()) {
                return invalid(format!("K entries must be residues below {prime}"));
            }
            if !ech.insert(row) {
                return invalid("rows of K are linearly dependent");
            }
        }
        Ok(KoszulInstance { n, prime, rows, seed: None })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// The RNG seed that produced the instance, if it was sampled.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Plain text: a header `n m p`, then one line of residues per row of `K`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.m(), self.prime);
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty K file".into()))?;
        let nums = |line: &str| -> Result<Vec<u64>> {
            line.split_whitespace()
                .map(|x| x.parse::<u64>().map_err(|_| Error::Parse(format!("bad number {x:?} in K file"))))
                .collect()
        };
        let head = nums(header)?;
        let [n, m, p] = head[..] else {
            return Err(Error::Parse("K header must be `n m p`".into()));
        };
        let prime = Prime::new(p)?;
        let rows = lines
            .map(|l| nums(l).map(|r| r.into_iter().map(|x| x as u32).collect()))
            .collect::<Result<Vec<Vec<u32>>>>()?;
        if rows.len() as u64 != m {
            return Err(Error::Parse(format!("K header promises {m} rows, found {}", rows.len())));
        }
        KoszulInstance::new(n as usize, prime, rows)
    }
}

/// Samples a uniformly random full-rank `K` from a seeded ChaCha stream,
/// drawing again (up to 64 times) while the sample is rank deficient.
pub fn sample_generic_k(n: usize, m: usize, p: Prime, seed: u64) -> Result<KoszulInstance> {
    let width = binom(n, 2);
    if m > width {
        return invalid(format!("dim K = {m} exceeds dim Lambda^2 V = {width}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_RESAMPLES {
        let rows: Vec<Vec<u32>> = (0..m)
            .map(|_| (0..width).map(|_| rng.gen_range(0..p.get()) as u32).collect())
            .collect();
        match KoszulInstance::new(n, p, rows) {
            Ok(mut inst) => {
                inst.seed = Some(seed);
                return Ok(inst);
            }
            Err(Error::InvalidArgument(msg)) if msg.contains("dependent") => {
                log::info!("seed {seed}: sample {attempt} of K is rank deficient, drawing again");
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::Budget(format!(
        "no full-rank K after {MAX_RESAMPLES} samples (n={n} m={m} p={p})"
    )))
}

/// `dim W_j` for `j = 0..=j_max`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HilbertTail {
    pub dims: Vec<u64>,
}

impl HilbertTail {
    /// True when a zero entry is never followed by a nonzero one.
    pub fn vanishing_is_monotone(&self) -> bool {
        match self.dims.iter().position(|&x| x == 0) {
            Some(z) => self.dims[z..].iter().all(|&x| x == 0),
            None => true,
        }
    }
}

/// Monomials of each degree in `n` variables, degrevlex-descending.
struct Monomials {
    by_degree: Vec<Vec<Vec<u8>>>,
    index: Vec<HashMap<Vec<u8>, u32>>,
}

fn degrevlex_cmp(a: &[u8], b: &[u8]) -> std::cmp::Ordering {
    // equal total degree: the larger monomial has the smaller last differing exponent
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    std::cmp::Ordering::Equal
}

impl Monomials {
    fn new(n: usize, max_degree: usize) -> Self {
        let mut by_degree = Vec::with_capacity(max_degree + 1);
        let mut index = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let mut all = Vec::new();
            let mut cur = vec![0u8; n];
            fill(&mut cur, 0, d, &mut all);
            all.sort_by(|a, b| degrevlex_cmp(b, a));
            index.push(all.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect());
            by_degree.push(all);
        }
        Monomials { by_degree, index }
    }

    fn dim(&self, d: usize) -> usize {
        self.by_degree[d].len()
    }

    /// Index of `x_var * m` in degree `d + 1`, for `m` the `i`-th monomial of degree `d`.
    fn times(&self, d: usize, i: usize, var: usize) -> usize {
        let mut e = self.by_degree[d][i].clone();
        e[var] += 1;
        self.index[d + 1][&e] as usize
    }
}

fn fill(cur: &mut Vec<u8>, pos: usize, left: usize, out: &mut Vec<Vec<u8>>) {
    if pos + 1 == cur.len() {
        cur[pos] = left as u8;
        out.push(cur.clone());
        return;
    }
    for e in 0..=left {
        cur[pos] = e as u8;
        fill(cur, pos + 1, left - e, out);
    }
    cur[pos] = 0;
}

/// Memory cap for the brute-force matrices, from `STABLECOH_BUDGET_MB`.
pub fn budget_bytes() -> u64 {
    std::env::var("STABLECOH_BUDGET_MB")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .unwrap_or(DEFAULT_BUDGET_MB)
        .saturating_mul(1 << 20)
}

/// Rough peak memory of the degree-`j` brute-force step: stored entries of
/// the first map plus room for elimination fill.
fn estimated_bytes(inst: &KoszulInstance, j: usize) -> u64 {
    let n = inst.n;
    let s_j = binom(n + j - 1, n - 1) as u64;
    let nnz_per_row = 2 * inst.rows.iter().map(|r| r.iter().filter(|&&x| x != 0).count()).max().unwrap_or(0) as u64;
    let target = (n * binom(n + j, n - 1)) as u64;
    let stored = inst.m() as u64 * s_j * nnz_per_row * 8;
    if inst.prime.get() == 2 {
        stored + packed_gf2_bytes(target as usize, inst.m() * s_j as usize) as u64
    } else {
        stored + target * target / 4
    }
}

/// The matrix of `K (x) S_j -> V (x) S_{j+1}`; columns `(k, f)`, rows `(a, g)`.
fn delta2(inst: &KoszulInstance, mons: &Monomials, j: usize) -> SparseMat {
    let n = inst.n;
    let (s_j, s_next) = (mons.dim(j), mons.dim(j + 1));
    let p = inst.prime.get() as i64;
    let pr = pairs(n);
    let mut triplets = Vec::new();
    for (k, row) in inst.rows.iter().enumerate() {
        for f in 0..s_j {
            let col = k * s_j + f;
            for (q, &c) in row.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let (a, b) = pr[q];
                triplets.push((a * s_next + mons.times(j, f, b), col, c as i64));
                triplets.push((b * s_next + mons.times(j, f, a), col, p - c as i64));
            }
        }
    }
    SparseMat::from_triplets(n * s_next, inst.m() * s_j, inst.prime, triplets)
}

/// The matrix of multiplication `V (x) S_{j+1} -> S_{j+2}`.
fn delta1(n: usize, prime: Prime, mons: &Monomials, j: usize) -> SparseMat {
    let s_next = mons.dim(j + 1);
    let triplets = (0..n).flat_map(|a| (0..s_next).map(move |g| (a, g))).map(|(a, g)| {
        (mons.times(j + 1, g, a), a * s_next + g, 1i64)
    });
    SparseMat::from_triplets(mons.dim(j + 2), n * s_next, prime, triplets.collect::<Vec<_>>())
}

/// `dim W_j` for `j <= j_max` by building both maps of the complex in each
/// degree: `dim ker(V (x) S_{j+1} -> S_{j+2}) - rank(K (x) S_j -> V (x) S_{j+1})`.
///
/// Checks that the composite vanishes and that multiplication is onto.
pub fn koszul_dims(inst: &KoszulInstance, j_max: usize) -> Result<HilbertTail> {
    let budget = budget_bytes();
    for j in 0..=j_max {
        let need = estimated_bytes(inst, j);
        if need > budget {
            return Err(Error::Budget(format!(
                "degree {j} needs about {} MB, budget is {} MB (set STABLECOH_BUDGET_MB)",
                need >> 20,
                budget >> 20
            )));
        }
    }
    let n = inst.n;
    let mons = Monomials::new(n, j_max + 2);
    let mut dims = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let d2 = delta2(inst, &mons, j);
        let d1 = delta1(n, inst.prime, &mons, j);
        if !d1.mul(&d2).is_zero() {
            return Err(Error::Internal(format!("Koszul maps do not compose to zero in degree {j}")));
        }
        let target = mons.dim(j + 2);
        if rank_mod_p(&d1) != target {
            return Err(Error::Internal(format!("multiplication is not onto in degree {j}")));
        }
        let kernel = n * mons.dim(j + 1) - target;
        let rank = rank_mod_p(&d2);
        log::debug!("degree {j}: kernel {kernel}, image {rank}");
        dims.push((kernel - rank) as u64);
    }
    Ok(HilbertTail { dims })
}

/// `dim W_j` for `j <= j_max` from a presentation of `W` as an `S`-module.
///
/// `W_0 = Lambda^2 V / K`, `W_1 = V (x) W_0` modulo the image of `Lambda^3 V`,
/// and for `j >= 1`, `W_{j+1} = V (x) W_j` modulo the commutation relations
/// `x_a (x) x_b w - x_b (x) x_a w` for `w` in `W_{j-1}`. Every space stays of
/// the size of `W` itself, so this is far cheaper than [`koszul_dims`].
pub fn koszul_dims_presented(inst: &KoszulInstance, j_max: usize) -> Result<HilbertTail> {
    let n = inst.n;
    let p = inst.prime;
    let pr = pairs(n);
    let width = pr.len();
    let pair_index = |a: usize, b: usize| pr.iter().position(|&q| q == (a, b)).expect("pair");

    let mut k_ech = Echelon::new(width, p);
    for row in &inst.rows {
        k_ech.insert(row);
    }
    let unit = |len: usize, i: usize| {
        let mut v = vec![0u32; len];
        v[i] = 1;
        v
    };
    let q_of_pair: Vec<Vec<u32>> = (0..width).map(|i| k_ech.project(&unit(width, i))).collect();
    let mut dims = vec![(width - inst.m()) as u64];
    if j_max == 0 {
        return Ok(HilbertTail { dims });
    }

    // degree 1
    let w0 = width - inst.m();
    let neg = |x: u32| if x == 0 { 0 } else { (p.get() - x as u64) as u32 };
    let mut ech = Echelon::new(n * w0, p);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mut v = vec![0u32; n * w0];
                let terms = [
                    (a, pair_index(b, c), false),
                    (b, pair_index(a, c), true),
                    (c, pair_index(a, b), false),
                ];
                for (var, q, negate) in terms {
                    for (i, &x) in q_of_pair[q].iter().enumerate() {
                        let x = if negate { neg(x) } else { x };
                        let slot = &mut v[var * w0 + i];
                        *slot = ((*slot as u64 + x as u64) % p.get()) as u32;
                    }
                }
                ech.insert(&v);
            }
        }
    }
    let mut prev_dim = w0;
    // mult[a][i] = x_a * (basis element i of the previous degree), in the current degree
    let mut mult: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|a| (0..prev_dim).map(|i| ech.project(&unit(n * prev_dim, a * prev_dim + i))).collect())
        .collect();
    let mut cur_dim = n * prev_dim - ech.rank();
    dims.push(cur_dim as u64);

    for _ in 2..=j_max {
        let amb = n * cur_dim;
        let mut ech = Echelon::new(amb, p);
        'outer: for w in 0..prev_dim {
            for a in 0..n {
                for b in a + 1..n {
                    let mut v = vec![0u32; amb];
                    for (i, &x) in mult[b][w].iter().enumerate() {
                        v[a * cur_dim + i] = x;
                    }
                    for (i, &x) in mult[a][w].iter().enumerate() {
                        let slot = &mut v[b * cur_dim + i];
                        *slot = ((*slot as u64 + neg(x) as u64) % p.get()) as u32;
                    }
                    ech.insert(&v);
                    if ech.rank() == amb {
                        break 'outer;
                    }
                }
            }
        }
        let next_dim = amb - ech.rank();
        mult = (0..n)
            .map(|a| (0..cur_dim).map(|i| ech.project(&unit(amb, a * cur_dim + i))).collect())
            .collect();
        prev_dim = cur_dim;
        cur_dim = next_dim;
        dims.push(cur_dim as u64);
    }
    Ok(HilbertTail { dims })
}

/// Where the last possible nonzero piece of a generic Koszul module sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PredictedTail {
    /// The degree `2n - 8`.
    pub degree: usize,
    /// `dim W_{2n-8}`: 1 when `n - 3` is a power of `p`, else 0.
    pub dim: u64,
    /// `W_j = 0` for every `j` at or above this degree (`2n - 7`).
    pub vanishing_from: usize,
}

/// The predicted value of `dim W_{2n-8}` for generic `K` of dimension
/// `2n - 3`, read from the `t^1` coefficient of the stable cohomology of
/// `Sym^{n-3}(Omega)`.
pub fn predicted_tail(n: usize, p: Prime) -> Result<PredictedTail> {
    if n < 4 {
        return invalid("the predicted tail needs n >= 4");
    }
    Ok(PredictedTail {
        degree: 2 * n - 8,
        dim: sym_stable_poly(n as u64 - 3, p).coeff(1),
        vanishing_from: 2 * n - 7,
    })
}

/// A sampled `K` together with the number of draws it took to pass the
/// vanishing certificate `W_{2n-7} = 0`.
#[derive(Clone, Debug)]
pub struct CertifiedSample {
    pub instance: KoszulInstance,
    /// Seed that produced `instance`; equal to the requested seed when the
    /// first draw passed.
    pub used_seed: u64,
    pub rejected: usize,
}

/// Draw seed for the `attempt`-th retry of `seed`.
pub fn derived_seed(seed: u64, attempt: usize) -> u64 {
    if attempt == 0 {
        return seed;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng.gen()
}

/// Samples `K` as in [`sample_generic_k`] and redraws, with derived seeds,
/// while `W_{2n-7}` fails to vanish. Each rejection is logged.
pub fn sample_certified_k(n: usize, m: usize, p: Prime, seed: u64) -> Result<CertifiedSample> {
    for attempt in 0..MAX_RESAMPLES {
        let used_seed = derived_seed(seed, attempt);
        let instance = sample_generic_k(n, m, p, used_seed)?;
        if n < 4 {
            return Ok(CertifiedSample { instance, used_seed, rejected: attempt });
        }
        let top = 2 * n - 7;
        let dims = koszul_dims_presented(&instance, top)?;
        if dims.dims[top] == 0 {
            return Ok(CertifiedSample { instance, used_seed, rejected: attempt });
        }
        log::warn!(
            "seed {seed}: draw {attempt} (seed {used_seed}) has W_{top} of dimension {}, resampling",
            dims.dims[top]
        );
    }
    Err(Error::Budget(format!(
        "no K with W_{} = 0 after {MAX_RESAMPLES} draws (n={n} m={m} p={p} seed={seed})",
        2 * n - 7
    )))
}
