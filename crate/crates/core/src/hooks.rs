//! Stable cohomology of hook weights `(-a-b, a, 1^b)` by the six-case recursion.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use crate::arith::{CohPoly, Prime};
use crate::error::{invalid, Result};

type Memo = RwLock<HashMap<(u64, u64, u64), CohPoly>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Drops every memoized hook polynomial.
pub fn clear_hook_cache() {
    memo().write().expect("hook memo poisoned").clear();
}

fn t_pow(e: u64) -> CohPoly {
    CohPoly::t_pow(u32::try_from(e).expect("exponent exceeds u32"))
}

/// `H_{a,b}(t)`, the stable cohomology polynomial of the hook weight `(a, 1^b)`.
///
/// `H_{0,0} = 1`. For `a = 0` and `b > 0` the weight `(-b, 0, 1^b)` is not a
/// hook and the result is the zero polynomial.
pub fn hook_poly(a: u64, b: u64, p: Prime) -> CohPoly {
    let key = (a, b, p.get());
    if let Some(h) = memo().read().expect("hook memo poisoned").get(&key) {
        return h.clone();
    }
    let h = compute(a, b, p);
    memo()
        .write()
        .expect("hook memo poisoned")
        .entry(key)
        .or_insert(h)
        .clone()
}

fn compute(a: u64, b: u64, p: Prime) -> CohPoly {
    let pp = p.get();
    if a == 0 {
        return if b == 0 { CohPoly::one() } else { CohPoly::zero() };
    }
    if a == 1 {
        return t_pow(b + 1);
    }
    if b == 0 && a % pp == 1 {
        return hook_poly(a - 1, 0, p).shift(1);
    }
    if !(a + b).is_multiple_of(pp) {
        return if a % pp == 1 {
            &t_pow(b) * &hook_poly(a, 0, p)
        } else {
            CohPoly::zero()
        };
    }
    match a % pp {
        0 => {
            assert_eq!(b % pp, 0, "hook recursion: p | a and p | a+b but p does not divide b");
            let (a1, b1) = (a / pp, b / pp);
            let first = &t_pow(b + 1) * &hook_poly(a - pp + 1, 0, p);
            let second = &t_pow(b - b1) * &hook_poly(a1, b1, p);
            &first + &second
        }
        1 => {
            assert_eq!((b + 1) % pp, 0, "hook recursion: residue bookkeeping failed");
            let (a1, b1) = ((a - 1) / pp, (b + 1) / pp);
            assert!(b1 >= 1);
            &t_pow(b - b1 + 1) * &hook_poly(a1 + 1, b1 - 1, p)
        }
        r => {
            let i = pp - r;
            assert!((1..=pp - 2).contains(&i) && b >= i, "hook recursion: no case applies");
            &t_pow(i) * &hook_poly(a + i, b - i, p)
        }
    }
}

/// Both sides of the identity `H_{A, p^k - 2A - B} = t^{p^k - 2(A+B)} H_{A,B}`.
pub fn symmetry_reduce(a: u64, b: u64, p: Prime, k: u32) -> Result<(CohPoly, CohPoly)> {
    if a < 1 {
        return invalid("symmetry reduction needs A >= 1");
    }
    let Some(q) = p.checked_pow(k) else {
        return invalid(format!("{p}^{k} overflows"));
    };
    if q < 2 * (a + b) {
        return invalid(format!("{p}^{k} = {q} is smaller than 2(A+B) = {}", 2 * (a + b)));
    }
    let lhs = hook_poly(a, q - 2 * a - b, p);
    let rhs = &t_pow(q - 2 * (a + b)) * &hook_poly(a, b, p);
    Ok((lhs, rhs))
}
