use super::{Fp, Prime};

/// The binomial coefficient `C(x, i) = x(x-1)...(x-i+1)/i!` reduced mod `p`,
/// for any integer `x` and `i >= 0`.
///
/// A negative `x` is first moved into `[0, p^k)` for the least `k` with
/// `p^k > i`; `C(x, i)` is unchanged mod `p` by shifts of `p^k` in that range.
/// The nonnegative case is Lucas' theorem digit by digit.
pub fn binom_mod_p(x: i64, i: u64, p: Prime) -> Fp {
    if i == 0 {
        return Fp::one(p);
    }
    let x = if x < 0 {
        let mut q: u64 = 1;
        while q <= i {
            q = q
                .checked_mul(p.get())
                .expect("p-power overflow in binomial shift");
        }
        x.rem_euclid(q as i64) as u64
    } else {
        x as u64
    };
    lucas(x, i, p)
}

fn lucas(mut n: u64, mut k: u64, p: Prime) -> Fp {
    let pv = p.get();
    let mut acc = Fp::one(p);
    while k > 0 {
        let (nd, kd) = (n % pv, k % pv);
        if kd > nd {
            return Fp::zero(p);
        }
        acc = acc * small_binom(nd, kd, p);
        n /= pv;
        k /= pv;
    }
    acc
}

/// `C(n, k)` mod `p` for `0 <= k <= n < p`.
fn small_binom(n: u64, k: u64, p: Prime) -> Fp {
    let k = k.min(n - k);
    let mut num = Fp::one(p);
    let mut den = Fp::one(p);
    for j in 0..k {
        num = num * Fp::from_residue(n - j, p);
        den = den * Fp::from_residue(j + 1, p);
    }
    num * den.inv().expect("k < p so k! is a unit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    /// Exact `C(x, i)` from the falling-factorial product.
    fn exact_binom(x: i64, i: u64) -> BigInt {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for j in 0..i as i64 {
            num *= BigInt::from(x - j);
            den *= BigInt::from(j + 1);
        }
        num / den
    }

    fn reduce(v: &BigInt, p: u64) -> u64 {
        let r = v % BigInt::from(p);
        let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
        r.try_into().unwrap()
    }

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn worked_values() {
        assert_eq!(binom_mod_p(3, 2, pr(2)).residue(), 1);
        assert_eq!(exact_binom(-10, 3), BigInt::from(-220));
        assert_eq!(binom_mod_p(-10, 3, pr(3)).residue(), 2);
        assert_eq!(exact_binom(6, 3), BigInt::from(20));
        assert_eq!(binom_mod_p(6, 3, pr(3)).residue(), 2);
        assert_eq!(binom_mod_p(2, 1, pr(3)).residue(), 2);
        assert_eq!(binom_mod_p(0, 0, pr(5)).residue(), 1);
        assert_eq!(binom_mod_p(-1, 0, pr(5)).residue(), 1);
        assert_eq!(binom_mod_p(2, 5, pr(5)).residue(), 0);
    }

    #[test]
    fn matches_exact_product_on_grid() {
        for p in [2, 3, 5, 7] {
            for x in -50..=50 {
                for i in 0..=12 {
                    let expected = reduce(&exact_binom(x, i), p);
                    assert_eq!(binom_mod_p(x, i, pr(p)).residue(), expected, "C({x},{i}) mod {p}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn frobenius_scaling(m in -20i64..=20, v in 0u64..=8, pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let lhs = binom_mod_p(p as i64 * m, p * v, pr(p));
            prop_assert_eq!(lhs, binom_mod_p(m, v, pr(p)));
        }

        #[test]
        fn large_arguments_match_exact(x in -400i64..400, i in 0u64..30, pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            prop_assert_eq!(binom_mod_p(x, i, pr(p)).residue(), reduce(&exact_binom(x, i), p));
        }
    }
}
