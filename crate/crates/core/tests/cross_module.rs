//! Checks that tie independent engines together.

use stablecoh::closed_form::{hook_nonvanishing, sym_stable_poly};
use stablecoh::complexes::ribbon_stable_poly;
use stablecoh::hooks::hook_poly;
use stablecoh::partitions::{core_vanishing, hook_to_composition, Partition};
use stablecoh::schur::{shape_to_weight, stable_cohomology, weight_to_shape, ShapeSpec};
use stablecoh::{CohPoly, Prime};

fn pr(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

#[test]
fn core_vanishing_implies_zero_hook() {
    for p in [2u64, 3, 5, 7] {
        for a in 1..=12u32 {
            for b in 0..=12 - a {
                let lambda = Partition::hook(a, b);
                if core_vanishing(&lambda, pr(p)) {
                    assert!(hook_poly(a as u64, b as u64, pr(p)).is_zero(), "hook {a},{b} p={p}");
                }
            }
        }
    }
}

#[test]
fn nonvanishing_criterion_matches_complexes() {
    for p in [2u64, 3, 5] {
        for a in 1..=10u32 {
            for b in 0..=10 - a {
                let w = hook_to_composition(a, b).unwrap();
                let via_complex = ribbon_stable_poly(&w, pr(p)).unwrap();
                assert_eq!(!via_complex.is_zero(), hook_nonvanishing(a as u64, b as u64, pr(p)), "{a},{b} p={p}");
            }
        }
    }
}

#[test]
fn sym_shape_through_every_entry_point() {
    for p in [2u64, 3, 5, 7] {
        for d in 0..=16u64 {
            let direct = sym_stable_poly(d, pr(p));
            let w = shape_to_weight(&ShapeSpec::Sym(d)).unwrap();
            let shape = weight_to_shape(&w).unwrap();
            let r = stable_cohomology(&shape, pr(p), true).unwrap();
            assert_eq!(r.polynomial, direct, "d={d} p={p}");
        }
    }
}

#[test]
fn wedge_powers_are_concentrated() {
    for p in [2u64, 3] {
        for r in 1..=10u64 {
            let poly = stable_cohomology(&ShapeSpec::Wedge(r), pr(p), true).unwrap().polynomial;
            assert_eq!(poly, CohPoly::t_pow(r as u32));
        }
    }
}
