mod common;

use algcensus::roots::{count_real_roots, count_roots_in, isolate_roots, refine_root};
use algcensus::{ExtRational, HalfOpenInterval, IntPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// `Π (b x - a)` over the given roots, times `x^2 + 1` when `pad` is set.
fn from_roots(roots: &[(i64, i64)], pad: bool) -> IntPoly {
    let mut p = IntPoly::from_i64(&[1]);
    for &(a, b) in roots {
        p = &p * &IntPoly::from_i64(&[-a, b]);
    }
    if pad {
        p = &p * &IntPoly::from_i64(&[1, 0, 1]);
    }
    p
}

fn distinct_roots() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 1..6).prop_map(|v| {
        let mut seen: Vec<BigRational> = Vec::new();
        let mut out = Vec::new();
        for (a, b) in v {
            let r = ratio(a, b);
            if !seen.contains(&r) {
                seen.push(r);
                out.push((a, b));
            }
        }
        out
    })
}

proptest! {
    #[test]
    fn counts_match_known_roots(
        roots in distinct_roots(),
        pad in any::<bool>(),
        lo in (-25i64..=25, 1i64..=4),
        w in (1i64..=40, 1i64..=4),
    ) {
        let p = from_roots(&roots, pad);
        let lo_r = ratio(lo.0, lo.1);
        let hi_r = &lo_r + ratio(w.0, w.1);
        let iv = HalfOpenInterval::new(lo_r.clone().into(), hi_r.clone().into()).unwrap();
        let expected = roots.iter().filter(|&&(a, b)| {
            let r = ratio(a, b);
            lo_r < r && r <= hi_r
        }).count();
        prop_assert_eq!(count_roots_in(&p, &iv).unwrap(), expected);
        prop_assert_eq!(count_real_roots(&p).unwrap(), roots.len());
    }

    #[test]
    fn counts_are_additive(roots in distinct_roots(), cut in (-30i64..=30, 1i64..=5)) {
        let p = from_roots(&roots, true);
        let c: ExtRational = ratio(cut.0, cut.1).into();
        let left = HalfOpenInterval::new(ExtRational::NegInf, c.clone()).unwrap();
        let right = HalfOpenInterval::new(c, ExtRational::PosInf).unwrap();
        prop_assert_eq!(
            count_roots_in(&p, &left).unwrap() + count_roots_in(&p, &right).unwrap(),
            count_real_roots(&p).unwrap()
        );
    }

    #[test]
    fn isolation_brackets_every_root(roots in distinct_roots()) {
        let p = from_roots(&roots, false);
        let isos = isolate_roots(&p).unwrap();
        prop_assert_eq!(isos.len(), roots.len());
        let mut sorted: Vec<BigRational> = roots.iter().map(|&(a, b)| ratio(a, b)).collect();
        sorted.sort();
        for (iso, r) in isos.iter().zip(&sorted) {
            prop_assert!(iso.contains(r));
            let w = iso.width().unwrap();
            prop_assert!(w <= ratio(1, 1));
        }
        for pair in isos.windows(2) {
            prop_assert!(pair[0].hi() <= pair[1].lo());
        }
    }
}

#[test]
fn refinement_matches_eigenvalues() {
    for c in [[-2i64, 0, 1, 0], [1, -3, 0, 1], [-1, -1, 0, 1], [5, 1, -7, 2]] {
        let trimmed: Vec<i64> = c.iter().copied().rev().skip_while(|&x| x == 0).collect::<Vec<_>>().into_iter().rev().collect();
        let p = IntPoly::from_i64(&trimmed);
        let oracle = common::real_roots_f64(&trimmed);
        let isos = isolate_roots(&p).unwrap();
        assert_eq!(isos.len(), oracle.len(), "{trimmed:?}");
        let eps = ratio(1, 1 << 40);
        for (iso, r) in isos.iter().zip(&oracle) {
            let fine = refine_root(&p, iso, &eps).unwrap();
            let (lo, hi) = fine.to_f64();
            assert!(lo - 1e-9 <= *r && *r <= hi + 1e-9, "{trimmed:?}: {r} not in {fine}");
        }
    }
}

#[test]
fn double_roots_are_rejected() {
    let p = IntPoly::from_i64(&[1, -2, 1]);
    assert!(isolate_roots(&p).is_err());
}
