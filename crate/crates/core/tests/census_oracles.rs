mod common;

use std::cmp::Ordering;

use algcensus::census::{
    count_reducible, enumerate_prime_polys, phi_count, phi_count_with, CensusOptions, CensusQuery,
};
use algcensus::{ExtRational, HalfOpenInterval};
use common::{brute_irreducible, gcd, isqrt_exact, primitive_vectors, real_roots_f64};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn interval(lo: Option<(i64, i64)>, hi: Option<(i64, i64)>) -> HalfOpenInterval {
    let lo = lo.map_or(ExtRational::NegInf, |(a, b)| ratio(a, b).into());
    let hi = hi.map_or(ExtRational::PosInf, |(a, b)| ratio(a, b).into());
    HalfOpenInterval::new(lo, hi).unwrap()
}

fn phi(n: usize, q: u64, iv: &HalfOpenInterval) -> u64 {
    phi_count(&CensusQuery::new(n, q, iv.clone())).unwrap().phi
}

/// Sign of `s·sqrt(d) - r` for `d > 0` not a perfect square.
fn cmp_signed_sqrt(s: i64, d: i64, r: &BigRational) -> Ordering {
    let r2 = r * r;
    let d = BigRational::from_integer(BigInt::from(d));
    if s > 0 {
        if *r < BigRational::zero() { Ordering::Greater } else { d.cmp(&r2) }
    } else if *r >= BigRational::zero() {
        Ordering::Less
    } else {
        r2.cmp(&d)
    }
}

/// Degree-two census from the quadratic formula, decided exactly.
fn quadratic_oracle(q: i64, iv: &HalfOpenInterval) -> u64 {
    let mut total = 0;
    for c in primitive_vectors(2, q) {
        let d = c[1] * c[1] - 4 * c[2] * c[0];
        if d <= 0 || isqrt_exact(d).is_some() {
            continue;
        }
        for s in [-1, 1] {
            // Root (-c1 + s sqrt(d)) / (2 c2) with c2 > 0.
            let shift = |x: &BigRational| x * BigRational::from_integer(BigInt::from(2 * c[2])) + ratio(c[1], 1);
            let above_lo = match iv.lo() {
                ExtRational::Finite(lo) => cmp_signed_sqrt(s, d, &shift(lo)) == Ordering::Greater,
                _ => true,
            };
            let below_hi = match iv.hi() {
                ExtRational::Finite(hi) => cmp_signed_sqrt(s, d, &shift(hi)) != Ordering::Greater,
                _ => true,
            };
            total += (above_lo && below_hi) as u64;
        }
    }
    total
}

/// Degree-one census: reduced fractions a/b with max(|a|, b) <= q.
fn rational_oracle(q: i64, iv: &HalfOpenInterval) -> u64 {
    let mut total = 0;
    for b in 1..=q {
        for a in -q..=q {
            if gcd(a, b) == 1 && iv.contains(&ratio(a, b)) {
                total += 1;
            }
        }
    }
    total
}

/// Degree-three census from companion-matrix eigenvalues.
fn cubic_oracle(q: i64, lo: f64, hi: f64) -> u64 {
    let mut total = 0;
    for c in primitive_vectors(3, q) {
        if !brute_irreducible(&c) {
            continue;
        }
        for r in real_roots_f64(&c) {
            assert!((r - lo).abs() > 1e-7 && (r - hi).abs() > 1e-7, "root too close to an endpoint");
            total += (lo < r && r <= hi) as u64;
        }
    }
    total
}

#[test]
fn degree_one_matches_fractions() {
    for q in [1, 2, 5, 12] {
        for iv in [interval(None, None), interval(Some((0, 1)), Some((1, 1))), interval(Some((-3, 2)), Some((2, 5)))] {
            assert_eq!(phi(1, q as u64, &iv), rational_oracle(q, &iv), "Q = {q}, {iv}");
        }
    }
}

#[test]
fn degree_two_matches_quadratic_formula() {
    let ivs = [
        interval(None, None),
        interval(Some((0, 1)), None),
        interval(Some((-1, 1)), Some((1, 1))),
        interval(Some((1, 3)), Some((7, 4))),
        interval(Some((-5, 2)), Some((-1, 7))),
    ];
    for q in [1, 2, 3, 7, 10] {
        for iv in &ivs {
            assert_eq!(phi(2, q as u64, iv), quadratic_oracle(q, iv), "Q = {q}, {iv}");
        }
    }
}

#[test]
fn degree_three_matches_eigenvalues() {
    for q in [1, 2, 3] {
        for (lo, hi) in [((-1, 3), (5, 7)), ((-9, 4), (-1, 5)), ((1, 1), (3, 1))] {
            let iv = interval(Some(lo), Some(hi));
            let expected = cubic_oracle(q, lo.0 as f64 / lo.1 as f64, hi.0 as f64 / hi.1 as f64);
            assert_eq!(phi(3, q as u64, &iv), expected, "Q = {q}, {iv}");
        }
    }
}

#[test]
fn census_example_values() {
    assert_eq!(phi(2, 1, &interval(None, None)), 4);
    assert_eq!(phi(2, 1, &interval(Some((0, 1)), None)), 2);
    assert_eq!(enumerate_prime_polys(2, 1).unwrap().count(), 5);
    let r = phi_count(&CensusQuery::new(2, 1, HalfOpenInterval::real_line())).unwrap();
    assert_eq!(r.by_k.get(&2), Some(&2));
    assert_eq!(r.total_a_n, Some(4));
}

#[test]
fn prime_enumeration_matches_oracle() {
    for (n, q) in [(2usize, 3i64), (3, 2), (4, 1)] {
        let mut expected: Vec<Vec<i64>> =
            primitive_vectors(n, q).into_iter().filter(|c| brute_irreducible(c)).collect();
        let mut got: Vec<Vec<i64>> =
            enumerate_prime_polys(n, q as u64).unwrap().map(|p| p.to_i64().unwrap()).collect();
        expected.sort();
        got.sort();
        assert_eq!(got, expected);
    }
}

#[test]
fn reducible_quadratics_match_discriminant_test() {
    for q in [1i64, 2, 4] {
        let mut expected = 0;
        for c0 in -q..=q {
            for c1 in -q..=q {
                for c2 in (-q..=q).filter(|&c| c != 0) {
                    expected += isqrt_exact(c1 * c1 - 4 * c2 * c0).is_some() as u64;
                }
            }
        }
        assert_eq!(count_reducible(2, q as u64).unwrap(), expected, "Q = {q}");
    }
}

fn bounded_interval() -> impl Strategy<Value = HalfOpenInterval> {
    ((-12i64..=12, 1i64..=5), (1i64..=24, 1i64..=5)).prop_map(|((a, b), (w, d))| {
        let lo = ratio(a, b);
        let hi = &lo + ratio(w, d);
        HalfOpenInterval::new(lo.into(), hi.into()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn negation_symmetry(n in 2usize..=3, q in 1u64..=6, iv in bounded_interval()) {
        let opts = CensusOptions { pairing: false, ..Default::default() };
        let a = phi_count_with(&CensusQuery::new(n, q, iv.clone()), &opts).unwrap().phi;
        let b = phi_count_with(&CensusQuery::new(n, q, iv.negated()), &opts).unwrap().phi;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn inversion_symmetry(n in 2usize..=3, q in 1u64..=6, iv in bounded_interval()) {
        prop_assume!(iv.inverted().is_some());
        prop_assert_eq!(phi(n, q, &iv), phi(n, q, &iv.inverted().unwrap()));
    }

    #[test]
    fn shards_and_pairing_do_not_change_counts(
        n in 2usize..=3,
        q in 1u64..=5,
        shards in 1usize..=97,
        iv in bounded_interval(),
        k in 1usize..=6,
    ) {
        let query = CensusQuery::new(n, q, iv.clone()).with_breakpoints(iv.uniform_breakpoints(k).unwrap());
        let base = phi_count(&query).unwrap();
        for pairing in [false, true] {
            let r = phi_count_with(&query, &CensusOptions { shards, pairing, count_reducible: false }).unwrap();
            prop_assert_eq!(&r.per_bin, &base.per_bin);
            prop_assert_eq!(&r.by_k, &base.by_k);
            prop_assert_eq!(r.prime_polys, base.prime_polys);
        }
        prop_assert_eq!(base.per_bin.iter().sum::<u64>(), base.phi);
    }
}
