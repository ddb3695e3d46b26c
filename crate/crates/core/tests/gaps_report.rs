mod common;

use algcensus::census::{phi_count, CensusQuery};
use algcensus::density::PhiIntegrator;
use algcensus::gaps::{c_min, constant_sweep, gap_interval, nearest_algebraic, outer_exclusion_check};
use algcensus::report::{fit_loglog, gap_remainder_band, remainder_band, remainder_scale};
use algcensus::HalfOpenInterval;
use common::{brute_irreducible, isqrt_exact, primitive_vectors, real_roots_f64};
use proptest::prelude::*;

fn quadratic_nearest(q: i64, x0: f64) -> f64 {
    let mut best = f64::INFINITY;
    for c in primitive_vectors(2, q) {
        let d = c[1] * c[1] - 4 * c[2] * c[0];
        if d <= 0 || isqrt_exact(d).is_some() {
            continue;
        }
        for s in [-1.0, 1.0] {
            let r = (-(c[1] as f64) + s * (d as f64).sqrt()) / (2.0 * c[2] as f64);
            best = best.min((r - x0).abs());
        }
    }
    best
}

#[test]
fn nearest_quadratic_matches_formula() {
    for (a, b) in [(0i64, 1u64), (1, 2), (-2, 3), (3, 1)] {
        for q in [1, 2, 5, 9] {
            let p = nearest_algebraic(2, q, a, b).unwrap();
            let oracle = quadratic_nearest(q as i64, a as f64 / b as f64);
            let lo = p.nearest_distance.to_f64();
            let hi = p.nearest_distance_upper.to_f64();
            assert!(lo <= oracle * (1.0 + 1e-12) && oracle <= hi * (1.0 + 1e-12), "{a}/{b} Q = {q}: {lo} {oracle} {hi}");
            assert!(hi - lo <= 1e-9 * hi);
        }
    }
}

#[test]
fn nearest_cubic_matches_eigenvalues() {
    for (a, b) in [(0i64, 1u64), (1, 3)] {
        for q in [2, 3] {
            let mut oracle = f64::INFINITY;
            for c in primitive_vectors(3, q) {
                if brute_irreducible(&c) {
                    for r in real_roots_f64(&c) {
                        oracle = oracle.min((r - a as f64 / b as f64).abs());
                    }
                }
            }
            let p = nearest_algebraic(3, q as u64, a, b).unwrap();
            assert!((p.distance_f64() - oracle).abs() < 1e-9, "{a}/{b} Q = {q}: {p:?} vs {oracle}");
        }
    }
}

#[test]
fn roots_stay_inside_the_outer_bound() {
    for (n, q) in [(2usize, 6i64), (3, 3), (4, 2)] {
        assert!(outer_exclusion_check(n, q as u64).unwrap());
        let max_root = primitive_vectors(n, q)
            .into_iter()
            .filter(|c| brute_irreducible(c))
            .flat_map(|c| real_roots_f64(&c))
            .fold(0.0f64, |m, r| m.max(r.abs()));
        assert!(max_root < (q + 1) as f64);
    }
    for q in 1..=20 {
        assert!(outer_exclusion_check(1, q).unwrap());
    }
}

#[test]
fn gap_intervals_are_empty() {
    for (n, a, b, qs) in [(2usize, 0i64, 1u64, vec![5u64, 10, 20]), (2, 1, 2, vec![6, 12]), (3, 1, 3, vec![4, 8])] {
        let probes = constant_sweep(n, a, b, &qs).unwrap();
        let c = c_min(&probes).unwrap();
        assert!(c > 0.0);
        for p in &probes {
            let iv = gap_interval(n, p.q, a, b, c).unwrap();
            assert_eq!(phi_count(&CensusQuery::new(n, p.q, iv)).unwrap().phi, 0);
        }
    }
}

#[test]
fn remainder_bands() {
    let integ = PhiIntegrator::new(2, 1 << 12).unwrap();
    let iv = HalfOpenInterval::from_ratios((0, 1), (1, 1)).unwrap();
    let qs = [10, 15, 20, 25, 30];
    let s = remainder_band(&qs, &iv, &integ).unwrap();
    assert_eq!(s, remainder_band(&qs, &iv, &integ).unwrap());
    assert!(s.band.0.abs() < 1.0 && s.band.1.abs() < 1.0, "{s:?}");
    let g = gap_remainder_band(&qs, 0, 1, 0.8, &integ).unwrap();
    assert!(g.band.0 > 0.05 && g.band.1 < 10.0, "{g:?}");
    assert!(remainder_scale(2, 10) > remainder_scale(3, 10) / 10.0 * 2.0);
}

proptest! {
    #[test]
    fn fits_recover_power_laws(k in -3.0f64..3.0, c in 0.01f64..100.0, x0 in 1.0f64..10.0, len in 4usize..12) {
        let pts: Vec<(f64, f64)> = (0..len).map(|i| {
            let x = x0 * 1.3f64.powi(i as i32);
            (x, c * x.powf(k))
        }).collect();
        let s = fit_loglog("x", &pts).unwrap();
        prop_assert!((s.fitted_slope.unwrap() - k).abs() < 1e-9);
        let (lo, hi) = s.slope_ci.unwrap();
        prop_assert!(lo <= k + 1e-9 && k - 1e-9 <= hi);
    }
}
