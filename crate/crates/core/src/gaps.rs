//! Neighbourhoods of rationals and of infinity free of algebraic numbers of
//! fixed degree and bounded height.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::census::{collect_prime, collect_vectors, is_prime_vector};
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::rational::{ratio_to_f64, ExtRational, HalfOpenInterval};
use crate::roots::engine::{FastChain, Point};
use crate::roots::isolate_in_window;

/// Bits of relative precision at which a nearest root is localised.
const REFINE_BITS: u32 = 40;

/// Distance from `a/b` to the nearest algebraic number of degree `n` and
/// height at most `Q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapProbe {
    pub n: usize,
    pub q: u64,
    pub a: i64,
    pub b: u64,
    /// Certified: no member of `A_n(Q)` is closer than this.
    pub nearest_distance: ExtRational,
    /// Some member of `A_n(Q)` is at most this far.
    pub nearest_distance_upper: ExtRational,
    pub nearest_poly: IntPoly,
    /// `nearest_distance · bⁿ · Q`.
    pub implied_constant: f64,
}

impl GapProbe {
    pub fn x0(&self) -> BigRational {
        BigRational::new(self.a.into(), self.b.into())
    }

    pub fn distance_f64(&self) -> f64 {
        self.nearest_distance.to_f64()
    }
}

fn finite(r: &BigRational) -> Point {
    Point::new(&ExtRational::Finite(r.clone()))
}

/// Root of `chain` in `(lo, hi]` bisected until `x0` is outside the closed
/// interval and its width is at most `eps`; returns the distance bounds.
fn distance_bounds(
    chain: &FastChain,
    mut lo: BigRational,
    mut hi: BigRational,
    x0: &BigRational,
    eps: &BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > *eps || (&lo <= x0 && x0 <= &hi) {
        let m = (&lo + &hi) / &two;
        if chain.count(&finite(&lo), &finite(&m)) == 1 {
            hi = m;
        } else {
            lo = m;
        }
    }
    let (d1, d2) = ((&lo - x0).abs(), (&hi - x0).abs());
    if d1 < d2 {
        (d1, d2)
    } else {
        (d2, d1)
    }
}

/// Exact nearest-distance probe from `a/b` into `A_n(Q)`, `n >= 2`.
///
/// Scans a window around `x0` that doubles until it holds a root of some
/// prime polynomial, then localises every root in the window.
pub fn nearest_algebraic(n: usize, q: u64, a: i64, b: u64) -> Result<GapProbe> {
    if n < 2 {
        return Err(Error::InvalidArgument("gap probes need degree at least 2".into()));
    }
    if b == 0 || a.unsigned_abs().gcd(&b) != 1 {
        return Err(Error::InvalidArgument(format!("{a}/{b} is not in lowest terms")));
    }
    let x0 = BigRational::new(a.into(), b.into());
    let mut radius = BigRational::new(BigInt::one(), BigInt::from(q.max(1)));
    loop {
        let lo = &x0 - &radius;
        let hi = &x0 + &radius;
        let (plo, phi) = (finite(&lo), finite(&hi));
        let hits = collect_vectors(n, q, |c| {
            let chain = FastChain::from_i64(c);
            // Prime polynomials of degree >= 2 are square-free.
            (chain.is_square_free() && chain.count(&plo, &phi) > 0 && is_prime_vector(c)).then(|| c.to_vec())
        })?;
        if hits.is_empty() {
            radius *= BigRational::from_integer(BigInt::from(2));
            continue;
        }
        let eps = &radius / BigRational::from_integer(BigInt::one() << REFINE_BITS);
        let mut best: Option<(BigRational, BigRational, Vec<i64>)> = None;
        for c in hits {
            let chain = FastChain::from_i64(&c);
            for iso in isolate_in_window(&chain, &lo, &hi) {
                let (l, h) = (iso.lo().as_finite().unwrap(), iso.hi().as_finite().unwrap());
                let (dl, du) = distance_bounds(&chain, l.clone(), h.clone(), &x0, &eps);
                if best.as_ref().is_none_or(|(bl, _, _)| dl < *bl) {
                    let upper = best.as_ref().map_or(du.clone(), |(_, bu, _)| bu.clone().min(du.clone()));
                    best = Some((dl, upper, c.clone()));
                } else if let Some((_, bu, _)) = best.as_mut() {
                    if du < *bu {
                        *bu = du;
                    }
                }
            }
        }
        let (lower, upper, c) = best.expect("window holds a root");
        let implied = ratio_to_f64(&lower) * (b as f64).powi(n as i32) * q as f64;
        return Ok(GapProbe {
            n,
            q,
            a,
            b,
            nearest_distance: lower.into(),
            nearest_distance_upper: upper.into(),
            nearest_poly: IntPoly::from_i64(&c),
            implied_constant: implied,
        });
    }
}

/// One probe per height in `qs`.
pub fn constant_sweep(n: usize, a: i64, b: u64, qs: &[u64]) -> Result<Vec<GapProbe>> {
    qs.iter().map(|&q| nearest_algebraic(n, q, a, b)).collect()
}

/// Smallest implied constant of a sweep.
pub fn c_min(probes: &[GapProbe]) -> Option<f64> {
    probes.iter().map(|p| p.implied_constant).min_by(f64::total_cmp)
}

/// `(a/b - r, a/b + r]` with `r = c / (2 bⁿ Q)`, rounded down to a dyadic
/// rational so the interval stays inside the measured gap.
pub fn gap_interval(n: usize, q: u64, a: i64, b: u64, c: f64) -> Result<HalfOpenInterval> {
    let r = c / (2.0 * (b as f64).powi(n as i32) * q as f64);
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidArgument("gap constant must be positive".into()));
    }
    let scale = BigInt::one() << 60u32;
    let num = BigInt::from((r * 2f64.powi(60)).floor() as u64);
    if num.is_zero() {
        return Err(Error::InvalidArgument("gap radius underflows".into()));
    }
    let r = BigRational::new(num, scale);
    let x0 = BigRational::new(a.into(), b.into());
    HalfOpenInterval::new((&x0 - &r).into(), (&x0 + &r).into())
}

/// Whether every member of `A_n(Q)` lies strictly inside `(-Q-1, Q+1)`.
pub fn outer_exclusion_check(n: usize, q: u64) -> Result<bool> {
    let edge = BigRational::from_integer(BigInt::from(q + 1));
    let (lo, hi) = (finite(&-edge.clone()), finite(&edge));
    let (neg_inf, pos_inf) = (Point::new(&ExtRational::NegInf), Point::new(&ExtRational::PosInf));
    let bad = collect_prime(n, q, |c| {
        let chain = FastChain::from_i64(c);
        let outside = chain.count(&neg_inf, &lo) + chain.count(&hi, &pos_inf);
        let at_edge = IntPoly::from_i64(c).sign_at(&edge) == 0;
        (outside > 0 || at_edge).then_some(())
    })?;
    Ok(bad.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_two_height_one() {
        let golden_small = (5f64.sqrt() - 1.0) / 2.0;
        let p = nearest_algebraic(2, 1, 0, 1).unwrap();
        assert!((p.distance_f64() - golden_small).abs() < 1e-9);
        assert!(p.nearest_distance <= p.nearest_distance_upper);
        let p = nearest_algebraic(2, 1, 1, 1).unwrap();
        assert!((p.distance_f64() - (1.0 - golden_small)).abs() < 1e-9);
        assert!(p.implied_constant > 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(nearest_algebraic(1, 5, 0, 1).is_err());
        assert!(nearest_algebraic(2, 5, 2, 4).is_err());
        assert!(nearest_algebraic(2, 5, 1, 0).is_err());
    }

    #[test]
    fn outer_exclusion_small() {
        for (n, q) in [(1, 7), (2, 1), (2, 5), (3, 3)] {
            assert!(outer_exclusion_check(n, q).unwrap(), "n = {n}, Q = {q}");
        }
    }

    #[test]
    fn gap_interval_is_inside_gap() {
        let p = nearest_algebraic(2, 10, 1, 2).unwrap();
        let i = gap_interval(2, 10, 1, 2, p.implied_constant).unwrap();
        let w = ratio_to_f64(&i.width().unwrap());
        assert!(w <= p.distance_f64() && w > 0.99 * p.distance_f64());
    }
}
