//! Farey sequences `F_Q = {a/b : 1 <= a <= b <= Q, gcd(a, b) = 1}`.
//!
//! Note that `F_Q` here omits `0/1`; the classical Farey sequence, which
//! includes it, has `#F_Q + 1` terms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::census::{phi_count, CensusQuery};
use crate::error::{Error, Result};
use crate::rational::HalfOpenInterval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_ratio(self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn check_q(q: u64) -> Result<()> {
    if q == 0 {
        Err(Error::InvalidArgument("height must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `F_Q` in increasing order, by the next-term recurrence.
pub fn farey_sequence(q: u64) -> Result<Vec<Fraction>> {
    check_q(q)?;
    let mut out = Vec::with_capacity(farey_count(q)? as usize);
    // Start from the neighbours 0/1 < 1/q.
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, q);
    while c <= q && !(a == 1 && b == 1) {
        out.push(Fraction { num: c, den: d });
        let k = (q + b) / d;
        let (nc, nd) = (k * c - a, k * d - b);
        a = c;
        b = d;
        c = nc;
        d = nd;
    }
    Ok(out)
}

/// Euler's totient for `0..=q` by a linear sieve.
pub fn totients(q: u64) -> Vec<u64> {
    let q = q as usize;
    let mut phi: Vec<u64> = (0..=q as u64).collect();
    for i in 2..=q {
        if phi[i] == i as u64 {
            for j in (i..=q).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    phi
}

/// `#F_Q = Σ_{b <= Q} φ(b)`.
pub fn farey_count(q: u64) -> Result<u64> {
    check_q(q)?;
    Ok(totients(q).iter().skip(1).sum())
}

/// `#F_Q` for every `Q` in `1..=q_max` (entry `Q - 1`), sharing one sieve.
pub fn farey_counts(q_max: u64) -> Vec<u64> {
    let phi = totients(q_max);
    let mut acc = 0;
    phi.iter()
        .skip(1)
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

/// `D_Q = sup_α |#(F_Q ∩ [0, α]) / #F_Q - α|` over `α` in `[0, 1]`, exact.
///
/// The count is a step function, so the supremum is approached at the Farey
/// points from the left or attained at them.
pub fn discrepancy(q: u64) -> Result<BigRational> {
    let f = farey_sequence(q)?;
    let n = BigInt::from(f.len());
    let mut best = BigRational::zero();
    for (i, x) in f.iter().enumerate() {
        let x = x.to_ratio();
        let before = BigRational::new(BigInt::from(i), n.clone());
        let at = BigRational::new(BigInt::from(i + 1), n.clone());
        for d in [(&x - &before).abs(), (&at - &x).abs()] {
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// `(Φ_1(Q, R), 4 (#F_Q + 1) - 5)`: the classical Farey count includes
/// `0/1`, which `F_Q` here does not.
pub fn a1_relation_check(q: u64) -> Result<(u64, u64)> {
    let lhs = phi_count(&CensusQuery::new(1, q, HalfOpenInterval::real_line()))?.phi;
    let rhs = 4 * (farey_count(q)? + 1) - 5;
    Ok((lhs, rhs))
}

/// `Q · max_I |Φ_1(Q, I) / Φ_1(Q, R) - ¼ ∫_I φ_1|` over all intervals
/// `(x, y]` whose endpoints are `0` or Farey points.
///
/// On `[0, 1]` the rationals of height at most `Q` are exactly `F_Q` and
/// `φ_1 = 1`, so with `c_k = k / #A_1(Q) - x_k / 4` the maximum is
/// `max c - min c`.
pub fn extremal_gap_ratio(q: u64) -> Result<f64> {
    if q < 2 {
        return Err(Error::InvalidArgument("extremal ratio needs Q >= 2".into()));
    }
    let f = farey_sequence(q)?;
    let total = (4 * f.len() - 1) as f64;
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for (k, x) in f.iter().enumerate() {
        let c = (k + 1) as f64 / total - x.to_f64() / 4.0;
        lo = lo.min(c);
        hi = hi.max(c);
    }
    Ok(q as f64 * (hi - lo))
}

/// `Q · |Φ_1(Q, I) / Φ_1(Q, R) - ¼ ∫_I φ_1|` maximised over `intervals`.
pub fn extremal_gap_ratio_over(q: u64, intervals: &[HalfOpenInterval]) -> Result<f64> {
    use crate::density::PhiIntegrator;
    let total = phi_count(&CensusQuery::new(1, q, HalfOpenInterval::real_line()))?.phi as f64;
    let integ = PhiIntegrator::new(1, crate::density::MIN_BUDGET)?;
    let mut best = 0.0f64;
    for i in intervals {
        let count = phi_count(&CensusQuery::new(1, q, i.clone()))?.phi as f64;
        let main = integ.integral_over(i)?.value / 4.0;
        best = best.max((count / total - main).abs());
    }
    Ok(q as f64 * best)
}

/// `(#F_Q - 3Q^2/π^2) / (Q (ln Q)^(2/3) (ln ln Q)^(4/3))`, for `Q >= 3`.
pub fn walfisz_normalized(q: u64, count: u64) -> f64 {
    let qf = q as f64;
    let main = 3.0 * qf * qf / std::f64::consts::PI.powi(2);
    let l = qf.ln();
    (count as f64 - main) / (qf * l.powf(2.0 / 3.0) * l.ln().powf(4.0 / 3.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(num: u64, den: u64) -> Fraction {
        Fraction { num, den }
    }

    #[test]
    fn sequences() {
        assert_eq!(farey_sequence(3).unwrap(), vec![fr(1, 3), fr(1, 2), fr(2, 3), fr(1, 1)]);
        assert_eq!(farey_sequence(1).unwrap(), vec![fr(1, 1)]);
        assert_eq!(farey_sequence(5).unwrap().len(), 10);
        assert_eq!(farey_count(5).unwrap(), 10);
        assert_eq!(farey_count(1).unwrap(), 1);
        assert!(farey_sequence(0).is_err());
    }

    #[test]
    fn discrepancy_small() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(discrepancy(1).unwrap(), r(1, 1));
        assert_eq!(discrepancy(4).unwrap(), r(1, 4));
        assert_eq!(discrepancy(10).unwrap(), r(1, 10));
    }

    #[test]
    fn a1_relation() {
        for q in [1, 2, 10] {
            let (l, r) = a1_relation_check(q).unwrap();
            assert_eq!(l, r, "Q = {q}");
        }
    }

    #[test]
    fn extremal_on_unit_interval() {
        let i = HalfOpenInterval::from_ratios((0, 1), (1, 1)).unwrap();
        let direct = extremal_gap_ratio_over(10, &[i]).unwrap();
        // (0, 1] holds #F_Q of the 4 #F_Q - 1 points.
        let n = farey_count(10).unwrap() as f64;
        assert!((direct - 10.0 * (n / (4.0 * n - 1.0) - 0.25).abs()).abs() < 1e-12);
        assert!(extremal_gap_ratio(10).unwrap() >= direct);
    }
}
