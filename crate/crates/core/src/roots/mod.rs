//! Real-root counting and isolation with Sturm sequences.
//!
//! Counts refer to half-open intervals `(lo, hi]`: with zero values skipped,
//! the variation count is right-continuous, so `V(lo) - V(hi)` counts a root
//! sitting exactly at `hi` and ignores one at `lo`.

pub(crate) mod engine;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::rational::{ExtRational, HalfOpenInterval};
use engine::{FastChain, Point};

/// Sturm sequence of an integer polynomial, elements after the first scaled
/// to primitive form by positive factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmChain {
    seq: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> Result<Self> {
        match p.degree() {
            None => Err(Error::ZeroPolynomial),
            Some(0) => Err(Error::DegreeZero),
            Some(_) => {
                let seq = engine::chain(p.coeffs()).expect("big arithmetic does not overflow");
                Ok(SturmChain {
                    seq: seq.into_iter().map(IntPoly::new).collect(),
                })
            }
        }
    }

    pub fn seq(&self) -> &[IntPoly] {
        &self.seq
    }

    /// The chain ends in a constant exactly when the polynomial is
    /// square-free.
    pub fn is_square_free(&self) -> bool {
        self.seq.last().and_then(IntPoly::degree) == Some(0)
    }

    pub fn sign_variations(&self, x: &ExtRational) -> usize {
        let coeffs: Vec<Vec<BigInt>> = self.seq.iter().map(|p| p.coeffs().to_vec()).collect();
        match x {
            ExtRational::NegInf => engine::variations_generic(&coeffs, None, false),
            ExtRational::PosInf => engine::variations_generic(&coeffs, None, true),
            ExtRational::Finite(r) => {
                engine::variations_generic(&coeffs, Some((r.numer(), r.denom())), false)
            }
        }
        .expect("big arithmetic does not overflow")
    }
}

pub fn sturm_chain(p: &IntPoly) -> Result<SturmChain> {
    SturmChain::new(p)
}

pub fn sign_variations(chain: &SturmChain, x: &ExtRational) -> usize {
    chain.sign_variations(x)
}

fn fast_square_free(p: &IntPoly) -> Result<FastChain> {
    match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::DegreeZero),
        Some(_) => {}
    }
    let chain = FastChain::from_big(p.coeffs());
    if chain.is_square_free() {
        Ok(chain)
    } else {
        Err(Error::NotSquareFree)
    }
}

/// Number of distinct real roots of a square-free `p` in `(lo, hi]`.
pub fn count_roots_in(p: &IntPoly, interval: &HalfOpenInterval) -> Result<usize> {
    let chain = fast_square_free(p)?;
    Ok(chain.count(&Point::new(interval.lo()), &Point::new(interval.hi())))
}

pub fn count_real_roots(p: &IntPoly) -> Result<usize> {
    count_roots_in(p, &HalfOpenInterval::real_line())
}

/// Every real root lies in `(-B, B)` with `B = 1 + ceil(H / |lead|)`.
pub fn cauchy_bound(p: &IntPoly) -> Result<BigInt> {
    let h = p.height_inf()?;
    let lead = p.leading().ok_or(Error::ZeroPolynomial)?.abs();
    Ok(BigInt::from(1) + num_integer::Integer::div_ceil(&h, &lead))
}

fn midpoint(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / BigRational::from_integer(BigInt::from(2))
}

/// Disjoint intervals of width at most one with dyadic endpoints, in
/// increasing order, each holding exactly one root.
pub fn isolate_roots(p: &IntPoly) -> Result<Vec<HalfOpenInterval>> {
    let chain = fast_square_free(p)?;
    let bound = cauchy_bound(p)?;
    let mut pow = BigInt::from(1);
    while pow < bound {
        pow <<= 1;
    }
    let b = BigRational::from_integer(pow);
    let mut out = Vec::new();
    isolate_in(&chain, -b.clone(), b, &mut out);
    Ok(out)
}

/// Isolating intervals for the roots of `p` inside the bounded `window`.
pub(crate) fn isolate_in_window(
    chain: &FastChain,
    lo: &BigRational,
    hi: &BigRational,
) -> Vec<HalfOpenInterval> {
    let mut out = Vec::new();
    isolate_in(chain, lo.clone(), hi.clone(), &mut out);
    out
}

fn isolate_in(chain: &FastChain, lo: BigRational, hi: BigRational, out: &mut Vec<HalfOpenInterval>) {
    let mut stack = vec![(lo, hi)];
    // Depth-first with the right half pushed first keeps the output sorted.
    while let Some((a, b)) = stack.pop() {
        let c = chain.count(
            &Point::new(&ExtRational::Finite(a.clone())),
            &Point::new(&ExtRational::Finite(b.clone())),
        );
        match c {
            0 => {}
            1 if &b - &a <= BigRational::from_integer(BigInt::from(1)) => {
                out.push(HalfOpenInterval::new(a.into(), b.into()).expect("a < b"))
            }
            _ => {
                let m = midpoint(&a, &b);
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
}

/// Bisects an isolating interval down to width at most `eps`.
pub fn refine_root(
    p: &IntPoly,
    iso: &HalfOpenInterval,
    eps: &BigRational,
) -> Result<HalfOpenInterval> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let chain = fast_square_free(p)?;
    refine_with(&chain, p, iso, eps)
}

pub(crate) fn refine_with(
    chain: &FastChain,
    p: &IntPoly,
    iso: &HalfOpenInterval,
    eps: &BigRational,
) -> Result<HalfOpenInterval> {
    let c = chain.count(&Point::new(iso.lo()), &Point::new(iso.hi()));
    if c != 1 {
        return Err(Error::NotIsolating(c));
    }
    // Clip unbounded ends to the Cauchy bound.
    let b = BigRational::from_integer(cauchy_bound(p)?);
    let mut lo = match iso.lo() {
        ExtRational::Finite(r) => r.clone().max(-b.clone()),
        _ => -b.clone(),
    };
    let mut hi = match iso.hi() {
        ExtRational::Finite(r) => r.clone().min(b.clone()),
        _ => b,
    };
    while &hi - &lo > *eps {
        let m = midpoint(&lo, &hi);
        let left = chain.count(
            &Point::new(&ExtRational::Finite(lo.clone())),
            &Point::new(&ExtRational::Finite(m.clone())),
        );
        if left == 1 {
            hi = m;
        } else {
            lo = m;
        }
    }
    HalfOpenInterval::new(lo.into(), hi.into())
}

/// Whether the unique root in the isolating interval `iso` lies in `target`.
pub(crate) fn root_in(chain: &FastChain, iso: &HalfOpenInterval, target: &HalfOpenInterval) -> bool {
    let lo = iso.lo().max(target.lo()).clone();
    let hi = iso.hi().min(target.hi()).clone();
    if lo >= hi {
        return false;
    }
    chain.count(&Point::new(&lo), &Point::new(&hi)) == 1
}
