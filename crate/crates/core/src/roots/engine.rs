//! Sturm chains over a coefficient ring that may overflow.
//!
//! The census evaluates millions of small chains, so the arithmetic runs in
//! `i128` with checked operations and falls back to `BigInt` only when a
//! chain or an evaluation overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::ExtRational;

pub(crate) trait Ring: Clone {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn sign(&self) -> i8;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn abs(&self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
}

impl Ring for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn sign(&self) -> i8 {
        self.signum() as i8
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn abs(&self) -> Option<Self> {
        self.checked_abs()
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

impl Ring for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign(&self) -> i8 {
        crate::poly::sign_of(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn abs(&self) -> Option<Self> {
        Some(Signed::abs(self))
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

fn trim<R: Ring>(v: &mut Vec<R>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Divides by the (positive) gcd of the coefficients.
fn make_primitive<R: Ring>(v: &mut [R]) {
    let mut g = v[0].gcd(&v[0]);
    for c in v.iter().skip(1) {
        g = g.gcd(c);
    }
    if !g.is_zero() && g.sign() > 0 {
        for c in v.iter_mut() {
            *c = c.div_exact(&g);
        }
    }
}

/// A positive multiple of the remainder of `a` divided by `b`.
fn positive_prem<R: Ring>(a: &[R], b: &[R]) -> Option<Vec<R>> {
    let db = b.len() - 1;
    let lc = &b[db];
    let alc = lc.abs()?;
    let s = lc.sign();
    let mut r = a.to_vec();
    trim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        // r <- |lc| r - sign(lc) lr x^shift b
        let factor = if s > 0 { lr } else { R::from_i64(0).sub(&lr)? };
        for c in r.iter_mut() {
            *c = c.mul(&alc)?;
        }
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&factor.mul(bc)?)?;
        }
        trim(&mut r);
        if !r.is_empty() {
            make_primitive(&mut r);
        }
    }
    Some(r)
}

/// Sturm chain `p, p', -rem, ...`, every element after `p` made primitive.
pub(crate) fn chain<R: Ring>(p: &[R]) -> Option<Vec<Vec<R>>> {
    let mut d: Vec<R> = Vec::with_capacity(p.len() - 1);
    for (i, c) in p.iter().enumerate().skip(1) {
        d.push(c.mul(&R::from_i64(i as i64))?);
    }
    make_primitive(&mut d);
    let mut seq = vec![p.to_vec(), d];
    while seq.last().unwrap().len() > 1 {
        let k = seq.len();
        let r = positive_prem(&seq[k - 2], &seq[k - 1])?;
        if r.is_empty() {
            break;
        }
        let mut neg = Vec::with_capacity(r.len());
        for c in &r {
            neg.push(R::from_i64(0).sub(c)?);
        }
        make_primitive(&mut neg);
        seq.push(neg);
    }
    Some(seq)
}

/// Sign of `den^deg p(num/den)` (same as the sign of `p(num/den)`).
pub(crate) fn sign_at<R: Ring>(p: &[R], num: &R, den: &R) -> Option<i8> {
    let mut acc = R::from_i64(0);
    let mut den_pow = R::from_i64(1);
    for c in p.iter().rev() {
        acc = acc.mul(num)?.add(&c.mul(&den_pow)?)?;
        den_pow = den_pow.mul(den)?;
    }
    Some(acc.sign())
}

fn sign_at_infinity<R: Ring>(p: &[R], positive: bool) -> i8 {
    let s = p.last().unwrap().sign();
    if positive || (p.len() - 1) % 2 == 0 {
        s
    } else {
        -s
    }
}

fn count_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Evaluation point carrying both machine and big representations.
#[derive(Clone, Debug)]
pub(crate) enum Point {
    NegInf,
    PosInf,
    Finite {
        small: Option<(i128, i128)>,
        big: (BigInt, BigInt),
    },
}

impl Point {
    pub(crate) fn new(x: &ExtRational) -> Self {
        match x {
            ExtRational::NegInf => Point::NegInf,
            ExtRational::PosInf => Point::PosInf,
            ExtRational::Finite(r) => {
                let small = match (r.numer().to_i128(), r.denom().to_i128()) {
                    (Some(n), Some(d)) => Some((n, d)),
                    _ => None,
                };
                Point::Finite {
                    small,
                    big: (r.numer().clone(), r.denom().clone()),
                }
            }
        }
    }
}

pub(crate) fn variations_generic<R: Ring>(
    seq: &[Vec<R>],
    num_den: Option<(&R, &R)>,
    infinity: bool,
) -> Option<usize> {
    match num_den {
        None => Some(count_variations(
            seq.iter().map(|p| sign_at_infinity(p, infinity)),
        )),
        Some((n, d)) => {
            let mut last = 0i8;
            let mut v = 0;
            for p in seq {
                let s = sign_at(p, n, d)?;
                if s != 0 {
                    if last != 0 && s != last {
                        v += 1;
                    }
                    last = s;
                }
            }
            Some(v)
        }
    }
}

/// A Sturm chain held in `i128` when it fits.
#[derive(Clone, Debug)]
pub(crate) enum FastChain {
    Small(Vec<Vec<i128>>),
    Big(Vec<Vec<BigInt>>),
}

impl FastChain {
    pub(crate) fn from_i64(c: &[i64]) -> Self {
        let small: Vec<i128> = c.iter().map(|&a| a as i128).collect();
        match chain(&small) {
            Some(seq) => FastChain::Small(seq),
            None => {
                let big: Vec<BigInt> = c.iter().map(|&a| BigInt::from(a)).collect();
                FastChain::Big(chain(&big).expect("big chain"))
            }
        }
    }

    pub(crate) fn from_big(c: &[BigInt]) -> Self {
        let small: Option<Vec<i128>> = c.iter().map(|a| a.to_i128()).collect();
        if let Some(seq) = small.and_then(|s| chain(&s)) {
            return FastChain::Small(seq);
        }
        FastChain::Big(chain(c).expect("big chain"))
    }

    pub(crate) fn is_square_free(&self) -> bool {
        match self {
            FastChain::Small(s) => s.last().unwrap().len() == 1,
            FastChain::Big(s) => s.last().unwrap().len() == 1,
        }
    }

    pub(crate) fn variations(&self, x: &Point) -> usize {
        match (self, x) {
            (FastChain::Small(s), Point::NegInf) => variations_generic(s, None, false).unwrap(),
            (FastChain::Small(s), Point::PosInf) => variations_generic(s, None, true).unwrap(),
            (FastChain::Big(s), Point::NegInf) => variations_generic(s, None, false).unwrap(),
            (FastChain::Big(s), Point::PosInf) => variations_generic(s, None, true).unwrap(),
            (FastChain::Small(s), Point::Finite { small, big }) => {
                if let Some((n, d)) = small {
                    if let Some(v) = variations_generic(s, Some((n, d)), false) {
                        return v;
                    }
                }
                let bs: Vec<Vec<BigInt>> = s
                    .iter()
                    .map(|p| p.iter().map(|&c| BigInt::from(c)).collect())
                    .collect();
                variations_generic(&bs, Some((&big.0, &big.1)), false).unwrap()
            }
            (FastChain::Big(s), Point::Finite { big, .. }) => {
                variations_generic(s, Some((&big.0, &big.1)), false).unwrap()
            }
        }
    }

    /// Distinct real roots in `(lo, hi]`.
    pub(crate) fn count(&self, lo: &Point, hi: &Point) -> usize {
        self.variations(lo) - self.variations(hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_of_x2_minus_2() {
        let seq = chain(&[-2i128, 0, 1]).unwrap();
        assert_eq!(seq, vec![vec![-2, 0, 1], vec![0, 1], vec![1]]);
    }

    #[test]
    fn overflow_falls_back() {
        let c = [i64::MAX / 3, -(i64::MAX / 5), 7, i64::MAX / 2];
        let fast = FastChain::from_i64(&c);
        let big: Vec<BigInt> = c.iter().map(|&a| BigInt::from(a)).collect();
        let exact = chain(&big).unwrap();
        let lo = Point::new(&ExtRational::NegInf);
        let hi = Point::new(&ExtRational::PosInf);
        let expect = variations_generic(&exact, None, false).unwrap()
            - variations_generic(&exact, None, true).unwrap();
        assert_eq!(fast.count(&lo, &hi), expect);
    }
}
