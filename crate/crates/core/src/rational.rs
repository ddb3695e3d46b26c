//! Extended rationals and half-open intervals `(lo, hi]`.
//!
//! Every counting query in the crate is phrased over a [`HalfOpenInterval`];
//! with half-open bins a partition of an interval never double counts a root
//! sitting on a shared breakpoint.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational number or one of the two infinities.
///
/// Variant order gives the extended order: `NegInf < Finite(_) < PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRational {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl ExtRational {
    pub fn from_int(v: i64) -> Self {
        ExtRational::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    /// `num/den`, reduced. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExtRational::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        ExtRational::Finite(BigRational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::NegInf => f64::NEG_INFINITY,
            ExtRational::PosInf => f64::INFINITY,
            ExtRational::Finite(r) => ratio_to_f64(r),
        }
    }

    /// Exact conversion of a finite `f64`; infinities map to the sentinels.
    pub fn from_f64(x: f64) -> Option<Self> {
        if x == f64::INFINITY {
            Some(ExtRational::PosInf)
        } else if x == f64::NEG_INFINITY {
            Some(ExtRational::NegInf)
        } else {
            BigRational::from_float(x).map(ExtRational::Finite)
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExtRational::NegInf => ExtRational::PosInf,
            ExtRational::PosInf => ExtRational::NegInf,
            ExtRational::Finite(r) => ExtRational::Finite(-r),
        }
    }

    /// `1/x`, with `1/±∞ = 0`. Returns `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        match self {
            ExtRational::NegInf | ExtRational::PosInf => Some(ExtRational::zero()),
            ExtRational::Finite(r) if r.is_zero() => None,
            ExtRational::Finite(r) => Some(ExtRational::Finite(r.recip())),
        }
    }
}

impl From<BigRational> for ExtRational {
    fn from(r: BigRational) -> Self {
        ExtRational::Finite(r)
    }
}

/// `f64` value of a big rational that stays accurate when numerator and
/// denominator individually overflow `f64`.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64;
    // Rescale by a power of two so both parts fit, then undo.
    let scaled = if shift > 0 {
        r / BigRational::from_integer(BigInt::one() << (shift as usize))
    } else {
        r * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    let n = scaled.numer().to_f64().unwrap_or(f64::NAN);
    let d = scaled.denom().to_f64().unwrap_or(f64::NAN);
    (n / d) * 2f64.powi(shift as i32)
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInf => write!(f, "-inf"),
            ExtRational::PosInf => write!(f, "inf"),
            ExtRational::Finite(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses `inf`, `+inf`, `-inf`, integers, `p/q` and plain decimals such as
/// `-0.25` (decimals are read exactly, `0.1` is `1/10`).
impl FromStr for ExtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "inf" | "+inf" | "infinity" | "+infinity" => return Ok(ExtRational::PosInf),
            "-inf" | "-infinity" => return Ok(ExtRational::NegInf),
            _ => {}
        }
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(ExtRational::Finite(BigRational::new(n, d)));
        }
        if let Some((int_part, frac_part)) = t.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int_part.starts_with('-');
            let int_digits = int_part.trim_start_matches(['-', '+']);
            let int_val: BigInt = if int_digits.is_empty() {
                BigInt::zero()
            } else {
                int_digits.parse().map_err(|_| bad())?
            };
            let frac_val: BigInt = frac_part.parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), frac_part.len());
            let mut r = BigRational::new(int_val * &scale + frac_val, scale);
            if negative {
                r = -r;
            }
            return Ok(ExtRational::Finite(r));
        }
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(ExtRational::Finite(BigRational::from_integer(n)))
    }
}

/// The set `(lo, hi]`; with `hi = +∞` it is `(lo, +∞)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HalfOpenInterval {
    lo: ExtRational,
    hi: ExtRational,
}

impl HalfOpenInterval {
    pub fn new(lo: ExtRational, hi: ExtRational) -> Result<Self> {
        if lo >= hi || lo == ExtRational::PosInf || hi == ExtRational::NegInf {
            return Err(Error::EmptyInterval);
        }
        Ok(HalfOpenInterval { lo, hi })
    }

    pub fn real_line() -> Self {
        HalfOpenInterval {
            lo: ExtRational::NegInf,
            hi: ExtRational::PosInf,
        }
    }

    /// Convenience constructor from `lo_num/lo_den` and `hi_num/hi_den`.
    pub fn from_ratios(lo: (i64, i64), hi: (i64, i64)) -> Result<Self> {
        Self::new(
            ExtRational::from_ratio(lo.0, lo.1),
            ExtRational::from_ratio(hi.0, hi.1),
        )
    }

    pub fn lo(&self) -> &ExtRational {
        &self.lo
    }

    pub fn hi(&self) -> &ExtRational {
        &self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_real_line(&self) -> bool {
        self.lo == ExtRational::NegInf && self.hi == ExtRational::PosInf
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let x = ExtRational::Finite(x.clone());
        self.lo < x && x <= self.hi
    }

    pub fn contains_ext(&self, x: &ExtRational) -> bool {
        &self.lo < x && x <= &self.hi
    }

    pub fn width(&self) -> Option<BigRational> {
        match (&self.lo, &self.hi) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => Some(b - a),
            _ => None,
        }
    }

    /// The half-open interval `(-hi, -lo]`. As a point set this differs from
    /// `-(lo, hi] = [-hi, -lo)` only at the two endpoints.
    pub fn negated(&self) -> Self {
        HalfOpenInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    /// The half-open interval `(1/hi, 1/lo]`, defined when the interval lies
    /// strictly on one side of zero. As a point set this differs from
    /// `{1/x : x in (lo, hi]} = [1/hi, 1/lo)` only at the endpoints.
    pub fn inverted(&self) -> Option<Self> {
        let zero = ExtRational::zero();
        let positive = self.lo >= zero;
        let negative = self.hi < zero;
        if !(positive || negative) || self.lo == zero {
            return None;
        }
        let lo = self.hi.recip()?;
        let hi = self.lo.recip()?;
        HalfOpenInterval::new(lo, hi).ok()
    }

    /// Interior breakpoints splitting a bounded interval into `k` equal bins.
    pub fn uniform_breakpoints(&self, k: usize) -> Result<Vec<ExtRational>> {
        let (a, b) = match (&self.lo, &self.hi) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => (a, b),
            _ => {
                return Err(Error::InvalidArgument(
                    "uniform bins need a bounded interval".into(),
                ))
            }
        };
        if k == 0 {
            return Err(Error::InvalidArgument("bin count must be positive".into()));
        }
        let step = (b - a) / BigRational::from_integer(BigInt::from(k));
        Ok((1..k)
            .map(|i| ExtRational::Finite(a + &step * BigRational::from_integer(BigInt::from(i))))
            .collect())
    }

    /// Splits into consecutive bins at the given interior breakpoints.
    pub fn split(&self, breakpoints: &[ExtRational]) -> Result<Vec<HalfOpenInterval>> {
        let mut points = Vec::with_capacity(breakpoints.len() + 2);
        points.push(self.lo.clone());
        for b in breakpoints {
            if b <= points.last().unwrap() || b >= &self.hi {
                return Err(Error::InvalidArgument(
                    "breakpoints must be strictly increasing and inside the interval".into(),
                ));
            }
            points.push(b.clone());
        }
        points.push(self.hi.clone());
        Ok(points
            .windows(2)
            .map(|w| HalfOpenInterval {
                lo: w[0].clone(),
                hi: w[1].clone(),
            })
            .collect())
    }

    /// `(lo, hi)` as floats, for quadrature over the interval.
    pub fn to_f64(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }
}

impl fmt::Display for HalfOpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}]", self.lo, self.hi)
    }
}

/// Parses `"lo,hi"` with the [`ExtRational`] token grammar.
impl FromStr for HalfOpenInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected \"lo,hi\", got {s:?}")))?;
        HalfOpenInterval::new(lo.parse()?, hi.parse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tokens() {
        assert_eq!("inf".parse::<ExtRational>().unwrap(), ExtRational::PosInf);
        assert_eq!("-inf".parse::<ExtRational>().unwrap(), ExtRational::NegInf);
        assert_eq!(
            "-3/6".parse::<ExtRational>().unwrap(),
            ExtRational::from_ratio(-1, 2)
        );
        assert_eq!(
            "-0.25".parse::<ExtRational>().unwrap(),
            ExtRational::from_ratio(-1, 4)
        );
        assert_eq!("0.1".parse::<ExtRational>().unwrap(), ExtRational::from_ratio(1, 10));
        assert!("1/0".parse::<ExtRational>().is_err());
        assert!("abc".parse::<ExtRational>().is_err());
    }

    #[test]
    fn extended_order() {
        let a = ExtRational::from_int(-1000);
        assert!(ExtRational::NegInf < a);
        assert!(a < ExtRational::PosInf);
    }

    #[test]
    fn interval_validation_and_membership() {
        assert!(HalfOpenInterval::from_ratios((1, 1), (1, 1)).is_err());
        let i = HalfOpenInterval::from_ratios((0, 1), (3, 2)).unwrap();
        assert!(!i.contains(&BigRational::zero()));
        assert!(i.contains(&BigRational::new(3.into(), 2.into())));
        assert_eq!(i.to_string(), "(0, 3/2]");
        let parsed: HalfOpenInterval = "0,inf".parse().unwrap();
        assert_eq!(parsed.hi(), &ExtRational::PosInf);
    }

    #[test]
    fn negation_and_inversion() {
        let i = HalfOpenInterval::from_ratios((1, 2), (3, 1)).unwrap();
        assert_eq!(
            i.negated(),
            HalfOpenInterval::from_ratios((-3, 1), (-1, 2)).unwrap()
        );
        assert_eq!(
            i.inverted().unwrap(),
            HalfOpenInterval::from_ratios((1, 3), (2, 1)).unwrap()
        );
        let neg = HalfOpenInterval::new(ExtRational::NegInf, ExtRational::from_int(-2)).unwrap();
        assert_eq!(
            neg.inverted().unwrap(),
            HalfOpenInterval::from_ratios((-1, 2), (0, 1)).unwrap()
        );
        assert!(HalfOpenInterval::from_ratios((-1, 1), (1, 1))
            .unwrap()
            .inverted()
            .is_none());
    }

    #[test]
    fn uniform_split() {
        let i: HalfOpenInterval = "-2,2".parse().unwrap();
        let bps = i.uniform_breakpoints(40).unwrap();
        assert_eq!(bps.len(), 39);
        assert_eq!(bps[0], ExtRational::from_ratio(-19, 10));
        let bins = i.split(&bps).unwrap();
        assert_eq!(bins.len(), 40);
        assert_eq!(bins[39].hi(), &ExtRational::from_int(2));
    }

    #[test]
    fn huge_ratio_to_f64() {
        let big = BigInt::one() << 2000usize;
        let r = BigRational::new(big.clone() * 3, big);
        assert_eq!(ratio_to_f64(&r), 3.0);
    }
}
