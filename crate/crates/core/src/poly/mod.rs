//! Integer polynomials with arbitrary-precision coefficients.
//!
//! Coefficients are stored constant term first, so `coeffs()[i]` is the
//! coefficient of `x^i` and [`IntPoly::reverse`] is a literal reversal.

mod irreducible;

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::ExtRational;

pub use irreducible::is_irreducible;
pub(crate) use irreducible::is_irreducible_small;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Builds a polynomial from `a_0, a_1, ..., a_n`, dropping zero
    /// coefficients above the degree.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    fn nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::ZeroPolynomial)
        } else {
            Ok(())
        }
    }

    /// gcd of the absolute values of the coefficients.
    pub fn content(&self) -> Result<BigInt> {
        self.nonzero()?;
        Ok(self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c)))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_ok_and(|c| c.is_one())
    }

    /// Naive height: the largest absolute coefficient.
    pub fn height_inf(&self) -> Result<BigInt> {
        self.nonzero()?;
        Ok(self.coeffs.iter().map(|c| c.abs()).max().unwrap())
    }

    /// `x^n p(1/x)`. Requires a nonzero constant term so the degree is kept.
    pub fn reverse(&self) -> Result<IntPoly> {
        self.nonzero()?;
        if self.coeffs[0].is_zero() {
            return Err(Error::DegreeDropUnderReversal);
        }
        let mut c = self.coeffs.clone();
        c.reverse();
        Ok(IntPoly { coeffs: c })
    }

    /// `p(-x)`.
    pub fn negate_arg(&self) -> IntPoly {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    /// Exact Horner evaluation at a finite point.
    pub fn eval(&self, x: &ExtRational) -> Result<ExtRational> {
        match x {
            ExtRational::Finite(r) => Ok(ExtRational::Finite(self.eval_rational(r))),
            _ => Err(Error::InfiniteArgument),
        }
    }

    /// Sign of `p(x)` for finite `x`, computed without building the rational
    /// value: `den^n p(num/den)` has the same sign since `den > 0`.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let (num, den) = (x.numer(), x.denom());
        let n = self.coeffs.len();
        if n == 0 {
            return 0;
        }
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        // den^n p(num/den) = sum a_i num^i den^(n-1-i), evaluated from the top.
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        sign_of(&acc)
    }

    /// Formal derivative; the derivative of a constant is the zero polynomial.
    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Divides out the content and makes the leading coefficient positive.
    /// Irreducibility is not checked.
    pub fn make_prime(&self) -> Result<IntPoly> {
        let content = self.content()?;
        let sign = if self.leading().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let divisor = content * sign;
        Ok(IntPoly {
            coeffs: self.coeffs.iter().map(|c| c / &divisor).collect(),
        })
    }

    /// Primitive part with positive scaling only (the sign is kept).
    pub fn primitive_part(&self) -> IntPoly {
        match self.content() {
            Ok(c) if !c.is_one() => IntPoly {
                coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
            },
            _ => self.clone(),
        }
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        is_irreducible(self)
    }

    /// Quotient `self / divisor` when it lies in `Z[x]`, otherwise `None`.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let nd = self.degree().unwrap();
        if nd < dd {
            return None;
        }
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            let top = &rem[shift + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &q * c;
            }
            quot[shift] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(IntPoly::new(quot))
        } else {
            None
        }
    }

    /// Coefficients as machine integers, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

pub(crate) fn sign_of(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl serde::Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A polynomial known to be primitive, irreducible and with positive leading
/// coefficient, together with the height bound of the enumeration that
/// produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePolyCertificate {
    poly: IntPoly,
    checked_q: u64,
}

impl PrimePolyCertificate {
    /// Returns `Ok(None)` when `poly` is not a prime polynomial of height at
    /// most `checked_q`.
    pub fn certify(poly: IntPoly, checked_q: u64) -> Result<Option<Self>> {
        if poly.degree().unwrap_or(0) == 0
            || !poly.leading().is_some_and(|l| l.is_positive())
            || !poly.is_primitive()
            || poly.height_inf()? > BigInt::from(checked_q)
            || !is_irreducible(&poly)?
        {
            return Ok(None);
        }
        Ok(Some(PrimePolyCertificate { poly, checked_q }))
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn checked_q(&self) -> u64 {
        self.checked_q
    }
}
