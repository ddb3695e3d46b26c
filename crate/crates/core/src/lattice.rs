//! Integer and primitive lattice points in dilated semialgebraic regions.
//!
//! A region is a subset of `[-1, 1]^d` cut out by polynomial inequalities
//! `F_i(x) >= 0` with rational coefficients, so membership of a rational
//! point is decided exactly. The origin is never counted.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::zeta;
use crate::error::{Error, Result};
use crate::qmc::integrate_cube;
use crate::rational::ExtRational;

/// `Σ c x^e` with the exponent vector `e` of length `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub terms: Vec<(BigRational, Vec<u32>)>,
}

impl Inequality {
    fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                crate::rational::ratio_to_f64(c)
                    * e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product::<f64>()
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    dim: usize,
    inequalities: Vec<Inequality>,
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn unit_exponent(d: usize, i: usize, k: u32) -> Vec<u32> {
    let mut e = vec![0; d];
    e[i] = k;
    e
}

impl Region {
    pub fn new(dim: usize, inequalities: Vec<Inequality>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        for ineq in &inequalities {
            if ineq.terms.iter().any(|(_, e)| e.len() != dim) {
                return Err(Error::InvalidArgument(format!(
                    "exponent vectors must have length {dim}"
                )));
            }
        }
        Ok(Region { dim, inequalities })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn degree_bound(&self) -> u32 {
        self.inequalities
            .iter()
            .flat_map(|i| i.terms.iter().map(|(_, e)| e.iter().sum::<u32>()))
            .max()
            .unwrap_or(0)
    }

    /// `[-1, 1]^d`.
    pub fn cube(d: usize) -> Self {
        Region { dim: d, inequalities: Vec::new() }
    }

    /// `[0, 1]^d`.
    pub fn positive_cube(d: usize) -> Self {
        let inequalities = (0..d)
            .map(|i| Inequality { terms: vec![(BigRational::one(), unit_exponent(d, i, 1))] })
            .collect();
        Region { dim: d, inequalities }
    }

    /// `Σ x_i^2 <= 1`.
    pub fn ball(d: usize) -> Self {
        let mut terms = vec![(BigRational::one(), vec![0; d])];
        terms.extend((0..d).map(|i| (-BigRational::one(), unit_exponent(d, i, 2))));
        Region { dim: d, inequalities: vec![Inequality { terms }] }
    }

    /// `x_i >= 0`, `Σ x_i <= 1`.
    pub fn simplex(d: usize) -> Self {
        let mut r = Region::positive_cube(d);
        let mut terms = vec![(BigRational::one(), vec![0; d])];
        terms.extend((0..d).map(|i| (-BigRational::one(), unit_exponent(d, i, 1))));
        r.inequalities.push(Inequality { terms });
        r
    }

    /// `1/4 <= Σ x_i^2 <= 1` with `x_1 >= 0`.
    pub fn annulus_slice(d: usize) -> Self {
        let mut r = Region::ball(d);
        let mut inner = vec![(ratio(-1, 4), vec![0; d])];
        inner.extend((0..d).map(|i| (BigRational::one(), unit_exponent(d, i, 2))));
        r.inequalities.push(Inequality { terms: inner });
        r.inequalities.push(Inequality { terms: vec![(BigRational::one(), unit_exponent(d, 0, 1))] });
        r
    }

    /// `|Σ x_i| <= 1/2`.
    pub fn slab(d: usize) -> Self {
        let sum = |sign: i64| {
            let mut t = vec![(ratio(1, 2), vec![0; d])];
            t.extend((0..d).map(|i| (ratio(sign, 1), unit_exponent(d, i, 1))));
            Inequality { terms: t }
        };
        Region { dim: d, inequalities: vec![sum(1), sum(-1)] }
    }

    /// Same region with coordinates permuted by `perm` (`new[i] = old[perm[i]]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.dim];
        if perm.len() != self.dim || perm.iter().any(|&p| p >= self.dim || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        let inequalities = self
            .inequalities
            .iter()
            .map(|ineq| Inequality {
                terms: ineq
                    .terms
                    .iter()
                    .map(|(c, e)| {
                        let mut ne = vec![0; self.dim];
                        for (i, &p) in perm.iter().enumerate() {
                            ne[i] = e[p];
                        }
                        (c.clone(), ne)
                    })
                    .collect(),
            })
            .collect();
        Ok(Region { dim: self.dim, inequalities })
    }

    /// Parses `{"dim": d, "inequalities": [{"coeffs": [[c, [e1, ..., ed]], ...]}]}`
    /// where `c` is a number or a string such as `"-1/4"`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RegionDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("region: {e}")))?;
        let mut inequalities = Vec::with_capacity(doc.inequalities.len());
        for ineq in doc.inequalities {
            let mut terms = Vec::with_capacity(ineq.coeffs.len());
            for (c, e) in ineq.coeffs {
                let text = match c {
                    serde_json::Value::Number(n) => n.to_string(),
                    serde_json::Value::String(s) => s,
                    other => return Err(Error::Parse(format!("bad coefficient {other}"))),
                };
                match text.parse::<ExtRational>()? {
                    ExtRational::Finite(r) => terms.push((r, e)),
                    _ => return Err(Error::Parse("coefficients must be finite".into())),
                }
            }
            inequalities.push(Inequality { terms });
        }
        Region::new(doc.dim, inequalities)
    }

    fn contains_f64(&self, x: &[f64]) -> bool {
        self.inequalities.iter().all(|i| i.eval_f64(x) >= 0.0)
    }
}

#[derive(Deserialize)]
struct RegionDoc {
    dim: usize,
    inequalities: Vec<IneqDoc>,
}

#[derive(Deserialize)]
struct IneqDoc {
    coeffs: Vec<(serde_json::Value, Vec<u32>)>,
}

/// An inequality `F(x k / Q) >= 0` rescaled to integer coefficients.
struct ScaledIneq {
    terms: Vec<(i128, Vec<u32>)>,
    big: Vec<(BigInt, Vec<u32>)>,
}

impl ScaledIneq {
    fn new(ineq: &Inequality, k: u64, q: u64) -> Self {
        let r = BigRational::new(BigInt::from(k), BigInt::from(q));
        let scaled: Vec<(BigRational, Vec<u32>)> = ineq
            .terms
            .iter()
            .map(|(c, e)| {
                let deg: u32 = e.iter().sum();
                (c * num_traits::pow(r.clone(), deg as usize), e.clone())
            })
            .collect();
        let lcm = scaled.iter().fold(BigInt::one(), |l, (c, _)| l.lcm(c.denom()));
        let big: Vec<(BigInt, Vec<u32>)> = scaled
            .into_iter()
            .map(|(c, e)| ((c * BigRational::from_integer(lcm.clone())).to_integer(), e))
            .collect();
        let terms = big
            .iter()
            .map(|(c, e)| (c.to_i128().unwrap_or(i128::MAX), e.clone()))
            .collect();
        ScaledIneq { terms, big }
    }

    fn holds(&self, x: &[i64]) -> bool {
        let fast = (|| {
            let mut acc: i128 = 0;
            for (c, e) in &self.terms {
                if *c == i128::MAX {
                    return None;
                }
                let mut m = *c;
                for (&k, &xi) in e.iter().zip(x) {
                    for _ in 0..k {
                        m = m.checked_mul(xi as i128)?;
                    }
                }
                acc = acc.checked_add(m)?;
            }
            Some(acc >= 0)
        })();
        fast.unwrap_or_else(|| {
            let mut acc = BigInt::zero();
            for (c, e) in &self.big {
                let mut m = c.clone();
                for (&k, &xi) in e.iter().zip(x) {
                    m *= BigInt::from(xi).pow(k);
                }
                acc += m;
            }
            !acc.is_negative()
        })
    }
}

/// Visits every nonzero integer vector `x` with `|x_i| <= m`, in parallel
/// over the first coordinate, summing `f(x)`.
fn sum_over_box(d: usize, m: i64, f: impl Fn(&[i64]) -> u64 + Sync) -> u64 {
    (-m..=m)
        .into_par_iter()
        .map(|x0| {
            let mut x = vec![-m; d];
            x[0] = x0;
            let mut total = 0;
            loop {
                if x.iter().any(|&v| v != 0) {
                    total += f(&x);
                }
                let mut i = 1;
                loop {
                    if i == d {
                        return total;
                    }
                    if x[i] < m {
                        x[i] += 1;
                        break;
                    }
                    x[i] = -m;
                    i += 1;
                }
            }
        })
        .sum()
}

/// Nonzero integer points `x` with `x k / q` in the region.
fn count_scaled(region: &Region, q: u64, k: u64) -> u64 {
    let m = (q / k) as i64;
    if m == 0 {
        return 0;
    }
    let ineqs: Vec<ScaledIneq> = region.inequalities.iter().map(|i| ScaledIneq::new(i, k, q)).collect();
    sum_over_box(region.dim, m, |x| ineqs.iter().all(|i| i.holds(x)) as u64)
}

/// `#Λ(Q·D)`: nonzero integer vectors `x` with `x/Q` in `D`.
pub fn count_points(region: &Region, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::InvalidArgument("Q must be at least 1".into()));
    }
    Ok(count_scaled(region, q, 1))
}

/// Möbius function by trial division.
pub fn mobius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::InvalidArgument("mobius needs n >= 1".into()));
    }
    let mut n = n;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// Primitive vectors in `Q·D` by Möbius inversion over the dilations
/// `(Q/k)·D`, `k <= Q`.
pub fn count_primitive(region: &Region, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::InvalidArgument("Q must be at least 1".into()));
    }
    let mut total: i128 = 0;
    for k in 1..=q {
        let mu = mobius(k)?;
        if mu != 0 {
            total += mu as i128 * count_scaled(region, q, k) as i128;
        }
    }
    Ok(total as u64)
}

/// Lattice-rule estimate of the volume of the region.
pub fn measure_estimate(region: &Region, samples: usize) -> Result<f64> {
    if samples < 1000 {
        return Err(Error::BudgetTooSmall);
    }
    Ok(integrate_cube(region.dim, samples, |x| region.contains_f64(x) as u8 as f64).value)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeCountReport {
    pub q: u64,
    pub total_points: u64,
    pub primitive_points: u64,
    pub main_term: f64,
    pub measure_estimate: f64,
}

pub const DEFAULT_MEASURE_SAMPLES: usize = 1 << 18;

pub fn lattice_report(region: &Region, q: u64, measure: f64) -> Result<LatticeCountReport> {
    Ok(LatticeCountReport {
        q,
        total_points: count_points(region, q)?,
        primitive_points: count_primitive(region, q)?,
        main_term: (q as f64).powi(region.dim as i32) * measure / zeta(region.dim.max(2) as u32),
        measure_estimate: measure,
    })
}
