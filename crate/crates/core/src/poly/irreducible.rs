//! Irreducibility over the rationals.
//!
//! Cheap exact filters run first: the discriminant for quadratics, reduction
//! modulo small primes (a factor of degree `d` over `Q` survives as a factor
//! of degree `d` modulo any prime not dividing the leading coefficient), and
//! the rational root test. Kronecker's interpolation method settles whatever
//! factor degrees the filters could not exclude.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

const SMALL_PRIMES: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];

/// Monic candidates enumerated per prime and degree are capped at this many.
const MAX_MODULAR_CANDIDATES: u64 = 20_000;

/// Whether a primitive polynomial of degree at least one is irreducible over
/// `Q`.
pub fn is_irreducible(p: &IntPoly) -> Result<bool> {
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    if !p.content()?.is_one() {
        return Err(Error::NotPrimitive);
    }
    Ok(irreducible_big(p))
}

fn irreducible_big(p: &IntPoly) -> bool {
    let n = p.degree().unwrap();
    let c = p.coeffs();
    if n == 1 {
        return true;
    }
    if c[0].is_zero() {
        return false;
    }
    if n == 2 {
        let disc = &c[1] * &c[1] - BigInt::from(4) * &c[2] * &c[0];
        return !is_square_big(&disc);
    }
    let mut degrees: Vec<usize> = (1..=n / 2).collect();
    exclude_by_reduction(n, &|l| c.iter().map(|a| mod_u64_big(a, l)).collect(), &mut degrees);
    finish(p, degrees)
}

/// Same verdict as [`is_irreducible`] for a primitive coefficient vector with
/// positive leading coefficient, staying in machine integers where possible.
pub(crate) fn is_irreducible_small(c: &[i64]) -> bool {
    let n = c.len() - 1;
    if n == 1 {
        return true;
    }
    if c[0] == 0 {
        return false;
    }
    if n == 2 {
        let disc = c[1] as i128 * c[1] as i128 - 4 * c[2] as i128 * c[0] as i128;
        return !is_square_i128(disc);
    }
    let mut degrees: Vec<usize> = (1..=n / 2).collect();
    exclude_by_reduction(
        n,
        &|l| c.iter().map(|&a| a.rem_euclid(l as i64) as u64).collect(),
        &mut degrees,
    );
    if degrees.is_empty() {
        return true;
    }
    if degrees[0] == 1 {
        match rational_root_small(c) {
            Some(true) => return false,
            Some(false) => {
                degrees.remove(0);
                if degrees.is_empty() {
                    return true;
                }
            }
            None => {}
        }
    }
    finish(&IntPoly::from_i64(c), degrees)
}

fn finish(p: &IntPoly, degrees: Vec<usize>) -> bool {
    for d in degrees {
        let found = if d == 1 {
            has_rational_root_big(p)
        } else {
            kronecker_has_factor(p, d)
        };
        if found {
            return false;
        }
    }
    true
}

fn is_square_big(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let r = x.sqrt();
    &r * &r == *x
}

fn is_square_i128(x: i128) -> bool {
    if x < 0 {
        return false;
    }
    let r = x.sqrt();
    r * r == x
}

fn mod_u64_big(a: &BigInt, l: u64) -> u64 {
    a.mod_floor(&BigInt::from(l)).to_u64().unwrap()
}

/// Removes from `degrees` every factor degree that some reduction modulo a
/// small prime rules out.
fn exclude_by_reduction(n: usize, residues: &dyn Fn(u64) -> Vec<u64>, degrees: &mut Vec<usize>) {
    for &l in &SMALL_PRIMES {
        if degrees.is_empty() {
            return;
        }
        let f = residues(l);
        if f[n] == 0 {
            continue;
        }
        degrees.retain(|&d| {
            match l.checked_pow(d as u32) {
                Some(count) if count <= MAX_MODULAR_CANDIDATES => has_monic_divisor_mod(&f, d, l),
                // Too many candidates: keep the degree undecided.
                _ => true,
            }
        });
    }
}

/// Whether `f mod l` has some monic divisor of degree `d`.
fn has_monic_divisor_mod(f: &[u64], d: usize, l: u64) -> bool {
    if d == 1 {
        return (0..l).any(|x| f.iter().rev().fold(0, |acc, &a| (acc * x + a) % l) == 0);
    }
    let mut g = vec![0u64; d + 1];
    g[d] = 1;
    let mut work = vec![0u64; f.len()];
    loop {
        if divides_mod(f, &g, l, &mut work) {
            return true;
        }
        // Odometer over the d lower coefficients of g.
        let mut i = 0;
        loop {
            if i == d {
                return false;
            }
            g[i] += 1;
            if g[i] < l {
                break;
            }
            g[i] = 0;
            i += 1;
        }
    }
}

fn divides_mod(f: &[u64], g: &[u64], l: u64, work: &mut [u64]) -> bool {
    let dg = g.len() - 1;
    work.copy_from_slice(f);
    for top in (dg..work.len()).rev() {
        let q = work[top];
        if q == 0 {
            continue;
        }
        let shift = top - dg;
        for (i, &gc) in g.iter().enumerate() {
            work[shift + i] = (work[shift + i] + (l - q) * gc) % l;
        }
    }
    work[..dg].iter().all(|&r| r == 0)
}

fn divisors_u64(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= m {
        if m % i == 0 {
            small.push(i);
            if i * i != m {
                large.push(m / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Rational root test in `i128`; `None` when an evaluation overflows.
fn rational_root_small(c: &[i64]) -> Option<bool> {
    let n = c.len() - 1;
    let lead = c[n].unsigned_abs();
    let cons = c[0].unsigned_abs();
    for s in divisors_u64(lead) {
        for r in divisors_u64(cons) {
            if r.gcd(&s) != 1 {
                continue;
            }
            for num in [r as i128, -(r as i128)] {
                let den = s as i128;
                // den^n p(num/den) via homogeneous Horner.
                let mut acc: i128 = 0;
                let mut den_pow: i128 = 1;
                for &a in c.iter().rev() {
                    acc = acc.checked_mul(num)?.checked_add((a as i128).checked_mul(den_pow)?)?;
                    den_pow = den_pow.checked_mul(den)?;
                }
                if acc == 0 {
                    return Some(true);
                }
            }
        }
    }
    Some(false)
}

fn divisors_big(m: &BigInt) -> Vec<BigInt> {
    let m = m.abs();
    if let Some(v) = m.to_u64() {
        return divisors_u64(v).into_iter().map(BigInt::from).collect();
    }
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= m {
        if (&m % &i).is_zero() {
            out.push(i.clone());
            let other = &m / &i;
            if other != i {
                out.push(other);
            }
        }
        i += 1;
    }
    out.sort();
    out
}

fn has_rational_root_big(p: &IntPoly) -> bool {
    let c = p.coeffs();
    let lead = p.leading().unwrap();
    if c[0].is_zero() {
        return true;
    }
    for s in divisors_big(lead) {
        for r in divisors_big(&c[0]) {
            if !r.gcd(&s).is_one() {
                continue;
            }
            for num in [r.clone(), -r.clone()] {
                let x = BigRational::new(num, s.clone());
                if p.sign_at(&x) == 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// Kronecker's method: does `p` have an integer factor of degree `d`?
///
/// A factor `f` takes at each integer `x` a value dividing `p(x)`. Choosing
/// `d + 1` points where `p` does not vanish, every divisor tuple determines at
/// most one candidate `f` by interpolation, and each candidate is tested by
/// exact division.
fn kronecker_has_factor(p: &IntPoly, d: usize) -> bool {
    let n = p.degree().unwrap();
    debug_assert!(d >= 1 && d <= n / 2);
    let lead = p.leading().unwrap().clone();
    let cons = p.constant();

    // Candidate points 0, 1, -1, 2, -2, ...; keep those with the fewest
    // divisors of p(x) to keep the tuple space small.
    let mut points: Vec<(BigInt, BigInt, usize)> = Vec::new();
    let mut k: i64 = 0;
    while points.len() < 2 * d + 4 {
        for x in if k == 0 { vec![0] } else { vec![k, -k] } {
            let xr = BigRational::from_integer(BigInt::from(x));
            let v = p.eval_rational(&xr).to_integer();
            if !v.is_zero() {
                let count = divisors_big(&v).len();
                points.push((BigInt::from(x), v, count));
            }
        }
        k += 1;
    }
    points.sort_by(|a, b| a.2.cmp(&b.2).then_with(|| a.0.abs().cmp(&b.0.abs())));
    let chosen: Vec<(BigInt, BigInt)> = points[..=d]
        .iter()
        .map(|(x, v, _)| (x.clone(), v.clone()))
        .collect();
    let check_point = points[d + 1].clone();

    let options: Vec<Vec<BigInt>> = chosen
        .iter()
        .enumerate()
        .map(|(j, (_, v))| {
            let divs = divisors_big(v);
            if j == 0 {
                // f and -f are interchangeable: fix the sign at the first node.
                divs
            } else {
                divs.iter().flat_map(|q| [q.clone(), -q.clone()]).collect()
            }
        })
        .collect();

    let xs: Vec<BigRational> = chosen
        .iter()
        .map(|(x, _)| BigRational::from_integer(x.clone()))
        .collect();
    let mut idx = vec![0usize; d + 1];
    loop {
        let ys: Vec<BigRational> = idx
            .iter()
            .enumerate()
            .map(|(j, &i)| BigRational::from_integer(options[j][i].clone()))
            .collect();
        if let Some(f) = interpolate_integer(&xs, &ys) {
            let deg_ok = f.degree().is_some_and(|fd| fd >= 1);
            if deg_ok
                && (&lead % f.leading().unwrap()).is_zero()
                && !f.constant().is_zero()
                && (&cons % f.constant()).is_zero()
            {
                let fv = f
                    .eval_rational(&BigRational::from_integer(check_point.0.clone()))
                    .to_integer();
                if !fv.is_zero() && (&check_point.1 % &fv).is_zero() && p.div_exact(&f).is_some() {
                    return true;
                }
            }
        }
        let mut j = 0;
        loop {
            if j > d {
                return false;
            }
            idx[j] += 1;
            if idx[j] < options[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Newton interpolation through `(xs[i], ys[i])`; `None` unless every
/// coefficient is an integer.
fn interpolate_integer(xs: &[BigRational], ys: &[BigRational]) -> Option<IntPoly> {
    let m = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..m {
        for i in (level..m).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // Expand sum dd[k] prod_{j<k} (x - xs[j]) into monomial coefficients.
    let mut coeffs = vec![BigRational::zero(); m];
    for k in (0..m).rev() {
        // coeffs = coeffs * (x - xs[k]) + dd[k]
        let mut next = vec![BigRational::zero(); m];
        for i in 0..m {
            if coeffs[i].is_zero() {
                continue;
            }
            if i + 1 < m {
                next[i + 1] += &coeffs[i];
            }
            next[i] -= &coeffs[i] * &xs[k];
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    if coeffs.iter().all(|c| c.is_integer()) {
        Some(IntPoly::new(coeffs.into_iter().map(|c| c.to_integer()).collect()))
    } else {
        None
    }
}
