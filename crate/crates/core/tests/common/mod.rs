//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::Complex;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn content(c: &[i64]) -> i64 {
    c.iter().fold(0, |g, &x| gcd(g, x))
}

fn divisors(v: i64) -> Vec<i64> {
    let v = v.abs();
    (1..=v).filter(|d| v % d == 0).collect()
}

/// Exact division of `p` by `d` (both constant-first), if it leaves no remainder.
fn divides(p: &[i64], d: &[i64]) -> bool {
    let mut r: Vec<i128> = p.iter().map(|&x| x as i128).collect();
    let lead = *d.last().unwrap() as i128;
    let dn = d.len() - 1;
    for top in (dn..r.len()).rev() {
        if r[top] % lead != 0 {
            return false;
        }
        let q = r[top] / lead;
        for (j, &dj) in d.iter().enumerate() {
            r[top - dn + j] -= q * dj as i128;
        }
    }
    r.iter().all(|&x| x == 0)
}

/// Irreducibility over Q for degree at most 5, by searching for a factor of
/// degree one or two with coefficients inside a Mignotte-type bound.
pub fn brute_irreducible(c: &[i64]) -> bool {
    let n = c.len() - 1;
    assert!((1..=5).contains(&n));
    if n == 1 {
        return true;
    }
    if c[0] == 0 {
        return false;
    }
    let lead = c[n];
    for a in divisors(lead) {
        for b in divisors(c[0]) {
            for s in [-1, 1] {
                if divides(c, &[s * b, a]) {
                    return false;
                }
            }
        }
    }
    if n >= 4 {
        let norm2 = c.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
        let bound = (4.0 * norm2).ceil() as i64;
        for a in divisors(lead) {
            for k in divisors(c[0]) {
                for s in [-1, 1] {
                    for m in -bound..=bound {
                        if divides(c, &[s * k, m, a]) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Real roots by Durand-Kerner iteration on all complex roots.
pub fn real_roots_f64(c: &[i64]) -> Vec<f64> {
    let n = c.len() - 1;
    let lead = c[n] as f64;
    let monic: Vec<Complex<f64>> = c.iter().map(|&x| Complex::new(x as f64 / lead, 0.0)).collect();
    let eval = |z: Complex<f64>| monic.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &a| acc * z + a);
    let radius = 1.0 + monic[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = Complex::new(0.4, 0.9);
    let mut z: Vec<Complex<f64>> = (0..n).map(|k| seed.powu(k as u32) * radius / seed.norm().powi(k as i32)).collect();
    for _ in 0..5000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let denom = (0..n).filter(|&j| j != k).fold(Complex::new(1.0, 0.0), |acc, j| acc * (z[k] - z[j]));
            let step = eval(z[k]) / denom;
            z[k] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    let mut out: Vec<f64> = z
        .iter()
        .filter(|z| z.im.abs() < 1e-8 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Every integer vector of length `n + 1`, height at most `q`, positive
/// leading coefficient and content one.
pub fn primitive_vectors(n: usize, q: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut c = vec![-q; n + 1];
    c[n] = 1;
    loop {
        if content(&c) == 1 {
            out.push(c.clone());
        }
        let mut i = 0;
        loop {
            if i > n {
                return out;
            }
            let lo = if i == n { 1 } else { -q };
            if c[i] < q {
                c[i] += 1;
                break;
            }
            c[i] = lo;
            i += 1;
        }
    }
}

pub fn isqrt_exact(v: i64) -> Option<i64> {
    if v < 0 {
        return None;
    }
    let r = (v as f64).sqrt().round() as i64;
    (r - 1..=r + 1).find(|&s| s >= 0 && s * s == v)
}
