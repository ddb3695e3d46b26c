//! The counting density `φ_n` and quantities derived from it.
//!
//! `φ_n(t)` is the integral of `|Σ k p_k t^(k-1)|` over the coefficient
//! vectors `(p_1, ..., p_n)` in `[-1, 1]^n` with `|Σ p_k t^k| <= 1`. One
//! coordinate enters both the integrand and the constraint linearly, so it is
//! integrated in closed form; the remaining `n - 1` coordinates go to a
//! lattice rule.

pub mod quad;
mod sphere;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmc::integrate_cube;
use crate::rational::{ExtRational, HalfOpenInterval};
use crate::roots::engine::{FastChain, Point};
pub use quad::zeta;
pub use sphere::phi_sphere;

pub const MIN_BUDGET: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Qmc,
    N1Formula,
    SphereFormula,
    SphereSeries,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Qmc => "qmc",
            Method::N1Formula => "n1_formula",
            Method::SphereFormula => "sphere_formula",
            Method::SphereSeries => "sphere_series",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityGrid {
    pub n: usize,
    pub points: Vec<(f64, DensityEstimate)>,
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("degree must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Positive root of the increasing function `f` on `[0, 1]` with `f(0) < 0`.
fn bisect(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Positive solution of `t^n + ... + t = 1`.
pub fn t0(n: usize) -> Result<f64> {
    check_degree(n)?;
    Ok(bisect(|t| (1..=n).map(|k| t.powi(k as i32)).sum::<f64>() - 1.0))
}

/// Positive solution of `n t^(n-1) + ... + 2t = 1`, for `n >= 2`.
pub fn t1(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("t1 needs degree >= 2".into()));
    }
    Ok(bisect(|t| {
        (2..=n).map(|k| k as f64 * t.powi(k as i32 - 1)).sum::<f64>() - 1.0
    }))
}

/// Half-width of the closed-form region: `t1(n)`, or `1` for `n = 1`.
pub fn closed_form_radius(n: usize) -> Result<f64> {
    if n == 1 {
        check_degree(n)?;
        Ok(1.0)
    } else {
        t1(n)
    }
}

/// `2^(n-1)/3 (3 + Σ_{k=1}^{n-1} (k+1)^2 t^(2k))`, valid for `|t| <= t1(n)`.
pub fn phi_closed(n: usize, t: f64) -> Result<f64> {
    let r = closed_form_radius(n)?;
    if !(t.abs() <= r + 1e-12) {
        return Err(Error::OutsideClosedForm);
    }
    let t2 = t * t;
    let mut sum = 3.0;
    let mut pow = 1.0;
    for k in 1..n {
        pow *= t2;
        sum += ((k + 1) * (k + 1)) as f64 * pow;
    }
    Ok(2f64.powi(n as i32 - 1) / 3.0 * sum)
}

pub fn phi1(t: f64) -> f64 {
    1.0 / (t * t).max(1.0)
}

/// `∫_lo^hi |a x + b| dx`.
fn abs_linear_integral(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    if a == 0.0 {
        return b.abs() * (hi - lo);
    }
    let g = |x: f64| {
        let v = a * x + b;
        v * v.abs()
    };
    (g(hi) - g(lo)) / (2.0 * a)
}

/// Inner integral over `p_j` with the other coefficients fixed.
fn inner(n: usize, t: f64, j: usize, rest: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut u = 0.0;
    let mut it = rest.iter();
    for k in 1..=n {
        if k == j {
            continue;
        }
        let p = *it.next().unwrap();
        s += p * t.powi(k as i32);
        u += k as f64 * p * t.powi(k as i32 - 1);
    }
    let c = t.powi(j as i32);
    let a = j as f64 * t.powi(j as i32 - 1);
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    if c == 0.0 {
        if s.abs() > 1.0 {
            return 0.0;
        }
    } else {
        let (x, y) = ((-1.0 - s) / c, (1.0 - s) / c);
        lo = lo.max(x.min(y));
        hi = hi.min(x.max(y));
        if hi <= lo {
            return 0.0;
        }
    }
    abs_linear_integral(a, u, lo, hi)
}

/// Direct evaluation of the defining integral at `t`, without using the
/// functional equations. The closed-form coordinate is `p_1` for `|t| <= 1`
/// and `p_n` beyond, where the constraint is dominated by `p_n t^n`.
pub fn phi_unreduced(n: usize, t: f64, budget: usize) -> Result<DensityEstimate> {
    check_degree(n)?;
    if budget < MIN_BUDGET {
        return Err(Error::BudgetTooSmall);
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument("t must be finite".into()));
    }
    let j = if t.abs() <= 1.0 { 1 } else { n };
    let e = integrate_cube(n - 1, budget, |x| inner(n, t, j, x));
    Ok(DensityEstimate {
        value: e.value,
        abs_error: e.abs_error,
        method: if n == 1 { Method::N1Formula } else { Method::Qmc },
    })
}

/// `φ_n(t)` after folding `t` into `[0, 1]` with `φ(-t) = φ(t)` and
/// `φ(t) = φ(1/t) / t^2`.
pub fn phi_numeric(n: usize, t: f64, budget: usize) -> Result<DensityEstimate> {
    let a = t.abs();
    if a > 1.0 {
        let e = phi_unreduced(n, 1.0 / a, budget)?;
        let s = 1.0 / (a * a);
        return Ok(DensityEstimate {
            value: e.value * s,
            abs_error: e.abs_error * s,
            method: e.method,
        });
    }
    phi_unreduced(n, a, budget)
}

/// Closed form where it applies, otherwise the numerical estimate.
pub fn phi(n: usize, t: f64, budget: usize) -> Result<DensityEstimate> {
    if n == 1 {
        return Ok(DensityEstimate {
            value: phi1(t),
            abs_error: 0.0,
            method: Method::N1Formula,
        });
    }
    let a = t.abs();
    let r = closed_form_radius(n)?;
    let (fold, scale) = if a > 1.0 { (1.0 / a, 1.0 / (a * a)) } else { (a, 1.0) };
    if fold <= r {
        return Ok(DensityEstimate {
            value: scale * phi_closed(n, fold)?,
            abs_error: 0.0,
            method: Method::ClosedForm,
        });
    }
    phi_numeric(n, t, budget)
}

/// Integrals of `φ_n` over arbitrary intervals, reduced to integrals over
/// subintervals of `[0, 1]` computed by composite Gauss–Legendre.
#[derive(Clone, Debug)]
pub struct PhiIntegrator {
    n: usize,
    budget: usize,
    edges: Vec<f64>,
    /// `cumulative[i]` is the integral over `[0, edges[i]]`.
    cumulative: Vec<f64>,
    cumulative_err: Vec<f64>,
}

const PANELS: usize = 32;
const GAUSS_ORDER: usize = 8;

impl PhiIntegrator {
    pub fn new(n: usize, budget: usize) -> Result<Self> {
        check_degree(n)?;
        if budget < MIN_BUDGET {
            return Err(Error::BudgetTooSmall);
        }
        let mut edges: Vec<f64> = (0..=PANELS).map(|i| i as f64 / PANELS as f64).collect();
        if n >= 2 {
            edges.push(t1(n)?);
            edges.push(t0(n)?);
        }
        edges.sort_by(f64::total_cmp);
        edges.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let mut me = PhiIntegrator {
            n,
            budget,
            edges,
            cumulative: vec![0.0],
            cumulative_err: vec![0.0],
        };
        let panels: Vec<(f64, f64)> = me
            .edges
            .par_windows(2)
            .map(|w| me.panel(w[0], w[1]))
            .collect::<Result<_>>()?;
        for (v, e) in panels {
            let (lv, le) = (*me.cumulative.last().unwrap(), *me.cumulative_err.last().unwrap());
            me.cumulative.push(lv + v);
            me.cumulative_err.push(le + e);
        }
        Ok(me)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    fn panel(&self, a: f64, b: f64) -> Result<(f64, f64)> {
        if b <= a {
            return Ok((0.0, 0.0));
        }
        let (x, w) = quad::gauss_legendre(GAUSS_ORDER);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut v = 0.0;
        let mut e = 0.0;
        for (xi, wi) in x.iter().zip(&w) {
            let est = phi(self.n, mid + half * xi, self.budget)?;
            v += wi * half * est.value;
            e += wi * half * est.abs_error;
        }
        Ok((v, e))
    }

    /// `∫_0^y φ_n` for `y` in `[0, 1]`, with its error bound.
    fn from_zero(&self, y: f64) -> Result<(f64, f64)> {
        let y = y.clamp(0.0, 1.0);
        let i = self.edges.partition_point(|&e| e <= y) - 1;
        let (v, e) = self.panel(self.edges[i], y)?;
        Ok((self.cumulative[i] + v, self.cumulative_err[i] + e))
    }

    fn total_unit(&self) -> (f64, f64) {
        (*self.cumulative.last().unwrap(), *self.cumulative_err.last().unwrap())
    }

    /// Odd primitive `P(x) = ∫_0^x φ_n`.
    fn primitive(&self, x: f64) -> Result<(f64, f64)> {
        let a = x.abs();
        let (g1, e1) = self.total_unit();
        let (v, e) = if a <= 1.0 {
            self.from_zero(a)?
        } else if a.is_infinite() {
            (2.0 * g1, 2.0 * e1)
        } else {
            let (g, eg) = self.from_zero(1.0 / a)?;
            (2.0 * g1 - g, 2.0 * e1 + eg)
        };
        Ok((x.signum() * v, e))
    }

    /// `∫_lo^hi φ_n` for `lo <= hi`, either possibly infinite.
    pub fn integral(&self, lo: f64, hi: f64) -> Result<DensityEstimate> {
        if lo > hi || lo.is_nan() || hi.is_nan() {
            return Err(Error::EmptyInterval);
        }
        let (a, ea) = self.primitive(lo)?;
        let (b, eb) = self.primitive(hi)?;
        Ok(DensityEstimate {
            value: b - a,
            abs_error: ea + eb,
            method: if self.n == 1 { Method::N1Formula } else { Method::Qmc },
        })
    }

    pub fn integral_over(&self, interval: &HalfOpenInterval) -> Result<DensityEstimate> {
        let (lo, hi) = interval.to_f64();
        self.integral(lo, hi)
    }

    /// `γ_n = 4 ∫_0^1 φ_n`.
    pub fn gamma(&self) -> f64 {
        4.0 * self.total_unit().0
    }

    pub fn rho(&self, t: f64) -> Result<f64> {
        Ok(phi(self.n, t, self.budget)?.value / self.gamma())
    }

    /// Limiting distribution function `F_n(x)`.
    pub fn distribution(&self, x: f64) -> Result<f64> {
        let g = self.gamma();
        Ok((0.5 * g + self.primitive(x)?.0) / g)
    }
}

/// `γ_n = ∫ φ_n` over the real line.
pub fn gamma(n: usize, budget: usize) -> Result<f64> {
    if n == 1 {
        return Ok(4.0);
    }
    Ok(PhiIntegrator::new(n, budget)?.gamma())
}

pub fn rho(n: usize, t: f64, budget: usize) -> Result<f64> {
    PhiIntegrator::new(n, budget)?.rho(t)
}

pub fn distribution(n: usize, x: f64, budget: usize) -> Result<f64> {
    PhiIntegrator::new(n, budget)?.distribution(x)
}

/// `Q^(n+1) / (2 ζ(n+1)) ∫_I φ_n`.
pub fn main_term(q: u64, interval: &HalfOpenInterval, integrator: &PhiIntegrator) -> Result<f64> {
    let n = integrator.degree();
    let integral = integrator.integral_over(interval)?.value;
    Ok((q as f64).powi(n as i32 + 1) / (2.0 * zeta(n as u32 + 1)) * integral)
}

/// `|det J|` of `(b, α, β) ↦ coefficients of (x - α)(x - β) g(x)` next to
/// `|α - β| |g(α) g(β)|`. `b` holds the coefficients of `g`, constant first.
pub fn jacobian_identity_check(b: &[f64], alpha: f64, beta: f64) -> Result<(f64, f64)> {
    if b.is_empty() {
        return Err(Error::InvalidArgument("g needs at least one coefficient".into()));
    }
    if alpha == beta {
        return Err(Error::InvalidArgument("alpha and beta must differ".into()));
    }
    let n = b.len() + 1;
    let f = [alpha * beta, -(alpha + beta), 1.0];
    let mut j = DMatrix::<f64>::zeros(n + 1, n + 1);
    for (k, _) in b.iter().enumerate() {
        for (d, fd) in f.iter().enumerate() {
            j[(k + d, k)] = *fd;
        }
    }
    // d/dα of (x - α)(x - β) g = -(x - β) g, and symmetrically for β.
    for (k, bk) in b.iter().enumerate() {
        j[(k, n - 1)] += beta * bk;
        j[(k + 1, n - 1)] -= bk;
        j[(k, n)] += alpha * bk;
        j[(k + 1, n)] -= bk;
    }
    let g = |x: f64| b.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let lhs = j.determinant().abs();
    let rhs = (alpha - beta).abs() * (g(alpha) * g(beta)).abs();
    Ok((lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Bits of the dyadic grid the random coefficients are drawn from.
const DYADIC_BITS: u32 = 24;
const MC_CHUNK: u64 = 1 << 14;

/// Box in the coordinates `(p(c), p'(c), p_2, ..., p_n)` that holds every
/// polynomial of height at most one with two roots in `(c - h, c + h]`.
///
/// With `D2` bounding `|p''|` on the closed interval, Rolle gives a zero of
/// `p'` in it, hence `|p'(c)| <= D2 h` and `|p(c)| <= 2 D2 h^2`.
fn proposal_box(n: usize, c: f64, h: f64) -> (f64, f64) {
    let r = c.abs() + h;
    let d2: f64 = (2..=n).map(|k| (k * (k - 1)) as f64 * r.powi(k as i32 - 2)).sum();
    let d1: f64 = (1..=n).map(|k| k as f64 * r.powi(k as i32 - 1)).sum();
    let d0: f64 = (0..=n).map(|k| r.powi(k as i32)).sum();
    ((2.0 * d2 * h * h).min(d0), (d2 * h).min(d1))
}

/// Monte-Carlo estimate of the measure of real polynomials of degree `n`
/// and height at most one having at least two roots in `interval`.
///
/// Samples are drawn uniformly from a box around the polynomials vanishing
/// twice near the centre `c` of the interval: `p(c)` and `p'(c)` replace
/// `p_0` and `p_1`, a change of variables with unit Jacobian. Each sample is
/// rounded to the dyadic grid of step `2^-24`, so its roots are counted
/// exactly.
pub fn two_root_measure_mc(
    n: usize,
    interval: &HalfOpenInterval,
    samples: u64,
    seed: u64,
) -> Result<MeasureEstimate> {
    if n < 2 {
        return Err(Error::InvalidArgument("two roots need degree >= 2".into()));
    }
    if !interval.is_bounded() {
        return Err(Error::InvalidArgument("interval must be bounded".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let lo = Point::new(interval.lo());
    let hi = Point::new(interval.hi());
    let (a, b) = interval.to_f64();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let (u_max, v_max) = proposal_box(n, c, h);
    let scale = 1i64 << DYADIC_BITS;
    let sf = scale as f64;
    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(ci);
            let count = MC_CHUNK.min(samples - ci * MC_CHUNK);
            let mut coef = vec![0i64; n + 1];
            let mut hits = 0u64;
            for _ in 0..count {
                // s0 = Σ p_k c^k and s1 = Σ k p_k c^(k-1) over k >= 2.
                let (mut s0, mut s1, mut pow) = (0.0, 0.0, c);
                for k in 2..=n {
                    coef[k] = rng.random_range(-scale..=scale);
                    let pk = coef[k] as f64 / sf;
                    s1 += k as f64 * pk * pow;
                    pow *= c;
                    s0 += pk * pow;
                }
                let u = rng.random_range(-u_max..=u_max);
                let v = rng.random_range(-v_max..=v_max);
                let p1 = v - s1;
                let p0 = u - p1 * c - s0;
                if p0.abs() > 1.0 || p1.abs() > 1.0 || coef[n] == 0 {
                    continue;
                }
                coef[0] = (p0 * sf).round() as i64;
                coef[1] = (p1 * sf).round() as i64;
                if FastChain::from_i64(&coef).count(&lo, &hi) >= 2 {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let p = hits as f64 / samples as f64;
    let vol = 2f64.powi(n as i32 - 1) * 4.0 * u_max * v_max;
    Ok(MeasureEstimate {
        estimate: vol * p,
        stderr: vol * (p * (1.0 - p) / samples as f64).sqrt(),
        hits,
        samples,
    })
}

/// `(lo, hi]` with `lo = c - w/2`, `hi = c + w/2` from decimal strings.
pub fn centered_interval(center: f64, width: f64) -> Result<HalfOpenInterval> {
    let lo = ExtRational::from_f64(center - width / 2.0)
        .ok_or_else(|| Error::InvalidArgument("non-finite endpoint".into()))?;
    let hi = ExtRational::from_f64(center + width / 2.0)
        .ok_or_else(|| Error::InvalidArgument("non-finite endpoint".into()))?;
    HalfOpenInterval::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert_eq!(t0(1).unwrap(), 1.0);
        assert!((t1(2).unwrap() - 0.5).abs() < 1e-15);
        assert!((t1(3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let limit = (2f64.sqrt() - 1.0) / 2f64.sqrt();
        for n in 2..8 {
            assert!(t1(n).unwrap() <= t0(n).unwrap());
            assert!(t1(n).unwrap() >= limit);
        }
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(phi_closed(2, 0.0).unwrap(), 2.0);
        assert!((phi_closed(2, 0.5).unwrap() - 8.0 / 3.0).abs() < 1e-15);
        assert_eq!(phi_closed(3, 0.0).unwrap(), 4.0);
        assert_eq!(phi_closed(3, 0.4), Err(Error::OutsideClosedForm));
    }

    #[test]
    fn n1_is_analytic() {
        for t in [-3.0, -1.0, -0.5, 0.0, 0.25, 1.0, 2.0, 7.5] {
            let e = phi_numeric(1, t, 64).unwrap();
            assert!((e.value - phi1(t)).abs() < 1e-12, "t = {t}");
        }
        assert_eq!(phi_numeric(2, 0.1, 63), Err(Error::BudgetTooSmall));
    }

    #[test]
    fn numeric_matches_closed_form() {
        let e = phi_numeric(2, 0.0, 1 << 16).unwrap();
        assert!((e.value - 2.0).abs() < 1e-3);
        let e = phi_numeric(3, 0.25, 1 << 16).unwrap();
        let c = phi_closed(3, 0.25).unwrap();
        assert!((e.value - c).abs() <= e.abs_error, "{e:?} vs {c}");
    }

    #[test]
    fn jacobian_examples() {
        let (l, r) = jacobian_identity_check(&[1.0], 0.0, 1.0).unwrap();
        assert!((l - 1.0).abs() < 1e-12 && (r - 1.0).abs() < 1e-12);
        let (l, r) = jacobian_identity_check(&[1.0, 1.0], 1.0, -1.0).unwrap();
        assert!(l.abs() < 1e-12 && r == 0.0);
    }

    #[test]
    fn integrator_n1() {
        let it = PhiIntegrator::new(1, 64).unwrap();
        assert!((it.gamma() - 4.0).abs() < 1e-13);
        assert!((it.distribution(1.0).unwrap() - 0.75).abs() < 1e-13);
        assert!((it.distribution(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((it.distribution(f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
        let mt = main_term(10, &HalfOpenInterval::real_line(), &it).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((mt - 1200.0 / pi2).abs() < 1e-9);
    }
}
