//! Counting density for the Euclidean height.

use statrs::function::gamma::gamma;

use super::{DensityEstimate, Method};

/// Distance from `|t| = 1` below which the series replaces the formula.
pub const SERIES_THRESHOLD: f64 = 1e-3;

/// Coefficients of `1/sinh(x)^2 - 1/x^2` in powers of `x^2`.
const CSCH2: [f64; 4] = [-1.0 / 3.0, 1.0 / 15.0, -2.0 / 189.0, 1.0 / 675.0];

fn prefactor(n: usize) -> f64 {
    std::f64::consts::PI.powf((n as f64 - 1.0) / 2.0) / gamma((n as f64 + 3.0) / 2.0)
}

/// The bracket `1/(t^2-1)^2 - (n+1)^2 t^(2n) / (t^(2n+2)-1)^2` for `t` in
/// `[0, 1)`, evaluated directly.
fn bracket_direct(n: usize, t: f64) -> f64 {
    let a = t * t - 1.0;
    let b = t.powi(2 * n as i32 + 2) - 1.0;
    let m = (n + 1) as f64;
    1.0 / (a * a) - m * m * t.powi(2 * n as i32) / (b * b)
}

/// With `t = e^u` the bracket equals
/// `e^(-2u)/4 (1/sinh(u)^2 - m^2/sinh(mu)^2)`, `m = n + 1`; the poles cancel
/// and the rest is a power series in `u^2`.
fn bracket_series(n: usize, u: f64) -> f64 {
    let m2 = ((n + 1) * (n + 1)) as f64;
    let u2 = u * u;
    let mut d = 0.0;
    let mut upow = 1.0;
    let mut mpow = m2;
    for c in CSCH2 {
        d += c * (1.0 - mpow) * upow;
        upow *= u2;
        mpow *= m2;
    }
    (-2.0 * u).exp() / 4.0 * d
}

/// `φ_n(‖·‖₂; t) = π^((n-1)/2) / Γ((n+3)/2) · sqrt(bracket)`.
pub fn phi_sphere(n: usize, t: f64) -> DensityEstimate {
    let a = t.abs();
    // φ(t) = φ(1/t) / t^2 keeps the evaluation inside [0, 1].
    if a > 1.0 + SERIES_THRESHOLD {
        let e = phi_sphere(n, 1.0 / a);
        return DensityEstimate {
            value: e.value / (a * a),
            ..e
        };
    }
    let (bracket, method) = if (a - 1.0).abs() < SERIES_THRESHOLD {
        (bracket_series(n, a.ln()), Method::SphereSeries)
    } else if a == 0.0 {
        (1.0, Method::SphereFormula)
    } else {
        (bracket_direct(n, a), Method::SphereFormula)
    };
    let value = prefactor(n) * bracket.max(0.0).sqrt();
    DensityEstimate {
        value,
        abs_error: 1e-12 * value.max(1.0),
        method,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_simplifies() {
        for i in -30..=30 {
            let t = i as f64 / 10.0;
            let v = phi_sphere(1, t).value * (1.0 + t * t);
            assert!((v - 1.0).abs() < 1e-12, "t = {t}: {v}");
        }
    }

    #[test]
    fn at_zero_and_one() {
        for n in 1..6 {
            assert!((phi_sphere(n, 0.0).value - prefactor(n)).abs() < 1e-15);
            let at_one = prefactor(n) * ((n * (n + 2)) as f64 / 12.0).sqrt();
            assert!((phi_sphere(n, 1.0).value - at_one).abs() < 1e-14);
        }
    }

    #[test]
    fn series_meets_formula_at_threshold() {
        for n in 1..6 {
            for t in [1.0 - SERIES_THRESHOLD, 1.0 + SERIES_THRESHOLD] {
                let s = prefactor(n) * bracket_series(n, f64::ln(t)).sqrt();
                let t_in = if t > 1.0 { 1.0 / t } else { t };
                let scale = if t > 1.0 { 1.0 / (t * t) } else { 1.0 };
                let f = scale * prefactor(n) * bracket_direct(n, t_in).sqrt();
                assert!((s - f).abs() < 1e-8, "n = {n}, t = {t}: {s} vs {f}");
            }
        }
    }
}
