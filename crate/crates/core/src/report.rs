//! Scaling summaries of parameter sweeps.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::census::{phi_count, CensusQuery};
use crate::density::{main_term, PhiIntegrator};
use crate::error::{Error, Result};
use crate::gaps::gap_interval;
use crate::rational::HalfOpenInterval;

/// Exponent of `ln Q` in the remainder: 1 for `n = 2`, else 0.
pub fn ell(n: usize) -> i32 {
    (n == 2) as i32
}

/// `Q^n (ln Q)^ℓ(n)`.
pub fn remainder_scale(n: usize, q: u64) -> f64 {
    let qf = q as f64;
    qf.powi(n as i32) * qf.ln().powi(ell(n))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub parameter: String,
    pub points: Vec<(f64, f64)>,
    /// Least-squares slope of `ln y` against `ln x`, when defined.
    pub fitted_slope: Option<f64>,
    /// 95% confidence interval for the slope.
    pub slope_ci: Option<(f64, f64)>,
    /// `(min y, max y)`.
    pub band: (f64, f64),
}

fn band(points: &[(f64, f64)]) -> (f64, f64) {
    points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, y)| (lo.min(y), hi.max(y)))
}

/// Ordinary least squares on `(ln x, ln y)`; at least four points, all
/// coordinates positive.
pub fn fit_loglog(parameter: &str, points: &[(f64, f64)]) -> Result<SweepSummary> {
    if points.len() < 4 {
        return Err(Error::InvalidArgument("a slope fit needs at least 4 points".into()));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::InvalidArgument("log-log fit needs positive data".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("log-log fit needs distinct x values".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = logs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let se = (sse / (k - 2.0) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, k - 2.0)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?
        .inverse_cdf(0.975);
    Ok(SweepSummary {
        parameter: parameter.to_string(),
        points: points.to_vec(),
        fitted_slope: Some(slope),
        slope_ci: Some((slope - t * se, slope + t * se)),
        band: band(points),
    })
}

fn summary(parameter: &str, points: Vec<(f64, f64)>) -> SweepSummary {
    let fit = fit_loglog(parameter, &points).ok();
    SweepSummary {
        parameter: parameter.to_string(),
        fitted_slope: fit.as_ref().and_then(|f| f.fitted_slope),
        slope_ci: fit.as_ref().and_then(|f| f.slope_ci),
        band: band(&points),
        points,
    }
}

/// `(Φ_n(Q, I) - main term) / (Q^n (ln Q)^ℓ(n))` over `qs`.
pub fn remainder_band(
    qs: &[u64],
    interval: &HalfOpenInterval,
    integrator: &PhiIntegrator,
) -> Result<SweepSummary> {
    let n = integrator.degree();
    let mut points = Vec::with_capacity(qs.len());
    for &q in qs {
        if q < 2 {
            return Err(Error::InvalidArgument("remainder bands need Q >= 2".into()));
        }
        let phi = phi_count(&CensusQuery::new(n, q, interval.clone()))?.phi as f64;
        let residual = phi - main_term(q, interval, integrator)?;
        points.push((q as f64, residual / remainder_scale(n, q)));
    }
    Ok(summary("Q", points))
}

/// `|Φ_n(Q, I(Q)) - main term| / Q^n` for the empty intervals
/// `I(Q) = (a/b - r, a/b + r]`, `r = c / (2 bⁿ Q)`.
pub fn gap_remainder_band(
    qs: &[u64],
    a: i64,
    b: u64,
    c: f64,
    integrator: &PhiIntegrator,
) -> Result<SweepSummary> {
    let n = integrator.degree();
    let mut points = Vec::with_capacity(qs.len());
    for &q in qs {
        let interval = gap_interval(n, q, a, b, c)?;
        let phi = phi_count(&CensusQuery::new(n, q, interval.clone()))?.phi as f64;
        let residual = phi - main_term(q, &interval, integrator)?;
        points.push((q as f64, residual.abs() / (q as f64).powi(n as i32)));
    }
    Ok(summary("Q", points))
}
