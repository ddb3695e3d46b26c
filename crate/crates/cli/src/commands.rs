use algcensus::census::{
    algebraic_sequence, envelope_limit, phi_count_with, sequence_count_in, within_envelope,
    CensusOptions, CensusQuery,
};
use algcensus::density::{
    closed_form_radius, phi, phi_closed, phi_numeric, phi_sphere, two_root_measure_mc,
    DensityEstimate, PhiIntegrator,
};
use algcensus::farey::{
    a1_relation_check, discrepancy, extremal_gap_ratio, farey_count, walfisz_normalized,
};
use algcensus::gaps::{nearest_algebraic, outer_exclusion_check, GapProbe};
use algcensus::lattice::{lattice_report, measure_estimate, Region};
use algcensus::report::{fit_loglog, remainder_scale, SweepSummary};
use algcensus::HalfOpenInterval;
use clap::Args;
use serde::Serialize;
use serde_json::json;

use crate::output::{float, Report, Table};
use crate::CliError;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn parse_interval(s: &str) -> Result<HalfOpenInterval, CliError> {
    s.parse().map_err(|e: algcensus::Error| invalid(e.to_string()))
}

fn check_envelope(n: usize, q: u64, force: bool) -> Result<(), CliError> {
    if n == 0 || q == 0 {
        return Err(invalid("degree and height must be at least 1"));
    }
    if !force && !within_envelope(n, q) {
        return Err(CliError::Envelope(format!(
            "height {q} exceeds the desk-scale limit {} for degree {n}; pass --force to run anyway",
            envelope_limit(n)
        )));
    }
    Ok(())
}

/// `"5..40"`, `"3,5,8"` or a mix such as `"5..10,20"`.
fn parse_heights(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || invalid(format!("bad height list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(bad());
    }
    Ok(out)
}

/// `"t0:t1:step"` as an inclusive grid.
fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || invalid(format!("grid must look like \"start:stop:step\", got {s:?}"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if !(a.is_finite() && b.is_finite() && step > 0.0 && step.is_finite() && a <= b) {
        return Err(bad());
    }
    let k = ((b - a) / step + 1e-9).floor() as usize;
    if k > 1_000_000 {
        return Err(invalid("grid has more than a million points"));
    }
    Ok((0..=k).map(|i| a + i as f64 * step).collect())
}

fn parse_rational(s: &str) -> Result<(i64, u64), CliError> {
    let bad = || invalid(format!("expected a reduced fraction a/b, got {s:?}"));
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<u64>().map_err(|_| bad())?),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    Ok((a, b))
}

fn key_value(rows: Vec<(&str, String)>) -> Table {
    let mut t = Table::new(&["key", "value"]);
    for (k, v) in rows {
        t.push(vec![k.to_string(), v]);
    }
    t
}

#[derive(Args, Debug, Serialize)]
pub struct CensusArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long)]
    pub height: u64,
    /// Half-open interval "lo,hi"; use inf and -inf for unbounded ends.
    #[arg(long, default_value = "-inf,inf", allow_hyphen_values = true)]
    pub interval: String,
    /// Split the interval into this many equal bins.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Report how many polynomials contribute k roots.
    #[arg(long)]
    pub by_k: bool,
    #[arg(long)]
    pub count_reducible: bool,
    /// Enumerate both members of each p(x), p(-x) pair.
    #[arg(long)]
    pub no_pairing: bool,
    /// Quadrature budget for the main term.
    #[arg(long, default_value_t = 1 << 14)]
    pub budget: usize,
    /// Run outside the desk-scale envelope.
    #[arg(long)]
    pub force: bool,
}

#[derive(Serialize)]
struct BinRow {
    bin: HalfOpenInterval,
    count: u64,
    main_term: f64,
    residual: f64,
    residual_over_qn: f64,
}

pub fn census(a: &CensusArgs) -> Result<Report, CliError> {
    let interval = parse_interval(&a.interval)?;
    check_envelope(a.degree, a.height, a.force)?;
    let mut query = CensusQuery::new(a.degree, a.height, interval.clone());
    if let Some(k) = a.bins {
        if k == 0 {
            return Err(invalid("bins must be positive"));
        }
        query = query.with_breakpoints(interval.uniform_breakpoints(k)?);
    }
    let integrator = PhiIntegrator::new(a.degree, a.budget)?;
    let opts = CensusOptions { pairing: !a.no_pairing, count_reducible: a.count_reducible, ..Default::default() };
    let report = phi_count_with(&query, &opts)?;
    let qn = (a.height as f64).powi(a.degree as i32);
    let mut rows = Vec::new();
    let mut table = Table::new(&["bin_lo", "bin_hi", "count", "main_term", "residual", "residual_over_Qn"]);
    for (bin, &count) in report.bins.iter().zip(&report.per_bin) {
        let main = algcensus::density::main_term(a.height, bin, &integrator)?;
        let row = BinRow {
            bin: bin.clone(),
            count,
            main_term: main,
            residual: count as f64 - main,
            residual_over_qn: (count as f64 - main) / qn,
        };
        table.push(vec![
            bin.lo().to_string(),
            bin.hi().to_string(),
            count.to_string(),
            float(row.main_term),
            float(row.residual),
            float(row.residual_over_qn),
        ]);
        rows.push(row);
    }
    let mut tables = vec![table];
    if a.by_k || a.count_reducible {
        let mut extra = vec![("phi", report.phi.to_string()), ("prime_polys", report.prime_polys.to_string())];
        let by_k: Vec<(String, String)> = if a.by_k {
            report.by_k.iter().map(|(k, v)| (format!("polys_with_{k}_roots"), v.to_string())).collect()
        } else {
            Vec::new()
        };
        if let Some(r) = &report.reducible {
            extra.push(("reducible", r.count.to_string()));
            extra.push(("reducible_convention", r.convention.to_string()));
        }
        let mut t = key_value(extra);
        for (k, v) in by_k {
            t.push(vec![k, v]);
        }
        tables.push(t);
    }
    let results = json!({ "census": report, "bins": rows });
    Ok(Report::with_tables("census", a, &results, tables))
}

#[derive(Args, Debug, Serialize)]
pub struct DensityArgs {
    #[arg(long)]
    pub degree: usize,
    /// Evaluation points "start:stop:step".
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, default_value_t = 1 << 16)]
    pub budget: usize,
    /// Add the density for the Euclidean height.
    #[arg(long)]
    pub sphere: bool,
}

#[derive(Serialize)]
struct DensityRow {
    t: f64,
    #[serde(flatten)]
    estimate: DensityEstimate,
    closed_form: Option<f64>,
    sphere: Option<DensityEstimate>,
}

pub fn density(a: &DensityArgs) -> Result<Report, CliError> {
    let grid = parse_grid(&a.grid)?;
    if a.degree == 0 {
        return Err(invalid("degree must be at least 1"));
    }
    let radius = closed_form_radius(a.degree)?;
    let mut header = vec!["t", "value", "abs_error", "method", "closed_form"];
    if a.sphere {
        header.push("sphere");
    }
    let mut table = Table::new(&header);
    let mut rows = Vec::with_capacity(grid.len());
    for t in grid {
        let estimate = if a.degree == 1 { phi(1, t, a.budget)? } else { phi_numeric(a.degree, t, a.budget)? };
        let closed_form = (t.abs() <= radius).then(|| phi_closed(a.degree, t)).transpose()?;
        let sphere = a.sphere.then(|| phi_sphere(a.degree, t));
        let mut cells = vec![
            float(t),
            float(estimate.value),
            float(estimate.abs_error),
            estimate.method.as_str().to_string(),
            closed_form.map(float).unwrap_or_default(),
        ];
        if let Some(s) = &sphere {
            cells.push(float(s.value));
        }
        table.push(cells);
        rows.push(DensityRow { t, estimate, closed_form, sphere });
    }
    Ok(Report::new("density", a, &rows, table))
}

#[derive(Args, Debug, Serialize)]
pub struct CompareArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long)]
    pub height: u64,
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
    #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
    pub interval: String,
    #[arg(long, default_value_t = 1 << 14)]
    pub budget: usize,
    #[arg(long)]
    pub force: bool,
}

#[derive(Serialize)]
struct CompareRow {
    bin: HalfOpenInterval,
    count: u64,
    main_term: f64,
    residual: f64,
    relative_deviation: f64,
    normalized_residual: f64,
}

pub fn compare(a: &CompareArgs) -> Result<Report, CliError> {
    let interval = parse_interval(&a.interval)?;
    check_envelope(a.degree, a.height, a.force)?;
    if a.bins == 0 {
        return Err(invalid("bins must be positive"));
    }
    if a.height < 2 {
        return Err(invalid("compare needs height at least 2"));
    }
    let query = CensusQuery::new(a.degree, a.height, interval.clone())
        .with_breakpoints(interval.uniform_breakpoints(a.bins)?);
    let integrator = PhiIntegrator::new(a.degree, a.budget)?;
    let report = phi_count_with(&query, &CensusOptions::default())?;
    let scale = remainder_scale(a.degree, a.height);
    let mut table = Table::new(&[
        "bin_lo",
        "bin_hi",
        "count",
        "main_term",
        "residual",
        "relative_deviation",
        "normalized_residual",
    ]);
    let mut rows = Vec::new();
    for (bin, &count) in report.bins.iter().zip(&report.per_bin) {
        let main = algcensus::density::main_term(a.height, bin, &integrator)?;
        let residual = count as f64 - main;
        let row = CompareRow {
            bin: bin.clone(),
            count,
            main_term: main,
            residual,
            relative_deviation: residual / main,
            normalized_residual: residual / scale,
        };
        table.push(vec![
            bin.lo().to_string(),
            bin.hi().to_string(),
            count.to_string(),
            float(main),
            float(residual),
            float(row.relative_deviation),
            float(row.normalized_residual),
        ]);
        rows.push(row);
    }
    let total_main = algcensus::density::main_term(a.height, &interval, &integrator)?;
    let total_residual = report.phi as f64 - total_main;
    let max_normalized = rows.iter().map(|r| r.normalized_residual.abs()).fold(0.0, f64::max);
    table.push(vec![
        "summary".into(),
        String::new(),
        report.phi.to_string(),
        float(total_main),
        float(total_residual),
        float(total_residual / total_main),
        float(max_normalized),
    ]);
    let results = json!({
        "bins": rows,
        "phi": report.phi,
        "main_term": total_main,
        "residual": total_residual,
        "max_abs_normalized_residual": max_normalized,
    });
    Ok(Report::new("compare", a, &results, table))
}

#[derive(Args, Debug, Serialize)]
pub struct FareyArgs {
    #[arg(long)]
    pub height: u64,
    /// Exact discrepancy of the sequence.
    #[arg(long)]
    pub discrepancy: bool,
    /// Extremal deviation over Farey-endpoint intervals, times Q.
    #[arg(long)]
    pub extremal: bool,
}

pub fn farey(a: &FareyArgs) -> Result<Report, CliError> {
    if a.height == 0 {
        return Err(invalid("height must be at least 1"));
    }
    if a.extremal && a.height < 2 {
        return Err(invalid("--extremal needs height at least 2"));
    }
    let count = farey_count(a.height)?;
    let (phi1, rhs) = a1_relation_check(a.height)?;
    let mut rows = vec![
        ("height", a.height.to_string()),
        ("farey_count", count.to_string()),
        ("phi1_real_line", phi1.to_string()),
        ("four_classical_count_minus_five", rhs.to_string()),
    ];
    if a.height >= 3 {
        rows.push(("walfisz_normalized", float(walfisz_normalized(a.height, count))));
    }
    if a.discrepancy {
        rows.push(("discrepancy", discrepancy(a.height)?.to_string()));
    }
    if a.extremal {
        rows.push(("extremal_ratio", float(extremal_gap_ratio(a.height)?)));
    }
    let results: serde_json::Map<String, serde_json::Value> =
        rows.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    Ok(Report::new("farey", a, &results, key_value(rows)))
}

#[derive(Args, Debug, Serialize)]
pub struct LatticeArgs {
    /// Region description in JSON.
    #[arg(long)]
    pub region: std::path::PathBuf,
    #[arg(long)]
    pub height: u64,
    /// Lattice-rule nodes for the volume estimate.
    #[arg(long, default_value_t = 1 << 18)]
    pub samples: usize,
}

pub fn lattice(a: &LatticeArgs) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(&a.region)
        .map_err(|e| invalid(format!("cannot read {}: {e}", a.region.display())))?;
    let region = Region::from_json(&text)?;
    if a.height == 0 {
        return Err(invalid("height must be at least 1"));
    }
    let measure = measure_estimate(&region, a.samples)?;
    let r = lattice_report(&region, a.height, measure)?;
    let mut table = Table::new(&["q", "total_points", "primitive_points", "main_term", "measure_estimate"]);
    table.push(vec![
        r.q.to_string(),
        r.total_points.to_string(),
        r.primitive_points.to_string(),
        float(r.main_term),
        float(r.measure_estimate),
    ]);
    Ok(Report::new("lattice", a, &r, table))
}

#[derive(Args, Debug, Serialize)]
pub struct GapsArgs {
    #[arg(long)]
    pub degree: usize,
    /// Centre of the probe as a reduced fraction a/b.
    #[arg(long, allow_hyphen_values = true)]
    pub rational: String,
    /// Heights such as "5..40" or "3,5,8".
    #[arg(long)]
    pub heights: String,
    /// Also check that all roots lie inside (-Q-1, Q+1).
    #[arg(long)]
    pub outer: bool,
    #[arg(long)]
    pub force: bool,
}

#[derive(Serialize)]
struct GapsResults {
    probes: Vec<GapProbe>,
    outer_exclusion: Option<Vec<bool>>,
    slope_fit: Option<SweepSummary>,
    c_min: Option<f64>,
}

pub fn gaps(a: &GapsArgs) -> Result<Report, CliError> {
    let (num, den) = parse_rational(&a.rational)?;
    let qs = parse_heights(&a.heights)?;
    if a.degree < 2 {
        return Err(invalid("gap probes need degree at least 2"));
    }
    for &q in &qs {
        check_envelope(a.degree, q, a.force)?;
    }
    let probes: Vec<GapProbe> =
        qs.iter().map(|&q| nearest_algebraic(a.degree, q, num, den)).collect::<Result<_, _>>()?;
    let outer = if a.outer {
        Some(qs.iter().map(|&q| outer_exclusion_check(a.degree, q)).collect::<Result<Vec<_>, _>>()?)
    } else {
        None
    };
    let mut header = vec![
        "q",
        "nearest_distance",
        "nearest_distance_upper",
        "nearest_distance_approx",
        "implied_constant",
        "nearest_poly",
    ];
    if a.outer {
        header.push("outer_exclusion");
    }
    let mut table = Table::new(&header);
    for (i, p) in probes.iter().enumerate() {
        let mut row = vec![
            p.q.to_string(),
            p.nearest_distance.to_string(),
            p.nearest_distance_upper.to_string(),
            float(p.distance_f64()),
            float(p.implied_constant),
            p.nearest_poly.to_string(),
        ];
        if let Some(o) = &outer {
            row.push(o[i].to_string());
        }
        table.push(row);
    }
    let points: Vec<(f64, f64)> = probes.iter().map(|p| (p.q as f64, p.distance_f64())).collect();
    let results = GapsResults {
        slope_fit: fit_loglog("Q", &points).ok(),
        c_min: algcensus::gaps::c_min(&probes),
        probes,
        outer_exclusion: outer,
    };
    Ok(Report::new("gaps", a, &results, table))
}

#[derive(Args, Debug, Serialize)]
pub struct SequenceArgs {
    #[arg(long)]
    pub degree: usize,
    /// Number of leading terms of the sequence.
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value = "-inf,inf", allow_hyphen_values = true)]
    pub interval: String,
    #[arg(long, default_value_t = 1 << 14)]
    pub budget: usize,
    /// Print the sequence terms instead of the summary.
    #[arg(long)]
    pub list: bool,
}

pub fn sequence(a: &SequenceArgs) -> Result<Report, CliError> {
    let interval = parse_interval(&a.interval)?;
    if a.degree == 0 || a.count == 0 {
        return Err(invalid("degree and count must be at least 1"));
    }
    if a.count > 1_000_000 {
        return Err(invalid("count above one million is out of scope"));
    }
    let integrator = PhiIntegrator::new(a.degree, a.budget)?;
    let seq = algebraic_sequence(a.degree, a.count)?;
    let inside = sequence_count_in(&seq, &interval);
    let ratio = inside as f64 / a.count as f64;
    let rho_integral = integrator.integral_over(&interval)?.value / integrator.gamma();
    let summary = json!({
        "in_interval": inside,
        "ratio": ratio,
        "rho_integral": rho_integral,
        "max_height": seq.last().map(|e| e.height),
    });
    let table = if a.list {
        let mut t = Table::new(&["index", "lo", "hi", "approx", "height", "minimal_poly"]);
        for (i, e) in seq.iter().enumerate() {
            t.push(vec![
                (i + 1).to_string(),
                e.value.lo().to_string(),
                e.value.hi().to_string(),
                float(e.approx),
                e.height.to_string(),
                e.minimal_poly.to_string(),
            ]);
        }
        t
    } else {
        key_value(vec![
            ("count", a.count.to_string()),
            ("in_interval", inside.to_string()),
            ("ratio", float(ratio)),
            ("rho_integral", float(rho_integral)),
        ])
    };
    let results = if a.list { json!({ "summary": summary, "sequence": seq }) } else { summary };
    Ok(Report::new("sequence", a, &results, table))
}

#[derive(Args, Debug, Serialize)]
pub struct MeasureArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub interval: String,
    #[arg(long, default_value_t = 1 << 20)]
    pub samples: u64,
}

pub fn measure(a: &MeasureArgs, seed: u64) -> Result<Report, CliError> {
    let interval = parse_interval(&a.interval)?;
    let est = two_root_measure_mc(a.degree, &interval, a.samples, seed)?;
    let table = key_value(vec![
        ("estimate", float(est.estimate)),
        ("stderr", float(est.stderr)),
        ("hits", est.hits.to_string()),
        ("samples", est.samples.to_string()),
    ]);
    let params = json!({ "args": a, "seed": seed });
    Ok(Report::new("measure", &params, &est, table))
}
