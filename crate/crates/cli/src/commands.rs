//! The four subcommands.

use crate::args::{CommonArgs, Method, PointArgs, TableArgs};
use crate::format::{complex12, sig12, write_csv, CsvRow};
use crate::methods::{evaluate, Point, Settings};
use crate::{max_evals_from_env, solver_settings, CliError, Report};
use hlgf_core::{
    build_reduced_onsite_basis, green, integrate_finite, levin_integrate, time_green, Complex64, GreenQuery,
    LatticeModel, QuadConfig, RegimeParams, REFERENCE_VALUES,
};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write;

/// Reference values must be reproduced to this absolute accuracy.
pub const TABLE_TOLERANCE: f64 = 1e-9;
/// Evaluation cap of the naive time-integral baseline in `bench`.
pub const NAIVE_BUDGET: usize = 50_000;
pub const NAIVE_T_MAX: [f64; 5] = [100.0, 300.0, 1000.0, 3000.0, 10000.0];

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Model and lattice vector from `-d`, `--omegas` and `--r`, which must agree
/// on the dimension.
pub fn model_and_site(a: &PointArgs) -> Result<(LatticeModel, Vec<i32>), CliError> {
    let lens: Vec<(&str, usize)> = [
        ("-d", a.dim),
        ("--omegas", a.omegas.as_ref().map(Vec::len)),
        ("--r", a.r.as_ref().map(Vec::len)),
    ]
    .into_iter()
    .filter_map(|(name, n)| n.map(|n| (name, n)))
    .collect();
    let d = lens
        .iter()
        .map(|x| x.1)
        .max()
        .ok_or_else(|| usage("the dimension is unknown: give -d, --r or --omegas"))?;
    if let Some((name, n)) = lens.iter().find(|x| x.1 != d) {
        return Err(usage(format!(
            "{name} implies dimension {n} but another flag implies {d}"
        )));
    }
    let omegas = a.omegas.clone().unwrap_or_else(|| vec![1.0; d]);
    let model = LatticeModel::new(omegas).map_err(|e| usage(e.to_string()))?;
    Ok((model, a.r.clone().unwrap_or_else(|| vec![0; d])))
}

fn settings(a: &PointArgs) -> Result<Settings, CliError> {
    let (params, quad) = solver_settings(&a.common)?;
    if a.method == Method::Bz && !(a.eta >= 0.0) {
        return Err(usage(format!("--eta must be non-negative, got {}", a.eta)));
    }
    Ok(Settings {
        method: a.method,
        params,
        quad,
        eta: a.eta,
        t_max: a.t_max,
    })
}

pub fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || usage(format!("--omega-range expects MIN:MAX:STEPS, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if steps == 0 || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { hi } else { lo + i as f64 * h })
        .collect())
}

#[derive(Debug, Serialize)]
struct EvalRecord<'a> {
    omega: f64,
    r: &'a [i32],
    re: f64,
    im: f64,
    regime: &'static str,
    method: &'static str,
    evals: usize,
    err_estimate: f64,
}

pub fn eval(a: &PointArgs) -> Result<Report, CliError> {
    let (model, r) = model_and_site(a)?;
    let omega = a.omega.ok_or_else(|| usage("eval needs --omega"))?;
    let q = GreenQuery::new(model, r, omega).map_err(|e| usage(e.to_string()))?;
    let s = settings(a)?;
    let p = evaluate(&q, &s)?;
    let text = if a.common.json {
        let rec = EvalRecord {
            omega,
            r: &q.r,
            re: p.value.re,
            im: p.value.im,
            regime: p.regime.as_str(),
            method: s.method.as_str(),
            evals: p.evals,
            err_estimate: p.err,
        };
        serde_json::to_string(&rec).expect("record serializes") + "\n"
    } else {
        let r: Vec<String> = q.r.iter().map(i32::to_string).collect();
        let rows = [
            ("omega", sig12(omega)),
            ("r", r.join(",")),
            ("re", sig12(p.value.re)),
            ("im", sig12(p.value.im)),
            ("regime", p.regime.as_str().to_string()),
            ("method", s.method.as_str().to_string()),
            ("evals", p.evals.to_string()),
            ("err", format!("{:.2e}", p.err)),
        ];
        rows.iter().map(|(k, v)| format!("{k:<8}{v}\n")).collect()
    };
    Ok(Report::ok(text))
}

fn row(omega: f64, p: &Result<Point, CliError>, q: &GreenQuery, s: &Settings) -> CsvRow {
    match p {
        Ok(p) => CsvRow {
            omega,
            re: p.value.re,
            im: p.value.im,
            regime: p.regime.as_str().to_string(),
            evals: p.evals,
            err: p.err,
        },
        Err(_) => CsvRow {
            omega,
            re: f64::NAN,
            im: f64::NAN,
            regime: hlgf_core::classify(q, &s.params).as_str().to_string(),
            evals: 0,
            err: f64::NAN,
        },
    }
}

pub fn sweep(a: &PointArgs) -> Result<Report, CliError> {
    let (model, r) = model_and_site(a)?;
    let omegas = match (&a.omega_range, a.omega) {
        (Some(spec), _) => parse_range(spec)?,
        (None, Some(w)) => vec![w],
        (None, None) => return Err(usage("sweep needs --omega-range MIN:MAX:STEPS")),
    };
    let s = settings(a)?;
    let queries: Vec<GreenQuery> = omegas
        .iter()
        .map(|&w| GreenQuery::new(model.clone(), r.clone(), w).map_err(|e| usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    let results: Vec<Result<Point, CliError>> = queries.par_iter().map(|q| evaluate(q, &s)).collect();
    let mut rows = Vec::with_capacity(results.len());
    for (q, p) in queries.iter().zip(&results) {
        if let Err(e) = p {
            eprintln!("warning: ω = {}: {e}", q.omega);
        }
        rows.push(row(q.omega, p, q, &s));
    }
    let text = if a.common.json {
        serde_json::to_string(&rows).expect("rows serialize") + "\n"
    } else {
        write_csv(&rows).map_err(|e| CliError::Numerical(e.to_string()))?
    };
    Ok(Report::ok(text))
}

#[derive(Debug, Serialize)]
struct TableEntry {
    name: String,
    d: usize,
    computed: Complex64,
    reference: Complex64,
    delta: f64,
}

pub fn table(a: &TableArgs) -> Result<Report, CliError> {
    let (params, quad) = solver_settings(&a.common)?;
    let scale = 1.0 + a.perturb_omega;
    let entries: Vec<Result<TableEntry, CliError>> = REFERENCE_VALUES
        .par_iter()
        .map(|rv| {
            let model = LatticeModel::isotropic(rv.d, scale).map_err(|e| usage(e.to_string()))?;
            let q = GreenQuery::new(model, rv.r.to_vec(), rv.omega).map_err(|e| usage(e.to_string()))?;
            let computed = green(&q, &params, &quad)?.value;
            Ok(TableEntry {
                name: rv.name(),
                d: rv.d,
                computed,
                reference: rv.value(),
                delta: (computed - rv.value()).norm(),
            })
        })
        .collect();
    let entries: Vec<TableEntry> = entries.into_iter().collect::<Result<_, _>>()?;
    let failed = entries.iter().filter(|e| !(e.delta <= TABLE_TOLERANCE)).count();
    let text = if a.common.json {
        serde_json::to_string(&entries).expect("entries serialize") + "\n"
    } else {
        let mut t = String::new();
        writeln!(
            t,
            "{:<12}{:<3}{:<36}{:<36}|delta|",
            "name", "d", "computed", "reference"
        )
        .unwrap();
        for e in &entries {
            writeln!(
                t,
                "{:<12}{:<3}{:<36}{:<36}{:.1e}",
                e.name,
                e.d,
                complex12(e.computed.re, e.computed.im),
                complex12(e.reference.re, e.reference.im),
                e.delta
            )
            .unwrap();
        }
        writeln!(
            t,
            "{}/{} within {TABLE_TOLERANCE:e}",
            entries.len() - failed,
            entries.len()
        )
        .unwrap();
        t
    };
    let status = if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "{failed} reference values differ by more than {TABLE_TOLERANCE:e}"
        )))
    };
    Ok(Report { text, status })
}

#[derive(Debug, Serialize)]
struct BenchReport {
    contour: ContourBench,
    naive: NaiveBench,
    levin: Vec<LevinBench>,
}

#[derive(Debug, Serialize)]
struct ContourBench {
    split_t: f64,
    value: Complex64,
    g1_evals: usize,
    g2_evals: usize,
    total_evals: usize,
    compare_split_t: f64,
    split_difference: f64,
}

#[derive(Debug, Serialize)]
struct NaiveBench {
    budget: usize,
    best_t_max: f64,
    best_rel_error: f64,
    evals: usize,
}

#[derive(Debug, Serialize)]
struct LevinBench {
    m: usize,
    abs_error: f64,
}

pub fn bench(common: &CommonArgs) -> Result<Report, CliError> {
    let (params, quad) = solver_settings(common)?;
    let q = GreenQuery::new(LatticeModel::isotropic(4, 1.0)?, vec![1, 2, 2, 3], 1.0)?;
    let main = green(&q, &params, &quad)?;
    let other_t = if params.split_t == 2.0 { 3.0 } else { 2.0 };
    let other = green(
        &q,
        &RegimeParams {
            split_t: other_t,
            ..params
        },
        &quad,
    )?;
    let g1 = main.g1.map_or(0, |g| g.evals);
    let contour = ContourBench {
        split_t: params.split_t,
        value: main.value,
        g1_evals: g1,
        g2_evals: main.g2.evals,
        total_evals: main.evals,
        compare_split_t: other_t,
        split_difference: (main.value - other.value).norm(),
    };

    let budget = max_evals_from_env()?.map_or(NAIVE_BUDGET, |cap| cap.min(NAIVE_BUDGET));
    let naive_cfg = QuadConfig {
        max_evals: budget,
        ..quad
    };
    let mut naive = NaiveBench {
        budget,
        best_t_max: f64::NAN,
        best_rel_error: f64::INFINITY,
        evals: 0,
    };
    for t_max in NAIVE_T_MAX {
        let t = time_green(&q, t_max, &naive_cfg)?;
        let rel = (t.value - main.value).norm() / main.value.norm();
        if rel < naive.best_rel_error {
            naive = NaiveBench {
                best_t_max: t_max,
                best_rel_error: rel,
                evals: t.evals,
                ..naive
            };
        }
    }

    // ∫_10^100 e^{1.5it} J_0(t)^4 dt
    let onsite = GreenQuery::new(LatticeModel::isotropic(4, 1.0)?, vec![0; 4], 1.5)?;
    let reference = integrate_finite(
        |t| Complex64::from_polar(1.0, 1.5 * t) * hlgf_core::specfun::bessel_j(0, t).unwrap_or(f64::NAN).powi(4),
        10.0,
        100.0,
        &QuadConfig::default(),
    )
    .map_err(|e| CliError::Numerical(e.to_string()))?
    .value;
    let mut levin = Vec::new();
    for m in [11, 21] {
        let p = build_reduced_onsite_basis(&onsite, 10.0, 100.0)?.scale_forcing(Complex64::i());
        levin.push(LevinBench {
            m,
            abs_error: (levin_integrate(&p, m)? - reference).norm(),
        });
    }

    let report = BenchReport { contour, naive, levin };
    let text = if common.json {
        serde_json::to_string(&report).expect("report serializes") + "\n"
    } else {
        let c = &report.contour;
        let n = &report.naive;
        let mut t = String::new();
        writeln!(t, "problem  d=4 Ω=1 ω=1 r=(1,2,2,3)").unwrap();
        writeln!(t, "contour  G = {}", complex12(c.value.re, c.value.im)).unwrap();
        writeln!(
            t,
            "contour  T={} g1 {} evals, g2 {} evals, total {}",
            c.split_t, c.g1_evals, c.g2_evals, c.total_evals
        )
        .unwrap();
        writeln!(
            t,
            "contour  |G(T={}) - G(T={})| = {:.1e}",
            c.split_t, c.compare_split_t, c.split_difference
        )
        .unwrap();
        writeln!(
            t,
            "naive    best relative error {:.2e} at t_max={} ({} evals, cap {})",
            n.best_rel_error, n.best_t_max, n.evals, n.budget
        )
        .unwrap();
        for l in &report.levin {
            writeln!(t, "levin    m={} absolute error {:.2e}", l.m, l.abs_error).unwrap();
        }
        t
    };
    Ok(Report::ok(text))
}
