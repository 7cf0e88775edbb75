//! Command implementations. Each returns the text destined for stdout;
//! file emission (CSV/SVG) happens as a side effect where requested.

use std::path::Path;

use minkspec_core::Complex64;

use minkspec_core::matrix::det_lu;
use minkspec_core::secular::SecularFunction;
use minkspec_core::{
    analyze_pencil, analyze_spectral_form, critical_a_values, eigenvalue_trajectories,
    jordan_block_size, nu_curves, nu_derivative_check, Analysis,
};

use crate::csv;
use crate::error::CliError;
use crate::output::AnalysisOutput;
use crate::problem::{parse_problem, realize, Problem};
use crate::svg;

pub fn load_problem(path: &str) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path)?;
    let file = parse_problem(&text)?;
    realize(&file)
}

fn analyze_problem(problem: &Problem) -> Result<Analysis, CliError> {
    match problem {
        Problem::Pencil(p) => Ok(analyze_pencil(p)?),
        Problem::Spectral(f) => Ok(analyze_spectral_form(f)?),
    }
}

pub fn cmd_analyze(path: &str, json: bool) -> Result<String, CliError> {
    let problem = load_problem(path)?;
    let analysis = analyze_problem(&problem)?;
    let out = AnalysisOutput::from_analysis(&analysis);
    Ok(if json {
        out.to_json() + "\n"
    } else {
        out.to_text()
    })
}

pub fn cmd_critical_a(path: &str, json: bool) -> Result<String, CliError> {
    let problem = load_problem(path)?;
    let form = problem.spectral_form()?;
    let crits = critical_a_values(&form)?;
    if json {
        let rows: Vec<serde_json::Value> = crits
            .iter()
            .map(|cv| {
                serde_json::json!({
                    "a_star": cv.a_star,
                    "tangency_point": cv.tangency_point,
                    "interval": cv.interval.to_string(),
                    "resulting_case": cv.resulting_case.to_string(),
                })
            })
            .collect();
        return Ok(serde_json::to_string_pretty(&rows).unwrap() + "\n");
    }
    let mut out = format!("{} critical border value(s)\n", crits.len());
    out.push_str("a_star             tangency_point     interval            case\n");
    for cv in &crits {
        out.push_str(&format!(
            "{:<18.12} {:<18.12} {:<19} {}\n",
            cv.a_star,
            cv.tangency_point,
            cv.interval.to_string(),
            cv.resulting_case
        ));
    }
    Ok(out)
}

pub struct SweepArgs {
    pub a_min: f64,
    pub a_max: f64,
    pub steps: usize,
    pub csv: Option<String>,
    pub svg: Option<String>,
    pub json: bool,
}

pub fn cmd_sweep(path: &str, args: &SweepArgs) -> Result<String, CliError> {
    let problem = load_problem(path)?;
    let form = problem.spectral_form()?;
    let points = eigenvalue_trajectories(&form, args.a_min, args.a_max, args.steps)?;
    if let Some(csv_path) = &args.csv {
        std::fs::write(Path::new(csv_path), csv::sweep_csv(&points))?;
    }
    if let Some(svg_path) = &args.svg {
        let rendered = svg::sweep_plot(&points, form.poles()).render();
        std::fs::write(Path::new(svg_path), rendered)?;
    }
    if args.json {
        let rows: Vec<serde_json::Value> = points
            .iter()
            .map(|p| {
                serde_json::json!({
                    "a": p.a,
                    "eigenvalues": p.eigenvalues.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                    "case": p.case_label.to_string(),
                })
            })
            .collect();
        return Ok(serde_json::to_string_pretty(&rows).unwrap() + "\n");
    }
    let mut out = format!(
        "swept a over [{}, {}]: {} sample(s), {} branch(es)\n",
        args.a_min,
        args.a_max,
        points.len(),
        points.first().map_or(0, |p| p.eigenvalues.len())
    );
    if !form.detached().is_empty() {
        out.push_str(&format!(
            "detached eigenvalues, constant in a: {:?}\n",
            form.detached()
        ));
    }
    // case segments along the sweep
    let mut segments: Vec<(String, f64, f64)> = Vec::new();
    for p in &points {
        let label = p.case_label.to_string();
        match segments.last_mut() {
            Some((l, _, hi)) if *l == label => *hi = p.a,
            _ => segments.push((label, p.a, p.a)),
        }
    }
    out.push_str("case segments:\n");
    for (label, lo, hi) in segments {
        out.push_str(&format!("  [{lo:.6}, {hi:.6}]  {label}\n"));
    }
    if let Some(p) = &args.csv {
        out.push_str(&format!("csv written to {p}\n"));
    }
    if let Some(p) = &args.svg {
        out.push_str(&format!("svg written to {p}\n"));
    }
    Ok(out)
}

pub struct NuArgs {
    pub center: f64,
    pub window: f64,
    pub samples: usize,
    pub csv: Option<String>,
    pub json: bool,
}

pub fn cmd_nu_curves(path: &str, args: &NuArgs) -> Result<String, CliError> {
    if args.samples < 2 || !(args.window > 0.0) {
        return Err(CliError::Usage(
            "nu-curves needs --samples >= 2 and --window > 0".into(),
        ));
    }
    let problem = load_problem(path)?;
    let pencil = problem.pencil()?;
    let lo = args.center - 0.5 * args.window;
    let grid: Vec<f64> = (0..args.samples)
        .map(|i| lo + args.window * i as f64 / (args.samples - 1) as f64)
        .collect();
    let samples = nu_curves(&pencil, &grid)?;
    if let Some(csv_path) = &args.csv {
        std::fs::write(Path::new(csv_path), csv::nu_csv(&samples))?;
    }
    if args.json {
        let rows: Vec<serde_json::Value> = samples
            .iter()
            .map(|s| serde_json::json!({"lambda": s.lambda, "nu": s.nus, "matching": s.matching}))
            .collect();
        return Ok(serde_json::to_string_pretty(&rows).unwrap() + "\n");
    }
    let mut out = format!(
        "sampled {} ν-curves at {} grid points over [{}, {}]\n",
        samples.first().map_or(0, |s| s.nus.len()),
        samples.len(),
        lo,
        args.center + 0.5 * args.window
    );
    // curve matching is reliable for steps no coarser than min pole gap / 50
    let form = problem.spectral_form()?;
    let min_gap = form
        .poles()
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    let step = args.window / (args.samples - 1) as f64;
    if min_gap.is_finite() && step > min_gap / 50.0 {
        out.push_str(&format!(
            "note: grid step {step:.3e} exceeds min pole gap / 50 = {:.3e}; \
             curve matching may jump at close encounters\n",
            min_gap / 50.0
        ));
    }
    if let Some(p) = &args.csv {
        out.push_str(&format!("csv written to {p}\n"));
    }
    Ok(out)
}

/// Full oracle cross-check suite on one instance. Every line is one check;
/// any failure exits with the numerical-failure code.
pub fn cmd_verify(path: &str) -> Result<String, CliError> {
    let problem = load_problem(path)?;
    let analysis = analyze_problem(&problem)?;
    let form = &analysis.form;
    let secular = SecularFunction::new(form);
    let pencil = problem.pencil()?;
    let (a_matrix, _) = pencil.assemble();
    let n_full = pencil.n();

    let mut report = String::new();
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool, detail: String| {
        report.push_str(&format!(
            "  [{}] {name} ({detail})\n",
            if ok { "ok" } else { "FAIL" }
        ));
        if !ok {
            all_ok = false;
        }
    };

    // 1. solver vs simultaneous-iteration root oracle
    let reduced_eigen = secular.solve_spectrum()?;
    let mut solved: Vec<Complex64> = Vec::new();
    for rec in &reduced_eigen.records {
        for _ in 0..rec.algebraic_multiplicity {
            solved.push(rec.value);
        }
    }
    let oracle = minkspec_core::char_poly_roots_oracle(form)?;
    let gap = greedy_match_distance(&solved, &oracle);
    // multiple roots cost the oracle accuracy ~ eps^(1/size)
    let worst_mult = reduced_eigen
        .records
        .iter()
        .map(|r| r.algebraic_multiplicity)
        .max()
        .unwrap_or(1);
    let root_tol = match worst_mult {
        1 => 1e-8,
        2 => 1e-6,
        _ => 1e-4,
    };
    check(
        "spectrum vs root oracle",
        gap <= root_tol,
        format!("max matched gap {gap:.3e}, bound {root_tol:.0e}"),
    );

    // 2. product-form characteristic polynomial vs dense LU determinant
    let coeffs = form.characteristic_polynomial();
    let spread = form.spread();
    let mut rng_state = 0x9E3779B97F4A7C15u64;
    let mut next_uniform = || {
        rng_state = rng_state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (rng_state >> 11) as f64 / (1u64 << 53) as f64
    };
    let lo = form.poles().last().copied().unwrap_or(0.0) - 2.0 - form.shift().abs();
    let hi = form.poles().first().copied().unwrap_or(0.0) + 2.0 + form.shift().abs();
    let mut det_worst = 0.0f64;
    let reduced_pencil = match &problem {
        Problem::Spectral(_) => pencil.clone(),
        Problem::Pencil(_) => Problem::Spectral(form.clone()).pencil()?,
    };
    let (reduced_a, _) = reduced_pencil.assemble();
    let n_red = reduced_pencil.n();
    for _ in 0..20 {
        let x = lo + (hi - lo) * next_uniform();
        if form
            .poles()
            .iter()
            .any(|&mu| (x - mu).abs() < 1e-3 * spread.max(1.0))
        {
            continue;
        }
        let z = Complex64::new(x, 0.0);
        let mut horner = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            horner = horner * z + Complex64::new(c, 0.0);
        }
        let sign = if n_red % 2 == 0 { 1.0 } else { -1.0 };
        let det = det_lu(&reduced_a.shift_diagonal(z)) * Complex64::new(sign, 0.0);
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * x.abs().powi(k as i32))
            .sum();
        det_worst = det_worst.max((horner - det).norm() / scale.max(1.0));
    }
    check(
        "char poly vs dense determinant at 20 points",
        det_worst <= 1e-9,
        format!("max relative gap {det_worst:.3e}"),
    );

    // 3. ν-curve zeros at the real eigenvalues of A
    let (full_a, full_h) = pencil.assemble();
    let mut nu_worst = 0.0f64;
    for rec in analysis.eigen.records.iter().filter(|r| r.is_real) {
        let v = rec.value.re;
        let vals = hermitian_values(&full_a, &full_h, v)?;
        let min_nu = vals.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
        nu_worst = nu_worst.max(min_nu);
    }
    let nu_bound = 1e-7 * (1.0 + a_matrix.max_norm());
    check(
        "ν-curve vanishes at every real eigenvalue",
        nu_worst <= nu_bound,
        format!("max min|ν| {nu_worst:.3e}, bound {nu_bound:.3e}"),
    );

    // 4. sign characteristic vs ν-curve slopes at margin-simple eigenvalues
    let mut sign_checked = 0usize;
    let mut sign_ok = true;
    let mut sign_detail = String::new();
    for rec in reduced_eigen.records.iter().filter(|r| r.is_real) {
        if rec.algebraic_multiplicity != 1 {
            continue;
        }
        let v = rec.value.re;
        let gp = secular.eval_g_derivatives(v)?.0;
        if (gp - 1.0).abs() <= 0.05 {
            continue;
        }
        let check_result = nu_derivative_check(&reduced_pencil, &secular, v)?;
        let analytic_sign = if gp > 1.0 { 1.0 } else { -1.0 };
        let numeric_sign = check_result.numeric.signum();
        // ν' and g' - 1 share their sign
        if (analytic_sign - numeric_sign).abs() > 0.5 || !check_result.agree {
            sign_ok = false;
            sign_detail = format!(
                "λ = {v}: analytic ν' {:.6}, numeric {:.6}",
                check_result.analytic, check_result.numeric
            );
        }
        sign_checked += 1;
    }
    check(
        "sign rule vs ν-curve slopes",
        sign_ok,
        if sign_ok {
            format!("{sign_checked} margin eigenvalue(s) agree")
        } else {
            sign_detail
        },
    );

    // 5. Jordan rank probe at multiple eigenvalues
    let mut jordan_ok = true;
    let mut jordan_detail = String::from("no multiple eigenvalues");
    for rec in reduced_eigen
        .records
        .iter()
        .filter(|r| r.algebraic_multiplicity > 1)
    {
        let size = jordan_block_size(&reduced_pencil, rec.value, 3);
        if size != Some(rec.jordan_block_size) {
            jordan_ok = false;
        }
        jordan_detail = format!(
            "probe at λ = {} gives size {:?}, solver says {}",
            rec.value, size, rec.jordan_block_size
        );
    }
    check("Jordan structure probe", jordan_ok, jordan_detail);

    // 6. canonical form invariants
    let canonical_ok = analysis.canonical.validate().is_ok();
    let sig = analysis.canonical.signature();
    check(
        "canonical form invariants",
        canonical_ok && sig == (n_full - 1, 1),
        format!("signature ({}, {})", sig.0, sig.1),
    );

    // 7. spectrum union vs dense determinant (covers the detached part)
    let mut claimed: Vec<Complex64> = Vec::new();
    for rec in &analysis.eigen.records {
        for _ in 0..rec.algebraic_multiplicity {
            claimed.push(rec.value);
        }
    }
    let mut union_worst = 0.0f64;
    for _ in 0..12 {
        let x = lo + (hi - lo) * next_uniform();
        let z = Complex64::new(x, 0.0);
        let sign = if n_full % 2 == 0 { 1.0 } else { -1.0 };
        let det = det_lu(&full_a.shift_diagonal(z)) * Complex64::new(sign, 0.0);
        let mut product = Complex64::new(1.0, 0.0);
        for &root in &claimed {
            product *= z - root;
        }
        let scale: f64 = claimed.iter().map(|root| (z - root).norm()).product();
        union_worst = union_worst.max((det - product).norm() / scale.max(1.0));
    }
    check(
        "spectrum union vs det(λI - A)",
        union_worst <= 1e-8,
        format!("max relative gap {union_worst:.3e}"),
    );

    let verdict = if all_ok { "PASS" } else { "FAIL" };
    let full = format!("verify: {path}\n{report}verify: {verdict}\n");
    if all_ok {
        Ok(full)
    } else {
        Err(CliError::Verify(full))
    }
}

fn hermitian_values(
    a: &minkspec_core::CMatrix,
    h: &[f64],
    lambda: f64,
) -> Result<Vec<f64>, CliError> {
    let n = h.len();
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = -Complex64::new(h[i], 0.0) * a[(i, j)];
            if i == j {
                v += Complex64::new(lambda * h[i], 0.0);
            }
            rows[i][j] = v;
        }
    }
    let herm = minkspec_core::HermitianMatrix::new(&rows)?;
    let eig = minkspec_core::hermitian_eigendecomposition(&herm)?;
    Ok(eig.values)
}

fn greedy_match_distance(xs: &[Complex64], ys: &[Complex64]) -> f64 {
    if xs.len() != ys.len() {
        return f64::INFINITY;
    }
    let n = xs.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut used_x = vec![false; n];
    let mut used_y = vec![false; n];
    let mut worst = 0.0f64;
    let mut placed = 0;
    for (d, i, j) in pairs {
        if used_x[i] || used_y[j] {
            continue;
        }
        used_x[i] = true;
        used_y[j] = true;
        worst = worst.max(d);
        placed += 1;
        if placed == n {
            break;
        }
    }
    worst
}
