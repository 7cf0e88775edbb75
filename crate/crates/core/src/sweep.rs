//! The border scalar `a` as a parameter: critical values where the canonical
//! form degenerates, eigenvalue trajectories, trajectory derivatives, and
//! the large-a asymptotics.
//!
//! A multiple root appears exactly when `f = 0` and `g'(t) = 1` hold at the
//! same point, so every critical value has the shift-free parametrization
//! `a* = t - g(t)` over the solutions `t` of `g'(t) = 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::secular::{CaseLabel, GPrimeProfile, IntervalId, SecularFunction};
use crate::spectral::SpectralForm;
use crate::tol;

/// A border value at which the spectrum acquires a multiple eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalValue {
    pub a_star: f64,
    /// Location of the multiple eigenvalue: the tangency point g'(t) = 1.
    pub tangency_point: f64,
    pub interval: IntervalId,
    pub resulting_case: CaseLabel,
}

/// All critical border values, sorted ascending by `a_star`. The shift of
/// the input form is ignored; only poles and residues matter.
pub fn critical_a_values(form: &SpectralForm) -> Result<Vec<CriticalValue>> {
    if form.poles().is_empty() {
        return Ok(Vec::new());
    }
    // tangency structure is shift-independent; analyze at a = 0
    let base = form.with_shift(0.0);
    let secular = SecularFunction::new(&base);
    let analyses = secular.analyze_intervals()?;
    let graze = tol::sign_margin();
    let collapse = tol::collapse(form.spread());

    let mut out = Vec::new();
    let mut push = |t: f64, interval: IntervalId, case: CaseLabel| {
        out.push(CriticalValue {
            a_star: t - secular.g_unchecked(t),
            tangency_point: t,
            interval,
            resulting_case: case,
        });
    };
    for an in &analyses {
        match an.profile {
            GPrimeProfile::MonotoneIncreasing => {
                push(an.tangency_points[0], an.id, CaseLabel::OneB);
            }
            GPrimeProfile::MonotoneDecreasing => {
                push(an.tangency_points[0], an.id, CaseLabel::ThreeB);
            }
            GPrimeProfile::InteriorMinimum { location, value } => {
                if value > 1.0 + graze {
                    continue;
                }
                if value >= 1.0 - graze {
                    push(location, an.id, CaseLabel::FourD);
                    continue;
                }
                let t1 = an.tangency_points[0];
                let t2 = an.tangency_points[1];
                if t2 - t1 <= collapse {
                    push(location, an.id, CaseLabel::FourD);
                } else {
                    push(t1, an.id, CaseLabel::FourB);
                    push(t2, an.id, CaseLabel::FourC);
                }
            }
        }
    }
    out.sort_by(|x, y| x.a_star.partial_cmp(&y.a_star).unwrap());
    Ok(out)
}

/// One sweep sample: all eigenvalues of the reduced bordered matrix in
/// branch order, and the interlacing case at this `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub a: f64,
    pub eigenvalues: Vec<Complex64>,
    pub case_label: CaseLabel,
}

/// Sweep the border scalar across [a_min, a_max] with `steps` grid points,
/// matching eigenvalue branches between consecutive samples. One midpoint
/// refinement sample is inserted wherever the case label changes.
pub fn eigenvalue_trajectories(
    form: &SpectralForm,
    a_min: f64,
    a_max: f64,
    steps: usize,
) -> Result<Vec<TrajectoryPoint>> {
    if steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "sweep needs at least 2 steps, got {steps}"
        )));
    }
    if !(a_min < a_max) {
        return Err(Error::InvalidParameter(format!(
            "sweep needs a_min < a_max, got [{a_min}, {a_max}]"
        )));
    }
    let mut raw: Vec<(f64, Vec<Complex64>, CaseLabel)> = Vec::with_capacity(steps);
    for i in 0..steps {
        let a = a_min + (a_max - a_min) * i as f64 / (steps - 1) as f64;
        raw.push(solve_at(form, a)?);
    }
    // single refinement pass at census changes
    let mut refined: Vec<(f64, Vec<Complex64>, CaseLabel)> = Vec::with_capacity(raw.len());
    for i in 0..raw.len() {
        if i > 0 && raw[i - 1].2 != raw[i].2 {
            let mid = 0.5 * (raw[i - 1].0 + raw[i].0);
            if mid > raw[i - 1].0 && mid < raw[i].0 {
                refined.push(solve_at(form, mid)?);
            }
        }
        refined.push(raw[i].clone());
    }

    let mut points: Vec<TrajectoryPoint> = Vec::with_capacity(refined.len());
    for (a, values, case_label) in refined {
        let ordered = match points.last() {
            None => {
                let mut v = values;
                v.sort_by(|x, y| {
                    (x.re, x.im)
                        .partial_cmp(&(y.re, y.im))
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
                v
            }
            Some(prev) => match_branches(&prev.eigenvalues, &values),
        };
        points.push(TrajectoryPoint {
            a,
            eigenvalues: ordered,
            case_label,
        });
    }
    Ok(points)
}

fn solve_at(form: &SpectralForm, a: f64) -> Result<(f64, Vec<Complex64>, CaseLabel)> {
    let shifted = form.with_shift(a);
    let secular = SecularFunction::new(&shifted);
    let eigen = secular.solve_spectrum().map_err(|e| Error::SweepFailure {
        a,
        source: Box::new(e),
    })?;
    let mut values = Vec::with_capacity(shifted.reduced_order());
    for rec in &eigen.records {
        for _ in 0..rec.algebraic_multiplicity {
            values.push(rec.value);
        }
    }
    Ok((a, values, eigen.case_label))
}

/// Globally-shortest-pair-first assignment in the complex plane.
fn match_branches(prev: &[Complex64], next: &[Complex64]) -> Vec<Complex64> {
    let n = prev.len();
    debug_assert_eq!(next.len(), n);
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, &x) in next.iter().enumerate() {
        for (j, &y) in prev.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut slot = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    let mut placed = 0;
    for (_, i, j) in pairs {
        if taken[i] || slot[j] != usize::MAX {
            continue;
        }
        slot[j] = i;
        taken[i] = true;
        placed += 1;
        if placed == n {
            break;
        }
    }
    slot.iter().map(|&i| next[i]).collect()
}

/// dλ/da = 1/(1 - g'(λ)) at a simple real eigenvalue.
pub fn trajectory_derivative(secular: &SecularFunction<'_>, lambda_i: f64) -> Result<f64> {
    let gp = secular.gp_unchecked(lambda_i);
    let margin = (gp - 1.0).abs();
    if margin <= tol::sign_margin() {
        return Err(Error::TangencyDerivative {
            eigenvalue: lambda_i,
            margin,
        });
    }
    Ok(1.0 / (1.0 - gp))
}

/// Large-a behavior per branch.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticReport {
    pub a_large: f64,
    /// Width of the right-sided window above each pole.
    pub bound_width: f64,
    /// (pole, nearest eigenvalue, inside the window).
    pub pole_branches: Vec<(f64, f64, bool)>,
    /// (runaway eigenvalue, lower bound, upper bound, inside).
    pub runaway: (f64, f64, f64, bool),
    pub all_ok: bool,
}

/// Check the large-a picture: one eigenvalue near `a` and the rest wedged
/// in a right-sided window of width O(1/a) above each pole.
pub fn asymptotic_check(form: &SpectralForm, a_large: f64) -> Result<AsymptoticReport> {
    let d_sum: f64 = form.residues().iter().sum();
    let mu_max = form.poles().first().copied().unwrap_or(0.0);
    let floor = 10.0 * (1.0 + mu_max.abs() + d_sum);
    if a_large < floor {
        return Err(Error::InvalidParameter(format!(
            "a = {a_large} below the asymptotic regime (needs ≥ {floor})"
        )));
    }
    let (_, values, _) = solve_at(form, a_large)?;
    let mut reals: Vec<f64> = values
        .iter()
        .filter(|z| z.im == 0.0)
        .map(|z| z.re)
        .collect();
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());

    if form.poles().is_empty() {
        let lambda = reals.first().copied().unwrap_or(f64::NAN);
        let ok = (lambda - a_large).abs() <= 1.0;
        return Ok(AsymptoticReport {
            a_large,
            bound_width: 0.0,
            pole_branches: Vec::new(),
            runaway: (lambda, a_large - 1.0, a_large + 1.0, ok),
            all_ok: ok,
        });
    }

    let bound_width = 2.0 * d_sum / (a_large - mu_max);
    let mut pole_branches = Vec::with_capacity(form.poles().len());
    let mut all_ok = true;
    for &mu in form.poles() {
        let nearest = reals
            .iter()
            .copied()
            .min_by(|x, y| (x - mu).abs().partial_cmp(&(y - mu).abs()).unwrap())
            .unwrap();
        let ok = nearest > mu && nearest < mu + bound_width;
        all_ok &= ok;
        pole_branches.push((mu, nearest, ok));
    }
    let runaway_value = *reals.last().unwrap();
    let lo = a_large - d_sum / (a_large - mu_max) - 1.0;
    let hi = a_large + 1.0;
    let runaway_ok = runaway_value >= lo && runaway_value <= hi;
    all_ok &= runaway_ok;
    Ok(AsymptoticReport {
        a_large,
        bound_width,
        pole_branches,
        runaway: (runaway_value, lo, hi, runaway_ok),
        all_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> SpectralForm {
        SpectralForm::new(vec![4.0, 3.0, 2.0, 1.0], vec![1.0, 0.001, 0.02, 0.01], 0.0).unwrap()
    }

    fn example2() -> SpectralForm {
        SpectralForm::new(vec![1.0, -1.0], vec![0.5, 0.5], 0.0).unwrap()
    }

    #[test]
    fn example1_six_critical_values() {
        let crits = critical_a_values(&example1()).unwrap();
        assert_eq!(crits.len(), 6);
        let a_expect = [0.4591, 0.8319, 1.2631, 1.7485, 2.0087, 6.0097];
        let t_expect = [0.8934, 1.10815, 1.83895, 2.1699, 2.91185, 5.00155];
        let case_expect = [
            CaseLabel::OneB,
            CaseLabel::FourB,
            CaseLabel::FourC,
            CaseLabel::FourB,
            CaseLabel::FourC,
            CaseLabel::ThreeB,
        ];
        for (i, cv) in crits.iter().enumerate() {
            assert!(
                (cv.a_star - a_expect[i]).abs() < 2e-3,
                "a* {} vs {}",
                cv.a_star,
                a_expect[i]
            );
            assert!(
                (cv.tangency_point - t_expect[i]).abs() < 2e-3,
                "t {} vs {}",
                cv.tangency_point,
                t_expect[i]
            );
            assert_eq!(cv.resulting_case, case_expect[i]);
        }
    }

    #[test]
    fn example2_single_collapsed_critical_value() {
        let crits = critical_a_values(&example2()).unwrap();
        let internal: Vec<&CriticalValue> = crits
            .iter()
            .filter(|c| matches!(c.interval, IntervalId::Internal(_)))
            .collect();
        assert_eq!(internal.len(), 1);
        assert_eq!(internal[0].resulting_case, CaseLabel::FourD);
        assert!(internal[0].a_star.abs() < 1e-9);
        assert!(internal[0].tangency_point.abs() < 1e-9);
    }

    #[test]
    fn trajectories_cross_the_complex_window() {
        let points = eigenvalue_trajectories(&example2(), -3.0, 3.0, 121).unwrap();
        assert!(points.len() >= 121);
        let complex_at = |a: f64| {
            points
                .iter()
                .min_by(|x, y| (x.a - a).abs().partial_cmp(&(y.a - a).abs()).unwrap())
                .map(|p| p.eigenvalues.iter().any(|z| z.im != 0.0))
                .unwrap()
        };
        assert!(complex_at(0.5), "pair expected inside the window");
        assert!(!complex_at(-2.9), "all real far left");
        assert!(!complex_at(2.9), "all real far right");
        for p in &points {
            assert_eq!(p.eigenvalues.len(), 3);
        }
    }

    #[test]
    fn degenerate_two_step_sweep_matches_direct_solve() {
        let form = example1();
        let points = eigenvalue_trajectories(&form, 0.0, 1e-9, 2).unwrap();
        assert_eq!(points.len(), 2);
        let secular_form = form.with_shift(0.0);
        let eigen = SecularFunction::new(&secular_form)
            .solve_spectrum()
            .unwrap();
        let mut direct: Vec<f64> = eigen.records.iter().map(|r| r.value.re).collect();
        direct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut swept: Vec<f64> = points[0].eigenvalues.iter().map(|z| z.re).collect();
        swept.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in direct.iter().zip(&swept) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_far_field_is_plus_one() {
        let form = example1().with_shift(100.0);
        let secular = SecularFunction::new(&form);
        let eigen = secular.solve_spectrum().unwrap();
        let largest = eigen
            .records
            .iter()
            .map(|r| r.value.re)
            .max_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap();
        let slope = trajectory_derivative(&secular, largest).unwrap();
        assert!((slope - 1.0).abs() < 1e-3, "slope {slope}");
        // branches trapped above poles decrease
        let near_pole = eigen
            .records
            .iter()
            .map(|r| r.value.re)
            .filter(|&v| v < 5.0)
            .fold(f64::NEG_INFINITY, f64::max);
        let slope2 = trajectory_derivative(&secular, near_pole).unwrap();
        assert!(slope2 < 0.0);
    }

    #[test]
    fn asymptotics_at_ten_thousand() {
        let rep = asymptotic_check(&example1(), 1e4).unwrap();
        assert!(rep.all_ok);
        for &(mu, lambda, ok) in &rep.pole_branches {
            assert!(ok);
            assert!(lambda > mu && lambda - mu < 1e-3);
        }
        assert!((rep.runaway.0 - 1e4).abs() < 1.0);

        let rep2 = asymptotic_check(&example2(), 1e4).unwrap();
        assert!(rep2.all_ok);
    }

    #[test]
    fn empty_form_has_single_branch_at_a() {
        let form = SpectralForm::new(vec![], vec![], 0.0).unwrap();
        let rep = asymptotic_check(&form, 50.0).unwrap();
        assert!(rep.all_ok);
        assert_eq!(rep.runaway.0, 50.0);
    }

    #[test]
    fn rejects_degenerate_sweep_parameters() {
        assert!(eigenvalue_trajectories(&example1(), 0.0, 1.0, 1).is_err());
        assert!(eigenvalue_trajectories(&example1(), 1.0, 0.0, 10).is_err());
        assert!(asymptotic_check(&example1(), 5.0).is_err());
    }
}
