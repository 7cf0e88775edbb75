//! The secular function `f(λ) = λ - a + Σ d_j/(λ - μ_j)` and everything it
//! decides: per-interval root censuses, the full spectrum of the bordered
//! matrix, and the interlacing case classification.
//!
//! Root finding is structure-first. On every pole interval `g'` is strictly
//! convex (internal) or monotone (outer), so `g' = 1` has at most two
//! solutions there and the signs of `f` at those critical points certify the
//! root count before any root is polished. The polynomial route exists only
//! as an oracle and for recovering the single complex pair.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::EigenvalueRecord;
use crate::spectral::SpectralForm;
use crate::tol;

/// A pole interval of the secular function, ordered by position on the real
/// line. `Internal(i)` spans `(μ_{i+1}, μ_i)` in 1-based descending pole
/// numbering, i.e. `(poles[i], poles[i-1])` of the stored slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntervalId {
    LeftOuter,
    Internal(usize),
    RightOuter,
}

impl std::fmt::Display for IntervalId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntervalId::LeftOuter => write!(f, "(-inf, mu_min)"),
            IntervalId::Internal(i) => write!(f, "(mu_{}, mu_{})", i + 1, i),
            IntervalId::RightOuter => write!(f, "(mu_max, +inf)"),
        }
    }
}

/// The paper's interlacing taxonomy plus two plumbing labels for inputs the
/// theorem does not cover (unobservable pencils, the 1x1 problem).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    OneA,
    OneB,
    Two,
    ThreeA,
    ThreeB,
    FourA,
    FourB,
    FourC,
    FourD,
    Reducible,
    DegenerateSmall,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::OneA => "1a",
            CaseLabel::OneB => "1b",
            CaseLabel::Two => "2",
            CaseLabel::ThreeA => "3a",
            CaseLabel::ThreeB => "3b",
            CaseLabel::FourA => "4a",
            CaseLabel::FourB => "4b",
            CaseLabel::FourC => "4c",
            CaseLabel::FourD => "4d",
            CaseLabel::Reducible => "REDUCIBLE",
            CaseLabel::DegenerateSmall => "DEGENERATE_SMALL",
        }
    }
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Behavior of `g'` on one interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GPrimeProfile {
    /// Left outer interval: `g'` grows from 0 to +inf toward the pole.
    MonotoneIncreasing,
    /// Right outer interval: `g'` falls from +inf to 0.
    MonotoneDecreasing,
    /// Internal interval: unique interior minimum of the convex `g'`.
    InteriorMinimum { location: f64, value: f64 },
}

/// Census of one pole interval: where `g' = 1`, and the certified roots of
/// `f` with multiplicities, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalAnalysis {
    pub id: IntervalId,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub profile: GPrimeProfile,
    pub tangency_points: Vec<f64>,
    pub roots: Vec<(f64, u8)>,
}

impl IntervalAnalysis {
    pub fn multiplicity(&self) -> usize {
        self.roots.iter().map(|&(_, m)| m as usize).sum()
    }
}

/// The solved spectrum: `n` eigenvalues with Jordan sizes and the case label.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenStructure {
    pub records: Vec<EigenvalueRecord>,
    pub case_label: CaseLabel,
    /// The non-real pair as (x, y) with y > 0, when present.
    pub complex_pair: Option<(f64, f64)>,
}

impl EigenStructure {
    pub fn multiplicity_total(&self) -> usize {
        self.records
            .iter()
            .map(|r| r.algebraic_multiplicity as usize)
            .sum()
    }

    pub fn real_records(&self) -> impl Iterator<Item = &EigenvalueRecord> {
        self.records.iter().filter(|r| r.is_real)
    }
}

/// Case label, per-interval root counts and the sign narrative.
#[derive(Clone, Debug, PartialEq)]
pub struct InterlacingReport {
    pub case_label: CaseLabel,
    /// (interval, root count with multiplicity), ascending along the line.
    pub interval_counts: Vec<(IntervalId, usize)>,
    pub narrative: String,
}

/// Evaluation view over a spectral form.
#[derive(Clone, Copy, Debug)]
pub struct SecularFunction<'a> {
    form: &'a SpectralForm,
}

/// Neumaier compensated summation.
fn comp_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    // a pole hit or overflow makes the compensation NaN; the raw sum still
    // carries the right infinity for sign tests at bracket endpoints
    if sum.is_finite() {
        sum + comp
    } else {
        sum
    }
}

impl<'a> SecularFunction<'a> {
    pub fn new(form: &'a SpectralForm) -> Self {
        SecularFunction { form }
    }

    pub fn form(&self) -> &'a SpectralForm {
        self.form
    }

    pub fn shift(&self) -> f64 {
        self.form.shift()
    }

    fn guard_pole(&self, lambda: f64) -> Result<()> {
        let half_gap = 0.5 * tol::pole_gap(self.form.spread());
        for &mu in self.form.poles() {
            if (lambda - mu).abs() <= half_gap {
                return Err(Error::PoleEvaluation { lambda, pole: mu });
            }
        }
        Ok(())
    }

    /// g(λ) = -Σ d_j / (λ - μ_j)
    pub fn eval_g(&self, lambda: f64) -> Result<f64> {
        self.guard_pole(lambda)?;
        Ok(self.g_unchecked(lambda))
    }

    /// (g'(λ), g''(λ))
    pub fn eval_g_derivatives(&self, lambda: f64) -> Result<(f64, f64)> {
        self.guard_pole(lambda)?;
        Ok((self.gp_unchecked(lambda), self.gpp_unchecked(lambda)))
    }

    /// f(λ) = h(λ) - g(λ) = λ - a + Σ d_j / (λ - μ_j)
    pub fn eval_f(&self, lambda: f64) -> Result<f64> {
        self.guard_pole(lambda)?;
        Ok(self.f_unchecked(lambda))
    }

    pub(crate) fn g_unchecked(&self, lambda: f64) -> f64 {
        -comp_sum(
            self.form
                .poles()
                .iter()
                .zip(self.form.residues())
                .map(|(&mu, &d)| d / (lambda - mu)),
        )
    }

    pub(crate) fn gp_unchecked(&self, lambda: f64) -> f64 {
        comp_sum(
            self.form
                .poles()
                .iter()
                .zip(self.form.residues())
                .map(|(&mu, &d)| {
                    let gap = lambda - mu;
                    d / (gap * gap)
                }),
        )
    }

    pub(crate) fn gpp_unchecked(&self, lambda: f64) -> f64 {
        -2.0 * comp_sum(
            self.form
                .poles()
                .iter()
                .zip(self.form.residues())
                .map(|(&mu, &d)| {
                    let gap = lambda - mu;
                    d / (gap * gap * gap)
                }),
        )
    }

    fn gppp_unchecked(&self, lambda: f64) -> f64 {
        6.0 * comp_sum(
            self.form
                .poles()
                .iter()
                .zip(self.form.residues())
                .map(|(&mu, &d)| {
                    let gap = lambda - mu;
                    d / (gap * gap * gap * gap)
                }),
        )
    }

    pub(crate) fn f_unchecked(&self, lambda: f64) -> f64 {
        let shift = self.form.shift();
        comp_sum(
            std::iter::once(lambda)
                .chain(std::iter::once(-shift))
                .chain(
                    self.form
                        .poles()
                        .iter()
                        .zip(self.form.residues())
                        .map(|(&mu, &d)| d / (lambda - mu)),
                ),
        )
    }

    fn fp_unchecked(&self, lambda: f64) -> f64 {
        1.0 - self.gp_unchecked(lambda)
    }

    /// Per-interval analysis of the whole real line. Empty when the form has
    /// no poles.
    pub fn analyze_intervals(&self) -> Result<Vec<IntervalAnalysis>> {
        let poles = self.form.poles();
        let m = poles.len();
        if m == 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::with_capacity(m + 1);
        out.push(self.analyze_left_outer()?);
        for i in (1..m).rev() {
            out.push(self.analyze_internal(i)?);
        }
        out.push(self.analyze_right_outer()?);
        Ok(out)
    }

    /// Characteristic scale used to seed outward bracket expansion.
    fn reach(&self) -> f64 {
        let d_sum: f64 = self.form.residues().iter().sum();
        1.0 + self.form.shift().abs() + self.form.spread() + d_sum.sqrt()
    }

    /// Walk from `interior` toward `pole`, halving the distance until
    /// `pred` holds. The predicate is guaranteed by the pole blow-up.
    fn inch_to_pole(&self, pole: f64, interior: f64, pred: impl Fn(f64) -> bool) -> Result<f64> {
        let mut x = interior;
        for _ in 0..2000 {
            if pred(x) {
                return Ok(x);
            }
            let next = pole + 0.5 * (x - pole);
            if next == x {
                break;
            }
            x = next;
        }
        Err(Error::Unclassifiable(format!(
            "bracketing stalled approaching pole {pole}"
        )))
    }

    /// Walk outward from `start` away from the poles (direction ±1),
    /// doubling the step until `pred` holds.
    fn expand_outward(
        &self,
        start: f64,
        direction: f64,
        pred: impl Fn(f64) -> bool,
    ) -> Result<f64> {
        let mut step = self.reach();
        for _ in 0..200 {
            let x = start + direction * step;
            if pred(x) {
                return Ok(x);
            }
            step *= 2.0;
        }
        Err(Error::Unclassifiable(format!(
            "bracketing stalled expanding from {start}"
        )))
    }

    /// Bisection to a sign change of `fun` on [lo, hi]; `positive_at_lo`
    /// names the known sign at `lo`.
    fn bisect(&self, fun: impl Fn(f64) -> f64, lo: f64, hi: f64, positive_at_lo: bool) -> f64 {
        let mut lo = lo;
        let mut hi = hi;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (fun(mid) > 0.0) == positive_at_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solve g'(t) = 1 on a bracket where g' - 1 changes sign once, then
    /// polish with Newton safeguarded by the bracket.
    fn solve_gprime_one(&self, lo: f64, hi: f64, gp_above_at_lo: bool) -> f64 {
        let q = |x: f64| self.gp_unchecked(x) - 1.0;
        let mut t = self.bisect(q, lo, hi, gp_above_at_lo);
        for _ in 0..8 {
            let qv = q(t);
            let dq = self.gpp_unchecked(t);
            if dq == 0.0 {
                break;
            }
            let next = t - qv / dq;
            if !(next > lo && next < hi) || next == t {
                break;
            }
            t = next;
        }
        t
    }

    /// Interior minimizer of g' on an internal interval: the unique zero of
    /// the strictly increasing g''.
    fn minimize_gprime(&self, lo: f64, hi: f64) -> Result<f64> {
        let neg = self.inch_to_pole(lo, 0.5 * (lo + hi), |x| self.gpp_unchecked(x) < 0.0)?;
        let pos = self.inch_to_pole(hi, 0.5 * (lo + hi), |x| self.gpp_unchecked(x) > 0.0)?;
        let mut t = self.bisect(|x| self.gpp_unchecked(x), neg, pos, false);
        for _ in 0..8 {
            let g2 = self.gpp_unchecked(t);
            let g3 = self.gppp_unchecked(t);
            if g3 == 0.0 {
                break;
            }
            let next = t - g2 / g3;
            if !(next > lo && next < hi) || next == t {
                break;
            }
            t = next;
        }
        Ok(t)
    }

    /// Safeguarded Newton on f inside a bracket with known sign at `lo`.
    /// Runs to the residual target or to f64 resolution, whichever comes
    /// first, and returns the representable point of smallest |f| seen.
    fn polish_root(&self, lo: f64, hi: f64, positive_at_lo: bool) -> f64 {
        let shift = self.form.shift();
        let mut xl = lo;
        let mut xr = hi;
        let mut x = 0.5 * (xl + xr);
        let mut best = (f64::INFINITY, x);
        for _ in 0..200 {
            let fx = self.f_unchecked(x);
            if fx.abs() < best.0 {
                best = (fx.abs(), x);
            }
            if fx.abs() <= tol::newton_residual(x, shift) {
                return x;
            }
            if (fx > 0.0) == positive_at_lo {
                xl = x;
            } else {
                xr = x;
            }
            let fpx = self.fp_unchecked(x);
            let mut next = if fpx != 0.0 { x - fx / fpx } else { f64::NAN };
            if !(next > xl && next < xr) || !next.is_finite() {
                next = 0.5 * (xl + xr);
            }
            if next == x {
                break;
            }
            x = next;
        }
        // steep roots bottom out at grid resolution; take the best neighbor
        let mut x = best.1;
        for candidate in [
            x.next_down().next_down(),
            x.next_down(),
            x.next_up(),
            x.next_up().next_up(),
        ] {
            let fc = self.f_unchecked(candidate).abs();
            if fc < best.0 {
                best = (fc, candidate);
                x = candidate;
            }
        }
        x
    }

    fn analyze_left_outer(&self) -> Result<IntervalAnalysis> {
        let poles = self.form.poles();
        let pole = poles[poles.len() - 1];
        let spread = self.form.spread();
        let tan_tol = tol::tangency(self.form.shift(), spread);

        let far = self.expand_outward(pole, -1.0, |x| self.gp_unchecked(x) < 1.0)?;
        let near = self.inch_to_pole(pole, 0.5 * (far + pole), |x| self.gp_unchecked(x) > 1.0)?;
        let t = self.solve_gprime_one(far, near, false);
        let ft = self.f_unchecked(t);

        let mut roots = Vec::new();
        if ft > tan_tol {
            // local maximum above the axis: two simple roots straddle t
            let lo_end = self.expand_outward(t, -1.0, |x| self.f_unchecked(x) < 0.0)?;
            let r1 = self.polish_root(lo_end, t, false);
            let hi_end = self.inch_to_pole(pole, t, |x| self.f_unchecked(x) < 0.0)?;
            let r2 = self.polish_root(t, hi_end, true);
            roots.push((r1, 1));
            roots.push((r2, 1));
        } else if ft >= -tan_tol {
            roots.push((t, 2));
        }
        Ok(IntervalAnalysis {
            id: IntervalId::LeftOuter,
            lower: None,
            upper: Some(pole),
            profile: GPrimeProfile::MonotoneIncreasing,
            tangency_points: vec![t],
            roots,
        })
    }

    fn analyze_right_outer(&self) -> Result<IntervalAnalysis> {
        let poles = self.form.poles();
        let pole = poles[0];
        let spread = self.form.spread();
        let tan_tol = tol::tangency(self.form.shift(), spread);

        let far = self.expand_outward(pole, 1.0, |x| self.gp_unchecked(x) < 1.0)?;
        let near = self.inch_to_pole(pole, 0.5 * (pole + far), |x| self.gp_unchecked(x) > 1.0)?;
        let t = self.solve_gprime_one(near, far, true);
        let ft = self.f_unchecked(t);

        let mut roots = Vec::new();
        if ft < -tan_tol {
            // local minimum below the axis: two simple roots straddle t
            let lo_end = self.inch_to_pole(pole, t, |x| self.f_unchecked(x) > 0.0)?;
            let r1 = self.polish_root(lo_end, t, true);
            let hi_end = self.expand_outward(t, 1.0, |x| self.f_unchecked(x) > 0.0)?;
            let r2 = self.polish_root(t, hi_end, false);
            roots.push((r1, 1));
            roots.push((r2, 1));
        } else if ft <= tan_tol {
            roots.push((t, 2));
        }
        Ok(IntervalAnalysis {
            id: IntervalId::RightOuter,
            lower: Some(pole),
            upper: None,
            profile: GPrimeProfile::MonotoneDecreasing,
            tangency_points: vec![t],
            roots,
        })
    }

    fn analyze_internal(&self, index: usize) -> Result<IntervalAnalysis> {
        let poles = self.form.poles();
        let lo = poles[index];
        let hi = poles[index - 1];
        let spread = self.form.spread();
        let tan_tol = tol::tangency(self.form.shift(), spread);
        let graze = tol::sign_margin();

        let tmin = self.minimize_gprime(lo, hi)?;
        let gpmin = self.gp_unchecked(tmin);
        let profile = GPrimeProfile::InteriorMinimum {
            location: tmin,
            value: gpmin,
        };

        let single_root = |tangency_points: Vec<f64>| -> Result<IntervalAnalysis> {
            let lo_end = self.inch_to_pole(lo, tmin, |x| self.f_unchecked(x) > 0.0)?;
            let hi_end = self.inch_to_pole(hi, tmin, |x| self.f_unchecked(x) < 0.0)?;
            let r = self.polish_root(lo_end, hi_end, true);
            Ok(IntervalAnalysis {
                id: IntervalId::Internal(index),
                lower: Some(lo),
                upper: Some(hi),
                profile,
                tangency_points,
                roots: vec![(r, 1)],
            })
        };

        if gpmin > 1.0 + graze {
            // f strictly decreasing across the interval
            return single_root(Vec::new());
        }
        if gpmin >= 1.0 - graze {
            // g' grazes 1: either an exact triple contact or a plain crossing
            if self.f_unchecked(tmin).abs() <= tan_tol {
                return Ok(IntervalAnalysis {
                    id: IntervalId::Internal(index),
                    lower: Some(lo),
                    upper: Some(hi),
                    profile,
                    tangency_points: vec![tmin],
                    roots: vec![(tmin, 3)],
                });
            }
            return single_root(vec![tmin]);
        }

        // two interior solutions of g' = 1
        let lo_end = self.inch_to_pole(lo, tmin, |x| self.gp_unchecked(x) > 1.0)?;
        let t1 = self.solve_gprime_one(lo_end, tmin, true);
        let hi_end = self.inch_to_pole(hi, tmin, |x| self.gp_unchecked(x) > 1.0)?;
        let t2 = self.solve_gprime_one(tmin, hi_end, false);
        let f1 = self.f_unchecked(t1);
        let f2 = self.f_unchecked(t2);
        let tangency_points = vec![t1, t2];

        let roots: Vec<(f64, u8)> =
            if t2 - t1 <= tol::collapse(spread) && f1.abs() <= tan_tol && f2.abs() <= tan_tol {
                vec![(tmin, 3)]
            } else if f1 > tan_tol {
                // local minimum above the axis: the single crossing is right of t2
                let hi_f = self.inch_to_pole(hi, t2, |x| self.f_unchecked(x) < 0.0)?;
                vec![(self.polish_root(t2, hi_f, true), 1)]
            } else if f2 < -tan_tol {
                // local maximum below the axis: the single crossing is left of t1
                let lo_f = self.inch_to_pole(lo, t1, |x| self.f_unchecked(x) > 0.0)?;
                vec![(self.polish_root(lo_f, t1, true), 1)]
            } else if f1 < -tan_tol && f2 > tan_tol {
                let lo_f = self.inch_to_pole(lo, t1, |x| self.f_unchecked(x) > 0.0)?;
                let r1 = self.polish_root(lo_f, t1, true);
                let r2 = self.polish_root(t1, t2, false);
                let hi_f = self.inch_to_pole(hi, t2, |x| self.f_unchecked(x) < 0.0)?;
                let r3 = self.polish_root(t2, hi_f, true);
                vec![(r1, 1), (r2, 1), (r3, 1)]
            } else if f1.abs() <= tan_tol && f2 > tan_tol {
                // tangency from above at the local minimum, simple root beyond t2
                let hi_f = self.inch_to_pole(hi, t2, |x| self.f_unchecked(x) < 0.0)?;
                vec![(t1, 2), (self.polish_root(t2, hi_f, true), 1)]
            } else if f1 < -tan_tol && f2.abs() <= tan_tol {
                // tangency from below at the local maximum, simple root before t1
                let lo_f = self.inch_to_pole(lo, t1, |x| self.f_unchecked(x) > 0.0)?;
                vec![(self.polish_root(lo_f, t1, true), 1), (t2, 2)]
            } else {
                return Err(Error::Unclassifiable(format!(
                    "near-triple census in interval ({lo}, {hi}): f({t1}) = {f1:.3e}, \
                 f({t2}) = {f2:.3e} both within tangency tolerance without collapse"
                )));
            };

        Ok(IntervalAnalysis {
            id: IntervalId::Internal(index),
            lower: Some(lo),
            upper: Some(hi),
            profile,
            tangency_points,
            roots,
        })
    }

    /// Solve for all `n = m + 1` eigenvalues of the reduced bordered matrix.
    pub fn solve_spectrum(&self) -> Result<EigenStructure> {
        let m = self.form.poles().len();
        let n = m + 1;
        if m == 0 {
            return Ok(EigenStructure {
                records: vec![EigenvalueRecord::simple_real(self.form.shift(), None)],
                case_label: CaseLabel::DegenerateSmall,
                complex_pair: None,
            });
        }
        let analyses = self.analyze_intervals()?;
        let total: usize = analyses.iter().map(IntervalAnalysis::multiplicity).sum();

        if total == n {
            let mut records = Vec::with_capacity(n);
            for an in &analyses {
                for &(value, mult) in &an.roots {
                    records.push(EigenvalueRecord::multiple_real(value, mult, Some(an.id)));
                }
            }
            let case_label = classify_census(&analyses, false)?;
            return Ok(EigenStructure {
                records,
                case_label,
                complex_pair: None,
            });
        }

        if total == n - 2 {
            if analyses
                .iter()
                .any(|an| an.roots.iter().any(|&(_, m)| m > 1))
            {
                return Err(Error::Unclassifiable(
                    "census pairs a multiple real root with a complex pair".into(),
                ));
            }
            let real_roots: Vec<f64> = analyses
                .iter()
                .flat_map(|an| an.roots.iter().map(|&(v, _)| v))
                .collect();
            let (x, y) = self.complex_pair_by_deflation(&real_roots)?;
            let mut records = Vec::with_capacity(n);
            for an in &analyses {
                for &(value, mult) in &an.roots {
                    records.push(EigenvalueRecord::multiple_real(value, mult, Some(an.id)));
                }
            }
            records.push(EigenvalueRecord::complex_member(x, -y));
            records.push(EigenvalueRecord::complex_member(x, y));
            let case_label = classify_census(&analyses, true)?;
            return Ok(EigenStructure {
                records,
                case_label,
                complex_pair: Some((x, y)),
            });
        }

        Err(Error::CountMismatch {
            expected: n,
            real: total,
            pairs: 0,
        })
    }

    /// Deflate the degree-n characteristic polynomial by the polished real
    /// roots (largest magnitude first) and solve the residual quadratic.
    fn complex_pair_by_deflation(&self, real_roots: &[f64]) -> Result<(f64, f64)> {
        let mut coeffs = self.form.characteristic_polynomial();
        let mut order: Vec<f64> = real_roots.to_vec();
        order.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap());
        for &root in &order {
            coeffs = deflate(&coeffs, root);
        }
        debug_assert_eq!(coeffs.len(), 3);
        let (c0, c1) = (coeffs[0] / coeffs[2], coeffs[1] / coeffs[2]);
        let disc = c1 * c1 - 4.0 * c0;
        if disc >= 0.0 {
            return Err(Error::CountMismatch {
                expected: self.form.poles().len() + 1,
                real: real_roots.len(),
                pairs: 0,
            });
        }
        let mut z = Complex64::new(-0.5 * c1, 0.5 * (-disc).sqrt());
        // Newton on the secular function continued to the complex plane:
        // the deflated quadratic inherits expanded-coefficient rounding,
        // while F is evaluated at local term scale
        let shift = self.form.shift();
        let eval = |z: Complex64| -> (Complex64, Complex64) {
            let mut f = z - Complex64::new(shift, 0.0);
            let mut fp = Complex64::new(1.0, 0.0);
            for (&mu, &d) in self.form.poles().iter().zip(self.form.residues()) {
                let gap = z - Complex64::new(mu, 0.0);
                let term = Complex64::new(d, 0.0) / gap;
                f += term;
                fp -= term / gap;
            }
            (f, fp)
        };
        let mut best = (f64::INFINITY, z);
        for _ in 0..40 {
            let (f, fp) = eval(z);
            if f.norm() < best.0 {
                best = (f.norm(), z);
            }
            if fp.norm() == 0.0 {
                break;
            }
            let step = f / fp;
            if !step.re.is_finite() || !step.im.is_finite() || step.norm() == 0.0 {
                break;
            }
            z -= step;
        }
        let (f_last, _) = eval(z);
        if f_last.norm() > best.0 {
            z = best.1;
        }
        let (x, y) = (z.re, z.im.abs());
        if y == 0.0 {
            return Err(Error::CountMismatch {
                expected: self.form.poles().len() + 1,
                real: real_roots.len(),
                pairs: 0,
            });
        }
        Ok((x, y))
    }
}

/// Synthetic division of an ascending-coefficient polynomial by (λ - root).
pub(crate) fn deflate(coeffs: &[f64], root: f64) -> Vec<f64> {
    let n = coeffs.len() - 1;
    let mut out = vec![0.0; n];
    out[n - 1] = coeffs[n];
    for k in (0..n - 1).rev() {
        out[k] = coeffs[k + 1] + root * out[k + 1];
    }
    out
}

/// Census pattern of one interval.
#[derive(Clone, Copy, Debug, PartialEq)]
enum CensusKind {
    Base,
    TwoSimple,
    Double,
    ThreeSimple,
    DoubleThenSimple,
    SimpleThenDouble,
    Triple,
}

fn census_kind(an: &IntervalAnalysis) -> Result<CensusKind> {
    let pattern: Vec<u8> = an.roots.iter().map(|&(_, m)| m).collect();
    let internal = matches!(an.id, IntervalId::Internal(_));
    let kind = match (internal, pattern.as_slice()) {
        (true, [1]) => CensusKind::Base,
        (true, [1, 1, 1]) => CensusKind::ThreeSimple,
        (true, [2, 1]) => CensusKind::DoubleThenSimple,
        (true, [1, 2]) => CensusKind::SimpleThenDouble,
        (true, [3]) => CensusKind::Triple,
        (false, []) => CensusKind::Base,
        (false, [1, 1]) => CensusKind::TwoSimple,
        (false, [2]) => CensusKind::Double,
        _ => {
            return Err(Error::Unclassifiable(format!(
                "interval {} carries root pattern {pattern:?}",
                an.id
            )))
        }
    };
    Ok(kind)
}

fn classify_census(analyses: &[IntervalAnalysis], has_pair: bool) -> Result<CaseLabel> {
    let mut specials: Vec<(IntervalId, CensusKind)> = Vec::new();
    for an in analyses {
        let kind = census_kind(an)?;
        if kind != CensusKind::Base {
            specials.push((an.id, kind));
        }
    }
    if has_pair {
        if specials.is_empty() {
            return Ok(CaseLabel::Two);
        }
        return Err(Error::Unclassifiable(format!(
            "complex pair together with special interval {}",
            specials[0].0
        )));
    }
    if specials.len() != 1 {
        return Err(Error::Unclassifiable(format!(
            "{} special intervals in an all-real census",
            specials.len()
        )));
    }
    let label = match specials[0] {
        (IntervalId::LeftOuter, CensusKind::TwoSimple) => CaseLabel::OneA,
        (IntervalId::LeftOuter, CensusKind::Double) => CaseLabel::OneB,
        (IntervalId::RightOuter, CensusKind::TwoSimple) => CaseLabel::ThreeA,
        (IntervalId::RightOuter, CensusKind::Double) => CaseLabel::ThreeB,
        (IntervalId::Internal(_), CensusKind::ThreeSimple) => CaseLabel::FourA,
        (IntervalId::Internal(_), CensusKind::DoubleThenSimple) => CaseLabel::FourB,
        (IntervalId::Internal(_), CensusKind::SimpleThenDouble) => CaseLabel::FourC,
        (IntervalId::Internal(_), CensusKind::Triple) => CaseLabel::FourD,
        (id, kind) => {
            return Err(Error::Unclassifiable(format!(
                "pattern {kind:?} cannot occur in interval {id}"
            )))
        }
    };
    Ok(label)
}

/// Locate the hosting interval of a real value among descending poles.
pub fn locate_interval(poles: &[f64], value: f64) -> IntervalId {
    let m = poles.len();
    let above = poles.iter().filter(|&&p| p > value).count();
    if above == 0 {
        IntervalId::RightOuter
    } else if above == m {
        IntervalId::LeftOuter
    } else {
        IntervalId::Internal(above)
    }
}

/// Re-derive the census from the solved records, check it against the
/// theorem's case chains, and narrate the sign assignment.
pub fn classify_interlacing(
    eigen: &EigenStructure,
    secular: &SecularFunction<'_>,
) -> Result<InterlacingReport> {
    let poles = secular.form().poles();
    let m = poles.len();
    if m == 0 {
        return Ok(InterlacingReport {
            case_label: eigen.case_label,
            interval_counts: Vec::new(),
            narrative: format!(
                "single eigenvalue {} of the 1x1 problem; sign -1 forced by H = (-1)",
                secular.shift()
            ),
        });
    }

    // census recomputed from the records alone
    let mut ids: Vec<IntervalId> = Vec::with_capacity(m + 1);
    ids.push(IntervalId::LeftOuter);
    for i in (1..m).rev() {
        ids.push(IntervalId::Internal(i));
    }
    ids.push(IntervalId::RightOuter);

    let mut counts: Vec<usize> = vec![0; ids.len()];
    let mut patterns: Vec<Vec<u8>> = vec![Vec::new(); ids.len()];
    let mut real_sorted: Vec<&EigenvalueRecord> = eigen.real_records().collect();
    real_sorted.sort_by(|a, b| a.value.re.partial_cmp(&b.value.re).unwrap());
    for rec in &real_sorted {
        let v = rec.value.re;
        // an eigenvalue within a few grid points of a pole is not resolvable
        // as distinct from it; legitimately pinched roots (tiny residue or
        // huge shift) sit well above this spacing scale
        if poles
            .iter()
            .any(|&p| (v - p).abs() <= 8.0 * (p.abs().max(v.abs()).max(1.0) * f64::EPSILON))
        {
            return Err(Error::Unclassifiable(format!(
                "real eigenvalue {v} is not resolvable from a pole"
            )));
        }
        let id = locate_interval(poles, v);
        let slot = ids.iter().position(|&x| x == id).unwrap();
        counts[slot] += rec.algebraic_multiplicity as usize;
        patterns[slot].push(rec.algebraic_multiplicity);
    }

    for (slot, id) in ids.iter().enumerate() {
        let ok = match id {
            IntervalId::Internal(_) => matches!(counts[slot], 1 | 3),
            _ => matches!(counts[slot], 0 | 2),
        };
        if !ok {
            return Err(Error::Unclassifiable(format!(
                "interval {} carries {} roots with multiplicity",
                id, counts[slot]
            )));
        }
    }

    // rebuild interval analyses views just for the label mapping
    let rebuilt: Vec<IntervalAnalysis> = ids
        .iter()
        .zip(&patterns)
        .map(|(&id, pat)| IntervalAnalysis {
            id,
            lower: None,
            upper: None,
            profile: GPrimeProfile::MonotoneIncreasing,
            tangency_points: Vec::new(),
            roots: pat.iter().map(|&mm| (0.0, mm)).collect(),
        })
        .collect();
    let label = classify_census(&rebuilt, eigen.complex_pair.is_some())?;
    if label != eigen.case_label {
        return Err(Error::Unclassifiable(format!(
            "census case {label} disagrees with solved case {}",
            eigen.case_label
        )));
    }

    let mut narrative = String::new();
    narrative.push_str(&format!("case {label}: "));
    match label {
        CaseLabel::OneA => {
            narrative.push_str("two extra simple eigenvalues below the smallest pole; ")
        }
        CaseLabel::OneB => narrative.push_str("double eigenvalue below the smallest pole; "),
        CaseLabel::Two => narrative.push_str("one conjugate complex pair; "),
        CaseLabel::ThreeA => {
            narrative.push_str("two extra simple eigenvalues above the largest pole; ")
        }
        CaseLabel::ThreeB => narrative.push_str("double eigenvalue above the largest pole; "),
        CaseLabel::FourA => {
            narrative.push_str("three simple eigenvalues share one internal interval; ")
        }
        CaseLabel::FourB => narrative.push_str("double below simple in one internal interval; "),
        CaseLabel::FourC => narrative.push_str("simple below double in one internal interval; "),
        CaseLabel::FourD => narrative.push_str("triple eigenvalue in one internal interval; "),
        _ => {}
    }
    for rec in &real_sorted {
        let v = rec.value.re;
        match rec.algebraic_multiplicity {
            1 => {
                let gp = secular.gp_unchecked(v);
                let sign = if gp > 1.0 { "+1" } else { "-1" };
                narrative.push_str(&format!("λ = {v:.6} simple, g' = {gp:.6} → ε = {sign}; "));
            }
            2 => {
                let gpp = secular.gpp_unchecked(v);
                let sign = if -gpp > 0.0 { "+1" } else { "-1" };
                narrative.push_str(&format!(
                    "λ = {v:.6} double, -g'' = {:.3e} → ε = {sign}; ",
                    -gpp
                ));
            }
            _ => narrative.push_str(&format!(
                "λ = {v:.6} triple, Jordan block of size 3, ε = +1; "
            )),
        }
    }
    if let Some((x, y)) = eigen.complex_pair {
        narrative.push_str(&format!("pair {x:.6} ± {y:.6}i carries no sign; "));
    }

    let interval_counts: Vec<(IntervalId, usize)> =
        ids.iter().copied().zip(counts.iter().copied()).collect();
    Ok(InterlacingReport {
        case_label: label,
        interval_counts,
        narrative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1(a: f64) -> SpectralForm {
        SpectralForm::new(vec![4.0, 3.0, 2.0, 1.0], vec![1.0, 0.001, 0.02, 0.01], a).unwrap()
    }

    fn example2(a: f64) -> SpectralForm {
        SpectralForm::new(vec![1.0, -1.0], vec![0.5, 0.5], a).unwrap()
    }

    #[test]
    fn g_vanishes_by_symmetry() {
        let form = example2(0.0);
        let s = SecularFunction::new(&form);
        assert_eq!(s.eval_g(0.0).unwrap(), 0.0);
        let (gp, gpp) = s.eval_g_derivatives(0.0).unwrap();
        assert_eq!(gp, 1.0);
        assert_eq!(gpp, 0.0);
    }

    #[test]
    fn g_at_five_matches_rational_arithmetic() {
        let form = example1(0.0);
        let s = SecularFunction::new(&form);
        // -(0.01/4 + 0.02/3 + 0.001/2 + 1/1)
        let expect = -(0.0025 + 0.02 / 3.0 + 0.0005 + 1.0);
        assert!((s.eval_g(5.0).unwrap() - expect).abs() < 1e-15);
        // g' = 0.01/16 + 0.02/9 + 0.001/4 + 1
        let (gp, _) = s.eval_g_derivatives(5.0).unwrap();
        let expect_gp = 0.01 / 16.0 + 0.02 / 9.0 + 0.001 / 4.0 + 1.0;
        assert!((gp - expect_gp).abs() < 1e-15);
    }

    #[test]
    fn g_decays_at_infinity() {
        let form = example1(0.0);
        let s = SecularFunction::new(&form);
        assert!(s.eval_g(1e6).unwrap().abs() < 2e-6);
        assert!(s.eval_g(-1e6).unwrap().abs() < 2e-6);
    }

    #[test]
    fn unchecked_evaluation_at_a_pole_keeps_its_infinity() {
        // bracket endpoints may land on a pole bitwise; the sign of the
        // blow-up must survive the compensated summation
        let form = example1(0.0);
        let s = SecularFunction::new(&form);
        assert_eq!(s.f_unchecked(3.0), f64::INFINITY);
        assert_eq!(s.gp_unchecked(3.0), f64::INFINITY);
    }

    #[test]
    fn pinched_roots_at_huge_shift_still_classify() {
        // at a = 1e12 two eigenvalues sit ~1e-12 above their poles; they are
        // representable and must classify as case 3a
        let form = SpectralForm::new(vec![1.0, 0.0], vec![1.0, 1.0], 1e12).unwrap();
        let s = SecularFunction::new(&form);
        let eigen = s.solve_spectrum().unwrap();
        assert_eq!(eigen.case_label, CaseLabel::ThreeA);
        let report = classify_interlacing(&eigen, &s).unwrap();
        assert_eq!(report.case_label, CaseLabel::ThreeA);
        let mut reals: Vec<f64> = eigen.records.iter().map(|r| r.value.re).collect();
        reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((reals[0] - 1e-12).abs() < 1e-17);
        assert!((reals[1] - (1.0 + 1e-12)).abs() < 1e-15);
        assert!((reals[2] - 1e12).abs() < 1.0);
    }

    #[test]
    fn unresolvable_root_fails_classification_loudly() {
        // residue 1e-15 pushes a root to within one grid point of its pole:
        // the census still counts it but no meaningful value exists in f64
        let form = SpectralForm::new(vec![1.0, 0.0], vec![1e-15, 1.0], 30.0).unwrap();
        let s = SecularFunction::new(&form);
        let eigen = s.solve_spectrum().unwrap();
        assert_eq!(eigen.multiplicity_total(), 3);
        let err = classify_interlacing(&eigen, &s).unwrap_err();
        assert!(matches!(err, Error::Unclassifiable(_)));
    }

    #[test]
    fn g_prime_positive_off_poles() {
        let form = example1(0.0);
        let s = SecularFunction::new(&form);
        for &x in &[-7.3, 0.5, 1.5, 2.5, 3.5, 4.5, 11.0] {
            let (gp, _) = s.eval_g_derivatives(x).unwrap();
            assert!(gp > 0.0);
        }
    }

    #[test]
    fn evaluation_at_pole_is_an_error() {
        let form = example1(0.0);
        let s = SecularFunction::new(&form);
        assert!(matches!(
            s.eval_g(3.0),
            Err(Error::PoleEvaluation { pole, .. }) if pole == 3.0
        ));
    }

    #[test]
    fn census_case_1a_at_zero() {
        let form = example1(0.0);
        let s = SecularFunction::new(&form);
        let analyses = s.analyze_intervals().unwrap();
        assert_eq!(analyses.len(), 5);
        assert_eq!(analyses[0].id, IntervalId::LeftOuter);
        assert_eq!(analyses[0].multiplicity(), 2);
        for an in &analyses[1..4] {
            assert!(matches!(an.id, IntervalId::Internal(_)));
            assert_eq!(an.multiplicity(), 1);
        }
        assert_eq!(analyses[4].id, IntervalId::RightOuter);
        assert_eq!(analyses[4].multiplicity(), 0);
    }

    #[test]
    fn census_triple_root_at_zero() {
        let form = example2(0.0);
        let s = SecularFunction::new(&form);
        let analyses = s.analyze_intervals().unwrap();
        let internal = &analyses[1];
        assert_eq!(internal.roots.len(), 1);
        assert_eq!(internal.roots[0].1, 3);
        assert!(internal.roots[0].0.abs() < 1e-10);
    }

    #[test]
    fn solve_triple_spectrum() {
        let form = example2(0.0);
        let eigen = SecularFunction::new(&form).solve_spectrum().unwrap();
        assert_eq!(eigen.case_label, CaseLabel::FourD);
        assert_eq!(eigen.records.len(), 1);
        assert_eq!(eigen.records[0].algebraic_multiplicity, 3);
        assert_eq!(eigen.records[0].jordan_block_size, 3);
        assert!(eigen.records[0].value.re.abs() < 1e-10);
        assert_eq!(eigen.multiplicity_total(), 3);
    }

    #[test]
    fn solve_case_3a_above_the_largest_pole() {
        let form = example1(6.5);
        let eigen = SecularFunction::new(&form).solve_spectrum().unwrap();
        assert_eq!(eigen.case_label, CaseLabel::ThreeA);
        assert_eq!(eigen.multiplicity_total(), 5);
        let above: Vec<f64> = eigen
            .records
            .iter()
            .map(|r| r.value.re)
            .filter(|&v| v > 4.0)
            .collect();
        assert_eq!(above.len(), 2);
    }

    #[test]
    fn solve_case_4a_at_one() {
        let form = example1(1.0);
        let eigen = SecularFunction::new(&form).solve_spectrum().unwrap();
        assert_eq!(eigen.case_label, CaseLabel::FourA);
        let hosted: Vec<f64> = eigen
            .records
            .iter()
            .map(|r| r.value.re)
            .filter(|&v| v > 1.0 && v < 2.0)
            .collect();
        assert_eq!(hosted.len(), 3);
    }

    #[test]
    fn single_pole_complex_pair() {
        // f(λ) = λ + 1/λ: no real roots, pair ±i from λ² + 1
        let form = SpectralForm::new(vec![0.0], vec![1.0], 0.0).unwrap();
        let eigen = SecularFunction::new(&form).solve_spectrum().unwrap();
        assert_eq!(eigen.case_label, CaseLabel::Two);
        let (x, y) = eigen.complex_pair.unwrap();
        assert!(x.abs() < 1e-12);
        assert!((y - 1.0).abs() < 1e-12);
        // stored as a mirrored conjugate pair
        let ims: Vec<f64> = eigen.records.iter().map(|r| r.value.im).collect();
        assert_eq!(ims.len(), 2);
        assert_eq!(ims[0], -ims[1]);
    }

    #[test]
    fn polishing_contract_on_simple_roots() {
        // |f| at the returned root meets 1e-12·(1+|λ|+|a|) up to the grid
        // term |f'|·ulp(λ): a root pinched against a pole has |f'| so large
        // that even the best representable point leaves that much residual.
        for &a in &[0.0, 1.0, 3.3, 6.5, -4.0, 40.0] {
            let form = example1(a);
            let s = SecularFunction::new(&form);
            let eigen = s.solve_spectrum().unwrap();
            for rec in eigen.real_records() {
                if rec.algebraic_multiplicity == 1 {
                    let v = rec.value.re;
                    let ulp = v.next_up() - v;
                    let grid_term = 4.0 * ulp * (1.0 - s.gp_unchecked(v)).abs();
                    let bound = 1e-12 * (1.0 + v.abs() + a.abs()) + grid_term;
                    let residual = s.f_unchecked(v).abs();
                    assert!(
                        residual <= bound,
                        "|f({v})| = {residual:.3e} > {bound:.3e} at a = {a}"
                    );
                }
            }
        }
    }

    #[test]
    fn double_root_from_derived_tangency() {
        // independent mini-oracle: bisect g' = 1 on the right outer interval
        // of Example 1, then place a = t - g(t) so f is tangent there
        let base = example1(0.0);
        let s0 = SecularFunction::new(&base);
        let (mut lo, mut hi) = (4.0 + 1e-6, 50.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if s0.gp_unchecked(mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        let a = t - s0.g_unchecked(t);
        let form = example1(a);
        let s = SecularFunction::new(&form);
        let eigen = s.solve_spectrum().unwrap();
        assert_eq!(eigen.case_label, CaseLabel::ThreeB);
        let double = eigen
            .records
            .iter()
            .find(|r| r.algebraic_multiplicity == 2)
            .expect("double root");
        assert!((double.value.re - t).abs() < 1e-8);
        // double-root contract: g' = 1 to 1e-6 there
        assert!((s.gp_unchecked(double.value.re) - 1.0).abs() <= 1e-6);
        assert_eq!(eigen.multiplicity_total(), 5);
    }

    #[test]
    fn empty_form_is_the_degenerate_problem() {
        let form = SpectralForm::new(vec![], vec![], 2.5).unwrap();
        let eigen = SecularFunction::new(&form).solve_spectrum().unwrap();
        assert_eq!(eigen.case_label, CaseLabel::DegenerateSmall);
        assert_eq!(eigen.records.len(), 1);
        assert_eq!(eigen.records[0].value.re, 2.5);
    }

    #[test]
    fn interval_location() {
        let poles = [4.0, 3.0, 2.0, 1.0];
        assert_eq!(locate_interval(&poles, 0.0), IntervalId::LeftOuter);
        assert_eq!(locate_interval(&poles, 1.5), IntervalId::Internal(3));
        assert_eq!(locate_interval(&poles, 2.5), IntervalId::Internal(2));
        assert_eq!(locate_interval(&poles, 3.5), IntervalId::Internal(1));
        assert_eq!(locate_interval(&poles, 9.0), IntervalId::RightOuter);
    }

    #[test]
    fn interlacing_report_matches_solution() {
        let form = example1(0.0);
        let s = SecularFunction::new(&form);
        let eigen = s.solve_spectrum().unwrap();
        let report = classify_interlacing(&eigen, &s).unwrap();
        assert_eq!(report.case_label, CaseLabel::OneA);
        assert_eq!(report.interval_counts.len(), 5);
        assert_eq!(report.interval_counts[0], (IntervalId::LeftOuter, 2));
        assert_eq!(report.interval_counts[4], (IntervalId::RightOuter, 0));
        assert!(report.narrative.contains("case 1a"));
    }

    #[test]
    fn conjugate_symmetry_in_case_two() {
        let form = example2(0.3);
        let eigen = SecularFunction::new(&form).solve_spectrum().unwrap();
        assert_eq!(eigen.case_label, CaseLabel::Two);
        let mut values: Vec<Complex64> = eigen.records.iter().map(|r| r.value).collect();
        let conjugated: Vec<Complex64> = values.iter().map(|z| z.conj()).collect();
        values.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        let mut mirrored = conjugated;
        mirrored.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        assert_eq!(values, mirrored);
    }
}
