//! End-to-end pipeline: reduce, solve, classify, sign, assemble, and gather
//! diagnostics for one problem instance.

use crate::error::Result;
use crate::model::{BorderedPencil, EigenvalueRecord};
use crate::observability::{kalman_reduce, ObservabilityReport};
use crate::secular::{
    classify_interlacing, CaseLabel, EigenStructure, InterlacingReport, SecularFunction,
};
use crate::signs::{assemble_canonical_form, assign_signs, CanonicalForm};
use crate::spectral::SpectralForm;
use crate::tol;

/// Tolerances in force and residuals observed while solving.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub tolerance_scale: f64,
    pub pole_gap_tolerance: f64,
    pub observability_tolerance: f64,
    pub tangency_tolerance: f64,
    /// Largest |f| over the polished simple roots.
    pub max_secular_residual: f64,
    /// |Σ d_j + dropped - ‖u‖²|, when the problem came from a pencil.
    pub parseval_gap: Option<f64>,
}

/// Everything the toolkit knows about one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    /// Order of the full bordered matrix (detached part included).
    pub n: usize,
    /// Present when the input was a pencil; `None` for direct spectral input.
    pub observability: Option<ObservabilityReport>,
    /// The reduced, strictly observable spectral form.
    pub form: SpectralForm,
    /// Full spectrum: reduced eigenvalues plus detached ones.
    pub eigen: EigenStructure,
    /// Interlacing of the observable part.
    pub interlacing: InterlacingReport,
    pub canonical: CanonicalForm,
    pub diagnostics: Diagnostics,
}

/// Analyze a problem given directly in pole/residue form.
pub fn analyze_spectral_form(form: &SpectralForm) -> Result<Analysis> {
    analyze_reduced(form.clone(), None, None)
}

/// Analyze a bordered pencil: Kalman reduction first, then the observable
/// part, with detached eigenvalues appended as type-1 blocks.
pub fn analyze_pencil(pencil: &BorderedPencil) -> Result<Analysis> {
    let report = kalman_reduce(pencil)?;
    let u_sq = pencil.u_norm_sq();
    let mass: f64 =
        report.reduced.residues().iter().sum::<f64>() + report.reduced.dropped_residue();
    let parseval_gap = (mass - u_sq).abs();
    analyze_reduced(report.reduced.clone(), Some(report), Some(parseval_gap))
}

fn analyze_reduced(
    form: SpectralForm,
    observability: Option<ObservabilityReport>,
    parseval_gap: Option<f64>,
) -> Result<Analysis> {
    let secular = SecularFunction::new(&form);
    let reduced_eigen = secular.solve_spectrum()?;
    let interlacing = classify_interlacing(&reduced_eigen, &secular)?;
    let blocks = assign_signs(&reduced_eigen, &secular)?;

    let detached = form.detached().to_vec();
    let n = form.reduced_order() + detached.len();
    let overall_case = if form.reduced_order() == 1 && detached.is_empty() {
        CaseLabel::DegenerateSmall
    } else if detached.is_empty() {
        reduced_eigen.case_label
    } else {
        CaseLabel::Reducible
    };
    let canonical = assemble_canonical_form(blocks, &detached, overall_case)?;

    let mut records: Vec<EigenvalueRecord> = reduced_eigen.records.clone();
    for &mu in &detached {
        records.push(EigenvalueRecord::simple_real(mu, None));
    }
    records.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigen = EigenStructure {
        records,
        case_label: overall_case,
        complex_pair: reduced_eigen.complex_pair,
    };

    let max_secular_residual = eigen
        .records
        .iter()
        .filter(|r| r.is_real && r.algebraic_multiplicity == 1 && r.interval.is_some())
        .map(|r| secular.f_unchecked(r.value.re).abs())
        .fold(0.0, f64::max);

    let diagnostics = Diagnostics {
        tolerance_scale: tol::scale(),
        pole_gap_tolerance: tol::pole_gap(form.spread()),
        observability_tolerance: tol::observability(1.0),
        tangency_tolerance: tol::tangency(form.shift(), form.spread()),
        max_secular_residual,
        parseval_gap,
    };

    Ok(Analysis {
        n,
        observability,
        form,
        eigen,
        interlacing,
        canonical,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_problem;
    use crate::signs::SignValue;
    use num_complex::Complex64;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn observable_pencil_keeps_its_case() {
        let s = 1.0 / 2.0_f64.sqrt();
        let p = validate_problem(
            &[vec![r(1.0), r(0.0)], vec![r(0.0), r(-1.0)]],
            &[r(s), r(s)],
            0.0,
        )
        .unwrap();
        let an = analyze_pencil(&p).unwrap();
        assert_eq!(an.n, 3);
        assert_eq!(an.eigen.case_label, CaseLabel::FourD);
        assert_eq!(an.canonical.blocks.len(), 1);
        assert!(an.diagnostics.parseval_gap.unwrap() < 1e-14);
    }

    #[test]
    fn unobservable_pencil_is_reducible() {
        let s = 1.0 / 2.0_f64.sqrt();
        let p = validate_problem(
            &[
                vec![r(1.0), r(0.0), r(0.0)],
                vec![r(0.0), r(1.0), r(0.0)],
                vec![r(0.0), r(0.0), r(2.0)],
            ],
            &[r(s), r(s), r(1.0)],
            0.0,
        )
        .unwrap();
        let an = analyze_pencil(&p).unwrap();
        assert_eq!(an.eigen.case_label, CaseLabel::Reducible);
        assert_eq!(an.n, 4);
        assert_eq!(an.eigen.multiplicity_total(), 4);
        // detached eigenvalue 1 appears as a +1 type-1 block
        let detached_blocks: Vec<_> = an
            .canonical
            .blocks
            .iter()
            .filter(|b| b.block_type == 1 && b.epsilon == SignValue::Plus)
            .collect();
        assert!(!detached_blocks.is_empty());
        an.canonical.validate().unwrap();
        assert_eq!(an.canonical.signature(), (3, 1));
    }

    #[test]
    fn degenerate_one_by_one() {
        let p = validate_problem(&[], &[], 2.5).unwrap();
        let an = analyze_pencil(&p).unwrap();
        assert_eq!(an.eigen.case_label, CaseLabel::DegenerateSmall);
        assert_eq!(an.canonical.blocks.len(), 1);
        assert_eq!(an.canonical.blocks[0].epsilon, SignValue::Minus);
        assert_eq!(an.canonical.signature(), (0, 1));
    }

    #[test]
    fn fully_unobservable_input() {
        let p = validate_problem(
            &[vec![r(1.0), r(0.0)], vec![r(0.0), r(3.0)]],
            &[r(0.0), r(0.0)],
            0.5,
        )
        .unwrap();
        let an = analyze_pencil(&p).unwrap();
        assert_eq!(an.eigen.case_label, CaseLabel::Reducible);
        // spectrum is {3, 1} detached plus {0.5} from the 1x1 reduced block
        let values: Vec<f64> = an.eigen.records.iter().map(|r| r.value.re).collect();
        assert_eq!(values, vec![0.5, 1.0, 3.0]);
        assert_eq!(an.canonical.signature(), (2, 1));
    }
}
