//! Serializable analysis results. JSON numbers round-trip losslessly
//! (shortest-representation formatting), so parse(serialize(x)) == x.

use serde::{Deserialize, Serialize};

use minkspec_core::{Analysis, BlockEigenvalue, SignValue};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EigenvalueOut {
    pub value: [f64; 2],
    pub multiplicity: u8,
    pub jordan_block_size: u8,
    pub is_real: bool,
    pub interval: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BlockOut {
    pub block_type: u8,
    pub eigenvalue: [f64; 2],
    pub size: u8,
    pub epsilon: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DiagnosticsOut {
    pub tolerance_scale: f64,
    pub pole_gap_tolerance: f64,
    pub observability_tolerance: f64,
    pub tangency_tolerance: f64,
    pub max_secular_residual: f64,
    pub parseval_gap: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AnalysisOutput {
    pub n: usize,
    pub case: String,
    pub interlacing_case: String,
    pub observable: bool,
    pub unobservable_dimension: usize,
    pub detached_spectrum: Vec<f64>,
    pub poles: Vec<f64>,
    pub residues: Vec<f64>,
    pub shift: f64,
    pub eigenvalues: Vec<EigenvalueOut>,
    pub complex_pair: Option<[f64; 2]>,
    pub blocks: Vec<BlockOut>,
    pub canonical_valid: bool,
    pub signature: [usize; 2],
    pub interval_counts: Vec<(String, usize)>,
    pub narrative: String,
    pub diagnostics: DiagnosticsOut,
}

impl AnalysisOutput {
    pub fn from_analysis(analysis: &Analysis) -> Self {
        let (observable, unobservable_dimension, detached_spectrum) = match &analysis.observability
        {
            Some(rep) => (
                rep.observable,
                rep.unobservable_dimension,
                rep.detached_spectrum.clone(),
            ),
            None => (true, 0, analysis.form.detached().to_vec()),
        };
        let eigenvalues = analysis
            .eigen
            .records
            .iter()
            .map(|rec| EigenvalueOut {
                value: [rec.value.re, rec.value.im],
                multiplicity: rec.algebraic_multiplicity,
                jordan_block_size: rec.jordan_block_size,
                is_real: rec.is_real,
                interval: rec.interval.map(|id| id.to_string()),
            })
            .collect();
        let blocks = analysis
            .canonical
            .blocks
            .iter()
            .map(|b| BlockOut {
                block_type: b.block_type,
                eigenvalue: match b.eigenvalue {
                    BlockEigenvalue::Real(v) => [v, 0.0],
                    BlockEigenvalue::ComplexPair { re, im } => [re, im],
                },
                size: b.size,
                epsilon: match b.epsilon {
                    SignValue::Plus => "+1".into(),
                    SignValue::Minus => "-1".into(),
                    SignValue::NotApplicable => "n/a".into(),
                },
            })
            .collect();
        let signature = analysis.canonical.signature();
        AnalysisOutput {
            n: analysis.n,
            case: analysis.eigen.case_label.to_string(),
            interlacing_case: analysis.interlacing.case_label.to_string(),
            observable,
            unobservable_dimension,
            detached_spectrum,
            poles: analysis.form.poles().to_vec(),
            residues: analysis.form.residues().to_vec(),
            shift: analysis.form.shift(),
            eigenvalues,
            complex_pair: analysis.eigen.complex_pair.map(|(x, y)| [x, y]),
            blocks,
            canonical_valid: analysis.canonical.validate().is_ok(),
            signature: [signature.0, signature.1],
            interval_counts: analysis
                .interlacing
                .interval_counts
                .iter()
                .map(|(id, c)| (id.to_string(), *c))
                .collect(),
            narrative: analysis.interlacing.narrative.clone(),
            diagnostics: DiagnosticsOut {
                tolerance_scale: analysis.diagnostics.tolerance_scale,
                pole_gap_tolerance: analysis.diagnostics.pole_gap_tolerance,
                observability_tolerance: analysis.diagnostics.observability_tolerance,
                tangency_tolerance: analysis.diagnostics.tangency_tolerance,
                max_secular_residual: analysis.diagnostics.max_secular_residual,
                parseval_gap: analysis.diagnostics.parseval_gap,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("output serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "problem: n = {}, observable: {} ({} unobservable direction(s))\n",
            self.n,
            if self.observable { "yes" } else { "no" },
            self.unobservable_dimension
        ));
        if !self.detached_spectrum.is_empty() {
            out.push_str(&format!(
                "detached spectrum: {:?}\n",
                self.detached_spectrum
            ));
        }
        out.push_str(&format!("poles:    {:?}\n", self.poles));
        out.push_str(&format!("residues: {:?}\n", self.residues));
        out.push_str(&format!("shift a:  {}\n", self.shift));
        out.push_str(&format!("case: {}", self.case));
        if self.case != self.interlacing_case {
            out.push_str(&format!(" (observable part: {})", self.interlacing_case));
        }
        out.push('\n');
        out.push_str("eigenvalues:\n");
        for ev in &self.eigenvalues {
            let kind = match (ev.is_real, ev.multiplicity) {
                (true, 1) => "simple".to_string(),
                (true, m) => format!(
                    "multiplicity {m}, Jordan block size {}",
                    ev.jordan_block_size
                ),
                (false, _) => "complex".to_string(),
            };
            let place = ev
                .interval
                .as_deref()
                .map(|s| format!(", interval {s}"))
                .unwrap_or_default();
            if ev.value[1] == 0.0 {
                out.push_str(&format!("  λ = {} ({kind}{place})\n", ev.value[0]));
            } else {
                out.push_str(&format!(
                    "  λ = {} {} {}i ({kind})\n",
                    ev.value[0],
                    if ev.value[1] >= 0.0 { "+" } else { "-" },
                    ev.value[1].abs()
                ));
            }
        }
        out.push_str(&format!(
            "canonical form: {}; signature ({}, {})\n",
            if self.canonical_valid {
                "valid"
            } else {
                "INVALID"
            },
            self.signature[0],
            self.signature[1]
        ));
        out.push_str("blocks:\n");
        for b in &self.blocks {
            let ev = if b.eigenvalue[1] == 0.0 {
                format!("λ = {}", b.eigenvalue[0])
            } else {
                format!("λ = {} ± {}i", b.eigenvalue[0], b.eigenvalue[1])
            };
            out.push_str(&format!(
                "  type {}  size {}  {ev}  ε = {}\n",
                b.block_type, b.size, b.epsilon
            ));
        }
        out.push_str(&format!("interlacing: {}\n", self.narrative));
        out.push_str(&format!(
            "diagnostics: tol scale {}, max |f| at simple roots {:.3e}",
            self.diagnostics.tolerance_scale, self.diagnostics.max_secular_residual
        ));
        if let Some(gap) = self.diagnostics.parseval_gap {
            out.push_str(&format!(", Parseval gap {gap:.3e}"));
        }
        out.push('\n');
        out
    }
}
