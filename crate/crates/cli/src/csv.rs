//! Deterministic CSV emission: fixed column sets, shortest-round-trip
//! scientific number formatting.

use minkspec_core::{NuCurveSample, TrajectoryPoint};

/// Columns: a, branch_index, re, im, case_label. One row per branch per
/// sample.
pub fn sweep_csv(points: &[TrajectoryPoint]) -> String {
    let mut out = String::from("a,branch_index,re,im,case_label\n");
    for p in points {
        for (branch, z) in p.eigenvalues.iter().enumerate() {
            out.push_str(&format!(
                "{:e},{},{:e},{:e},{}\n",
                p.a, branch, z.re, z.im, p.case_label
            ));
        }
    }
    out
}

/// Columns: lambda, nu_1..nu_n in matched curve order. One row per sample.
pub fn nu_csv(samples: &[NuCurveSample]) -> String {
    let n = samples.first().map_or(0, |s| s.nus.len());
    let mut out = String::from("lambda");
    for j in 1..=n {
        out.push_str(&format!(",nu_{j}"));
    }
    out.push('\n');
    for s in samples {
        out.push_str(&format!("{:e}", s.lambda));
        for v in &s.nus {
            out.push_str(&format!(",{v:e}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use minkspec_core::spectral::SpectralForm;
    use minkspec_core::{eigenvalue_trajectories, CaseLabel};

    #[test]
    fn two_step_sweep_has_two_n_rows() {
        let form = SpectralForm::new(vec![1.0, -1.0], vec![0.5, 0.5], 0.0).unwrap();
        let points = eigenvalue_trajectories(&form, 2.0, 2.0 + 1e-9, 2).unwrap();
        let csv = sweep_csv(&points);
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "a,branch_index,re,im,case_label");
        assert_eq!(rows.len() - 1, 2 * 3, "2 samples x n = 3 branches");
    }

    #[test]
    fn csv_is_deterministic() {
        let form = SpectralForm::new(vec![2.0, 0.0], vec![0.3, 0.7], 0.0).unwrap();
        let a = sweep_csv(&eigenvalue_trajectories(&form, -1.0, 1.0, 21).unwrap());
        let b = sweep_csv(&eigenvalue_trajectories(&form, -1.0, 1.0, 21).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn case_labels_appear_in_rows() {
        let form = SpectralForm::new(vec![1.0, -1.0], vec![0.5, 0.5], 0.0).unwrap();
        let points = eigenvalue_trajectories(&form, -3.0, 3.0, 61).unwrap();
        let csv = sweep_csv(&points);
        assert!(csv.contains(&CaseLabel::Two.to_string()));
        assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 5));
    }
}
