//! Observability of the pair `(J, u*)` and the Kalman split it induces.
//!
//! Observability is decided in eigencoordinates: an eigenvalue of `J` passes
//! the Hautus test exactly when it is simple and carries a residue above the
//! observability threshold. Failing directions are split off; their
//! eigenvalues stay eigenvalues of `A` and the rest of the problem reduces
//! to a strictly observable bordered matrix.

use num_complex::Complex64;

use crate::error::Result;
use crate::jacobi::hermitian_eigendecomposition;
use crate::matrix::{rank_full_pivot, CMatrix};
use crate::model::{BorderedPencil, HermitianMatrix};
use crate::spectral::{to_spectral_form, SpectralForm};
use crate::tol;

/// Hautus verdict per distinct eigenvalue of `J`, plus the conjunction.
#[derive(Clone, Debug, PartialEq)]
pub struct HautusVerdict {
    /// (eigenvalue, passes) for each distinct eigenvalue, descending.
    pub per_eigenvalue: Vec<(f64, bool)>,
    pub observable: bool,
}

/// Outcome of the Kalman reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservabilityReport {
    pub observable: bool,
    pub unobservable_dimension: usize,
    /// σ(J₁): eigenvalues of the unobservable part, descending multiset.
    pub detached_spectrum: Vec<f64>,
    /// Spectral form of the observable pair.
    pub reduced: SpectralForm,
}

/// Per-eigenvalue Hautus test for `(J, u*)` in eigencoordinates.
pub fn hautus_test(j: &HermitianMatrix, u: &[Complex64]) -> Result<HautusVerdict> {
    let eig = hermitian_eigendecomposition(j)?;
    let m = j.order();
    let mut residues = Vec::with_capacity(m);
    for col in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for row in 0..m {
            acc += eig.vectors[(row, col)].conj() * u[row];
        }
        residues.push(acc.norm_sqr());
    }
    let spread = if m > 1 {
        eig.values[0] - eig.values[m - 1]
    } else {
        0.0
    };
    let gap_tol = tol::pole_gap(spread);
    let u_norm_sq: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let obs_tol = tol::observability(u_norm_sq);

    let mut per_eigenvalue = Vec::new();
    let mut i = 0;
    while i < m {
        let mut k = i + 1;
        while k < m && eig.values[k - 1] - eig.values[k] <= gap_tol {
            k += 1;
        }
        let simple = k - i == 1;
        let mass: f64 = residues[i..k].iter().sum();
        per_eigenvalue.push((eig.values[i], simple && mass > obs_tol));
        i = k;
    }
    let observable = per_eigenvalue.iter().all(|&(_, ok)| ok);
    Ok(HautusVerdict {
        per_eigenvalue,
        observable,
    })
}

/// Rank test on the stacked matrix `[λI - J; u*]` itself, for callers who
/// want the textbook form. Rank is revealed by full-pivot elimination with
/// the rank cutoff; the pair passes at `λ` when the rank is `order(J)`.
pub fn hautus_test_stacked(j: &HermitianMatrix, u: &[Complex64], lambda: f64) -> bool {
    let m = j.order();
    let mut stacked = CMatrix::zeros(m + 1, m);
    for row in 0..m {
        for col in 0..m {
            stacked[(row, col)] = -j.entries()[(row, col)];
        }
        stacked[(row, row)] += Complex64::new(lambda, 0.0);
    }
    for col in 0..m {
        stacked[(m, col)] = u[col].conj();
    }
    let u_norm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let cutoff = tol::rank(j.max_norm().max(lambda.abs()), u_norm);
    rank_full_pivot(&stacked, cutoff) == m
}

/// Kalman reduction of a pencil: split off the unobservable eigenvalues and
/// return the spectral form of the observable part.
pub fn kalman_reduce(p: &BorderedPencil) -> Result<ObservabilityReport> {
    let reduced = to_spectral_form(p)?;
    let detached_spectrum = reduced.detached().to_vec();
    let unobservable_dimension = detached_spectrum.len();
    Ok(ObservabilityReport {
        observable: unobservable_dimension == 0,
        unobservable_dimension,
        detached_spectrum,
        reduced,
    })
}
