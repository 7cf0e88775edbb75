//! Pole/residue (spectral) form of the bordered problem.
//!
//! Diagonalizing `J` turns `u*(λI - J)^{-1}u` into `Σ d_j / (λ - μ_j)` with
//! `d_j = |(V*u)_j|²`. Coincident poles are merged by summing residues and
//! residues below the observability threshold are split off, so the retained
//! form is always strictly observable: distinct poles, positive residues.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jacobi::hermitian_eigendecomposition;
use crate::model::BorderedPencil;
use crate::tol;

/// Shift-and-poles data for the secular function: strictly decreasing poles
/// `μ_1 > … > μ_m`, positive residues, the border scalar `a`, and the
/// eigenvalues detached by unobservability.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralForm {
    poles: Vec<f64>,
    residues: Vec<f64>,
    shift: f64,
    detached: Vec<f64>,
    dropped_residue: f64,
}

impl SpectralForm {
    /// Build a form from user-supplied data. Poles must be strictly
    /// decreasing with gaps above the merge tolerance; residues positive.
    pub fn new(poles: Vec<f64>, residues: Vec<f64>, shift: f64) -> Result<Self> {
        if poles.len() != residues.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} poles but {} residues",
                poles.len(),
                residues.len()
            )));
        }
        if !shift.is_finite() {
            return Err(Error::NonFiniteEntry("a".into()));
        }
        for (i, &p) in poles.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFiniteEntry(format!("mu[{i}]")));
            }
        }
        for (i, &d) in residues.iter().enumerate() {
            if !d.is_finite() {
                return Err(Error::NonFiniteEntry(format!("d[{i}]")));
            }
            if d <= 0.0 {
                return Err(Error::InvalidSpectralForm(format!(
                    "residue d[{i}] = {d} is not positive"
                )));
            }
        }
        let spread = if poles.len() > 1 {
            poles[0] - poles[poles.len() - 1]
        } else {
            0.0
        };
        let gap_tol = tol::pole_gap(spread);
        for (i, w) in poles.windows(2).enumerate() {
            if w[0] - w[1] <= gap_tol {
                return Err(Error::InvalidSpectralForm(format!(
                    "poles mu[{i}] = {} and mu[{}] = {} are not strictly decreasing \
                     with gap above {gap_tol:.3e}",
                    w[0],
                    i + 1,
                    w[1]
                )));
            }
        }
        Ok(SpectralForm {
            poles,
            residues,
            shift,
            detached: Vec::new(),
            dropped_residue: 0.0,
        })
    }

    pub(crate) fn from_parts(
        poles: Vec<f64>,
        residues: Vec<f64>,
        shift: f64,
        detached: Vec<f64>,
        dropped_residue: f64,
    ) -> Self {
        SpectralForm {
            poles,
            residues,
            shift,
            detached,
            dropped_residue,
        }
    }

    /// Poles in strictly decreasing order.
    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn residues(&self) -> &[f64] {
        &self.residues
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Eigenvalues split off into the unobservable part, descending.
    pub fn detached(&self) -> &[f64] {
        &self.detached
    }

    /// Residue mass discarded with the detached eigenvalues.
    pub fn dropped_residue(&self) -> f64 {
        self.dropped_residue
    }

    /// Order of the reduced bordered matrix: poles + 1.
    pub fn reduced_order(&self) -> usize {
        self.poles.len() + 1
    }

    /// μ_1 - μ_m, zero when fewer than two poles.
    pub fn spread(&self) -> f64 {
        if self.poles.len() > 1 {
            self.poles[0] - self.poles[self.poles.len() - 1]
        } else {
            0.0
        }
    }

    /// Same poles and residues under a different border scalar.
    pub fn with_shift(&self, shift: f64) -> SpectralForm {
        let mut out = self.clone();
        out.shift = shift;
        out
    }

    /// Ascending coefficients of the monic characteristic polynomial of the
    /// reduced bordered matrix, in cleared-denominator product form:
    /// `(λ - a) Π_j (λ - μ_j) + Σ_j d_j Π_{k≠j} (λ - μ_k)`.
    pub fn characteristic_polynomial(&self) -> Vec<f64> {
        let m = self.poles.len();
        let mut base = vec![1.0];
        for &mu in &self.poles {
            poly_mul_linear(&mut base, mu);
        }
        let mut p = base.clone();
        poly_mul_linear(&mut p, self.shift);
        for (j, &d) in self.residues.iter().enumerate() {
            let mut partial = vec![1.0];
            for (k, &mu) in self.poles.iter().enumerate() {
                if k != j {
                    poly_mul_linear(&mut partial, mu);
                }
            }
            for (c, q) in p.iter_mut().zip(&partial) {
                *c += d * q;
            }
        }
        debug_assert_eq!(p.len(), m + 2);
        p
    }
}

/// Multiply an ascending-coefficient polynomial by `(λ - root)` in place.
fn poly_mul_linear(coeffs: &mut Vec<f64>, root: f64) {
    coeffs.push(0.0);
    for k in (1..coeffs.len()).rev() {
        coeffs[k] = coeffs[k - 1] - root * coeffs[k];
    }
    coeffs[0] *= -root;
}

/// Convert a validated pencil to spectral form: eigendecompose `J`, square
/// the rotated border moduli, merge coincident poles, detach residues below
/// the observability threshold.
pub fn to_spectral_form(p: &BorderedPencil) -> Result<SpectralForm> {
    let eig = hermitian_eigendecomposition(p.j())?;
    let m = p.j().order();
    let u = p.u();
    // w = V* u, residues |w_j|^2
    let mut raw_residues = Vec::with_capacity(m);
    for col in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for row in 0..m {
            acc += eig.vectors[(row, col)].conj() * u[row];
        }
        raw_residues.push(acc.norm_sqr());
    }

    let spread = if m > 1 {
        eig.values[0] - eig.values[m - 1]
    } else {
        0.0
    };
    let gap_tol = tol::pole_gap(spread);
    let obs_tol = tol::observability(p.u_norm_sq());

    let mut poles = Vec::new();
    let mut residues = Vec::new();
    let mut detached = Vec::new();
    let mut dropped_residue = 0.0;

    let mut i = 0;
    while i < m {
        // cluster of numerically coincident eigenvalues
        let mut j = i + 1;
        while j < m && eig.values[j - 1] - eig.values[j] <= gap_tol {
            j += 1;
        }
        let cluster = &eig.values[i..j];
        let mass: f64 = raw_residues[i..j].iter().sum();
        let center = if mass > 0.0 {
            cluster
                .iter()
                .zip(&raw_residues[i..j])
                .map(|(mu, d)| mu * d)
                .sum::<f64>()
                / mass
        } else {
            cluster.iter().sum::<f64>() / cluster.len() as f64
        };
        if mass > obs_tol {
            poles.push(center);
            residues.push(mass);
            for _ in 0..cluster.len() - 1 {
                detached.push(center);
            }
        } else {
            dropped_residue += mass;
            for _ in 0..cluster.len() {
                detached.push(center);
            }
        }
        i = j;
    }

    Ok(SpectralForm::from_parts(
        poles,
        residues,
        p.shift(),
        detached,
        dropped_residue,
    ))
}
