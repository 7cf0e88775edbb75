//! Cyclic Jacobi eigendecomposition for Hermitian matrices with complex
//! rotations. Dependency-free and unconditionally stable; adequate for the
//! desk-scale orders this toolkit targets.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::model::HermitianMatrix;
use crate::tol;

/// Result of diagonalizing a Hermitian matrix: `vectors* · J · vectors`
/// equals `diag(values)` with `values` sorted descending.
#[derive(Clone, Debug)]
pub struct Eigendecomposition {
    pub vectors: CMatrix,
    pub values: Vec<f64>,
}

/// Diagonalize a validated Hermitian matrix by cyclic Jacobi sweeps.
pub fn hermitian_eigendecomposition(j: &HermitianMatrix) -> Result<Eigendecomposition> {
    let n = j.order();
    if n == 0 {
        return Ok(Eigendecomposition {
            vectors: CMatrix::zeros(0, 0),
            values: Vec::new(),
        });
    }
    let mut w = j.entries().clone();
    let mut v = CMatrix::identity(n);
    let threshold = tol::jacobi_threshold(j.fro_norm());

    for _sweep in 0..tol::JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let beta = w[(p, q)];
                let beta_mag = beta.norm();
                if beta_mag <= threshold {
                    continue;
                }
                rotated = true;
                rotate(&mut w, &mut v, p, q, beta, beta_mag);
            }
        }
        if !rotated {
            break;
        }
    }
    let off_max = (0..n)
        .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
        .map(|(p, q)| w[(p, q)].norm())
        .fold(0.0, f64::max);
    if off_max > threshold {
        return Err(Error::ConvergenceFailure {
            sweeps: tol::JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let values_raw: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    order.sort_by(|&a, &b| values_raw[b].partial_cmp(&values_raw[a]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| values_raw[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, new_col)] = v[(row, old_col)];
        }
    }
    Ok(Eigendecomposition { vectors, values })
}

/// One complex Jacobi rotation annihilating w[(p,q)].
///
/// With beta = w[(p,q)] = |beta| e^{iφ}, the unitary
///   G = [[e^{iφ} c, e^{iφ} s], [-s, c]]
/// (c, s the classic real rotation for [[α, |beta|], [|beta|, γ]])
/// satisfies (G* w G)[(p,q)] = 0.
fn rotate(w: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, beta: Complex64, beta_mag: f64) {
    let n = w.rows();
    let alpha = w[(p, p)].re;
    let gamma = w[(q, q)].re;
    let phase = beta / beta_mag;

    let tau = (gamma - alpha) / (2.0 * beta_mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let gpp = phase * c; // G[p][p]
    let gpq = phase * s; // G[p][q]
    let gqp = Complex64::new(-s, 0.0); // G[q][p]
    let gqq = Complex64::new(c, 0.0); // G[q][q]

    // Rows p, q of G* W.
    for k in 0..n {
        let wp = w[(p, k)];
        let wq = w[(q, k)];
        w[(p, k)] = gpp.conj() * wp + gqp.conj() * wq;
        w[(q, k)] = gpq.conj() * wp + gqq.conj() * wq;
    }
    // Columns p, q of (G* W) G.
    for k in 0..n {
        let wp = w[(k, p)];
        let wq = w[(k, q)];
        w[(k, p)] = wp * gpp + wq * gqp;
        w[(k, q)] = wp * gpq + wq * gqq;
    }
    // Clean the pivot pair: exact zeros off-diagonal, real diagonal.
    w[(p, q)] = Complex64::new(0.0, 0.0);
    w[(q, p)] = Complex64::new(0.0, 0.0);
    w[(p, p)] = Complex64::new(alpha - t * beta_mag, 0.0);
    w[(q, q)] = Complex64::new(gamma + t * beta_mag, 0.0);

    for k in 0..n {
        let vp = v[(k, p)];
        let vq = v[(k, q)];
        v[(k, p)] = vp * gpp + vq * gqp;
        v[(k, q)] = vp * gpq + vq * gqq;
    }
}
