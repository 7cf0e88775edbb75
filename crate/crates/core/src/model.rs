//! Problem statement types: the validated Hermitian block `J`, the bordered
//! matrix `A = [[J, u], [-u*, a]]` and the signature matrix `H = I ⊕ (-1)`
//! it is selfadjoint against, plus the per-eigenvalue record type.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::secular::IntervalId;
use crate::tol;

/// A validated Hermitian matrix: entries satisfy `m[i][j] = conj(m[j][i])`
/// exactly and diagonal imaginary parts are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    order: usize,
    entries: CMatrix,
}

impl HermitianMatrix {
    /// Validate and symmetrize a raw square grid. Asymmetry at or below the
    /// hermitian tolerance is averaged away; anything larger is an error.
    pub fn new(raw: &[Vec<Complex64>]) -> Result<Self> {
        let order = raw.len();
        for (i, row) in raw.iter().enumerate() {
            if row.len() != order {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {order}",
                    row.len()
                )));
            }
            for (j, z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry(format!("J[{i}][{j}]")));
                }
            }
        }
        let max_norm = raw.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        let tolerance = tol::hermitian(max_norm);
        let mut asymmetry: f64 = 0.0;
        for i in 0..order {
            for j in i..order {
                let gap = (raw[i][j] - raw[j][i].conj()).norm();
                asymmetry = asymmetry.max(gap);
            }
        }
        if asymmetry > tolerance {
            return Err(Error::NotHermitian {
                asymmetry,
                tolerance,
            });
        }
        let mut entries = CMatrix::zeros(order, order);
        for i in 0..order {
            entries[(i, i)] = Complex64::new(raw[i][i].re, 0.0);
            for j in i + 1..order {
                let avg = 0.5 * (raw[i][j] + raw[j][i].conj());
                entries[(i, j)] = avg;
                entries[(j, i)] = avg.conj();
            }
        }
        Ok(HermitianMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn max_norm(&self) -> f64 {
        self.entries.max_norm()
    }

    pub fn fro_norm(&self) -> f64 {
        self.entries.fro_norm()
    }
}

/// The validated triple `(J, u, a)` defining the bordered matrix `A` of
/// order `n = order(J) + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BorderedPencil {
    j: HermitianMatrix,
    u: Vec<Complex64>,
    a: f64,
}

impl BorderedPencil {
    pub fn new(j: HermitianMatrix, u: Vec<Complex64>, a: f64) -> Result<Self> {
        if u.len() != j.order() {
            return Err(Error::DimensionMismatch(format!(
                "u has length {}, expected {}",
                u.len(),
                j.order()
            )));
        }
        for (i, z) in u.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry(format!("u[{i}]")));
            }
        }
        if !a.is_finite() {
            return Err(Error::NonFiniteEntry("a".into()));
        }
        Ok(BorderedPencil { j, u, a })
    }

    pub fn j(&self) -> &HermitianMatrix {
        &self.j
    }

    pub fn u(&self) -> &[Complex64] {
        &self.u
    }

    pub fn shift(&self) -> f64 {
        self.a
    }

    /// Order of the bordered matrix `A`.
    pub fn n(&self) -> usize {
        self.j.order() + 1
    }

    pub fn u_norm_sq(&self) -> f64 {
        self.u.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Assemble the bordered matrix and the diagonal of `H = I ⊕ (-1)`.
    /// By construction `HA = A*H` holds entrywise exactly.
    pub fn assemble(&self) -> (CMatrix, Vec<f64>) {
        let m = self.j.order();
        let n = m + 1;
        let mut a = CMatrix::zeros(n, n);
        for i in 0..m {
            for j in 0..m {
                a[(i, j)] = self.j.entries()[(i, j)];
            }
            a[(i, m)] = self.u[i];
            a[(m, i)] = -self.u[i].conj();
        }
        a[(m, m)] = Complex64::new(self.a, 0.0);
        let mut h = vec![1.0; n];
        h[m] = -1.0;
        (a, h)
    }
}

/// Validate raw inputs into a pencil: `raw_J` square Hermitian within
/// tolerance, `raw_u` of matching length, everything finite.
pub fn validate_problem(
    raw_j: &[Vec<Complex64>],
    raw_u: &[Complex64],
    raw_a: f64,
) -> Result<BorderedPencil> {
    let j = HermitianMatrix::new(raw_j)?;
    BorderedPencil::new(j, raw_u.to_vec(), raw_a)
}

/// One Jordan block of the solved spectrum. Observable bordered matrices are
/// nonderogatory, so block size equals algebraic multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueRecord {
    pub value: Complex64,
    pub algebraic_multiplicity: u8,
    pub jordan_block_size: u8,
    pub is_real: bool,
    /// Pole interval hosting a real eigenvalue of the reduced problem;
    /// `None` for non-real values and detached eigenvalues.
    pub interval: Option<IntervalId>,
}

impl EigenvalueRecord {
    pub fn simple_real(value: f64, interval: Option<IntervalId>) -> Self {
        EigenvalueRecord {
            value: Complex64::new(value, 0.0),
            algebraic_multiplicity: 1,
            jordan_block_size: 1,
            is_real: true,
            interval,
        }
    }

    pub fn multiple_real(value: f64, multiplicity: u8, interval: Option<IntervalId>) -> Self {
        EigenvalueRecord {
            value: Complex64::new(value, 0.0),
            algebraic_multiplicity: multiplicity,
            jordan_block_size: multiplicity,
            is_real: true,
            interval,
        }
    }

    pub fn complex_member(re: f64, im: f64) -> Self {
        EigenvalueRecord {
            value: Complex64::new(re, im),
            algebraic_multiplicity: 1,
            jordan_block_size: 1,
            is_real: false,
            interval: None,
        }
    }
}
