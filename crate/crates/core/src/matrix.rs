//! Dense complex matrices, just enough for the toolkit: products, adjoints,
//! norms, an LU determinant and a rank-revealing elimination.

use num_complex::Complex64;
use std::ops::{Index, IndexMut};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged row in matrix literal");
            data.extend_from_slice(row);
        }
        CMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Shift the diagonal: self - z I.
    pub fn shift_diagonal(&self, z: Complex64) -> CMatrix {
        assert_eq!(self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] -= z;
        }
        out
    }

    pub fn pow(&self, k: u32) -> CMatrix {
        assert_eq!(self.rows, self.cols);
        let mut out = CMatrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant by LU with partial pivoting.
pub fn det_lu(m: &CMatrix) -> Complex64 {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = a[(col, col)].norm();
        for r in col + 1..n {
            let mag = a[(r, col)].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if pivot_mag == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = a[(col, j)];
                a[(col, j)] = a[(pivot_row, j)];
                a[(pivot_row, j)] = tmp;
            }
            det = -det;
        }
        let pivot = a[(col, col)];
        det *= pivot;
        for r in col + 1..n {
            let factor = a[(r, col)] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let sub = factor * a[(col, j)];
                a[(r, j)] -= sub;
            }
        }
    }
    det
}

/// Numerical rank by Gaussian elimination with full pivoting; pivots with
/// modulus at or below `cutoff` terminate the elimination.
pub fn rank_full_pivot(m: &CMatrix, cutoff: f64) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let steps = rows.min(cols);
    let mut rank = 0;
    let mut row_perm: Vec<usize> = (0..rows).collect();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    for step in 0..steps {
        let mut best = (step, step);
        let mut best_mag = 0.0;
        for r in step..rows {
            for c in step..cols {
                let mag = a[(row_perm[r], col_perm[c])].norm();
                if mag > best_mag {
                    best_mag = mag;
                    best = (r, c);
                }
            }
        }
        if best_mag <= cutoff {
            break;
        }
        row_perm.swap(step, best.0);
        col_perm.swap(step, best.1);
        rank += 1;
        let pr = row_perm[step];
        let pc = col_perm[step];
        let pivot = a[(pr, pc)];
        for r in step + 1..rows {
            let rr = row_perm[r];
            let factor = a[(rr, pc)] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in step..cols {
                let cc = col_perm[c];
                let sub = factor * a[(pr, cc)];
                a[(rr, cc)] -= sub;
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_and_adjoint() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(0.0, 2.0)],
            vec![c(3.0, 0.0), c(1.0, -1.0)],
        ]);
        let id = CMatrix::identity(2);
        assert_eq!(a.mul(&id), a);
        let aa = a.adjoint().adjoint();
        assert_eq!(aa, a);
    }

    #[test]
    fn determinant_of_triangular() {
        let a = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(5.0, 1.0), c(0.5, 0.0)],
            vec![c(0.0, 0.0), c(3.0, 0.0), c(-1.0, 2.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        ]);
        let d = det_lu(&a);
        assert!((d - c(-6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn determinant_with_complex_pivoting() {
        // det [[0, i], [i, 0]] = 1
        let a = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ]);
        let d = det_lu(&a);
        assert!((d - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rank_detects_deficiency() {
        // rank-1 outer product
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0), c(6.0, 0.0)],
            vec![c(-1.0, 0.0), c(-2.0, 0.0), c(-3.0, 0.0)],
        ]);
        assert_eq!(rank_full_pivot(&a, 1e-12), 1);
        assert_eq!(rank_full_pivot(&CMatrix::identity(4), 1e-12), 4);
        assert_eq!(rank_full_pivot(&CMatrix::zeros(3, 5), 1e-12), 0);
    }
}
