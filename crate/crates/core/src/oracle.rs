//! Independent brute-force verification paths: simultaneous polynomial root
//! iteration on the characteristic polynomial, the real eigenvalue curves
//! ν_j(λ) of the Hermitian pencil λH - HA, and numerical Jordan structure
//! probing by rank-revealing elimination.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jacobi::hermitian_eigendecomposition;
use crate::matrix::{rank_full_pivot, CMatrix};
use crate::model::BorderedPencil;
use crate::model::HermitianMatrix;
use crate::secular::SecularFunction;
use crate::spectral::SpectralForm;
use crate::tol;

/// All roots of the characteristic polynomial of the reduced bordered
/// matrix, by Aberth–Ehrlich simultaneous iteration.
///
/// The iteration works in the cleared-denominator product representation
/// `p(z) = B(z)·F(z)` with `B = Π(z - μ_j)` and
/// `F(z) = z - a + Σ d_j/(z - μ_j)`, so the Newton correction is
/// `p/p' = F/(s₁F + F')` with `s₁ = Σ 1/(z - μ_j)`. Evaluation noise then
/// scales with the local term sizes instead of the expanded coefficients,
/// which for wide pole spreads are orders of magnitude worse conditioned.
pub fn char_poly_roots_oracle(form: &SpectralForm) -> Result<Vec<Complex64>> {
    let poles = form.poles();
    let residues = form.residues();
    let shift = form.shift();
    let m = poles.len();
    let deg = m + 1;
    if m == 0 {
        return Ok(vec![Complex64::new(shift, 0.0)]);
    }

    let center = (poles.iter().sum::<f64>() + shift) / deg as f64;
    let d_sum: f64 = residues.iter().sum();
    let radius = poles
        .iter()
        .map(|&mu| (mu - center).abs())
        .fold((shift - center).abs(), f64::max)
        + d_sum.sqrt()
        + 1.0;
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.43;
            Complex64::new(center, 0.0) + Complex64::from_polar(radius, angle)
        })
        .collect();

    // F, p'/B, and the local magnitude scale of F at z
    let eval = |z: Complex64| -> (Complex64, Complex64, f64) {
        let mut f = z - Complex64::new(shift, 0.0);
        let mut fp = Complex64::new(1.0, 0.0);
        let mut s1 = Complex64::new(0.0, 0.0);
        let mut local = z.norm() + shift.abs();
        for (&mu, &d) in poles.iter().zip(residues) {
            let mut gap = z - Complex64::new(mu, 0.0);
            if gap.norm() == 0.0 {
                gap = Complex64::new(f64::EPSILON, f64::EPSILON);
            }
            let term = Complex64::new(d, 0.0) / gap;
            f += term;
            fp -= term / gap;
            s1 += Complex64::new(1.0, 0.0) / gap;
            local += term.norm();
        }
        (f, s1 * f + fp, local)
    };

    let eps = f64::EPSILON;
    let mut frozen = vec![false; deg];
    let mut iterations = 0;
    for iter in 0..500 {
        iterations = iter + 1;
        let mut active = false;
        let snapshot = roots.clone();
        for k in 0..deg {
            if frozen[k] {
                continue;
            }
            let z = snapshot[k];
            let (f, dp_over_b, local) = eval(z);
            if f.norm() <= 4.0 * eps * local {
                frozen[k] = true;
                continue;
            }
            let newton = if dp_over_b.norm() > 0.0 {
                f / dp_over_b
            } else {
                Complex64::new(eps.sqrt(), eps.sqrt())
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &other) in snapshot.iter().enumerate() {
                if j != k && (z - other).norm() > 0.0 {
                    repulsion += Complex64::new(1.0, 0.0) / (z - other);
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 0.0 {
                newton / denom
            } else {
                newton
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            roots[k] = z - step;
            if step.norm() > 4.0 * eps * (1.0 + roots[k].norm()) {
                active = true;
            } else {
                frozen[k] = true;
            }
        }
        if !active {
            break;
        }
    }

    for &z in &roots {
        let (f, _, local) = eval(z);
        // |p| = |B|·|F| against the scale |B|·local: the B factors cancel
        if f.norm() > tol::oracle_residual() * local.max(1.0) {
            return Err(Error::OracleDivergence { iterations });
        }
    }
    Ok(roots)
}

/// All eigenvalues of a square complex matrix: Faddeev–LeVerrier
/// characteristic polynomial in a trace-centered coordinate, then
/// simultaneous root iteration.
pub fn dense_matrix_roots(a: &CMatrix) -> Result<Vec<Complex64>> {
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let trace: Complex64 = (0..n).map(|i| a[(i, i)]).sum();
    let center = Complex64::new(trace.re / n as f64, 0.0);
    let centered = a.shift_diagonal(center);
    let coeffs = dense_characteristic_polynomial(&centered);
    let roots = polynomial_roots(&coeffs)?;
    Ok(roots.into_iter().map(|z| z + center).collect())
}

/// Horner evaluation of p and p'.
fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Backward-error scale Σ |c_i| |z|^i for residual tests.
fn poly_scale(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let mut scale = 0.0;
    let mut power = 1.0;
    for c in coeffs {
        scale += c.norm() * power;
        power *= r;
    }
    scale
}

/// Fujiwara bound on root moduli of a monic polynomial.
fn root_radius(coeffs: &[Complex64]) -> f64 {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg].norm();
    let mut bound = 0.0f64;
    for i in 0..deg {
        let ratio = (coeffs[i].norm() / lead).powf(1.0 / (deg - i) as f64);
        bound = bound.max(ratio);
    }
    2.0 * bound
}

/// All complex roots of a polynomial with the given ascending coefficients.
/// The leading coefficient must be nonzero.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    assert!(
        coeffs.last().map(|c| c.norm() > 0.0).unwrap_or(false),
        "leading coefficient must be nonzero"
    );
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }

    let max_iter = 500;
    let center = -coeffs[deg - 1] / (Complex64::new(deg as f64, 0.0) * coeffs[deg]);
    let radius = root_radius(coeffs).max(1e-3) * 0.5 + 1e-3;
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.43;
            center + Complex64::from_polar(radius, angle)
        })
        .collect();

    let eps = f64::EPSILON;
    let residual_stop = 4.0 * eps;
    let mut frozen = vec![false; deg];
    let mut iterations = 0;
    for iter in 0..max_iter {
        iterations = iter + 1;
        let mut max_step = 0.0f64;
        let snapshot = roots.clone();
        for k in 0..deg {
            if frozen[k] {
                continue;
            }
            let z = snapshot[k];
            let (p, dp) = eval_with_derivative(coeffs, z);
            if p.norm() <= residual_stop * poly_scale(coeffs, z) {
                // at the evaluation-noise floor: updating further would
                // random-walk on rounding noise
                frozen[k] = true;
                continue;
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                Complex64::new(eps.sqrt(), eps.sqrt())
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &other) in snapshot.iter().enumerate() {
                if j == k {
                    continue;
                }
                let diff = z - other;
                if diff.norm() > 0.0 {
                    repulsion += Complex64::new(1.0, 0.0) / diff;
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 0.0 {
                newton / denom
            } else {
                newton
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            roots[k] = z - step;
            max_step = max_step.max(step.norm() / (1.0 + roots[k].norm()));
        }
        if max_step <= 4.0 * eps {
            break;
        }
    }

    for &z in &roots {
        let (p, _) = eval_with_derivative(coeffs, z);
        if p.norm() > tol::oracle_residual() * poly_scale(coeffs, z).max(1.0) {
            return Err(Error::OracleDivergence { iterations });
        }
    }
    Ok(roots)
}

/// Eigenvalues of λH - HA at one grid point, ascending.
fn nu_values(a: &CMatrix, h: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let n = h.len();
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = -Complex64::new(h[i], 0.0) * a[(i, j)];
            if i == j {
                v += Complex64::new(lambda * h[i], 0.0);
            }
            rows[i][j] = v;
        }
    }
    let herm = HermitianMatrix::new(&rows)?;
    let eig = hermitian_eigendecomposition(&herm)?;
    let mut vals = eig.values;
    vals.reverse(); // ascending
    Ok(vals)
}

/// One sample of the ν-curves: the n real eigenvalues of λH - HA, in curve
/// order, plus the permutation that matched them to the previous sample.
#[derive(Clone, Debug, PartialEq)]
pub struct NuCurveSample {
    pub lambda: f64,
    /// Eigenvalues of λH - HA in curve order: index j follows one continuous
    /// curve across all samples.
    pub nus: Vec<f64>,
    /// matching[i] = curve index continued by the i-th smallest eigenvalue
    /// at this λ; identity on the first sample.
    pub matching: Vec<usize>,
}

/// Sample the ν-curves of λH - HA over a sorted grid and match consecutive
/// samples into continuous curves by nearest-neighbor assignment.
pub fn nu_curves(pencil: &BorderedPencil, grid: &[f64]) -> Result<Vec<NuCurveSample>> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "ν-curve grid must be strictly increasing".into(),
        ));
    }
    let (a, h) = pencil.assemble();
    let n = h.len();
    let mut samples: Vec<NuCurveSample> = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let sorted = nu_values(&a, &h, lambda)?;
        match samples.last() {
            None => samples.push(NuCurveSample {
                lambda,
                nus: sorted,
                matching: (0..n).collect(),
            }),
            Some(prev) => {
                let matching = nearest_assignment(&prev.nus, &sorted);
                // reorder so that curve j stays at position j
                let mut nus = vec![0.0; n];
                for (rank, &curve) in matching.iter().enumerate() {
                    nus[curve] = sorted[rank];
                }
                samples.push(NuCurveSample {
                    lambda,
                    nus,
                    matching,
                })
            }
        }
    }
    Ok(samples)
}

/// Greedy globally-shortest-pair-first assignment between two equal-length
/// value lists. Returns `assign` with `assign[i] = j` pairing next[i] ↔
/// prev[j].
fn nearest_assignment(prev: &[f64], next: &[f64]) -> Vec<usize> {
    let n = prev.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, &x) in next.iter().enumerate() {
        for (j, &y) in prev.iter().enumerate() {
            pairs.push(((x - y).abs(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut assign = vec![usize::MAX; n];
    let mut used_prev = vec![false; n];
    let mut placed = 0;
    for (_, i, j) in pairs {
        if assign[i] != usize::MAX || used_prev[j] {
            continue;
        }
        assign[i] = j;
        used_prev[j] = true;
        placed += 1;
        if placed == n {
            break;
        }
    }
    assign
}

/// Agreement report between the finite-difference slope of the ν-curve
/// through zero at a simple eigenvalue and the analytic value
/// -(1 - g'(λ))/(1 + g'(λ)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NuDerivativeCheck {
    pub numeric: f64,
    pub analytic: f64,
    pub relative_gap: f64,
    pub agree: bool,
}

/// The ν-curve through zero, evaluated as the eigenvalue of λH - HA of
/// smallest modulus.
fn nu_through_zero(a: &CMatrix, h: &[f64], lambda: f64) -> Result<f64> {
    let vals = nu_values(a, h, lambda)?;
    Ok(vals
        .into_iter()
        .min_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap())
        .unwrap())
}

/// Central-difference slope of the zero-crossing ν-curve at a simple real
/// eigenvalue, Richardson-extrapolated once, against the analytic formula.
pub fn nu_derivative_check(
    pencil: &BorderedPencil,
    secular: &SecularFunction<'_>,
    lambda_i: f64,
) -> Result<NuDerivativeCheck> {
    let (a, h) = pencil.assemble();
    let step = 1e-5 * (1.0 + lambda_i.abs());
    let diff = |hh: f64| -> Result<f64> {
        let up = nu_through_zero(&a, &h, lambda_i + hh)?;
        let dn = nu_through_zero(&a, &h, lambda_i - hh)?;
        Ok((up - dn) / (2.0 * hh))
    };
    let d1 = diff(step)?;
    let d2 = diff(0.5 * step)?;
    let numeric = (4.0 * d2 - d1) / 3.0;
    let gp = secular.gp_unchecked(lambda_i);
    let analytic = -(1.0 - gp) / (1.0 + gp);
    let denom = analytic.abs().max(f64::MIN_POSITIVE);
    let relative_gap = (numeric - analytic).abs() / denom;
    Ok(NuDerivativeCheck {
        numeric,
        analytic,
        relative_gap,
        agree: relative_gap <= 1e-4 * tol::scale(),
    })
}

/// Numerical rank of (A - λI)^k by full-pivot elimination with cutoff
/// 1e-8 · max-norm of the power. A rounding floor of order
/// ε · ‖A - λI‖^k keeps exactly-nilpotent powers at rank zero.
pub fn jordan_rank_probe(pencil: &BorderedPencil, lambda: Complex64, k: u32) -> usize {
    let (a, _) = pencil.assemble();
    let n = a.rows() as f64;
    let shifted = a.shift_diagonal(lambda);
    let power = shifted.pow(k);
    let noise_floor = 100.0 * n * f64::EPSILON * shifted.max_norm().powi(k as i32);
    let cutoff = (1e-8 * power.max_norm()).max(noise_floor) * tol::scale();
    rank_full_pivot(&power, cutoff)
}

/// Jordan block size at λ certified by successive rank drops of exactly one:
/// ranks (n-1, n-2, …) down to the stabilization point. Returns `None` when
/// the drops do not follow the nonderogatory pattern.
pub fn jordan_block_size(pencil: &BorderedPencil, lambda: Complex64, max_size: u32) -> Option<u8> {
    let n = pencil.n();
    let mut previous = n;
    let mut size = 0u8;
    for k in 1..=max_size {
        let rank = jordan_rank_probe(pencil, lambda, k);
        if rank + 1 == previous {
            size = k as u8;
            previous = rank;
        } else if rank == previous {
            break;
        } else {
            return None;
        }
    }
    if size == 0 {
        None
    } else {
        Some(size)
    }
}

/// Characteristic polynomial of an arbitrary square complex matrix by the
/// Faddeev–LeVerrier recurrence; ascending coefficients, monic.
pub fn dense_characteristic_polynomial(a: &CMatrix) -> Vec<Complex64> {
    let n = a.rows();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A (M_{k-1} + c_{n-k+1} I)
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] += coeffs[n - k + 1];
        }
        m = a.mul(&shifted);
        let trace: Complex64 = (0..n).map(|i| m[(i, i)]).sum();
        coeffs[n - k] = -trace / Complex64::new(k as f64, 0.0);
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_problem;
    use crate::spectral::to_spectral_form;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn example2_pencil(a: f64) -> BorderedPencil {
        let s = 1.0 / 2.0_f64.sqrt();
        validate_problem(
            &[vec![r(1.0), r(0.0)], vec![r(0.0), r(-1.0)]],
            &[r(s), r(s)],
            a,
        )
        .unwrap()
    }

    #[test]
    fn quadratic_pair() {
        // p(λ) = λ² + 1
        let form = SpectralForm::new(vec![0.0], vec![1.0], 0.0).unwrap();
        let mut roots = char_poly_roots_oracle(&form).unwrap();
        roots.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((roots[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((roots[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn triple_root_cluster_at_zero() {
        let form = SpectralForm::new(vec![1.0, -1.0], vec![0.5, 0.5], 0.0).unwrap();
        let roots = char_poly_roots_oracle(&form).unwrap();
        assert_eq!(roots.len(), 3);
        for z in roots {
            assert!(z.norm() < 1e-4, "triple-root cluster too wide: {z}");
        }
    }

    #[test]
    fn random_polynomial_residuals() {
        // roots 1..=6 exactly
        let mut coeffs = vec![r(1.0)];
        for root in 1..=6 {
            let mut next = vec![r(0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r(root as f64);
            }
            coeffs = next;
        }
        let mut roots = polynomial_roots(&coeffs).unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (i, z) in roots.iter().enumerate() {
            assert!(
                (z - r((i + 1) as f64)).norm() < 1e-9,
                "root {z} vs {}",
                i + 1
            );
        }
    }

    #[test]
    fn nu_curve_vanishes_at_eigenvalues() {
        // Example 2 at a = 0 has the triple eigenvalue 0
        let p = example2_pencil(0.0);
        let (a, h) = p.assemble();
        let at_zero = nu_through_zero(&a, &h, 0.0).unwrap();
        assert!(at_zero.abs() < 1e-9);
        // off the spectrum no curve vanishes
        let off = nu_through_zero(&a, &h, 0.5).unwrap();
        assert!(off.abs() > 1e-3);
    }

    #[test]
    fn nu_curves_sample_count_and_matching() {
        let p = example2_pencil(0.0);
        let grid: Vec<f64> = (0..21).map(|i| -0.5 + i as f64 * 0.05).collect();
        let samples = nu_curves(&p, &grid).unwrap();
        assert_eq!(samples.len(), 21);
        for s in &samples {
            assert_eq!(s.nus.len(), 3);
            let mut sorted = s.matching.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![0, 1, 2]);
        }
    }

    #[test]
    fn derivative_check_on_isolated_eigenvalue() {
        // far-field: g' ≈ 0 so ν' ≈ -1
        let p = validate_problem(&[vec![r(0.0)]], &[r(0.1)], 100.0).unwrap();
        let form = to_spectral_form(&p).unwrap();
        let secular = SecularFunction::new(&form);
        let eigen = secular.solve_spectrum().unwrap();
        let far = eigen
            .records
            .iter()
            .map(|rec| rec.value.re)
            .max_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap();
        let check = nu_derivative_check(&p, &secular, far).unwrap();
        assert!(check.agree, "gap {}", check.relative_gap);
        assert!((check.analytic + 1.0).abs() < 1e-3);
    }

    #[test]
    fn degenerate_problem_has_slope_minus_one() {
        // A = [a], H = (-1): ν(λ) = a - λ exactly, matching the formula
        // with g' ≡ 0
        let p = validate_problem(&[], &[], 2.5).unwrap();
        let form = to_spectral_form(&p).unwrap();
        let secular = SecularFunction::new(&form);
        let check = nu_derivative_check(&p, &secular, 2.5).unwrap();
        assert!((check.analytic + 1.0).abs() < 1e-15);
        assert!((check.numeric + 1.0).abs() < 1e-9);
        assert!(check.agree);
    }

    #[test]
    fn jordan_ranks_of_the_triple_block() {
        let p = example2_pencil(0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(jordan_rank_probe(&p, zero, 1), 2);
        assert_eq!(jordan_rank_probe(&p, zero, 2), 1);
        assert_eq!(jordan_rank_probe(&p, zero, 3), 0);
        assert_eq!(jordan_block_size(&p, zero, 3), Some(3));
    }

    #[test]
    fn dense_char_poly_matches_product_form() {
        let p = example2_pencil(0.25);
        let (a, _) = p.assemble();
        let dense = dense_characteristic_polynomial(&a);
        let form = to_spectral_form(&p).unwrap();
        let product = form.characteristic_polynomial();
        assert_eq!(dense.len(), product.len());
        for (d, q) in dense.iter().zip(&product) {
            assert!((d - r(*q)).norm() < 1e-12, "{d} vs {q}");
        }
    }
}
