//! Spectral structure of bordered Hermitian matrices in an indefinite inner
//! product space with one negative square.
//!
//! Given `A = [[J, u], [-u*, a]]` with `J` Hermitian and `a` real, which is
//! selfadjoint for `H = I ⊕ (-1)`, this crate computes the full spectral
//! picture: all eigenvalues with Jordan block sizes, the interlacing case
//! relative to the eigenvalues of `J`, the sign characteristic, the
//! canonical block list of the pair `(A, H)`, and the behavior of all of
//! these as the border scalar `a` varies.
//!
//! The mainline route is structure-first: diagonalize `J`, reduce to the
//! observable pole/residue form, and read root counts off the convexity of
//! `g'` per pole interval. Everything is cross-checkable against slower
//! brute-force oracles in [`oracle`]: simultaneous polynomial root finding,
//! dense determinants, ν-eigencurves of `λH - HA`, and rank probes.

pub mod analysis;
pub mod error;
pub mod jacobi;
pub mod matrix;
pub mod model;
pub mod observability;
pub mod oracle;
pub mod secular;
pub mod signs;
pub mod spectral;
pub mod sweep;
pub mod tol;

pub use num_complex::Complex64;

pub use analysis::{analyze_pencil, analyze_spectral_form, Analysis, Diagnostics};
pub use error::{Error, Result};
pub use jacobi::{hermitian_eigendecomposition, Eigendecomposition};
pub use matrix::CMatrix;
pub use model::{validate_problem, BorderedPencil, EigenvalueRecord, HermitianMatrix};
pub use observability::{hautus_test, kalman_reduce, HautusVerdict, ObservabilityReport};
pub use oracle::{
    char_poly_roots_oracle, jordan_block_size, jordan_rank_probe, nu_curves, nu_derivative_check,
    NuCurveSample, NuDerivativeCheck,
};
pub use secular::{
    classify_interlacing, CaseLabel, EigenStructure, InterlacingReport, IntervalAnalysis,
    IntervalId, SecularFunction,
};
pub use signs::{
    assemble_canonical_form, assign_signs, BlockEigenvalue, CanonicalForm, SignValue, SignedBlock,
};
pub use spectral::{to_spectral_form, SpectralForm};
pub use sweep::{
    asymptotic_check, critical_a_values, eigenvalue_trajectories, trajectory_derivative,
    AsymptoticReport, CriticalValue, TrajectoryPoint,
};
