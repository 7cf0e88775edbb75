//! Sign characteristic and canonical-form assembly.
//!
//! For the pair `(A, H)` with one negative square, every Jordan block of a
//! real eigenvalue carries a sign. At a simple eigenvalue the sign is that
//! of `g'(λ) - 1`; at a double eigenvalue it is the sign of `-g''(λ)`; the
//! size-3 block and the complex pair carry no free sign.

use crate::error::{Error, Result};
use crate::secular::{CaseLabel, EigenStructure, SecularFunction};
use crate::tol;

/// Sign attached to a canonical block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignValue {
    Plus,
    Minus,
    /// Types 2 carries no sign at all; type 4 records the theorem's +1 but
    /// its canonical H-block admits no free sign either.
    NotApplicable,
}

impl std::fmt::Display for SignValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SignValue::Plus => write!(f, "+1"),
            SignValue::Minus => write!(f, "-1"),
            SignValue::NotApplicable => write!(f, "n/a"),
        }
    }
}

/// Eigenvalue data of a canonical block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BlockEigenvalue {
    Real(f64),
    /// Stored once with im > 0.
    ComplexPair {
        re: f64,
        im: f64,
    },
}

/// One block of the canonical form: type 1 (real, size 1, sign ±1), type 2
/// (conjugate pair), type 3 (real Jordan block of size 2, sign ±1), type 4
/// (real Jordan block of size 3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedBlock {
    pub block_type: u8,
    pub eigenvalue: BlockEigenvalue,
    pub size: u8,
    pub epsilon: SignValue,
}

impl SignedBlock {
    /// (positive, negative) squares this block contributes to H.
    pub fn signature(&self) -> (usize, usize) {
        match (self.block_type, self.epsilon) {
            (1, SignValue::Plus) => (1, 0),
            (1, SignValue::Minus) => (0, 1),
            (2, _) => (1, 1),
            (3, _) => (1, 1),
            (4, _) => (2, 1),
            _ => unreachable!("invalid block"),
        }
    }

    /// Dimension the block occupies in A.
    pub fn order(&self) -> usize {
        self.size as usize
    }
}

/// The assembled block list for the pair `(A, H)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm {
    pub blocks: Vec<SignedBlock>,
    pub case_label: CaseLabel,
}

impl CanonicalForm {
    pub fn order(&self) -> usize {
        self.blocks.iter().map(SignedBlock::order).sum()
    }

    /// (positive, negative) squares over the assembled H blocks.
    pub fn signature(&self) -> (usize, usize) {
        self.blocks.iter().fold((0, 0), |(p, n), b| {
            let (bp, bn) = b.signature();
            (p + bp, n + bn)
        })
    }

    /// Check all canonical invariants: one negative square, at most one
    /// block of types 2/3/4, at most one type-1 block with sign -1.
    pub fn validate(&self) -> Result<()> {
        let special = self.blocks.iter().filter(|b| b.block_type != 1).count();
        if special > 1 {
            return Err(Error::CanonicalViolation(format!(
                "{special} blocks of types 2/3/4; at most one can occur"
            )));
        }
        let negative_simple = self
            .blocks
            .iter()
            .filter(|b| b.block_type == 1 && b.epsilon == SignValue::Minus)
            .count();
        if negative_simple > 1 {
            return Err(Error::CanonicalViolation(format!(
                "{negative_simple} type-1 blocks carry sign -1; at most one can"
            )));
        }
        let order = self.order();
        let (pos, neg) = self.signature();
        if neg != 1 || pos != order - 1 {
            return Err(Error::CanonicalViolation(format!(
                "signature ({pos}, {neg}) differs from ({}, 1)",
                order - 1
            )));
        }
        Ok(())
    }
}

/// Assign the sign characteristic to every block of a solved spectrum.
pub fn assign_signs(
    eigen: &EigenStructure,
    secular: &SecularFunction<'_>,
) -> Result<Vec<SignedBlock>> {
    let form = secular.form();
    let curvature_margin = tol::curvature_margin(form.shift(), form.spread());
    let mut blocks = Vec::with_capacity(eigen.records.len());
    for rec in &eigen.records {
        if !rec.is_real {
            if rec.value.im > 0.0 {
                blocks.push(SignedBlock {
                    block_type: 2,
                    eigenvalue: BlockEigenvalue::ComplexPair {
                        re: rec.value.re,
                        im: rec.value.im,
                    },
                    size: 2,
                    epsilon: SignValue::NotApplicable,
                });
            }
            continue;
        }
        let lambda = rec.value.re;
        match rec.algebraic_multiplicity {
            1 => {
                let margin = secular.gp_unchecked(lambda) - 1.0;
                if margin.abs() <= tol::sign_margin() {
                    return Err(Error::AmbiguousSign {
                        eigenvalue: lambda,
                        margin: margin.abs(),
                    });
                }
                blocks.push(SignedBlock {
                    block_type: 1,
                    eigenvalue: BlockEigenvalue::Real(lambda),
                    size: 1,
                    epsilon: if margin > 0.0 {
                        SignValue::Plus
                    } else {
                        SignValue::Minus
                    },
                });
            }
            2 => {
                let gpp = secular.gpp_unchecked(lambda);
                if gpp.abs() <= curvature_margin {
                    return Err(Error::AmbiguousSign {
                        eigenvalue: lambda,
                        margin: gpp.abs(),
                    });
                }
                blocks.push(SignedBlock {
                    block_type: 3,
                    eigenvalue: BlockEigenvalue::Real(lambda),
                    size: 2,
                    epsilon: if -gpp > 0.0 {
                        SignValue::Plus
                    } else {
                        SignValue::Minus
                    },
                });
            }
            3 => {
                blocks.push(SignedBlock {
                    block_type: 4,
                    eigenvalue: BlockEigenvalue::Real(lambda),
                    size: 3,
                    epsilon: SignValue::Plus,
                });
            }
            m => {
                return Err(Error::Unclassifiable(format!(
                    "record multiplicity {m} at λ = {lambda}"
                )))
            }
        }
    }
    Ok(blocks)
}

/// Append type-1 blocks with sign +1 for the detached eigenvalues (they live
/// in the H-positive invariant subspace) and validate the assembled form.
pub fn assemble_canonical_form(
    mut blocks: Vec<SignedBlock>,
    detached: &[f64],
    case_label: CaseLabel,
) -> Result<CanonicalForm> {
    for &mu in detached {
        blocks.push(SignedBlock {
            block_type: 1,
            eigenvalue: BlockEigenvalue::Real(mu),
            size: 1,
            epsilon: SignValue::Plus,
        });
    }
    let form = CanonicalForm { blocks, case_label };
    form.validate()?;
    Ok(form)
}
