use serde::Serialize;

use crate::convex::{adjoint_support_cone, constraint_cone, FarkasInstance};
use crate::error::{FarkasError, Result};
use crate::lifted::{support_disagreement, LiftedSet};
use crate::rational::{serde_str, Extended, Rational};

/// A direction on which two support functions differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeMismatch {
    #[serde(with = "serde_str::vec")]
    pub direction: Vec<Rational>,
    pub left: Extended,
    pub right: Extended,
}

fn compare(a: &LiftedSet, b: &LiftedSet, directions: &[Vec<Rational>]) -> Result<Option<ProbeMismatch>> {
    Ok(support_disagreement(a, b, directions)?.map(|(direction, left, right)| ProbeMismatch { direction, left, right }))
}

/// Support probes of `Λ + {0}×ℝ₊` against `epi σ_B`, `B = A⁻¹(D)`.
pub fn adjoint_cone_matches_preimage(inst: &FarkasInstance, directions: &[Vec<Rational>]) -> Result<Option<ProbeMismatch>> {
    let b = inst.preimage_of_target()?;
    if b.is_empty()? {
        return Err(FarkasError::Hypothesis("A⁻¹(D) is empty".into()));
    }
    compare(&adjoint_support_cone(&inst.a, &inst.d)?, &b.support_epigraph()?, directions)
}

/// Support probes of `K` against `epi σ_{B∩C}`.
pub fn constraint_cone_matches_feasible_set(
    inst: &FarkasInstance,
    directions: &[Vec<Rational>],
) -> Result<Option<ProbeMismatch>> {
    let bc = inst.feasible_polyhedron()?;
    if bc.is_empty()? {
        return Err(FarkasError::Hypothesis("C ∩ A⁻¹(D) is empty".into()));
    }
    compare(&constraint_cone(inst)?, &bc.support_epigraph()?, directions)
}
