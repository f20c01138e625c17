use serde::Serialize;

use super::Equivalence;
use crate::convex::{constraint_cone, FarkasInstance};
use crate::error::{FarkasError, Result};
use crate::lp::LpOutcome;
use crate::rational::{Extended, Rational};
use crate::system::{LinExpr, SystemBuilder};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcaveReport {
    /// `sup f` over `C ∩ A⁻¹(D)`.
    pub sup_over_premise: Extended,
    /// `x ∈ C ∩ A⁻¹(D) ⟹ f(x) ≤ 0`.
    pub upper_bound_holds: bool,
    /// `epi f* ⊂ K`.
    pub epigraph_in_cone: bool,
    /// `epi f* ⊂ cl K ⟹ epi f* ⊂ K`.
    pub simili_closed: bool,
    pub premise_nonempty: bool,
    pub equivalence: Equivalence,
}

/// Decides the upper-bound statement by LP and its dual form as containment
/// of the finitely generated `epi f*` in `K`.
pub fn check_concave(inst: &FarkasInstance) -> Result<ConcaveReport> {
    let epi = inst
        .f
        .conjugate_epigraph()
        .map_err(|_| FarkasError::Hypothesis("f must be max-affine on the whole space".into()))?;
    if inst.c.is_empty()? || inst.d.is_empty()? {
        return Err(FarkasError::Hypothesis("C and D must be nonempty".into()));
    }

    let mut sup = Extended::NegInf;
    for piece in inst.f.pieces() {
        let mut b = SystemBuilder::new();
        let x = inst.embed_feasible(&mut b);
        let value = match b.maximize(&LinExpr::dot(&piece.slope, &x))? {
            LpOutcome::Optimal { value, .. } => Extended::Finite(value + &piece.offset),
            LpOutcome::Unbounded { .. } => Extended::PosInf,
            LpOutcome::Infeasible { .. } => Extended::NegInf,
        };
        sup = sup.max(value);
    }
    let premise_nonempty = sup != Extended::NegInf;
    let upper_bound_holds = sup <= Extended::Finite(Rational::default());

    let k = constraint_cone(inst)?;
    let epigraph_in_cone = k.contains_generated(&epi)?;
    // K is a projected polyhedron, so cl K = K and the containments coincide.
    let in_closure = epigraph_in_cone;
    let simili_closed = !in_closure || epigraph_in_cone;

    let statements_agree = upper_bound_holds == epigraph_in_cone;
    let ok = if premise_nonempty { statements_agree == simili_closed } else { !statements_agree || simili_closed };
    Ok(ConcaveReport {
        sup_over_premise: sup,
        upper_bound_holds,
        epigraph_in_cone,
        simili_closed,
        premise_nonempty,
        equivalence: Equivalence::from_bool(ok),
    })
}
