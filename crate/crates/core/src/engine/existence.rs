use serde::Serialize;

use super::Equivalence;
use crate::convex::{constraint_cone, FarkasInstance};
use crate::error::{FarkasError, Result};
use crate::rational::{one, serde_str, zeros, Rational};
use crate::system::SystemBuilder;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExistenceReport {
    /// A point of `C ∩ A⁻¹(D)` from the direct LP.
    #[serde(with = "serde_str::opt_vec")]
    pub feasible_point: Option<Vec<Rational>>,
    /// Whether `(0, −1)` lies in the dual constraint cone `K`.
    pub negative_vertical_in_cone: bool,
    pub equivalence: Equivalence,
}

impl ExistenceReport {
    pub fn is_feasible(&self) -> bool {
        self.feasible_point.is_some()
    }
}

/// Decides `C ∩ A⁻¹(D) ≠ ∅` directly and by `(0, −1) ∉ K`; `K` is closed
/// here, so the two answers must agree.
pub fn check_existence(inst: &FarkasInstance) -> Result<ExistenceReport> {
    if inst.c.is_empty()? {
        return Err(FarkasError::Hypothesis("C is empty".into()));
    }
    if inst.d.is_empty()? {
        return Err(FarkasError::Hypothesis("D is empty".into()));
    }
    let mut b = SystemBuilder::new();
    let x = inst.embed_feasible(&mut b);
    let feasible_point = b.feasible_point()?.map(|p| p[..x.len()].to_vec());

    let n = inst.n();
    let mut probe = zeros(n + 1);
    probe[n] = -one();
    let negative_vertical_in_cone = constraint_cone(inst)?.member(&probe)?;
    Ok(ExistenceReport {
        equivalence: Equivalence::from_bool(feasible_point.is_some() != negative_vertical_in_cone),
        feasible_point,
        negative_vertical_in_cone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{LinearOperator, MaxAffineFn, Polyhedron, Target};
    use crate::rational::rats;

    #[test]
    fn origin_instance_is_feasible() {
        let inst = FarkasInstance::new(
            MaxAffineFn::zero(1),
            Polyhedron::singleton(&rats(&[0])),
            LinearOperator::identity(1),
            Target::Polyhedron(Polyhedron::singleton(&rats(&[0]))),
        )
        .unwrap();
        let report = check_existence(&inst).unwrap();
        assert_eq!(report.feasible_point, Some(rats(&[0])));
        assert!(!report.negative_vertical_in_cone);
        assert_eq!(report.equivalence, Equivalence::Consistent);
    }

    #[test]
    fn zero_map_missing_target_is_infeasible() {
        let inst = FarkasInstance::new(
            MaxAffineFn::zero(1),
            Polyhedron::whole(1),
            LinearOperator::zero(1, 1),
            Target::Polyhedron(Polyhedron::singleton(&rats(&[1]))),
        )
        .unwrap();
        let report = check_existence(&inst).unwrap();
        assert!(!report.is_feasible());
        assert!(report.negative_vertical_in_cone);
        assert_eq!(report.equivalence, Equivalence::Consistent);
    }
}
