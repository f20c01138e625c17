use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Equivalence, ProbeConfig, ProbeMismatch};
use crate::convex::{adjoint_support_cone, moment_cone, vertical_ray, IntervalBox, LinearOperator, MomentRow, Target};
use crate::error::Result;
use crate::lifted::{probe_directions, support_disagreement, GeneratedSet};
use crate::rational::{neg_vec, unit, Extended, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichReport {
    /// Every generator of the moment cone lies in `Λ + {0}×ℝ₊`, with
    /// matching closed-form and LP support values.
    pub generators_in_image_cone: bool,
    /// Sampled graph points `(Aᵀλ, σ_D(λ))` lie in `N + {0}×ℝ₊`.
    pub graph_points_in_moment_cone: bool,
    pub probe_mismatch: Option<ProbeMismatch>,
    pub equivalence: Equivalence,
}

/// The grid system as an operator and a box.
pub(crate) fn grid_operator(dim: usize, rows: &[MomentRow]) -> Result<(LinearOperator, IntervalBox)> {
    let a = LinearOperator::new(rows.iter().map(|r| r.a.clone()).collect(), dim)?;
    let bx = IntervalBox::new(rows.iter().map(|r| r.lo.clone()).collect(), rows.iter().map(|r| r.hi.clone()).collect())?;
    Ok((a, bx))
}

/// Checks that the moment cone `N` sits between the graph of
/// `λ ↦ (Aᵀλ, σ_D(λ))` and its vertical hull, and that `N` and the graph
/// have the same vertical hull.
pub fn check_sandwich(dim: usize, rows: &[MomentRow], samples: usize, probes: ProbeConfig) -> Result<SandwichReport> {
    let (a, bx) = grid_operator(dim, rows)?;
    let target = Target::Box(bx.clone());
    let image = adjoint_support_cone(&a, &target)?;
    let mut moment = moment_cone(dim, rows)?;

    let m = rows.len();
    let mut generators_in_image_cone = true;
    for t in 0..m {
        for lambda in [unit(m, t), neg_vec(&unit(m, t))] {
            let closed_form = bx.support_value(&lambda);
            let lp = bx.to_polyhedron().support(&lambda)?;
            let mut point = a.adjoint_apply(&lambda);
            point.push(closed_form.clone());
            let generator_value = if lambda[t] > Rational::default() { &rows[t].hi } else { &-rows[t].lo.clone() };
            generators_in_image_cone &= lp == Extended::Finite(closed_form.clone())
                && &closed_form == generator_value
                && moment.rays.contains(&point)
                && image.member(&point)?;
        }
    }

    moment.rays.push(vertical_ray(dim));
    let moment_hull = GeneratedSet::new(dim + 1, moment.points.clone(), moment.rays.clone())?.to_lifted();
    let mut rng = ChaCha8Rng::seed_from_u64(probes.seed);
    let mut graph_points_in_moment_cone = true;
    for _ in 0..samples {
        let (lambda, sigma) = target.sample_support_pair(&mut rng);
        let mut point = a.adjoint_apply(&lambda);
        point.push(sigma);
        graph_points_in_moment_cone &= moment_hull.member(&point)?;
    }

    let directions = probe_directions(dim + 1, probes.random_directions, &mut rng);
    let probe_mismatch = support_disagreement(&moment_hull, &image, &directions)?
        .map(|(direction, left, right)| ProbeMismatch { direction, left, right });
    let ok = generators_in_image_cone && graph_points_in_moment_cone && probe_mismatch.is_none();
    Ok(SandwichReport {
        generators_in_image_cone,
        graph_points_in_moment_cone,
        probe_mismatch,
        equivalence: Equivalence::from_bool(ok),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat, rats, zero};

    #[test]
    fn single_row_unit_interval() {
        let rows = [MomentRow { a: rats(&[1]), lo: zero(), hi: rat(1) }];
        let report = check_sandwich(1, &rows, 20, ProbeConfig::default()).unwrap();
        assert!(report.generators_in_image_cone);
        assert!(report.graph_points_in_moment_cone);
        assert_eq!(report.probe_mismatch, None);
        assert_eq!(report.equivalence, Equivalence::Consistent);
    }

    #[test]
    fn several_rows_in_three_dimensions() {
        let rows = [
            MomentRow { a: rats(&[1, 0, 2]), lo: rat(-1), hi: rat(2) },
            MomentRow { a: rats(&[0, 1, -1]), lo: frac(1, 2), hi: frac(1, 2) },
            MomentRow { a: rats(&[3, -1, 0]), lo: rat(0), hi: rat(4) },
        ];
        let report = check_sandwich(3, &rows, 20, ProbeConfig { seed: 4, random_directions: 20 }).unwrap();
        assert_eq!(report.equivalence, Equivalence::Consistent, "{report:?}");
    }
}
