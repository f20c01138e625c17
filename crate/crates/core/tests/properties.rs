use farkas_core::convex::IntervalBox;
use farkas_core::generate::{random_grid, random_instance, random_lp, InstanceKind};
use farkas_core::polyapprox::{equispaced_nodes, ApproxProblem};
use farkas_core::rational::{add_vec, dot, format_pq, frac, scale_vec, Rational};
use farkas_core::{
    check_existence, check_implication, check_reduced_criterion, find_certificate, parse_rational, sigma_d_box, solve,
    solve_dual, solve_primal, sweep, verify_certificate, Equivalence, Extended, LinExpr, LpOutcome, SignedMultiplier,
    SystemBuilder,
};
use num::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| frac(n, d))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn kind(feasible: bool) -> InstanceKind {
    if feasible {
        InstanceKind::Feasible
    } else {
        InstanceKind::Infeasible
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pq_round_trip(r in small_rational()) {
        prop_assert_eq!(parse_rational(&format_pq(&r)).unwrap(), r);
    }

    #[test]
    fn every_lp_outcome_is_certified(seed in any::<u64>()) {
        let r = random_lp(&mut rng(seed));
        let out = solve(&r.lp).unwrap();
        prop_assert!(verify_certificate(&r.lp, &out));
    }

    #[test]
    fn minkowski_support_is_additive(
        lo1 in prop::collection::vec(-4i64..=0, 2),
        hi1 in prop::collection::vec(0i64..=4, 2),
        lo2 in prop::collection::vec(-4i64..=0, 2),
        hi2 in prop::collection::vec(0i64..=4, 2),
        d in prop::collection::vec(small_rational(), 2),
    ) {
        let to_box = |lo: &[i64], hi: &[i64]| {
            IntervalBox::new(lo.iter().map(|&v| frac(v, 1)).collect(), hi.iter().map(|&v| frac(v, 1)).collect())
                .unwrap()
                .to_polyhedron()
        };
        let (p, q) = (to_box(&lo1, &hi1), to_box(&lo2, &hi2));
        let sum = p.to_lifted().minkowski_sum(&q.to_lifted()).unwrap();
        let expected = p.support(&d).unwrap().into_finite().unwrap() + q.support(&d).unwrap().into_finite().unwrap();
        prop_assert_eq!(sum.support(&d).unwrap(), Extended::Finite(expected));
    }

    #[test]
    fn box_support_matches_lp(seed in any::<u64>()) {
        let mut r = rng(seed);
        let grid = random_grid(&mut r);
        let lambda: Vec<Rational> = grid.rows.iter().map(|_| frac(r.random_range(-5..=5), r.random_range(1..=3))).collect();
        let split = SignedMultiplier::from_lambda(&lambda);
        prop_assert!(split.is_canonical());
        prop_assert_eq!(split.lambda(), lambda);
        prop_assert!(sigma_d_box(&split, &grid).is_ok());
    }

    #[test]
    fn fenchel_young(seed in any::<u64>(), x in prop::collection::vec(small_rational(), 3), y in prop::collection::vec(small_rational(), 3)) {
        let inst = random_instance(&mut rng(seed), InstanceKind::Feasible);
        let n = inst.n();
        let (x, y) = (&x[..n], &y[..n]);
        if let (Extended::Finite(fx), Extended::Finite(conj)) = (inst.f.eval(x), inst.f.conjugate_at(y).unwrap()) {
            prop_assert!(fx + conj >= dot(x, y));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn existence_routes_agree(seed in any::<u64>(), feasible in any::<bool>()) {
        let inst = random_instance(&mut rng(seed), kind(feasible));
        let report = check_existence(&inst).unwrap();
        prop_assert_eq!(report.equivalence, Equivalence::Consistent);
        prop_assert_eq!(report.feasible_point.is_some(), feasible);
    }

    #[test]
    fn weak_duality(seed in any::<u64>(), feasible in any::<bool>()) {
        let inst = random_instance(&mut rng(seed), kind(feasible));
        let (p, d) = (solve_primal(&inst).unwrap(), solve_dual(&inst).unwrap());
        prop_assert!(d.value() <= p.value());
    }

    #[test]
    fn reduced_criterion_is_consistent(seed in any::<u64>()) {
        let inst = random_instance(&mut rng(seed), InstanceKind::Feasible);
        let report = check_reduced_criterion(&inst).unwrap();
        prop_assert_eq!(report.equivalence, Equivalence::Consistent);
    }

    /// A certificate forces `f ≥ 0` on 200 convex combinations of extreme
    /// feasible points.
    #[test]
    fn certificates_are_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, InstanceKind::Feasible);
        if find_certificate(&inst).unwrap().is_none() {
            prop_assert!(!check_implication(&inst).unwrap().is_true());
            return Ok(());
        }
        let n = inst.n();
        let mut anchors = Vec::new();
        for _ in 0..4 {
            let mut b = SystemBuilder::new();
            let x = inst.embed_feasible(&mut b);
            if let Some(dom) = inst.f.domain() {
                dom.embed(&mut b, &LinExpr::vars(&x));
            }
            let dir: Vec<Rational> = (0..n).map(|_| frac(r.random_range(-3..=3), 1)).collect();
            if let LpOutcome::Optimal { primal, .. } = b.maximize(&LinExpr::dot(&dir, &x)).unwrap() {
                anchors.push(primal[..n].to_vec());
            }
        }
        prop_assume!(!anchors.is_empty());
        for _ in 0..200 {
            let weights: Vec<i64> = anchors.iter().map(|_| r.random_range(0..=4)).collect();
            let total: i64 = weights.iter().sum::<i64>().max(1);
            let point = anchors.iter().zip(&weights).fold(vec![frac(0, 1); n], |acc, (a, &w)| {
                add_vec(&acc, &scale_vec(&frac(w, total), a))
            });
            let point = if weights.iter().all(|&w| w == 0) { anchors[0].clone() } else { point };
            prop_assert!(inst.is_feasible(&point));
            prop_assert!(!inst.f.piece_max(&point).is_negative());
        }
    }

    #[test]
    fn sweep_is_monotone(values in prop::collection::vec(-3i64..=3, 6), degree in 1usize..=3) {
        let eps = vec![frac(1, 4), frac(1, 2), frac(1, 1), frac(4, 1)];
        let prob = ApproxProblem::from_table(
            degree,
            equispaced_nodes(6),
            values.iter().map(|&v| frac(v, 2)).collect(),
            eps,
        )
        .unwrap();
        let rows = sweep(&prob).unwrap();
        let objectives: Vec<_> = rows.iter().filter_map(|r| r.row().map(|r| r.objective.clone())).collect();
        prop_assert!(objectives.windows(2).all(|w| w[1] <= w[0]));
    }
}
