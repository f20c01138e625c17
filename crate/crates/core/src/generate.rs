//! Seeded random instances for property tests, the acceptance suite and the
//! benches.

use rand::Rng;

use crate::convex::{
    AffinePiece, FarkasInstance, IntervalBox, LinearOperator, MaxAffineFn, MomentRow, Polyhedron, Target,
};
use crate::error::Result;
use crate::lifted::random_rational;
use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::{add_vec, dot, frac, one, rat, scale_vec, sub_vec, unit, zero, Rational};
use crate::semiinf::GridSystem;
use crate::system::{LinExpr, SystemBuilder};

fn int_vec<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Rational> {
    (0..n).map(|_| rat(rng.random_range(-bound..=bound))).collect()
}

/// A random LP. `boxed` LPs carry `lo ≤ xᵢ ≤ hi` rows first and are
/// therefore bounded with a vertex whenever they are feasible.
#[derive(Clone, Debug)]
pub struct RandomLp {
    pub lp: LinearProgram,
    pub boxed: bool,
}

/// `n ≤ 6` variables and at most 8 constraint rows.
pub fn random_lp<R: Rng>(rng: &mut R) -> RandomLp {
    let n = rng.random_range(1..=6);
    let boxed = n <= 4 && rng.random_bool(0.5);
    let mut lp = LinearProgram::new(n).maximize(int_vec(rng, n, 5));
    let mut rows = 0;
    if boxed {
        for i in 0..n {
            let lo = rng.random_range(-4..=0);
            let hi = rng.random_range(0..=4);
            lp = lp.le(unit(n, i), rat(hi)).le(scale_vec(&-one(), &unit(n, i)), rat(-lo));
        }
        rows = 2 * n;
    }
    let extra = rng.random_range(0..=8 - rows);
    for _ in 0..extra {
        let row = int_vec(rng, n, 5);
        let rhs = rat(rng.random_range(-5..=10));
        lp = if rng.random_bool(0.2) { lp.equal(row, rhs) } else { lp.le(row, rhs) };
    }
    RandomLp { lp, boxed }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// `C ∩ A⁻¹(D) ∩ dom f` contains an integer point by construction.
    Feasible,
    /// The first row of `A` cannot reach `D` from `C`.
    Infeasible,
}

fn random_function<R: Rng>(rng: &mut R, n: usize, center: &[Rational]) -> MaxAffineFn {
    let pieces = (0..rng.random_range(1..=3))
        .map(|_| AffinePiece::new(int_vec(rng, n, 3), rat(rng.random_range(-3..=3))))
        .collect();
    let domain = rng.random_bool(0.25).then(|| box_around(rng, center, 2));
    MaxAffineFn::new(n, pieces, domain).expect("domain contains its center")
}

fn box_around<R: Rng>(rng: &mut R, center: &[Rational], spread: i64) -> Polyhedron {
    let lo = center.iter().map(|c| c - rat(rng.random_range(0..=spread))).collect();
    let hi = center.iter().map(|c| c + rat(rng.random_range(0..=spread))).collect();
    IntervalBox::new(lo, hi).expect("lo ≤ hi").to_polyhedron()
}

/// Random rows `gᵀx ≤ gᵀp + slack`, so `p` satisfies every row.
fn polyhedron_through<R: Rng>(rng: &mut R, p: &[Rational], rows: usize, with_equality: bool) -> Polyhedron {
    let n = p.len();
    let mut ineq = Vec::new();
    let mut rhs = Vec::new();
    for _ in 0..rows {
        let g = int_vec(rng, n, 2);
        rhs.push(dot(&g, p) + rat(rng.random_range(0..=2)));
        ineq.push(g);
    }
    let (eq, eq_rhs) = if with_equality {
        let g = int_vec(rng, n, 2);
        let e = dot(&g, p);
        (vec![g], vec![e])
    } else {
        (vec![], vec![])
    };
    Polyhedron::with_equalities(n, ineq, rhs, eq, eq_rhs).expect("consistent dimensions")
}

/// `n ≤ 3`, `m ≤ 2`, small integer data.
pub fn random_instance<R: Rng>(rng: &mut R, kind: InstanceKind) -> FarkasInstance {
    let n = rng.random_range(1..=3);
    let m = rng.random_range(1..=2);
    let x0 = int_vec(rng, n, 2);
    let a = LinearOperator::new((0..m).map(|_| int_vec(rng, n, 2)).collect(), n).expect("m×n matrix");
    let f = random_function(rng, n, &x0);
    match kind {
        InstanceKind::Feasible => {
            let c = match rng.random_range(0..3) {
                0 => Polyhedron::whole(n),
                1 => {
                    let (rows, eq) = (rng.random_range(1..=3), rng.random_bool(0.2));
                    polyhedron_through(rng, &x0, rows, eq)
                }
                _ => box_around(rng, &x0, 2),
            };
            let y0 = a.apply(&x0);
            let d = if rng.random_bool(0.5) {
                let lo = y0.iter().map(|y| y - rat(rng.random_range(0..=2))).collect();
                let hi = y0.iter().map(|y| y + rat(rng.random_range(0..=2))).collect();
                Target::Box(IntervalBox::new(lo, hi).expect("lo ≤ hi"))
            } else {
                let rows = rng.random_range(1..=3);
                Target::Polyhedron(polyhedron_through(rng, &y0, rows, false))
            };
            FarkasInstance::new(f, c, a, d).expect("consistent dimensions")
        }
        InstanceKind::Infeasible => {
            // On C = [−1, 1]ⁿ the first row is bounded by Σ|a₀ⱼ|.
            let c = IntervalBox::new(vec![-one(); n], vec![one(); n]).expect("unit box").to_polyhedron();
            let reach = a.matrix()[0].iter().fold(zero(), |acc, v| acc + num::Signed::abs(v));
            let floor = reach + rat(rng.random_range(1..=3));
            let d = if rng.random_bool(0.5) {
                let mut lo: Vec<Rational> = (0..m).map(|_| rat(-5)).collect();
                let mut hi: Vec<Rational> = (0..m).map(|_| rat(5)).collect();
                lo[0] = floor.clone();
                hi[0] = &floor + rat(rng.random_range(0..=2));
                Target::Box(IntervalBox::new(lo, hi).expect("lo ≤ hi"))
            } else {
                let row = scale_vec(&-one(), &unit(m, 0));
                Target::Polyhedron(Polyhedron::new(m, vec![row], vec![-floor]).expect("one row"))
            };
            FarkasInstance::new(f, c, a, d).expect("consistent dimensions")
        }
    }
}

/// `n ≤ 4` variables, `|T| ≤ 6` rows with `lo_t ≤ hi_t`.
pub fn random_grid<R: Rng>(rng: &mut R) -> GridSystem {
    let n = rng.random_range(1..=4);
    let rows = (0..rng.random_range(1..=6))
        .map(|_| {
            let lo = random_rational(rng, 4, 3);
            let hi = &lo + frac(rng.random_range(0..=6), rng.random_range(1..=3));
            MomentRow { a: int_vec(rng, n, 3), lo, hi }
        })
        .collect();
    let c = if rng.random_bool(0.5) { Polyhedron::whole(n) } else { Polyhedron::nonneg_orthant(n) };
    let f = MaxAffineFn::new(
        n,
        (0..rng.random_range(1..=2))
            .map(|_| AffinePiece::new(int_vec(rng, n, 2), rat(rng.random_range(-2..=2))))
            .collect(),
        None,
    )
    .expect("nonempty pieces");
    GridSystem::new(n, rows, c, f).expect("consistent grid")
}

/// 25 tilts: a regular grid for `n ≤ 2`, seeded integer vectors otherwise.
pub fn tilt_grid<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Rational>> {
    match n {
        1 => (-12..=12).map(|v| vec![frac(v, 4)]).collect(),
        2 => (-2..=2).flat_map(|a| (-2..=2).map(move |b| vec![rat(a), rat(b)])).collect(),
        _ => (0..25).map(|_| int_vec(rng, n, 2)).collect(),
    }
}

/// A feasible point on the segment from `x` towards the maximizer of a
/// random direction over `C ∩ A⁻¹(D) ∩ dom f`.
pub fn perturb_feasible<R: Rng>(inst: &FarkasInstance, x: &[Rational], rng: &mut R) -> Result<Vec<Rational>> {
    let n = inst.n();
    let mut b = SystemBuilder::new();
    let v = inst.embed_feasible(&mut b);
    if let Some(dom) = inst.f.domain() {
        dom.embed(&mut b, &LinExpr::vars(&v));
    }
    let dir = int_vec(rng, n, 3);
    let target = match b.maximize(&LinExpr::dot(&dir, &v))? {
        LpOutcome::Optimal { primal, .. } => primal[..n].to_vec(),
        LpOutcome::Unbounded { point, ray } => add_vec(&point[..n], &ray[..n]),
        LpOutcome::Infeasible { .. } => return Ok(x.to_vec()),
    };
    let t = frac(rng.random_range(1..=4), 4);
    Ok(add_vec(x, &scale_vec(&t, &sub_vec(&target, x))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_have_their_kind() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let feasible = random_instance(&mut rng, InstanceKind::Feasible);
            assert!(feasible.feasible_point().unwrap().is_some());
            let infeasible = random_instance(&mut rng, InstanceKind::Infeasible);
            assert!(infeasible.feasible_polyhedron().unwrap().is_empty().unwrap());
        }
    }

    #[test]
    fn generated_lps_respect_size_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let r = random_lp(&mut rng);
            assert!(r.lp.num_vars <= 6);
            assert!(r.lp.ineq.len() + r.lp.eq.len() <= 8);
            r.lp.validate().unwrap();
        }
    }

    #[test]
    fn perturbed_points_stay_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let inst = random_instance(&mut rng, InstanceKind::Feasible);
            let x = inst.feasible_point().unwrap().unwrap();
            let y = perturb_feasible(&inst, &x, &mut rng).unwrap();
            assert!(inst.is_feasible(&y));
            assert!(inst.f.eval(&y).is_finite());
        }
    }

    #[test]
    fn tilt_grids_have_25_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            let tilts = tilt_grid(&mut rng, n);
            assert_eq!(tilts.len(), 25);
            assert!(tilts.iter().all(|t| t.len() == n));
        }
    }
}
