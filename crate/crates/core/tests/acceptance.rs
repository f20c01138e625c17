//! Acceptance criteria 1–9. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on any FAIL.

use std::time::{Duration, Instant};

use farkas_core::convex::{IntervalBox, LinearOperator, MaxAffineFn, Polyhedron, Target};
use farkas_core::engine::{check_sandwich, ProbeConfig};
use farkas_core::gallery::{run_gallery, GalleryName};
use farkas_core::generate::{perturb_feasible, random_grid, random_instance, random_lp, tilt_grid, InstanceKind};
use farkas_core::lifted::probe_directions;
use farkas_core::polyapprox::{equispaced_nodes, verify_row, ApproxProblem};
use farkas_core::rational::{dot, frac, one, rat, rats, zero, Rational};
use farkas_core::{
    adjoint_cone_matches_preimage, check_concave, check_existence, check_implication, check_optimality,
    check_stable_strong_duality, check_strong_duality, constraint_cone_matches_feasible_set, find_certificate,
    sigma_d_box, solve, sweep, verify_certificate, DualOutcome, Equivalence, FarkasInstance, LinearProgram,
    LpOutcome, PrimalOutcome, Result, SignedMultiplier,
};
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn seed() -> u64 {
    std::env::var("FARKAS_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_240_601)
}

fn rng_for(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ (criterion << 32))
}

// ---------------------------------------------------------------- criterion 1

/// Unique solution of a square-or-tall system, or `None` if it is singular
/// or inconsistent.
fn solve_unique(rows: &[Vec<Rational>], rhs: &[Rational], n: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.iter().zip(rhs).map(|(r, b)| {
        let mut row = r.clone();
        row.push(b.clone());
        row
    }).collect();
    let mut pivot_row = 0;
    for col in 0..n {
        let p = (pivot_row..m.len()).find(|&i| !m[i][col].is_zero())?;
        m.swap(pivot_row, p);
        let lead = m[pivot_row][col].clone();
        for v in m[pivot_row].iter_mut() {
            *v = &*v / &lead;
        }
        for i in 0..m.len() {
            if i != pivot_row && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                let src = m[pivot_row].clone();
                for (v, s) in m[i].iter_mut().zip(&src) {
                    *v -= &factor * s;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Best objective over all basic feasible points; `None` when no vertex is
/// feasible.
fn vertex_enumeration(lp: &LinearProgram) -> Option<Rational> {
    let n = lp.num_vars;
    let k = lp.ineq.len();
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1 << k) {
        let tight = (0..k).filter(|i| mask & (1 << i) != 0);
        let mut rows = lp.eq.clone();
        let mut rhs = lp.eq_rhs.clone();
        for i in tight {
            rows.push(lp.ineq[i].clone());
            rhs.push(lp.ineq_rhs[i].clone());
        }
        if rows.len() < n {
            continue;
        }
        if let Some(x) = solve_unique(&rows, &rhs, n) {
            if lp.is_feasible_point(&x) {
                let v = dot(&lp.objective, &x);
                if best.as_ref().is_none_or(|b| &v > b) {
                    best = Some(v);
                }
            }
        }
    }
    best
}

fn criterion_1() -> Result<Outcome> {
    let mut rng = rng_for(1);
    let (mut boxed, mut optimal) = (0, 0);
    for i in 0..500 {
        let r = random_lp(&mut rng);
        let out = solve(&r.lp)?;
        if !verify_certificate(&r.lp, &out) {
            return Ok(fail(format!("LP {i}: certificate rejected")));
        }
        if r.boxed {
            boxed += 1;
            let brute = vertex_enumeration(&r.lp);
            let agrees = match (&out, &brute) {
                (LpOutcome::Optimal { value, .. }, Some(b)) => value == b,
                (LpOutcome::Infeasible { .. }, None) => true,
                _ => false,
            };
            if !agrees {
                return Ok(fail(format!("LP {i}: solver {out:?} vs vertex enumeration {brute:?}")));
            }
            optimal += usize::from(brute.is_some());
        }
    }
    Ok(pass(format!("500 LPs certified, {boxed} boxed ({optimal} optimal) match vertex enumeration")))
}

// ---------------------------------------------------------------- criterion 2

fn feasible_instances(n: usize) -> Vec<FarkasInstance> {
    let mut rng = rng_for(2);
    (0..n).map(|_| random_instance(&mut rng, InstanceKind::Feasible)).collect()
}

fn criterion_2(instances: &[FarkasInstance]) -> Result<Outcome> {
    let mut holds = 0;
    for (i, inst) in instances.iter().enumerate() {
        let implication = check_implication(inst)?.is_true();
        let cert = find_certificate(inst)?;
        if implication != cert.is_some() {
            return Ok(fail(format!("instance {i}: implication {implication} but certificate {}", cert.is_some())));
        }
        if let Some(c) = cert {
            let balance: Vec<Rational> = (0..inst.n())
                .map(|j| &c.u_prime[j] + &c.v_prime[j] + dot(&inst.a.matrix().iter().map(|r| r[j].clone()).collect::<Vec<_>>(), &c.lambda))
                .collect();
            if !balance.iter().all(Zero::is_zero) || c.total().is_positive() || !c.verify(inst)? {
                return Ok(fail(format!("instance {i}: certificate invariants fail")));
            }
            holds += 1;
        }
    }
    Ok(pass(format!("{} instances, {holds} with the implication and a certificate", instances.len())))
}

// ---------------------------------------------------------------- criterion 3

fn criterion_3(instances: &[FarkasInstance]) -> Result<Outcome> {
    let mut rng = rng_for(3);
    let mut probes = 0;
    for (i, inst) in instances.iter().take(50).enumerate() {
        let dirs = probe_directions(inst.n() + 1, 50, &mut rng);
        probes += dirs.len();
        if let Some(m) = adjoint_cone_matches_preimage(inst, &dirs)? {
            return Ok(fail(format!("instance {i}: adjoint cone mismatch {m:?}")));
        }
        if let Some(m) = constraint_cone_matches_feasible_set(inst, &dirs)? {
            return Ok(fail(format!("instance {i}: constraint cone mismatch {m:?}")));
        }
    }
    Ok(pass(format!("50 instances, {probes} directions in total, both cone pairs agree")))
}

// ---------------------------------------------------------------- criterion 4

fn criterion_4() -> Result<Outcome> {
    let mut rng = rng_for(4);
    for i in 0..100 {
        let kind = if i % 2 == 0 { InstanceKind::Feasible } else { InstanceKind::Infeasible };
        let inst = random_instance(&mut rng, kind);
        let report = check_existence(&inst)?;
        let direct = !inst.feasible_polyhedron()?.is_empty()?;
        if report.equivalence != Equivalence::Consistent
            || direct == report.negative_vertical_in_cone
            || direct != (kind == InstanceKind::Feasible)
        {
            return Ok(fail(format!("instance {i} ({kind:?}): routes disagree")));
        }
    }
    Ok(pass("100 instances, 50 feasible and 50 infeasible, both routes agree"))
}

// ---------------------------------------------------------------- criterion 5

fn criterion_5() -> Result<Outcome> {
    let mut total = 0;
    for name in [GalleryName::G1, GalleryName::G2, GalleryName::G3] {
        let report = run_gallery(name)?;
        if let Some(c) = report.checks.iter().find(|c| !c.matches) {
            return Ok(fail(format!("{name} {}: expected {} got {}", c.name, c.expected, c.actual)));
        }
        total += report.checks.len();
    }
    Ok(pass(format!("g1, g2, g3 match {total} frozen verdicts")))
}

// ---------------------------------------------------------------- criterion 6

fn criterion_6() -> Result<Outcome> {
    let mut rng = rng_for(6);
    for i in 0..30 {
        let grid = random_grid(&mut rng);
        let probes = ProbeConfig { seed: seed() + i, random_directions: 10 };
        let report = check_sandwich(grid.n, &grid.rows, 20, probes)?;
        if !report.generators_in_image_cone || !report.graph_points_in_moment_cone || report.probe_mismatch.is_some() {
            return Ok(fail(format!("grid {i}: sandwich check failed {report:?}")));
        }
        let boxed = IntervalBox::new(
            grid.rows.iter().map(|r| r.lo.clone()).collect(),
            grid.rows.iter().map(|r| r.hi.clone()).collect(),
        )?
        .to_polyhedron();
        for _ in 0..100 {
            let lambda: Vec<Rational> =
                grid.rows.iter().map(|_| frac(rng.random_range(-6..=6), rng.random_range(1..=4))).collect();
            let closed = sigma_d_box(&SignedMultiplier::from_lambda(&lambda), &grid)?;
            if boxed.support(&lambda)?.into_finite() != Some(closed) {
                return Ok(fail(format!("grid {i}: box support mismatch")));
            }
        }
    }
    Ok(pass("30 grids, 3 sandwich checks each, 3000 multipliers exact"))
}

// ---------------------------------------------------------------- criterion 7

fn criterion_7(instances: &[FarkasInstance]) -> Result<Outcome> {
    let mut rng = rng_for(7);
    let (mut attained, mut optimality, mut tilts) = (0, 0, 0);
    for (i, inst) in instances.iter().enumerate() {
        let report = check_strong_duality(inst)?;
        if report.dual_value > report.primal_value {
            return Ok(fail(format!("instance {i}: weak duality fails")));
        }
        match &report.primal {
            PrimalOutcome::Optimal { .. } if !report.attained => {
                return Ok(fail(format!("instance {i}: dual not attained at the primal value")));
            }
            PrimalOutcome::Unbounded if report.dual != DualOutcome::Infeasible => {
                return Ok(fail(format!("instance {i}: unbounded primal with a feasible dual")));
            }
            PrimalOutcome::Infeasible => return Ok(fail(format!("instance {i}: feasible instance reported infeasible"))),
            _ => {}
        }
        attained += usize::from(report.attained);
        if i >= 100 {
            continue;
        }
        let start = inst.feasible_point()?.expect("feasible by construction");
        let x_bar = match &report.primal {
            PrimalOutcome::Optimal { point, .. } => point.clone(),
            _ => start.clone(),
        };
        let nearby = perturb_feasible(inst, &x_bar, &mut rng)?;
        for (x, must_be_optimal) in [(&x_bar, report.primal.value().is_finite()), (&nearby, false)] {
            let opt = check_optimality(inst, x)?;
            if opt.equivalence != Equivalence::Consistent || (must_be_optimal && !opt.optimal) {
                return Ok(fail(format!("instance {i}: optimality conditions disagree at {x:?}")));
            }
            optimality += 1;
        }
        let grid = tilt_grid(&mut rng, inst.n());
        let stable = check_stable_strong_duality(inst, &grid, 20, seed() + i as u64)?;
        if stable.equivalence != Equivalence::Consistent {
            return Ok(fail(format!("instance {i}: stable strong duality fails")));
        }
        tilts += stable.rows.len();
    }
    Ok(pass(format!(
        "{} instances weak-dual, {attained} attained, {optimality} optimality checks, {tilts} tilts",
        instances.len()
    )))
}

// ---------------------------------------------------------------- criterion 8

/// The dual LP of the band problem, stated independently of the library's
/// primal formulation: maximize `gᵀq − (g+ε)ᵀp` over `p, q ≥ 0` with
/// `Σ_t (p_t − q_t) t^{i−1} = −1/i`.
fn band_dual_oracle(nodes: &[Rational], values: &[Rational], n: usize, eps: &Rational) -> Rational {
    let k = nodes.len();
    let mut objective = Vec::with_capacity(2 * k);
    objective.extend(values.iter().cloned());
    objective.extend(values.iter().map(|g| -(g + eps)));
    let mut lp = LinearProgram::new(2 * k).maximize(objective);
    for j in 0..2 * k {
        let mut r = vec![zero(); 2 * k];
        r[j] = -one();
        lp = lp.le(r, zero());
    }
    for i in 0..n {
        let mut r = vec![zero(); 2 * k];
        for (j, t) in nodes.iter().enumerate() {
            let power = (0..i).fold(one(), |acc, _| acc * t);
            r[j] = -power.clone();
            r[k + j] = power;
        }
        lp = lp.equal(r, -frac(1, i as i64 + 1));
    }
    match solve(&lp).expect("oracle LP") {
        LpOutcome::Optimal { value, .. } => value,
        other => panic!("oracle LP: {other:?}"),
    }
}

fn criterion_8() -> Result<Outcome> {
    let nodes = equispaced_nodes(101);
    let prob = ApproxProblem::from_polynomial(3, &rats(&[0, 0, 1]), nodes, vec![frac(1, 100), frac(1, 10)])?;
    let rows = sweep(&prob)?;
    let mut last: Option<Rational> = None;
    for (out, eps) in rows.iter().zip(&prob.epsilons) {
        let Some(row) = out.row() else {
            return Ok(fail(format!("ε = {eps}: no solution")));
        };
        verify_row(&prob, row)?;
        if !prob.is_grid_feasible(&row.coefficients, eps) {
            return Ok(fail(format!("ε = {eps}: coefficients leave the band")));
        }
        let lambda = row.dual.lambda();
        for i in 0..3 {
            let moment = prob.nodes.iter().zip(&lambda).fold(zero(), |acc, (t, l)| {
                acc + l * (0..i).fold(one(), |p, _| p * t)
            });
            if moment != -frac(1, i as i64 + 1) {
                return Ok(fail(format!("ε = {eps}: moment {} is {moment}", i + 1)));
            }
        }
        let oracle = band_dual_oracle(&prob.nodes, &prob.values, 3, eps);
        // Simpson's rule on 101 nodes is exact for quadratics with positive
        // weights, so ∫p ≥ ∫t² = 1/3 for every grid-feasible p.
        if row.objective != oracle || oracle != frac(1, 3) {
            return Ok(fail(format!("ε = {eps}: objective {} vs oracle {oracle}", row.objective)));
        }
        if last.as_ref().is_some_and(|p| &row.objective > p) {
            return Ok(fail("objective increased with ε"));
        }
        last = Some(row.objective.clone());
    }
    Ok(pass("ε ∈ {1/100, 1/10}: feasible, moments exact, objective 1/3 = oracle, monotone"))
}

// ---------------------------------------------------------------- criterion 9

fn line_instance(offset: i64) -> Result<FarkasInstance> {
    FarkasInstance::new(
        MaxAffineFn::affine(rats(&[1]), rat(offset)),
        Polyhedron::whole(1),
        LinearOperator::identity(1),
        Target::Box(IntervalBox::new(rats(&[-2]), rats(&[-1]))?),
    )
}

fn criterion_9() -> Result<Outcome> {
    let mut rng = rng_for(9);
    let mut done = 0;
    while done < 50 {
        let inst = random_instance(&mut rng, InstanceKind::Feasible);
        let full = MaxAffineFn::new(inst.n(), inst.f.pieces().to_vec(), None)?;
        let inst = FarkasInstance { f: full, ..inst };
        let report = check_concave(&inst)?;
        if report.equivalence != Equivalence::Consistent || !report.simili_closed {
            return Ok(fail(format!("instance {done}: concave equivalence fails")));
        }
        done += 1;
    }
    let below = check_concave(&line_instance(0)?)?;
    let above = check_concave(&line_instance(3)?)?;
    let fixtures = below.upper_bound_holds
        && below.epigraph_in_cone
        && !above.upper_bound_holds
        && !above.epigraph_in_cone
        && below.equivalence == Equivalence::Consistent
        && above.equivalence == Equivalence::Consistent;
    if !fixtures {
        return Ok(fail("hand-derived line examples do not reproduce"));
    }
    Ok(pass("50 full-domain instances consistent, both line examples reproduce"))
}

// ---------------------------------------------------------------- driver

fn run(id: u32, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Result<Outcome>) -> bool {
    let start = Instant::now();
    let outcome = match f() {
        Ok(o) => o,
        Err(e) => fail(format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let ok = outcome.ok && in_time;
    let budget = limit.map(|l| format!(" / limit {}s", l.as_secs())).unwrap_or_default();
    println!(
        "criterion {id}: {} {title}: {} [{:.2}s{budget}]",
        if ok { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64()
    );
    ok
}

fn main() {
    let secs = Duration::from_secs;
    let instances = feasible_instances(200);
    let results = [
        run(1, "LP kernel", Some(secs(30)), criterion_1),
        run(2, "polyhedral implication vs certificate", Some(secs(60)), || criterion_2(&instances)),
        run(3, "adjoint and constraint cone probes", None, || criterion_3(&instances)),
        run(4, "existence routes", None, criterion_4),
        run(5, "gallery regression", None, criterion_5),
        run(6, "grid sandwich and box support", None, criterion_6),
        run(7, "Lagrangian duality", None, || criterion_7(&instances)),
        run(8, "polynomial band approximation", Some(secs(10)), criterion_8),
        run(9, "concave statements", None, criterion_9),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
