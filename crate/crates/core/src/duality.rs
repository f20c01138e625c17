//! The primal problem `inf f(x)` over `C ∩ A⁻¹(D)`, its Lagrangian dual
//! `sup −(f*(u′) + σ_C(v′) + σ_D(λ))` over `u′ + v′ = −Aᵀλ`, optimality
//! conditions and (stable) strong duality.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convex::FarkasInstance;
use crate::engine::{find_certificate, Certificate, CertificateLp, Equivalence};
use crate::error::{check_dim, FarkasError, Result};
use crate::lifted::Closedness;
use crate::lp::LpOutcome;
use crate::rational::{add_vec, is_zero_vec, one, rat, serde_str, zeros, Extended, Rational};
use crate::semiinf::SignedMultiplier;
use crate::system::{LinExpr, SystemBuilder};

const CLOSED_NOTE: &str = "epi f* + K is a linear image of a polyhedron, hence closed";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum PrimalOutcome {
    Optimal {
        #[serde(with = "serde_str")]
        value: Rational,
        #[serde(with = "serde_str::vec")]
        point: Vec<Rational>,
    },
    Unbounded,
    Infeasible,
}

impl PrimalOutcome {
    /// `inf (P)` in the extended reals.
    pub fn value(&self) -> Extended {
        match self {
            PrimalOutcome::Optimal { value, .. } => Extended::Finite(value.clone()),
            PrimalOutcome::Unbounded => Extended::NegInf,
            PrimalOutcome::Infeasible => Extended::PosInf,
        }
    }
}

/// Minimizes `f` over `C ∩ A⁻¹(D) ∩ dom f` through its epigraph.
pub fn solve_primal(inst: &FarkasInstance) -> Result<PrimalOutcome> {
    let mut b = SystemBuilder::new();
    let x = inst.embed_feasible(&mut b);
    let s = b.var();
    inst.f.embed_epigraph(&mut b, &LinExpr::vars(&x), &LinExpr::var(s));
    Ok(match b.minimize(&LinExpr::var(s))? {
        LpOutcome::Optimal { value, primal, .. } => {
            let value = -value;
            let point = primal[..inst.n()].to_vec();
            if inst.f.eval(&point) != Extended::Finite(value.clone()) || !inst.is_feasible(&point) {
                return Err(FarkasError::Violated("primal optimum failed re-evaluation".into()));
            }
            PrimalOutcome::Optimal { value, point }
        }
        LpOutcome::Unbounded { .. } => PrimalOutcome::Unbounded,
        LpOutcome::Infeasible { .. } => PrimalOutcome::Infeasible,
    })
}

/// A dual-feasible triple with finite values and `value = −(f* + σ_C + σ_D)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualSolution {
    #[serde(flatten)]
    pub parts: Certificate,
    pub lambda_split: SignedMultiplier,
    #[serde(with = "serde_str")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum DualOutcome {
    Optimal(Box<DualSolution>),
    /// `sup = +∞`.
    Unbounded,
    /// `sup = −∞`.
    Infeasible,
}

impl DualOutcome {
    pub fn value(&self) -> Extended {
        match self {
            DualOutcome::Optimal(s) => Extended::Finite(s.value.clone()),
            DualOutcome::Unbounded => Extended::PosInf,
            DualOutcome::Infeasible => Extended::NegInf,
        }
    }
}

/// Solves the dual as one LP over the three epigraphs.
pub fn solve_dual(inst: &FarkasInstance) -> Result<DualOutcome> {
    let lp = CertificateLp::new(inst)?;
    Ok(match lp.solve()? {
        LpOutcome::Optimal { value, primal, .. } => {
            let parts = lp.certificate_at(inst, &primal)?;
            let balance = add_vec(&add_vec(&parts.u_prime, &parts.v_prime), &inst.a.adjoint_apply(&parts.lambda));
            if !is_zero_vec(&balance) || parts.total() != -&value {
                return Err(FarkasError::Violated("dual optimum failed re-evaluation".into()));
            }
            DualOutcome::Optimal(Box::new(DualSolution {
                lambda_split: SignedMultiplier::from_lambda(&parts.lambda),
                value,
                parts,
            }))
        }
        LpOutcome::Unbounded { .. } => DualOutcome::Unbounded,
        LpOutcome::Infeasible { .. } => DualOutcome::Infeasible,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongDualityReport {
    pub primal: PrimalOutcome,
    pub dual: DualOutcome,
    pub primal_value: Extended,
    pub dual_value: Extended,
    /// `inf (P) = max (P′)` with the dual maximum attained.
    pub attained: bool,
    pub criterion: Closedness,
    pub equivalence: Equivalence,
    pub notes: Vec<String>,
}

/// Solves both problems and compares their values.
pub fn check_strong_duality(inst: &FarkasInstance) -> Result<StrongDualityReport> {
    let primal = solve_primal(inst)?;
    let dual = solve_dual(inst)?;
    let (pv, dv) = (primal.value(), dual.value());
    if dv > pv {
        return Err(FarkasError::Violated(format!("weak duality fails: dual {dv} exceeds primal {pv}")));
    }
    let mut notes = vec![CLOSED_NOTE.to_string()];
    let attained = matches!(dual, DualOutcome::Optimal(_)) && pv == dv;
    let ok = match &primal {
        PrimalOutcome::Optimal { .. } => attained,
        PrimalOutcome::Unbounded => {
            notes.push("inf (P) = −∞: strong duality holds by convention, the dual is infeasible".into());
            matches!(dual, DualOutcome::Infeasible)
        }
        PrimalOutcome::Infeasible => {
            notes.push("inf (P) = +∞: hypothesis of the converse direction fails, equality not asserted".into());
            true
        }
    };
    Ok(StrongDualityReport {
        primal,
        dual,
        primal_value: pv,
        dual_value: dv,
        attained,
        criterion: Closedness::Holds,
        equivalence: Equivalence::from_bool(ok),
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalityReport {
    #[serde(with = "serde_str::vec")]
    pub point: Vec<Rational>,
    #[serde(with = "serde_str")]
    pub value: Rational,
    /// `x̄` attains `inf (P)`.
    pub optimal: bool,
    /// Certificate for `f − f(x̄) ≥ 0` on the feasible set.
    pub certificate: Option<Certificate>,
    /// `0 ∈ ∂f(x̄) + N(C, x̄) + Aᵀ N(D, Ax̄)`.
    pub subgradient: bool,
    pub equivalence: Equivalence,
}

/// Decides the three optimality conditions at a feasible `x̄` independently.
pub fn check_optimality(inst: &FarkasInstance, x_bar: &[Rational]) -> Result<OptimalityReport> {
    check_dim("optimality point", inst.n(), x_bar.len())?;
    let value = match inst.f.eval(x_bar) {
        Extended::Finite(v) if inst.is_feasible(x_bar) => v,
        _ => return Err(FarkasError::Hypothesis("x̄ is not in C ∩ A⁻¹(D) ∩ dom f".into())),
    };
    let optimal = match solve_primal(inst)? {
        PrimalOutcome::Optimal { value: best, .. } => best == value,
        PrimalOutcome::Unbounded => false,
        PrimalOutcome::Infeasible => {
            return Err(FarkasError::Violated("primal infeasible despite a feasible x̄".into()));
        }
    };
    let shifted = FarkasInstance { f: inst.f.tilt(&zeros(inst.n()), &value)?, ..inst.clone() };
    let certificate = find_certificate(&shifted)?;
    let subgradient = zero_in_subdifferential_sum(inst, x_bar)?;
    let ok = optimal == certificate.is_some() && optimal == subgradient;
    Ok(OptimalityReport {
        point: x_bar.to_vec(),
        value,
        optimal,
        certificate,
        subgradient,
        equivalence: Equivalence::from_bool(ok),
    })
}

/// LP feasibility of `Σμᵢaᵢ + w_dom + w_C + Aᵀw_D = 0` with `μ` a
/// distribution over active pieces and each `w` in its normal cone.
fn zero_in_subdifferential_sum(inst: &FarkasInstance, x_bar: &[Rational]) -> Result<bool> {
    let n = inst.n();
    let active = inst.f.active_pieces(x_bar);
    let mut b = SystemBuilder::new();
    let mu = b.nonneg_vars(active.len());
    b.eq(LinExpr::dot(&vec![one(); mu.len()], &mu), LinExpr::constant(one()));
    let w_dom = b.vars(n);
    inst.f.domain_polyhedron().normal_cone_at(x_bar)?.embed(&mut b, &LinExpr::vars(&w_dom));
    let w_c = b.vars(n);
    inst.c.normal_cone_at(x_bar)?.embed(&mut b, &LinExpr::vars(&w_c));
    let w_d = b.vars(inst.m());
    inst.d.normal_cone_at(&inst.a.apply(x_bar))?.embed(&mut b, &LinExpr::vars(&w_d));
    let back = inst.a.adjoint_expr(&LinExpr::vars(&w_d));
    for j in 0..n {
        let mut e = LinExpr::var(w_dom[j]).plus(&LinExpr::var(w_c[j])).plus(&back[j]);
        for (&i, &m) in active.iter().zip(&mu) {
            e.add_term(m, inst.f.pieces()[i].slope[j].clone());
        }
        b.eq(e, LinExpr::default());
    }
    Ok(b.feasible_point()?.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityTiltRow {
    #[serde(with = "serde_str::vec")]
    pub x_prime: Vec<Rational>,
    pub primal_value: Extended,
    pub dual_value: Extended,
    pub equivalence: Equivalence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableDualityReport {
    pub rows: Vec<DualityTiltRow>,
    /// Sampled points of `epi f* + K` that lie in `epi (f + δ_{B∩C})*`.
    pub containment_checked: usize,
    pub containment_holds: bool,
    pub equivalence: Equivalence,
}

/// Strong duality for `f − ⟨x′, ·⟩` at every tilt, plus a sampled check that
/// `epi f* + K ⊂ epi (f + δ_{B∩C})*`.
pub fn check_stable_strong_duality(
    inst: &FarkasInstance,
    tilts: &[Vec<Rational>],
    samples: usize,
    seed: u64,
) -> Result<StableDualityReport> {
    let mut rows = Vec::with_capacity(tilts.len());
    for x_prime in tilts {
        let tilted = FarkasInstance { f: inst.f.tilt(x_prime, &rat(0))?, ..inst.clone() };
        let report = check_strong_duality(&tilted)?;
        rows.push(DualityTiltRow {
            x_prime: x_prime.clone(),
            primal_value: report.primal_value,
            dual_value: report.dual_value,
            equivalence: report.equivalence,
        });
    }
    let containment_holds = sampled_containment(inst, samples, seed)?;
    let ok = containment_holds && rows.iter().all(|r| r.equivalence == Equivalence::Consistent);
    Ok(StableDualityReport { rows, containment_checked: samples, containment_holds, equivalence: Equivalence::from_bool(ok) })
}

fn sampled_containment(inst: &FarkasInstance, samples: usize, seed: u64) -> Result<bool> {
    let restricted = match inst.f.restrict(&inst.feasible_polyhedron()?) {
        Ok(g) => g.conjugate_epigraph_lifted(),
        // Empty feasible set: the right-hand conjugate is −∞ everywhere.
        Err(FarkasError::Empty(_)) => return Ok(true),
        Err(e) => return Err(e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let (u, s1) = inst.f.sample_conjugate_pair(&mut rng);
        let (v, s2) = inst.c.sample_support_pair(&mut rng);
        let (l, s3) = inst.d.sample_support_pair(&mut rng);
        let mut point = add_vec(&add_vec(&u, &v), &inst.a.adjoint_apply(&l));
        let lift = Rational::from_integer(rand::Rng::random_range(&mut rng, 0..=2).into());
        point.push(s1 + s2 + s3 + lift);
        if !restricted.member(&point)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `dual ≤ primal` in the extended reals.
pub fn weak_duality_holds(primal: &PrimalOutcome, dual: &DualOutcome) -> bool {
    dual.value() <= primal.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{AffinePiece, IntervalBox, LinearOperator, MaxAffineFn, Polyhedron, Target};
    use crate::rational::{frac, rats, zero};
    use num::Zero;

    fn interval(f: MaxAffineFn, c: Polyhedron, lo: i64, hi: i64) -> FarkasInstance {
        FarkasInstance::new(
            f,
            c,
            LinearOperator::identity(1),
            Target::Box(IntervalBox::new(rats(&[lo]), rats(&[hi])).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn primal_examples() {
        let zero_f = interval(MaxAffineFn::zero(1), Polyhedron::whole(1), 0, 1);
        assert!(matches!(solve_primal(&zero_f).unwrap(), PrimalOutcome::Optimal { value, .. } if value.is_zero()));
        let falling = FarkasInstance::new(
            MaxAffineFn::affine(rats(&[-1]), zero()),
            Polyhedron::nonneg_orthant(1),
            LinearOperator::zero(0, 1),
            Target::Box(IntervalBox::new(vec![], vec![]).unwrap()),
        )
        .unwrap();
        assert_eq!(solve_primal(&falling).unwrap(), PrimalOutcome::Unbounded);
        let empty = interval(MaxAffineFn::zero(1), Polyhedron::new(1, vec![rats(&[1])], rats(&[-1])).unwrap(), 0, 1);
        assert_eq!(solve_primal(&empty).unwrap(), PrimalOutcome::Infeasible);
    }

    #[test]
    fn dual_of_zero_on_origin() {
        let origin = Polyhedron::singleton(&rats(&[0]));
        let inst = FarkasInstance::new(
            MaxAffineFn::zero(1),
            origin.clone(),
            LinearOperator::identity(1),
            Target::Polyhedron(origin),
        )
        .unwrap();
        match solve_dual(&inst).unwrap() {
            DualOutcome::Optimal(s) => assert!(s.value.is_zero()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dual_attains_on_interval() {
        // min x over [1, 2]: the dual is attained at λ = −1 with value 1.
        let inst = interval(MaxAffineFn::affine(rats(&[1]), zero()), Polyhedron::whole(1), 1, 2);
        let report = check_strong_duality(&inst).unwrap();
        assert_eq!(report.primal_value, Extended::Finite(rat(1)));
        assert_eq!(report.dual_value, Extended::Finite(rat(1)));
        assert!(report.attained);
        assert_eq!(report.equivalence, Equivalence::Consistent);
        match report.dual {
            DualOutcome::Optimal(s) => {
                assert_eq!(s.parts.lambda, rats(&[-1]));
                assert_eq!(s.parts.sigma_d, rat(-1));
                assert_eq!(s.lambda_split.minus, rats(&[1]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_primal_uses_convention() {
        let inst = FarkasInstance::new(
            MaxAffineFn::affine(rats(&[-1]), zero()),
            Polyhedron::nonneg_orthant(1),
            LinearOperator::identity(1),
            Target::Polyhedron(Polyhedron::whole(1)),
        )
        .unwrap();
        let report = check_strong_duality(&inst).unwrap();
        assert_eq!(report.primal_value, Extended::NegInf);
        assert_eq!(report.dual, DualOutcome::Infeasible);
        assert_eq!(report.equivalence, Equivalence::Consistent);
        assert_eq!(report.notes.len(), 2);
    }

    #[test]
    fn optimality_examples() {
        // Interior minimum of |x|.
        let abs = MaxAffineFn::new(
            1,
            vec![AffinePiece::new(rats(&[1]), zero()), AffinePiece::new(rats(&[-1]), zero())],
            None,
        )
        .unwrap();
        let inst = interval(abs, Polyhedron::whole(1), -1, 1);
        let at_min = check_optimality(&inst, &rats(&[0])).unwrap();
        assert!(at_min.optimal && at_min.subgradient && at_min.certificate.is_some());
        let off = check_optimality(&inst, &[frac(1, 2)]).unwrap();
        assert!(!off.optimal && !off.subgradient && off.certificate.is_none());
        assert_eq!(off.equivalence, Equivalence::Consistent);

        // f(x) = x on C = [0, 1]: the normal cone of C is needed at 0.
        let c = IntervalBox::new(rats(&[0]), rats(&[1])).unwrap().to_polyhedron();
        let inst = FarkasInstance::new(
            MaxAffineFn::affine(rats(&[1]), zero()),
            c,
            LinearOperator::zero(0, 1),
            Target::Box(IntervalBox::new(vec![], vec![]).unwrap()),
        )
        .unwrap();
        let boundary = check_optimality(&inst, &rats(&[0])).unwrap();
        assert!(boundary.optimal && boundary.subgradient);
        assert_eq!(boundary.equivalence, Equivalence::Consistent);
        assert!(check_optimality(&inst, &rats(&[2])).is_err());
    }

    #[test]
    fn stable_duality_with_unbounding_tilt() {
        let inst = FarkasInstance::new(
            MaxAffineFn::zero(1),
            Polyhedron::nonneg_orthant(1),
            LinearOperator::identity(1),
            Target::Polyhedron(Polyhedron::whole(1)),
        )
        .unwrap();
        let report = check_stable_strong_duality(&inst, &[rats(&[0]), rats(&[1]), rats(&[-1])], 20, 3).unwrap();
        assert_eq!(report.rows[0].primal_value, Extended::Finite(zero()));
        assert_eq!(report.rows[1].primal_value, Extended::NegInf);
        assert_eq!(report.rows[1].dual_value, Extended::NegInf);
        assert!(report.containment_holds);
        assert_eq!(report.equivalence, Equivalence::Consistent);
    }
}
