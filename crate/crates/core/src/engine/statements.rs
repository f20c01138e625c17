use num::Signed;

use super::{Certificate, Implication, ReducedCertificate};
use crate::convex::FarkasInstance;
use crate::error::{FarkasError, Result};
use crate::lp::LpOutcome;
use crate::rational::{add_vec, is_zero_vec, neg_vec, one, Extended, Rational};
use crate::system::{LinExpr, SystemBuilder};

/// Decides `x ∈ C ∩ A⁻¹(D) ⟹ f(x) ≥ 0` by minimizing `f` over the
/// premise set.
pub fn check_implication(inst: &FarkasInstance) -> Result<Implication> {
    let mut b = SystemBuilder::new();
    let x = inst.embed_feasible(&mut b);
    let s = b.var();
    inst.f.embed_epigraph(&mut b, &LinExpr::vars(&x), &LinExpr::var(s));
    let objective = LinExpr::var(s);
    let point = match b.minimize(&objective)? {
        LpOutcome::Infeasible { .. } => return Ok(Implication::VacuouslyTrue),
        LpOutcome::Optimal { value, primal, .. } => {
            if !value.is_positive() {
                return Ok(Implication::Holds);
            }
            primal
        }
        LpOutcome::Unbounded { point, ray } => push_below_zero(&point, &ray, &objective),
    };
    let witness = point[..inst.n()].to_vec();
    let value = inst.f.piece_max(&witness);
    if !value.is_negative() || !inst.is_feasible(&witness) {
        return Err(FarkasError::Violated("implication witness failed re-evaluation".into()));
    }
    Ok(Implication::Fails { witness, value })
}

/// Moves from `point` along `ray` until the minimized `objective` is
/// negative.
fn push_below_zero(point: &[Rational], ray: &[Rational], objective: &LinExpr) -> Vec<Rational> {
    let start = objective.eval(point);
    let slope = objective.eval(ray) - &objective.constant;
    debug_assert!(slope.is_negative(), "improving ray must decrease the objective");
    if start.is_negative() {
        return point.to_vec();
    }
    let steps = (start / -slope).floor().to_integer() + num::BigInt::from(1);
    let k = Rational::from_integer(steps.max(num::BigInt::from(0)));
    debug_assert!(k.is_integer());
    add_vec(point, &ray.iter().map(|r| r * &k).collect::<Vec<_>>())
}

/// The LP over `epi f* × epi σ_C × epi σ_D` with `u′ + v′ + Aᵀλ = 0`,
/// minimizing `s₁ + s₂ + s₃`.
pub(crate) struct CertificateLp {
    pub builder: SystemBuilder,
    pub objective: LinExpr,
    u: Vec<usize>,
    v: Vec<usize>,
    l: Vec<usize>,
}

impl CertificateLp {
    pub fn new(inst: &FarkasInstance) -> Result<Self> {
        let (n, m) = (inst.n(), inst.m());
        let mut b = SystemBuilder::new();
        let u = b.vars(n);
        let s1 = b.var();
        let v = b.vars(n);
        let s2 = b.var();
        let l = b.vars(m);
        let s3 = b.var();
        let with_value = |xs: &[usize], s: usize| {
            let mut e = LinExpr::vars(xs);
            e.push(LinExpr::var(s));
            e
        };
        inst.f.conjugate_epigraph_lifted().embed(&mut b, &with_value(&u, s1));
        inst.c.support_epigraph()?.embed(&mut b, &with_value(&v, s2));
        inst.d.support_epigraph()?.embed(&mut b, &with_value(&l, s3));
        let at_lambda = inst.a.adjoint_expr(&LinExpr::vars(&l));
        for j in 0..n {
            b.eq(LinExpr::var(u[j]).plus(&LinExpr::var(v[j])).plus(&at_lambda[j]), LinExpr::default());
        }
        let objective = LinExpr::var(s1).plus(&LinExpr::var(s2)).plus(&LinExpr::var(s3));
        Ok(CertificateLp { builder: b, objective, u, v, l })
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        self.builder.minimize(&self.objective)
    }

    /// Reads `(u′, v′, λ)` off an LP point and recomputes the three values
    /// by separate primal LPs.
    pub fn certificate_at(&self, inst: &FarkasInstance, point: &[Rational]) -> Result<Certificate> {
        let pick = |vs: &[usize]| vs.iter().map(|&i| point[i].clone()).collect::<Vec<_>>();
        let (u_prime, v_prime, lambda) = (pick(&self.u), pick(&self.v), pick(&self.l));
        Ok(Certificate {
            f_star: finite(inst.f.conjugate_at(&u_prime)?, "conjugate value")?,
            sigma_c: finite(inst.c.support(&v_prime)?, "support of C")?,
            sigma_d: finite(inst.d.support(&lambda)?, "support of D")?,
            u_prime,
            v_prime,
            lambda,
        })
    }
}

/// Searches for `(u′, v′, λ)` with `u′ + v′ + Aᵀλ = 0` minimizing
/// `f*(u′) + σ_C(v′) + σ_D(λ)`; returns it when the minimum is `≤ 0`.
///
/// The returned values are recomputed by separate primal LPs.
pub fn find_certificate(inst: &FarkasInstance) -> Result<Option<Certificate>> {
    let lp = CertificateLp::new(inst)?;
    let point = match lp.solve()? {
        LpOutcome::Infeasible { .. } => return Ok(None),
        LpOutcome::Optimal { value, primal, .. } => {
            if value.is_negative() {
                return Ok(None);
            }
            primal
        }
        LpOutcome::Unbounded { point, ray } => push_below_zero(&point, &ray, &lp.objective),
    };
    let cert = lp.certificate_at(inst, &point)?;
    if !cert.verify(inst)? {
        return Err(FarkasError::Violated("certificate failed its own invariants".into()));
    }
    Ok(Some(cert))
}

/// Searches for `λ` with `(f + δ_C)*(−Aᵀλ) + σ_D(λ) ≤ 0`.
pub fn find_reduced_certificate(inst: &FarkasInstance) -> Result<Option<ReducedCertificate>> {
    let restricted = restrict_to_c(inst)?;
    let mut b = SystemBuilder::new();
    let l = b.vars(inst.m());
    let s1 = b.var();
    let s3 = b.var();
    let mut u: Vec<LinExpr> = inst.a.adjoint_expr(&LinExpr::vars(&l)).iter().map(|e| e.scaled(&-one())).collect();
    u.push(LinExpr::var(s1));
    restricted.conjugate_epigraph_lifted().embed(&mut b, &u);
    let mut lam = LinExpr::vars(&l);
    lam.push(LinExpr::var(s3));
    inst.d.support_epigraph()?.embed(&mut b, &lam);
    let objective = LinExpr::var(s1).plus(&LinExpr::var(s3));
    let point = match b.minimize(&objective)? {
        LpOutcome::Infeasible { .. } => return Ok(None),
        LpOutcome::Optimal { value, primal, .. } => {
            if value.is_negative() {
                return Ok(None);
            }
            primal
        }
        LpOutcome::Unbounded { point, ray } => push_below_zero(&point, &ray, &objective),
    };
    let lambda: Vec<Rational> = l.iter().map(|&i| point[i].clone()).collect();
    let cert = ReducedCertificate {
        restricted_conjugate: finite(
            restricted.conjugate_at(&neg_vec(&inst.a.adjoint_apply(&lambda)))?,
            "restricted conjugate value",
        )?,
        sigma_d: finite(inst.d.support(&lambda)?, "support of D")?,
        lambda,
    };
    if !cert.verify(inst)? {
        return Err(FarkasError::Violated("reduced certificate failed its own invariants".into()));
    }
    Ok(Some(cert))
}

pub(crate) fn restrict_to_c(inst: &FarkasInstance) -> Result<crate::convex::MaxAffineFn> {
    inst.f.restrict(&inst.c).map_err(|e| match e {
        FarkasError::Empty(_) => FarkasError::Hypothesis("C ∩ dom f is empty".into()),
        other => other,
    })
}

fn finite(v: Extended, what: &str) -> Result<Rational> {
    v.into_finite().ok_or_else(|| FarkasError::Violated(format!("{what} is not finite")))
}

impl Certificate {
    /// Re-derives every value independently and checks the linear identity
    /// and the sign condition exactly.
    pub fn verify(&self, inst: &FarkasInstance) -> Result<bool> {
        let balance = add_vec(&add_vec(&self.u_prime, &self.v_prime), &inst.a.adjoint_apply(&self.lambda));
        Ok(is_zero_vec(&balance)
            && !self.total().is_positive()
            && inst.f.conjugate_at(&self.u_prime)? == Extended::Finite(self.f_star.clone())
            && inst.c.support(&self.v_prime)? == Extended::Finite(self.sigma_c.clone())
            && inst.d.support(&self.lambda)? == Extended::Finite(self.sigma_d.clone()))
    }
}

impl ReducedCertificate {
    pub fn verify(&self, inst: &FarkasInstance) -> Result<bool> {
        let restricted = restrict_to_c(inst)?;
        let u = neg_vec(&inst.a.adjoint_apply(&self.lambda));
        Ok(!self.total().is_positive()
            && restricted.conjugate_at(&u)? == Extended::Finite(self.restricted_conjugate.clone())
            && inst.d.support(&self.lambda)? == Extended::Finite(self.sigma_d.clone()))
    }
}
