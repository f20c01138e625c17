//! Linear systems `lo_t ≤ ⟨a_t, x⟩ ≤ hi_t` over a finite index grid.
//!
//! A grid system is a Farkas instance whose constraint set is a box, so the
//! support function of `D` has the closed form `Σ (λ_t⁺ hi_t − λ_t⁻ lo_t)`
//! and multipliers carry an explicit positive/negative split.

use num::{Signed, Zero};
use serde::Serialize;

use crate::convex::{FarkasInstance, MaxAffineFn, MomentRow, Polyhedron, Target};
use crate::engine::{
    check_dual_criterion, check_primal_criterion, check_reduced_criterion, check_stable, CheckReport, ProbeConfig,
    StableReport, Witness,
};
use crate::error::{check_dim, FarkasError, Result};
use crate::lifted::{GeneratedSet, LiftedSet};
use crate::rational::{serde_str, sub_vec, zero, Extended, Rational};
use crate::system::{LinExpr, SystemBuilder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSystem {
    pub n: usize,
    pub rows: Vec<MomentRow>,
    pub c: Polyhedron,
    pub f: MaxAffineFn,
}

impl GridSystem {
    pub fn new(n: usize, rows: Vec<MomentRow>, c: Polyhedron, f: MaxAffineFn) -> Result<Self> {
        for (t, row) in rows.iter().enumerate() {
            check_dim("grid row", n, row.a.len())?;
            if row.lo > row.hi {
                return Err(FarkasError::Invalid(format!("grid row {t} has lo > hi")));
            }
        }
        check_dim("grid C", n, c.dim)?;
        check_dim("grid f", n, f.dim())?;
        Ok(GridSystem { n, rows, c, f })
    }

    pub fn to_instance(&self) -> Result<FarkasInstance> {
        let (a, bx) = crate::engine::grid_operator(self.n, &self.rows)?;
        FarkasInstance::new(self.f.clone(), self.c.clone(), a, Target::Box(bx))
    }

    pub fn moment_cone(&self) -> Result<GeneratedSet> {
        crate::convex::moment_cone(self.n, &self.rows)
    }

    /// `Σ (λ_t⁺ hi_t − λ_t⁻ lo_t)` without any cross-check.
    fn closed_form(&self, m: &SignedMultiplier) -> Rational {
        self.rows
            .iter()
            .zip(m.plus.iter().zip(&m.minus))
            .fold(zero(), |acc, (row, (p, q))| acc + p * &row.hi - q * &row.lo)
    }
}

/// `λ = plus − minus` with `plus, minus ≥ 0` and disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedMultiplier {
    #[serde(with = "serde_str::vec")]
    pub plus: Vec<Rational>,
    #[serde(with = "serde_str::vec")]
    pub minus: Vec<Rational>,
}

impl SignedMultiplier {
    /// The canonical split `λ⁺ = max(λ, 0)`, `λ⁻ = max(−λ, 0)`.
    pub fn from_lambda(lambda: &[Rational]) -> Self {
        let plus = lambda.iter().map(|l| if l.is_positive() { l.clone() } else { zero() }).collect();
        let minus = lambda.iter().map(|l| if l.is_negative() { -l } else { zero() }).collect();
        SignedMultiplier { plus, minus }
    }

    pub fn lambda(&self) -> Vec<Rational> {
        sub_vec(&self.plus, &self.minus)
    }

    pub fn is_canonical(&self) -> bool {
        self.plus.len() == self.minus.len()
            && self.plus.iter().zip(&self.minus).all(|(p, m)| {
                !p.is_negative() && !m.is_negative() && (p.is_zero() || m.is_zero())
            })
    }
}

/// Closed-form `σ_D(λ)` for the grid box, checked against the LP support of
/// the same box.
pub fn sigma_d_box(m: &SignedMultiplier, grid: &GridSystem) -> Result<Rational> {
    check_dim("multiplier", grid.rows.len(), m.plus.len())?;
    if !m.is_canonical() {
        return Err(FarkasError::Invalid("multiplier split is not canonical".into()));
    }
    let value = grid.closed_form(m);
    let (_, bx) = crate::engine::grid_operator(grid.n, &grid.rows)?;
    if bx.to_polyhedron().support(&m.lambda())? != Extended::Finite(value.clone()) {
        return Err(FarkasError::Violated("closed-form box support disagrees with the LP".into()));
    }
    Ok(value)
}

/// A criterion report with the certificate multiplier split by sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub report: CheckReport,
    pub multiplier: Option<SignedMultiplier>,
}

fn with_multiplier(report: CheckReport) -> GridReport {
    let multiplier = match &report.certificate {
        Some(Witness::Full(c)) => Some(SignedMultiplier::from_lambda(&c.lambda)),
        Some(Witness::Reduced(c)) => Some(SignedMultiplier::from_lambda(&c.lambda)),
        None => None,
    };
    GridReport { report, multiplier }
}

/// The system's implication against the full certificate.
pub fn check_grid_primal(grid: &GridSystem) -> Result<GridReport> {
    Ok(with_multiplier(check_primal_criterion(&grid.to_instance()?)?))
}

/// The system's implication against `f(x) + Σλ_t⟨a_t, x⟩ ≥ Σ(λ_t⁺hi_t − λ_t⁻lo_t)` on `C`.
pub fn check_grid_reduced(grid: &GridSystem) -> Result<GridReport> {
    Ok(with_multiplier(check_reduced_criterion(&grid.to_instance()?)?))
}

/// The dual criterion with `K` built from the grid data, plus the tilted
/// (stable) variant.
pub fn check_grid_dual(
    grid: &GridSystem,
    tilts: &[(Vec<Rational>, Rational)],
    probes: ProbeConfig,
) -> Result<(GridReport, StableReport)> {
    let inst = grid.to_instance()?;
    if inst.feasible_point()?.is_none() {
        return Err(FarkasError::Hypothesis("no x in C ∩ dom f satisfies every grid row".into()));
    }
    let report = with_multiplier(check_dual_criterion(&inst, probes)?);
    Ok((report, check_stable(&inst, tilts, probes)?))
}

/// `{(u, s) : ∃p, q ≥ 0, μ ≥ 0, ν : u = Σ(p_t − q_t)a_t + Gᵀμ + Eᵀν,
/// Σ(p_t hi_t − q_t lo_t) + hᵀμ + eᵀν ≤ s}` assembled from the rows.
pub fn grid_constraint_cone(grid: &GridSystem) -> Result<LiftedSet> {
    if grid.c.is_empty()? {
        return Err(FarkasError::Empty("C"));
    }
    let n = grid.n;
    let t = grid.rows.len();
    let mut b = SystemBuilder::new();
    let z = b.vars(n + 1);
    let p = b.nonneg_vars(t);
    let q = b.nonneg_vars(t);
    let mu = b.nonneg_vars(grid.c.ineq.len());
    let nu = b.vars(grid.c.eq.len());
    for j in 0..n {
        let mut e = LinExpr::default();
        for (k, row) in grid.rows.iter().enumerate() {
            e.add_term(p[k], row.a[j].clone());
            e.add_term(q[k], -row.a[j].clone());
        }
        for (g, &v) in grid.c.ineq.iter().zip(&mu) {
            e.add_term(v, g[j].clone());
        }
        for (g, &v) in grid.c.eq.iter().zip(&nu) {
            e.add_term(v, g[j].clone());
        }
        b.eq(LinExpr::var(z[j]), e);
    }
    let mut value = LinExpr::dot(&grid.c.ineq_rhs, &mu).plus(&LinExpr::dot(&grid.c.eq_rhs, &nu));
    for (k, row) in grid.rows.iter().enumerate() {
        value.add_term(p[k], row.hi.clone());
        value.add_term(q[k], -row.lo.clone());
    }
    b.le(value, LinExpr::var(z[n]));
    Ok(LiftedSet::from_builder(&b, n + 1))
}
