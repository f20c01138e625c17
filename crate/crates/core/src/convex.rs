//! Polyhedra, interval boxes, max-affine functions and the sets built from
//! them: support-function epigraphs, conjugate epigraphs, the image cone of
//! the constraint set under the adjoint, the dual constraint cone, the
//! perturbation sets and the moment cone of a linear system.

use num::{Signed, Zero};
use rand::Rng;

use crate::error::{check_dim, FarkasError, Result};
use crate::lifted::{GeneratedSet, LiftedSet};
use crate::lp::LpOutcome;
use crate::rational::{dot, frac, one, rat, zero, zeros, Extended, Rational};
use crate::system::{LinExpr, SystemBuilder};

/// `{x : Gx ≤ h, Ex = e}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    pub dim: usize,
    pub ineq: Vec<Vec<Rational>>,
    pub ineq_rhs: Vec<Rational>,
    pub eq: Vec<Vec<Rational>>,
    pub eq_rhs: Vec<Rational>,
}

impl Polyhedron {
    pub fn new(dim: usize, ineq: Vec<Vec<Rational>>, ineq_rhs: Vec<Rational>) -> Result<Self> {
        Polyhedron::with_equalities(dim, ineq, ineq_rhs, vec![], vec![])
    }

    pub fn with_equalities(
        dim: usize,
        ineq: Vec<Vec<Rational>>,
        ineq_rhs: Vec<Rational>,
        eq: Vec<Vec<Rational>>,
        eq_rhs: Vec<Rational>,
    ) -> Result<Self> {
        check_dim("polyhedron inequality rhs", ineq.len(), ineq_rhs.len())?;
        check_dim("polyhedron equality rhs", eq.len(), eq_rhs.len())?;
        for row in ineq.iter().chain(&eq) {
            check_dim("polyhedron row", dim, row.len())?;
        }
        Ok(Polyhedron { dim, ineq, ineq_rhs, eq, eq_rhs })
    }

    pub fn whole(dim: usize) -> Self {
        Polyhedron { dim, ineq: vec![], ineq_rhs: vec![], eq: vec![], eq_rhs: vec![] }
    }

    pub fn singleton(p: &[Rational]) -> Self {
        let n = p.len();
        let eq = (0..n).map(|i| crate::rational::unit(n, i)).collect();
        Polyhedron { dim: n, ineq: vec![], ineq_rhs: vec![], eq, eq_rhs: p.to_vec() }
    }

    pub fn nonneg_orthant(dim: usize) -> Self {
        let ineq = (0..dim).map(|i| crate::rational::scale_vec(&-one(), &crate::rational::unit(dim, i))).collect();
        Polyhedron { dim, ineq, ineq_rhs: zeros(dim), eq: vec![], eq_rhs: vec![] }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.ineq.iter().zip(&self.ineq_rhs).all(|(g, h)| &dot(g, x) <= h)
            && self.eq.iter().zip(&self.eq_rhs).all(|(g, e)| &dot(g, x) == e)
    }

    /// Constrains the expressions `x` to lie in the polyhedron.
    pub fn embed(&self, b: &mut SystemBuilder, x: &[LinExpr]) {
        for (g, h) in self.ineq.iter().zip(&self.ineq_rhs) {
            b.le(LinExpr::combine(g, x), LinExpr::constant(h.clone()));
        }
        for (g, e) in self.eq.iter().zip(&self.eq_rhs) {
            b.eq(LinExpr::combine(g, x), LinExpr::constant(e.clone()));
        }
    }

    pub fn to_lifted(&self) -> LiftedSet {
        let mut b = SystemBuilder::new();
        let x = b.vars(self.dim);
        self.embed(&mut b, &LinExpr::vars(&x));
        LiftedSet::from_builder(&b, self.dim)
    }

    pub fn feasible_point(&self) -> Result<Option<Vec<Rational>>> {
        let mut b = SystemBuilder::new();
        let x = b.vars(self.dim);
        self.embed(&mut b, &LinExpr::vars(&x));
        b.feasible_point()
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.feasible_point()?.is_none())
    }

    pub fn support(&self, d: &[Rational]) -> Result<Extended> {
        self.to_lifted().support(d)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        check_dim("intersected polyhedron", self.dim, other.dim)?;
        let mut p = self.clone();
        p.ineq.extend(other.ineq.iter().cloned());
        p.ineq_rhs.extend(other.ineq_rhs.iter().cloned());
        p.eq.extend(other.eq.iter().cloned());
        p.eq_rhs.extend(other.eq_rhs.iter().cloned());
        Ok(p)
    }

    /// `{x : Ax ∈ self}`.
    pub fn preimage(&self, a: &LinearOperator) -> Result<Polyhedron> {
        check_dim("preimage operator rows", self.dim, a.rows())?;
        let pull = |rows: &[Vec<Rational>]| rows.iter().map(|g| a.adjoint_apply(g)).collect::<Vec<_>>();
        Ok(Polyhedron {
            dim: a.cols(),
            ineq: pull(&self.ineq),
            ineq_rhs: self.ineq_rhs.clone(),
            eq: pull(&self.eq),
            eq_rhs: self.eq_rhs.clone(),
        })
    }

    pub fn recession_cone(&self) -> Polyhedron {
        Polyhedron { ineq_rhs: zeros(self.ineq.len()), eq_rhs: zeros(self.eq.len()), ..self.clone() }
    }

    fn require_nonempty(&self, what: &'static str) -> Result<()> {
        if self.is_empty()? {
            Err(FarkasError::Empty(what))
        } else {
            Ok(())
        }
    }

    /// `{(x′, s) : ∃μ ≥ 0, ν : Gᵀμ + Eᵀν = x′, hᵀμ + eᵀν ≤ s}`, the
    /// epigraph of the support function by LP duality.
    pub fn support_epigraph(&self) -> Result<LiftedSet> {
        self.require_nonempty("polyhedron")?;
        let mut b = SystemBuilder::new();
        let z = b.vars(self.dim + 1);
        let mu = b.nonneg_vars(self.ineq.len());
        let nu = b.vars(self.eq.len());
        for j in 0..self.dim {
            let col_g: Vec<Rational> = self.ineq.iter().map(|g| g[j].clone()).collect();
            let col_e: Vec<Rational> = self.eq.iter().map(|g| g[j].clone()).collect();
            let rhs = LinExpr::dot(&col_g, &mu).plus(&LinExpr::dot(&col_e, &nu));
            b.eq(LinExpr::var(z[j]), rhs);
        }
        let value = LinExpr::dot(&self.ineq_rhs, &mu).plus(&LinExpr::dot(&self.eq_rhs, &nu));
        b.le(value, LinExpr::var(z[self.dim]));
        Ok(LiftedSet::from_builder(&b, self.dim + 1))
    }

    /// `σ(x′) < +∞`.
    pub fn barrier_cone_member(&self, x_prime: &[Rational]) -> Result<bool> {
        self.require_nonempty("polyhedron")?;
        Ok(self.support(x_prime)?.is_finite())
    }

    /// Generators of the normal cone at `x̄`: active inequality rows and both
    /// signs of every equality row.
    pub fn normal_cone_at(&self, x_bar: &[Rational]) -> Result<GeneratedSet> {
        check_dim("normal cone point", self.dim, x_bar.len())?;
        if !self.contains(x_bar) {
            return Err(FarkasError::Invalid("normal cone requested at a point outside the set".into()));
        }
        let mut rays: Vec<Vec<Rational>> = self
            .ineq
            .iter()
            .zip(&self.ineq_rhs)
            .filter(|(g, h)| &dot(g, x_bar) == *h)
            .map(|(g, _)| g.clone())
            .collect();
        for g in &self.eq {
            rays.push(g.clone());
            rays.push(g.iter().map(|v| -v).collect());
        }
        GeneratedSet::cone(self.dim, rays)
    }

    /// A point `(x′, s)` of the support epigraph assembled from random
    /// multipliers, with `s` the multiplier bound rather than `σ(x′)`.
    pub fn sample_support_pair<R: Rng>(&self, rng: &mut R) -> (Vec<Rational>, Rational) {
        let mut x = zeros(self.dim);
        let mut s = zero();
        for (g, h) in self.ineq.iter().zip(&self.ineq_rhs) {
            let mu = frac(rng.random_range(0..=3), rng.random_range(1..=3));
            accumulate(&mut x, &mut s, &mu, g, h);
        }
        for (g, e) in self.eq.iter().zip(&self.eq_rhs) {
            let nu = frac(rng.random_range(-3..=3), rng.random_range(1..=3));
            accumulate(&mut x, &mut s, &nu, g, e);
        }
        (x, s)
    }
}

fn accumulate(x: &mut [Rational], s: &mut Rational, w: &Rational, g: &[Rational], h: &Rational) {
    if w.is_zero() {
        return;
    }
    for (xi, gi) in x.iter_mut().zip(g) {
        *xi += w * gi;
    }
    *s += w * h;
}

/// `∏ [lo_t, hi_t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalBox {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl IntervalBox {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        check_dim("box bounds", lo.len(), hi.len())?;
        if let Some(t) = (0..lo.len()).find(|&t| lo[t] > hi[t]) {
            return Err(FarkasError::Invalid(format!("box interval {t} has lo > hi")));
        }
        Ok(IntervalBox { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        y.len() == self.dim() && y.iter().zip(&self.lo).zip(&self.hi).all(|((v, l), h)| l <= v && v <= h)
    }

    /// `Σ (λ_t⁺ hi_t − λ_t⁻ lo_t)`.
    pub fn support_value(&self, lambda: &[Rational]) -> Rational {
        lambda.iter().zip(&self.lo).zip(&self.hi).fold(zero(), |acc, ((l, lo), hi)| {
            if l.is_positive() {
                acc + l * hi
            } else {
                acc + l * lo
            }
        })
    }

    pub fn to_polyhedron(&self) -> Polyhedron {
        let m = self.dim();
        let mut ineq = Vec::with_capacity(2 * m);
        let mut rhs = Vec::with_capacity(2 * m);
        for t in 0..m {
            ineq.push(crate::rational::unit(m, t));
            rhs.push(self.hi[t].clone());
            ineq.push(crate::rational::scale_vec(&-one(), &crate::rational::unit(m, t)));
            rhs.push(-self.lo[t].clone());
        }
        Polyhedron { dim: m, ineq, ineq_rhs: rhs, eq: vec![], eq_rhs: vec![] }
    }

    pub fn embed(&self, b: &mut SystemBuilder, y: &[LinExpr]) {
        for (t, yt) in y.iter().enumerate() {
            b.le(yt.clone(), LinExpr::constant(self.hi[t].clone()));
            b.le(LinExpr::constant(self.lo[t].clone()), yt.clone());
        }
    }

    /// `{(λ, s) : ∃p, m ≥ 0 : λ = p − m, Σ(p_t hi_t − m_t lo_t) ≤ s}`.
    pub fn support_epigraph(&self) -> LiftedSet {
        let m = self.dim();
        let mut b = SystemBuilder::new();
        let z = b.vars(m + 1);
        let plus = b.nonneg_vars(m);
        let minus = b.nonneg_vars(m);
        for t in 0..m {
            b.eq(LinExpr::var(z[t]), LinExpr::var(plus[t]).minus(&LinExpr::var(minus[t])));
        }
        let value = LinExpr::dot(&self.hi, &plus).minus(&LinExpr::dot(&self.lo, &minus));
        b.le(value, LinExpr::var(z[m]));
        LiftedSet::from_builder(&b, m + 1)
    }
}

/// The constraint set `D`: a general polyhedron or a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Polyhedron(Polyhedron),
    Box(IntervalBox),
}

impl Target {
    pub fn dim(&self) -> usize {
        match self {
            Target::Polyhedron(p) => p.dim,
            Target::Box(b) => b.dim(),
        }
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        match self {
            Target::Polyhedron(p) => p.contains(y),
            Target::Box(b) => b.contains(y),
        }
    }

    pub fn embed(&self, b: &mut SystemBuilder, y: &[LinExpr]) {
        match self {
            Target::Polyhedron(p) => p.embed(b, y),
            Target::Box(bx) => bx.embed(b, y),
        }
    }

    pub fn to_polyhedron(&self) -> Polyhedron {
        match self {
            Target::Polyhedron(p) => p.clone(),
            Target::Box(b) => b.to_polyhedron(),
        }
    }

    pub fn is_empty(&self) -> Result<bool> {
        match self {
            Target::Polyhedron(p) => p.is_empty(),
            Target::Box(_) => Ok(false),
        }
    }

    /// `σ_D(λ)`; boxes use the closed form.
    pub fn support(&self, lambda: &[Rational]) -> Result<Extended> {
        check_dim("support direction", self.dim(), lambda.len())?;
        match self {
            Target::Polyhedron(p) => p.support(lambda),
            Target::Box(b) => Ok(Extended::Finite(b.support_value(lambda))),
        }
    }

    pub fn support_epigraph(&self) -> Result<LiftedSet> {
        match self {
            Target::Polyhedron(p) => p.support_epigraph(),
            Target::Box(b) => Ok(b.support_epigraph()),
        }
    }

    pub fn recession_cone(&self) -> Polyhedron {
        self.to_polyhedron().recession_cone()
    }

    pub fn normal_cone_at(&self, y: &[Rational]) -> Result<GeneratedSet> {
        self.to_polyhedron().normal_cone_at(y)
    }

    /// A multiplier `λ` in the barrier cone together with an upper bound on
    /// `σ_D(λ)` (exact for boxes).
    pub fn sample_support_pair<R: Rng>(&self, rng: &mut R) -> (Vec<Rational>, Rational) {
        match self {
            Target::Polyhedron(p) => p.sample_support_pair(rng),
            Target::Box(b) => {
                let lambda: Vec<Rational> =
                    (0..b.dim()).map(|_| frac(rng.random_range(-4..=4), rng.random_range(1..=3))).collect();
                let s = b.support_value(&lambda);
                (lambda, s)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePiece {
    pub slope: Vec<Rational>,
    pub offset: Rational,
}

impl AffinePiece {
    pub fn new(slope: Vec<Rational>, offset: Rational) -> Self {
        AffinePiece { slope, offset }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.slope, x) + &self.offset
    }
}

/// `f(x) = maxᵢ (⟨aᵢ, x⟩ + bᵢ)` on an optional polyhedral domain, `+∞`
/// outside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxAffineFn {
    dim: usize,
    pieces: Vec<AffinePiece>,
    domain: Option<Polyhedron>,
}

impl MaxAffineFn {
    pub fn new(dim: usize, pieces: Vec<AffinePiece>, domain: Option<Polyhedron>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(FarkasError::Empty("max-affine piece list"));
        }
        for p in &pieces {
            check_dim("piece slope", dim, p.slope.len())?;
        }
        if let Some(d) = &domain {
            check_dim("function domain", dim, d.dim)?;
            if d.is_empty()? {
                return Err(FarkasError::Empty("function domain"));
            }
        }
        Ok(MaxAffineFn { dim, pieces, domain })
    }

    pub fn affine(slope: Vec<Rational>, offset: Rational) -> Self {
        MaxAffineFn { dim: slope.len(), pieces: vec![AffinePiece::new(slope, offset)], domain: None }
    }

    pub fn zero(dim: usize) -> Self {
        MaxAffineFn::affine(zeros(dim), zero())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn domain(&self) -> Option<&Polyhedron> {
        self.domain.as_ref()
    }

    pub fn domain_polyhedron(&self) -> Polyhedron {
        self.domain.clone().unwrap_or_else(|| Polyhedron::whole(self.dim))
    }

    pub fn has_full_domain(&self) -> bool {
        self.domain.is_none()
    }

    /// `max` over pieces, ignoring the domain.
    pub fn piece_max(&self, x: &[Rational]) -> Rational {
        self.pieces.iter().map(|p| p.eval(x)).max().expect("nonempty piece list")
    }

    pub fn eval(&self, x: &[Rational]) -> Extended {
        match &self.domain {
            Some(d) if !d.contains(x) => Extended::PosInf,
            _ => Extended::Finite(self.piece_max(x)),
        }
    }

    /// Indices of pieces attaining the maximum at `x`.
    pub fn active_pieces(&self, x: &[Rational]) -> Vec<usize> {
        let top = self.piece_max(x);
        (0..self.pieces.len()).filter(|&i| self.pieces[i].eval(x) == top).collect()
    }

    /// `x ↦ f(x) − ⟨x′, x⟩ − r`.
    pub fn tilt(&self, x_prime: &[Rational], r: &Rational) -> Result<MaxAffineFn> {
        check_dim("tilt slope", self.dim, x_prime.len())?;
        let pieces = self
            .pieces
            .iter()
            .map(|p| AffinePiece::new(crate::rational::sub_vec(&p.slope, x_prime), &p.offset - r))
            .collect();
        Ok(MaxAffineFn { dim: self.dim, pieces, domain: self.domain.clone() })
    }

    /// `f + δ_P`.
    pub fn restrict(&self, p: &Polyhedron) -> Result<MaxAffineFn> {
        let domain = match &self.domain {
            Some(d) => d.intersect(p)?,
            None => {
                check_dim("restriction", self.dim, p.dim)?;
                p.clone()
            }
        };
        MaxAffineFn::new(self.dim, self.pieces.clone(), Some(domain))
    }

    /// Constrains `x ∈ dom f` and `s ≥ f(x)`.
    pub fn embed_epigraph(&self, b: &mut SystemBuilder, x: &[LinExpr], s: &LinExpr) {
        for p in &self.pieces {
            let value = LinExpr::combine(&p.slope, x).plus(&LinExpr::constant(p.offset.clone()));
            b.le(value, s.clone());
        }
        if let Some(d) = &self.domain {
            d.embed(b, x);
        }
    }

    /// `epi f* = conv{(aᵢ, −bᵢ)} + {0}×ℝ₊`, available for full-domain `f`.
    pub fn conjugate_epigraph(&self) -> Result<GeneratedSet> {
        if self.domain.is_some() {
            return Err(FarkasError::Invalid("finitely generated conjugate needs a full-domain function".into()));
        }
        let n = self.dim;
        let points = self
            .pieces
            .iter()
            .map(|p| {
                let mut v = p.slope.clone();
                v.push(-p.offset.clone());
                v
            })
            .collect();
        let mut ray = zeros(n + 1);
        ray[n] = one();
        GeneratedSet::new(n + 1, points, vec![ray])
    }

    /// `epi f*` for any domain: `{(x′, s) : ∃μ ∈ Δ, π ≥ 0, ν :
    /// Σμᵢaᵢ + Gᵀπ + Eᵀν = x′, −Σμᵢbᵢ + hᵀπ + eᵀν ≤ s}`.
    pub fn conjugate_epigraph_lifted(&self) -> LiftedSet {
        let n = self.dim;
        let dom = self.domain_polyhedron();
        let mut b = SystemBuilder::new();
        let z = b.vars(n + 1);
        let mu = b.nonneg_vars(self.pieces.len());
        b.eq(LinExpr::dot(&vec![one(); mu.len()], &mu), LinExpr::constant(one()));
        let pi = b.nonneg_vars(dom.ineq.len());
        let nu = b.vars(dom.eq.len());
        for j in 0..n {
            let mut e = LinExpr::default();
            for (p, &m) in self.pieces.iter().zip(&mu) {
                e.add_term(m, p.slope[j].clone());
            }
            for (g, &v) in dom.ineq.iter().zip(&pi) {
                e.add_term(v, g[j].clone());
            }
            for (g, &v) in dom.eq.iter().zip(&nu) {
                e.add_term(v, g[j].clone());
            }
            b.eq(LinExpr::var(z[j]), e);
        }
        let mut value = LinExpr::default();
        for (p, &m) in self.pieces.iter().zip(&mu) {
            value.add_term(m, -p.offset.clone());
        }
        value = value.plus(&LinExpr::dot(&dom.ineq_rhs, &pi)).plus(&LinExpr::dot(&dom.eq_rhs, &nu));
        b.le(value, LinExpr::var(z[n]));
        LiftedSet::from_builder(&b, n + 1)
    }

    /// `f*(x′) = sup_x ⟨x′, x⟩ − f(x)`, by the primal LP.
    pub fn conjugate_at(&self, x_prime: &[Rational]) -> Result<Extended> {
        check_dim("conjugate argument", self.dim, x_prime.len())?;
        let mut b = SystemBuilder::new();
        let x = b.vars(self.dim);
        let s = b.var();
        self.embed_epigraph(&mut b, &LinExpr::vars(&x), &LinExpr::var(s));
        let obj = LinExpr::dot(x_prime, &x).minus(&LinExpr::var(s));
        Ok(match b.maximize(&obj)? {
            LpOutcome::Optimal { value, .. } => Extended::Finite(value),
            LpOutcome::Unbounded { .. } => Extended::PosInf,
            LpOutcome::Infeasible { .. } => Extended::NegInf,
        })
    }

    /// A point of `epi f*` assembled from random multipliers.
    pub fn sample_conjugate_pair<R: Rng>(&self, rng: &mut R) -> (Vec<Rational>, Rational) {
        let weights: Vec<Rational> = self.pieces.iter().map(|_| rat(rng.random_range(0..=3))).collect();
        let total: Rational = weights.iter().fold(zero(), |a, w| a + w);
        let weights: Vec<Rational> = if total.is_zero() {
            let mut w = zeros(self.pieces.len());
            w[0] = one();
            w
        } else {
            weights.iter().map(|w| w / &total).collect()
        };
        let mut x = zeros(self.dim);
        let mut s = zero();
        for (p, w) in self.pieces.iter().zip(&weights) {
            accumulate(&mut x, &mut s, w, &p.slope, &-p.offset.clone());
        }
        if let Some(d) = &self.domain {
            let (dx, ds) = d.sample_support_pair(rng);
            x = crate::rational::add_vec(&x, &dx);
            s += ds;
        }
        (x, s)
    }
}

/// A matrix acting `ℝⁿ → ℝᵐ`; its adjoint is the transpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOperator {
    cols: usize,
    matrix: Vec<Vec<Rational>>,
}

impl LinearOperator {
    pub fn new(matrix: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        for row in &matrix {
            check_dim("operator row", cols, row.len())?;
        }
        Ok(LinearOperator { cols, matrix })
    }

    pub fn identity(n: usize) -> Self {
        LinearOperator { cols: n, matrix: (0..n).map(|i| crate::rational::unit(n, i)).collect() }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        LinearOperator { cols, matrix: vec![zeros(cols); rows] }
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.matrix.iter().map(|row| dot(row, x)).collect()
    }

    pub fn apply_expr(&self, x: &[LinExpr]) -> Vec<LinExpr> {
        self.matrix.iter().map(|row| LinExpr::combine(row, x)).collect()
    }

    /// `Aᵀλ`.
    pub fn adjoint_apply(&self, lambda: &[Rational]) -> Vec<Rational> {
        let mut out = zeros(self.cols);
        for (row, l) in self.matrix.iter().zip(lambda) {
            if l.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(row) {
                *o += l * a;
            }
        }
        out
    }

    pub fn adjoint_expr(&self, lambda: &[LinExpr]) -> Vec<LinExpr> {
        (0..self.cols)
            .map(|j| {
                let col: Vec<Rational> = self.matrix.iter().map(|row| row[j].clone()).collect();
                LinExpr::combine(&col, lambda)
            })
            .collect()
    }
}

/// The standing data: `f`, `C`, `A`, `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasInstance {
    pub f: MaxAffineFn,
    pub c: Polyhedron,
    pub a: LinearOperator,
    pub d: Target,
}

impl FarkasInstance {
    pub fn new(f: MaxAffineFn, c: Polyhedron, a: LinearOperator, d: Target) -> Result<Self> {
        check_dim("function dimension", a.cols(), f.dim())?;
        check_dim("C dimension", a.cols(), c.dim)?;
        check_dim("D dimension", a.rows(), d.dim())?;
        Ok(FarkasInstance { f, c, a, d })
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// `B = A⁻¹(D)`.
    pub fn preimage_of_target(&self) -> Result<Polyhedron> {
        self.d.to_polyhedron().preimage(&self.a)
    }

    /// `B ∩ C`.
    pub fn feasible_polyhedron(&self) -> Result<Polyhedron> {
        self.c.intersect(&self.preimage_of_target()?)
    }

    /// Adds `x ∈ C`, `Ax ∈ D` over fresh variables and returns them.
    pub fn embed_feasible(&self, b: &mut SystemBuilder) -> Vec<usize> {
        let x = b.vars(self.n());
        let xe = LinExpr::vars(&x);
        self.c.embed(b, &xe);
        self.d.embed(b, &self.a.apply_expr(&xe));
        x
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        self.c.contains(x) && self.d.contains(&self.a.apply(x))
    }

    /// A point of `C ∩ A⁻¹(D) ∩ dom f`, if any.
    pub fn feasible_point(&self) -> Result<Option<Vec<Rational>>> {
        let mut b = SystemBuilder::new();
        let x = self.embed_feasible(&mut b);
        if let Some(dom) = self.f.domain() {
            dom.embed(&mut b, &LinExpr::vars(&x));
        }
        Ok(b.feasible_point()?.map(|p| p[..self.n()].to_vec()))
    }

    pub fn c_meets_domain(&self) -> Result<bool> {
        Ok(!self.c.intersect(&self.f.domain_polyhedron())?.is_empty()?)
    }
}

/// `{(x′, s) : ∃λ ∈ β(D), x′ = Aᵀλ, σ_D(λ) ≤ s}`: the image of the support
/// epigraph of `D` under `(λ, s) ↦ (Aᵀλ, s)`.
pub fn adjoint_support_cone(a: &LinearOperator, d: &Target) -> Result<LiftedSet> {
    check_dim("target dimension", a.rows(), d.dim())?;
    if d.is_empty()? {
        return Err(FarkasError::Empty("D"));
    }
    let (n, m) = (a.cols(), a.rows());
    let mut map: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let mut row: Vec<Rational> = a.matrix().iter().map(|r| r[j].clone()).collect();
            row.push(zero());
            row
        })
        .collect();
    map.push(crate::rational::unit(m + 1, m));
    d.support_epigraph()?.linear_image(&map)
}

/// `epi σ_C + (the adjoint support cone)`.
pub fn constraint_cone(inst: &FarkasInstance) -> Result<LiftedSet> {
    let epi_c = inst.c.support_epigraph()?;
    epi_c.minkowski_sum(&adjoint_support_cone(&inst.a, &inst.d)?)
}

/// `{(x − v, Ax − d, r) : x ∈ C, v ∈ dom f, d ∈ D, r ≥ f(v)}`.
pub fn perturbation_set(inst: &FarkasInstance) -> Result<LiftedSet> {
    let (n, m) = (inst.n(), inst.m());
    let mut b = SystemBuilder::new();
    let p = b.vars(n);
    let q = b.vars(m);
    let r = b.var();
    let x = LinExpr::vars(&b.vars(n));
    let v = LinExpr::vars(&b.vars(n));
    let d = LinExpr::vars(&b.vars(m));
    inst.c.embed(&mut b, &x);
    inst.d.embed(&mut b, &d);
    inst.f.embed_epigraph(&mut b, &v, &LinExpr::var(r));
    for j in 0..n {
        b.eq(LinExpr::var(p[j]), x[j].clone().minus(&v[j]));
    }
    let ax = inst.a.apply_expr(&x);
    for i in 0..m {
        b.eq(LinExpr::var(q[i]), ax[i].clone().minus(&d[i]));
    }
    let set = LiftedSet::from_builder(&b, n + m + 1);
    if set.is_empty()? {
        return Err(FarkasError::Empty("perturbation set"));
    }
    Ok(set)
}

/// `{(Ax − d, r) : x ∈ C ∩ dom f, d ∈ D, r ≥ f(x)}`.
pub fn reduced_perturbation_set(inst: &FarkasInstance) -> Result<LiftedSet> {
    let (n, m) = (inst.n(), inst.m());
    let mut b = SystemBuilder::new();
    let q = b.vars(m);
    let r = b.var();
    let x = LinExpr::vars(&b.vars(n));
    let d = LinExpr::vars(&b.vars(m));
    inst.c.embed(&mut b, &x);
    inst.d.embed(&mut b, &d);
    inst.f.embed_epigraph(&mut b, &x, &LinExpr::var(r));
    let ax = inst.a.apply_expr(&x);
    for i in 0..m {
        b.eq(LinExpr::var(q[i]), ax[i].clone().minus(&d[i]));
    }
    let set = LiftedSet::from_builder(&b, m + 1);
    if set.is_empty()? {
        return Err(FarkasError::Empty("C ∩ dom f"));
    }
    Ok(set)
}

/// One row `lo ≤ ⟨a, x⟩ ≤ hi` of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentRow {
    pub a: Vec<Rational>,
    pub lo: Rational,
    pub hi: Rational,
}

/// `cone{(a_t, hi_t), (−a_t, −lo_t)}`.
pub fn moment_cone(dim: usize, rows: &[MomentRow]) -> Result<GeneratedSet> {
    let mut rays = Vec::with_capacity(2 * rows.len());
    for row in rows {
        check_dim("moment row", dim, row.a.len())?;
        let mut up = row.a.clone();
        up.push(row.hi.clone());
        let mut down: Vec<Rational> = row.a.iter().map(|v| -v).collect();
        down.push(-row.lo.clone());
        rays.push(up);
        rays.push(down);
    }
    GeneratedSet::cone(dim + 1, rays)
}

/// The vertical ray `(0, …, 0, 1)` in dimension `dim + 1`.
pub fn vertical_ray(dim: usize) -> Vec<Rational> {
    crate::rational::unit(dim + 1, dim)
}
