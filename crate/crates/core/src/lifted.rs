//! Convex sets given as projections of polyhedra.
//!
//! A [`LiftedSet`] is `{z : ∃w, P·(z,w) ≤ q, R·(z,w) = r}`. Projection is
//! never computed: membership and support questions are answered by one LP
//! in the lifted space, and sums, images and conic hulls are formed by
//! composing constraint blocks.

use num::Signed;
use rand::Rng;
use serde::Serialize;

use crate::error::{check_dim, FarkasError, Result};
use crate::lp::LpOutcome;
use crate::rational::{dot, frac, is_zero_vec, one, serde_str, zeros, Extended, Rational};
use crate::system::{LinExpr, SystemBuilder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedSet {
    ambient: usize,
    witness: usize,
    /// Rows over `(z, w)`.
    ineq: Vec<Vec<Rational>>,
    ineq_rhs: Vec<Rational>,
    eq: Vec<Vec<Rational>>,
    eq_rhs: Vec<Rational>,
}

/// Outcome of testing `cl U ∩ {z} = U ∩ {z}` for a cone `U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "point")]
pub enum Closedness {
    Holds,
    FailsAt(#[serde(with = "serde_str::vec")] Vec<Rational>),
}

impl Closedness {
    pub fn holds(&self) -> bool {
        matches!(self, Closedness::Holds)
    }
}

impl LiftedSet {
    pub fn new(
        ambient: usize,
        witness: usize,
        ineq: Vec<Vec<Rational>>,
        ineq_rhs: Vec<Rational>,
        eq: Vec<Vec<Rational>>,
        eq_rhs: Vec<Rational>,
    ) -> Result<Self> {
        check_dim("inequality rhs", ineq.len(), ineq_rhs.len())?;
        check_dim("equality rhs", eq.len(), eq_rhs.len())?;
        for row in ineq.iter().chain(&eq) {
            check_dim("lifted row", ambient + witness, row.len())?;
        }
        Ok(LiftedSet { ambient, witness, ineq, ineq_rhs, eq, eq_rhs })
    }

    /// Reads a set off a builder whose first `ambient` variables are `z`;
    /// all later variables become witnesses.
    pub fn from_builder(b: &SystemBuilder, ambient: usize) -> Self {
        assert!(b.num_vars() >= ambient, "builder has fewer variables than the ambient space");
        let ((ineq, ineq_rhs), (eq, eq_rhs)) = b.dense();
        LiftedSet { ambient, witness: b.num_vars() - ambient, ineq, ineq_rhs, eq, eq_rhs }
    }

    /// The whole space `ℝⁿ`.
    pub fn whole(ambient: usize) -> Self {
        LiftedSet { ambient, witness: 0, ineq: vec![], ineq_rhs: vec![], eq: vec![], eq_rhs: vec![] }
    }

    /// `{p}`.
    pub fn point(p: &[Rational]) -> Self {
        let mut b = SystemBuilder::new();
        let z = b.vars(p.len());
        b.eq_all(&LinExpr::vars(&z), &LinExpr::constants(p));
        LiftedSet::from_builder(&b, p.len())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn witness_dim(&self) -> usize {
        self.witness
    }

    /// Adds this set's constraints to `b` with `z` replaced by the given
    /// expressions. Returns the fresh witness variables.
    pub fn embed(&self, b: &mut SystemBuilder, z: &[LinExpr]) -> Vec<usize> {
        self.embed_scaled(b, z, None)
    }

    /// As [`embed`](Self::embed), with every right-hand side multiplied by
    /// the variable `t` when given (homogenization).
    pub fn embed_scaled(&self, b: &mut SystemBuilder, z: &[LinExpr], t: Option<usize>) -> Vec<usize> {
        assert_eq!(z.len(), self.ambient, "embedding expression count");
        let w = b.vars(self.witness);
        let lhs = |row: &[Rational]| {
            let mut e = LinExpr::combine(&row[..self.ambient], z);
            e.add_scaled(&one(), &LinExpr::dot(&row[self.ambient..], &w));
            e
        };
        let rhs = |r: &Rational| match t {
            Some(t) => LinExpr::term(t, r.clone()),
            None => LinExpr::constant(r.clone()),
        };
        for (row, r) in self.ineq.iter().zip(&self.ineq_rhs) {
            b.le(lhs(row), rhs(r));
        }
        for (row, r) in self.eq.iter().zip(&self.eq_rhs) {
            b.eq(lhs(row), rhs(r));
        }
        w
    }

    pub fn member(&self, z: &[Rational]) -> Result<bool> {
        check_dim("membership point", self.ambient, z.len())?;
        let mut b = SystemBuilder::new();
        self.embed(&mut b, &LinExpr::constants(z));
        Ok(b.feasible_point()?.is_some())
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.some_point()?.is_none())
    }

    pub fn some_point(&self) -> Result<Option<Vec<Rational>>> {
        let mut b = SystemBuilder::new();
        let z = b.vars(self.ambient);
        self.embed(&mut b, &LinExpr::vars(&z));
        Ok(b.feasible_point()?.map(|p| p[..self.ambient].to_vec()))
    }

    /// `sup ⟨d, z⟩` over the set; `-∞` when empty.
    pub fn support(&self, d: &[Rational]) -> Result<Extended> {
        Ok(self.support_with_point(d)?.0)
    }

    /// Support value with a maximizer when it is finite.
    pub fn support_with_point(&self, d: &[Rational]) -> Result<(Extended, Option<Vec<Rational>>)> {
        check_dim("support direction", self.ambient, d.len())?;
        let mut b = SystemBuilder::new();
        let z = b.vars(self.ambient);
        self.embed(&mut b, &LinExpr::vars(&z));
        Ok(match b.maximize(&LinExpr::dot(d, &z))? {
            LpOutcome::Optimal { value, primal, .. } => (Extended::Finite(value), Some(primal[..self.ambient].to_vec())),
            LpOutcome::Unbounded { .. } => (Extended::PosInf, None),
            LpOutcome::Infeasible { .. } => (Extended::NegInf, None),
        })
    }

    /// `{a + b : a ∈ self, b ∈ other}`.
    pub fn minkowski_sum(&self, other: &LiftedSet) -> Result<LiftedSet> {
        check_dim("Minkowski summand", self.ambient, other.ambient)?;
        let mut b = SystemBuilder::new();
        let z = b.vars(self.ambient);
        let z1 = b.vars(self.ambient);
        self.embed(&mut b, &LinExpr::vars(&z1));
        let rest: Vec<LinExpr> = z.iter().zip(&z1).map(|(&a, &c)| LinExpr::var(a).minus(&LinExpr::var(c))).collect();
        other.embed(&mut b, &rest);
        Ok(LiftedSet::from_builder(&b, self.ambient))
    }

    /// `{Mz : z ∈ self}` for a matrix given by rows.
    pub fn linear_image(&self, m: &[Vec<Rational>]) -> Result<LiftedSet> {
        for row in m {
            check_dim("image matrix row", self.ambient, row.len())?;
        }
        let mut b = SystemBuilder::new();
        let y = b.vars(m.len());
        let z = b.vars(self.ambient);
        for (yi, row) in y.iter().zip(m) {
            b.eq(LinExpr::var(*yi), LinExpr::dot(row, &z));
        }
        self.embed(&mut b, &LinExpr::vars(&z));
        Ok(LiftedSet::from_builder(&b, m.len()))
    }

    /// `{z + v : z ∈ self}`.
    pub fn translate(&self, v: &[Rational]) -> Result<LiftedSet> {
        check_dim("translation", self.ambient, v.len())?;
        let mut b = SystemBuilder::new();
        let z = b.vars(self.ambient);
        let shifted: Vec<LinExpr> =
            z.iter().zip(v).map(|(&zi, vi)| LinExpr::var(zi).minus(&LinExpr::constant(vi.clone()))).collect();
        self.embed(&mut b, &shifted);
        Ok(LiftedSet::from_builder(&b, self.ambient))
    }

    /// `{z : ∃t ≥ 0, w : P(z,w) ≤ tq, R(z,w) = tr}`, the closed conic hull of
    /// a nonempty set.
    pub fn conic_hull_closure(&self) -> Result<LiftedSet> {
        if self.is_empty()? {
            return Err(FarkasError::Empty("lifted set"));
        }
        let mut b = SystemBuilder::new();
        let z = b.vars(self.ambient);
        let t = b.var();
        b.nonneg(t);
        self.embed_scaled(&mut b, &LinExpr::vars(&z), Some(t));
        Ok(LiftedSet::from_builder(&b, self.ambient))
    }

    /// The recession cone of a nonempty set: every right-hand side zeroed.
    pub fn recession(&self) -> LiftedSet {
        LiftedSet {
            ineq_rhs: zeros(self.ineq.len()),
            eq_rhs: zeros(self.eq.len()),
            ..self.clone()
        }
    }

    /// `z ∈ ℝ₊S`: `z = 0` or `z ∈ tS` for some `t > 0`.
    pub fn cone_member_strict(&self, z: &[Rational]) -> Result<bool> {
        check_dim("cone membership point", self.ambient, z.len())?;
        if is_zero_vec(z) {
            return Ok(true);
        }
        let mut b = SystemBuilder::new();
        let t = b.var();
        b.nonneg(t);
        self.embed_scaled(&mut b, &LinExpr::constants(z), Some(t));
        Ok(match b.maximize(&LinExpr::var(t))? {
            LpOutcome::Optimal { value, .. } => value.is_positive(),
            LpOutcome::Unbounded { .. } => true,
            LpOutcome::Infeasible { .. } => false,
        })
    }

    /// Whether `ℝ₊S` is closed regarding `{z}`.
    pub fn closed_regarding(&self, z: &[Rational]) -> Result<Closedness> {
        let in_cone = self.cone_member_strict(z)?;
        let in_closure = self.conic_hull_closure()?.member(z)?;
        match (in_cone, in_closure) {
            (true, false) => Err(FarkasError::Violated("cone point outside its closure".into())),
            (false, true) => Ok(Closedness::FailsAt(z.to_vec())),
            _ => Ok(Closedness::Holds),
        }
    }

    /// Every point of `g` lies in the set and every ray in its recession cone.
    pub fn contains_generated(&self, g: &GeneratedSet) -> Result<bool> {
        check_dim("generated set", self.ambient, g.dim)?;
        for p in &g.points {
            if !self.member(p)? {
                return Ok(false);
            }
        }
        if g.rays.is_empty() {
            return Ok(true);
        }
        let rec = self.recession();
        for r in &g.rays {
            if !rec.member(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `conv(points) + cone(rays)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratedSet {
    pub dim: usize,
    #[serde(serialize_with = "ser_rows")]
    pub points: Vec<Vec<Rational>>,
    #[serde(serialize_with = "ser_rows")]
    pub rays: Vec<Vec<Rational>>,
}

fn ser_rows<S: serde::Serializer>(rows: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
    text.serialize(s)
}

impl GeneratedSet {
    pub fn new(dim: usize, points: Vec<Vec<Rational>>, rays: Vec<Vec<Rational>>) -> Result<Self> {
        if points.is_empty() {
            return Err(FarkasError::Empty("generated set point list"));
        }
        for v in points.iter().chain(&rays) {
            check_dim("generator", dim, v.len())?;
        }
        Ok(GeneratedSet { dim, points, rays })
    }

    /// `cone(rays)`, with the origin as its only point.
    pub fn cone(dim: usize, rays: Vec<Vec<Rational>>) -> Result<Self> {
        GeneratedSet::new(dim, vec![zeros(dim)], rays)
    }

    pub fn embed(&self, b: &mut SystemBuilder, z: &[LinExpr]) {
        let mu = b.nonneg_vars(self.points.len());
        let nu = b.nonneg_vars(self.rays.len());
        b.eq(LinExpr::dot(&vec![one(); mu.len()], &mu), LinExpr::constant(one()));
        for (k, zk) in z.iter().enumerate() {
            let mut e = LinExpr::default();
            for (p, &m) in self.points.iter().zip(&mu) {
                e.add_term(m, p[k].clone());
            }
            for (r, &n) in self.rays.iter().zip(&nu) {
                e.add_term(n, r[k].clone());
            }
            b.eq(zk.clone(), e);
        }
    }

    pub fn to_lifted(&self) -> LiftedSet {
        let mut b = SystemBuilder::new();
        let z = b.vars(self.dim);
        self.embed(&mut b, &LinExpr::vars(&z));
        LiftedSet::from_builder(&b, self.dim)
    }

    pub fn member(&self, z: &[Rational]) -> Result<bool> {
        self.to_lifted().member(z)
    }

    /// Closed form: `+∞` if some ray ascends, else the best point.
    pub fn support(&self, d: &[Rational]) -> Result<Extended> {
        check_dim("support direction", self.dim, d.len())?;
        if self.rays.iter().any(|r| dot(r, d).is_positive()) {
            return Ok(Extended::PosInf);
        }
        let best = self.points.iter().map(|p| dot(p, d)).max().expect("nonempty point list");
        Ok(Extended::Finite(best))
    }
}

/// The probe grid `±eᵢ`, `±eᵢ±eⱼ` (`i < j`) followed by `random` nonzero
/// rational directions drawn from `rng`.
pub fn probe_directions<R: Rng>(dim: usize, random: usize, rng: &mut R) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for i in 0..dim {
        for s in [one(), -one()] {
            let mut v = zeros(dim);
            v[i] = s;
            out.push(v);
        }
    }
    for i in 0..dim {
        for j in i + 1..dim {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = zeros(dim);
                v[i] = Rational::from_integer(si.into());
                v[j] = Rational::from_integer(sj.into());
                out.push(v);
            }
        }
    }
    let mut drawn = 0;
    while drawn < random && dim > 0 {
        let v: Vec<Rational> = (0..dim).map(|_| random_rational(rng, 6, 4)).collect();
        if !is_zero_vec(&v) {
            out.push(v);
            drawn += 1;
        }
    }
    out
}

/// A rational `p/q` with `|p| ≤ bound` and `1 ≤ q ≤ max_den`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> Rational {
    frac(rng.random_range(-bound..=bound), rng.random_range(1..=max_den))
}

/// First direction on which two support functions differ.
pub fn support_disagreement(
    a: &LiftedSet,
    b: &LiftedSet,
    directions: &[Vec<Rational>],
) -> Result<Option<(Vec<Rational>, Extended, Extended)>> {
    for d in directions {
        let (sa, sb) = (a.support(d)?, b.support(d)?);
        if sa != sb {
            return Ok(Some((d.clone(), sa, sb)));
        }
    }
    Ok(None)
}
