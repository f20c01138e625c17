//! Incremental construction of linear systems over named variable blocks.
//!
//! Most constructions in this crate glue several lifted sets together by
//! substituting affine expressions for their ambient coordinates. A
//! [`LinExpr`] is such an expression; a [`SystemBuilder`] collects
//! constraints between them and lowers the result to a dense
//! [`LinearProgram`].

use std::collections::BTreeMap;

use num::{Signed, Zero};

use crate::error::Result;
use crate::lp::{solve, LinearProgram, LpOutcome};
use crate::rational::{one, zero, zeros, Rational};

/// `Σ coeff·var + constant`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinExpr {
    pub terms: BTreeMap<usize, Rational>,
    pub constant: Rational,
}

impl LinExpr {
    pub fn var(v: usize) -> Self {
        LinExpr::term(v, one())
    }

    pub fn term(v: usize, coeff: Rational) -> Self {
        let mut e = LinExpr::default();
        e.add_term(v, coeff);
        e
    }

    pub fn constant(c: Rational) -> Self {
        LinExpr { terms: BTreeMap::new(), constant: c }
    }

    pub fn vars(vs: &[usize]) -> Vec<LinExpr> {
        vs.iter().map(|&v| LinExpr::var(v)).collect()
    }

    pub fn constants(values: &[Rational]) -> Vec<LinExpr> {
        values.iter().cloned().map(LinExpr::constant).collect()
    }

    /// `Σ coeffs[k]·vars[k]`.
    pub fn dot(coeffs: &[Rational], vars: &[usize]) -> Self {
        let mut e = LinExpr::default();
        for (c, &v) in coeffs.iter().zip(vars) {
            e.add_term(v, c.clone());
        }
        e
    }

    /// `Σ coeffs[k]·exprs[k]`.
    pub fn combine(coeffs: &[Rational], exprs: &[LinExpr]) -> Self {
        let mut e = LinExpr::default();
        for (c, x) in coeffs.iter().zip(exprs) {
            e.add_scaled(c, x);
        }
        e
    }

    pub fn add_term(&mut self, v: usize, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(v).or_insert_with(zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn add_scaled(&mut self, s: &Rational, other: &LinExpr) {
        if s.is_zero() {
            return;
        }
        for (&v, c) in &other.terms {
            self.add_term(v, s * c);
        }
        self.constant += s * &other.constant;
    }

    pub fn plus(mut self, other: &LinExpr) -> Self {
        self.add_scaled(&one(), other);
        self
    }

    pub fn minus(mut self, other: &LinExpr) -> Self {
        self.add_scaled(&-one(), other);
        self
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        let mut e = LinExpr::default();
        e.add_scaled(s, self);
        e
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms.iter().fold(self.constant.clone(), |acc, (&v, c)| acc + c * &x[v])
    }
}

/// A growing system `Gx ≤ h, Ex = e` over freshly allocated variables.
#[derive(Clone, Debug, Default)]
pub struct SystemBuilder {
    num_vars: usize,
    ineq: Vec<LinExpr>,
    eq: Vec<LinExpr>,
}

impl SystemBuilder {
    pub fn new() -> Self {
        SystemBuilder::default()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Allocates `k` free variables.
    pub fn vars(&mut self, k: usize) -> Vec<usize> {
        let start = self.num_vars;
        self.num_vars += k;
        (start..self.num_vars).collect()
    }

    pub fn var(&mut self) -> usize {
        self.vars(1)[0]
    }

    /// Allocates `k` variables constrained to be nonnegative.
    pub fn nonneg_vars(&mut self, k: usize) -> Vec<usize> {
        let vs = self.vars(k);
        for &v in &vs {
            self.nonneg(v);
        }
        vs
    }

    pub fn nonneg(&mut self, v: usize) {
        self.le(LinExpr::term(v, -one()), LinExpr::default());
    }

    /// `lhs ≤ rhs`.
    pub fn le(&mut self, lhs: LinExpr, rhs: LinExpr) {
        self.ineq.push(lhs.minus(&rhs));
    }

    /// `lhs = rhs`.
    pub fn eq(&mut self, lhs: LinExpr, rhs: LinExpr) {
        self.eq.push(lhs.minus(&rhs));
    }

    pub fn eq_all(&mut self, lhs: &[LinExpr], rhs: &[LinExpr]) {
        debug_assert_eq!(lhs.len(), rhs.len());
        for (l, r) in lhs.iter().zip(rhs) {
            self.eq(l.clone(), r.clone());
        }
    }

    /// Dense `(rows, rhs)` pairs for inequalities and equalities.
    #[allow(clippy::type_complexity)]
    pub fn dense(&self) -> ((Vec<Vec<Rational>>, Vec<Rational>), (Vec<Vec<Rational>>, Vec<Rational>)) {
        let lower = |rows: &[LinExpr]| {
            let mut mat = Vec::with_capacity(rows.len());
            let mut rhs = Vec::with_capacity(rows.len());
            for e in rows {
                let mut row = zeros(self.num_vars);
                for (&v, c) in &e.terms {
                    row[v] = c.clone();
                }
                mat.push(row);
                rhs.push(-e.constant.clone());
            }
            (mat, rhs)
        };
        (lower(&self.ineq), lower(&self.eq))
    }

    /// The linear program maximizing `objective` (its constant is ignored).
    pub fn to_lp(&self, objective: &LinExpr) -> LinearProgram {
        let ((ineq, ineq_rhs), (eq, eq_rhs)) = self.dense();
        let mut c = zeros(self.num_vars);
        for (&v, coeff) in &objective.terms {
            c[v] = coeff.clone();
        }
        LinearProgram { num_vars: self.num_vars, objective: c, ineq, ineq_rhs, eq, eq_rhs }
    }

    pub fn maximize(&self, objective: &LinExpr) -> Result<LpOutcome> {
        solve(&self.to_lp(objective))
    }

    /// Solves `max −objective`; an optimal value is therefore `−min`.
    pub fn minimize(&self, objective: &LinExpr) -> Result<LpOutcome> {
        self.maximize(&objective.scaled(&-one()))
    }

    /// Any feasible point, or `None`.
    pub fn feasible_point(&self) -> Result<Option<Vec<Rational>>> {
        Ok(match self.maximize(&LinExpr::default())? {
            LpOutcome::Optimal { primal, .. } => Some(primal),
            _ => None,
        })
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        self.ineq.iter().all(|e| !e.eval(x).is_positive()) && self.eq.iter().all(|e| e.eval(x).is_zero())
    }
}
