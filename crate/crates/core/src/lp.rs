//! Exact two-phase simplex.
//!
//! Problems are stated as
//!
//! ```text
//! maximize  cᵀx   subject to   Gx ≤ h,  Ex = e,   x free
//! ```
//!
//! and every answer comes with a certificate that can be re-checked by
//! substitution: primal/dual pairs with equal objective values, an improving
//! ray, or a Farkas combination of the constraints proving `0 ≤ c` with
//! `c < 0`. Pivoting follows Bland's rule, so the solver terminates and is
//! deterministic.

use std::collections::HashSet;

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{check_dim, Result};
use crate::rational::{dot, serde_str, zero, zeros, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    /// Maximized.
    pub objective: Vec<Rational>,
    pub ineq: Vec<Vec<Rational>>,
    pub ineq_rhs: Vec<Rational>,
    pub eq: Vec<Vec<Rational>>,
    pub eq_rhs: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: zeros(num_vars),
            ineq: Vec::new(),
            ineq_rhs: Vec::new(),
            eq: Vec::new(),
            eq_rhs: Vec::new(),
        }
    }

    pub fn maximize(mut self, objective: Vec<Rational>) -> Self {
        self.objective = objective;
        self
    }

    pub fn le(mut self, row: Vec<Rational>, rhs: Rational) -> Self {
        self.ineq.push(row);
        self.ineq_rhs.push(rhs);
        self
    }

    pub fn equal(mut self, row: Vec<Rational>, rhs: Rational) -> Self {
        self.eq.push(row);
        self.eq_rhs.push(rhs);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars;
        check_dim("objective length", n, self.objective.len())?;
        check_dim("inequality rhs length", self.ineq.len(), self.ineq_rhs.len())?;
        check_dim("equality rhs length", self.eq.len(), self.eq_rhs.len())?;
        for row in self.ineq.iter().chain(&self.eq) {
            check_dim("constraint row length", n, row.len())?;
        }
        Ok(())
    }

    /// `Gx ≤ h` and `Ex = e`.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && self.ineq.iter().zip(&self.ineq_rhs).all(|(g, h)| &dot(g, x) <= h)
            && self.eq.iter().zip(&self.eq_rhs).all(|(r, e)| &dot(r, x) == e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum LpOutcome {
    Optimal {
        #[serde(with = "serde_str")]
        value: Rational,
        #[serde(with = "serde_str::vec")]
        primal: Vec<Rational>,
        #[serde(with = "serde_str::vec")]
        dual_ineq: Vec<Rational>,
        #[serde(with = "serde_str::vec")]
        dual_eq: Vec<Rational>,
    },
    Unbounded {
        #[serde(with = "serde_str::vec")]
        point: Vec<Rational>,
        #[serde(with = "serde_str::vec")]
        ray: Vec<Rational>,
    },
    Infeasible {
        #[serde(with = "serde_str::vec")]
        farkas_ineq: Vec<Rational>,
        #[serde(with = "serde_str::vec")]
        farkas_eq: Vec<Rational>,
    },
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn primal(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { primal, .. } => Some(primal),
            _ => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible { .. })
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, LpOutcome::Unbounded { .. })
    }
}

/// Re-checks an outcome against `lp` by direct substitution.
pub fn verify_certificate(lp: &LinearProgram, out: &LpOutcome) -> bool {
    if lp.validate().is_err() {
        return false;
    }
    let n = lp.num_vars;
    // Gᵀy + Eᵀz
    let combine = |y: &[Rational], z: &[Rational]| -> Vec<Rational> {
        let mut acc = zeros(n);
        for (row, yi) in lp.ineq.iter().zip(y).chain(lp.eq.iter().zip(z)) {
            if yi.is_zero() {
                continue;
            }
            for (a, g) in acc.iter_mut().zip(row) {
                *a += yi * g;
            }
        }
        acc
    };
    let shapes_ok = |y: &[Rational], z: &[Rational]| {
        y.len() == lp.ineq.len() && z.len() == lp.eq.len() && y.iter().all(|v| !v.is_negative())
    };
    match out {
        LpOutcome::Optimal { value, primal, dual_ineq, dual_eq } => {
            shapes_ok(dual_ineq, dual_eq)
                && lp.is_feasible_point(primal)
                && &dot(&lp.objective, primal) == value
                && combine(dual_ineq, dual_eq) == lp.objective
                && &(dot(dual_ineq, &lp.ineq_rhs) + dot(dual_eq, &lp.eq_rhs)) == value
        }
        LpOutcome::Unbounded { point, ray } => {
            ray.len() == n
                && lp.is_feasible_point(point)
                && lp.ineq.iter().all(|g| !dot(g, ray).is_positive())
                && lp.eq.iter().all(|r| dot(r, ray).is_zero())
                && dot(&lp.objective, ray).is_positive()
        }
        LpOutcome::Infeasible { farkas_ineq, farkas_eq } => {
            shapes_ok(farkas_ineq, farkas_eq)
                && combine(farkas_ineq, farkas_eq).iter().all(Zero::is_zero)
                && (dot(farkas_ineq, &lp.ineq_rhs) + dot(farkas_eq, &lp.eq_rhs)).is_negative()
        }
    }
}

/// Solves `lp` exactly.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let out = match presolve(lp) {
        Presolved::Infeasible { farkas_ineq, farkas_eq } => LpOutcome::Infeasible { farkas_ineq, farkas_eq },
        Presolved::Reduced { ineq_rows, eq_rows } => {
            let reduced = Reduced { lp, ineq_rows: &ineq_rows, eq_rows: &eq_rows };
            reduced.solve()
        }
    };
    debug_assert!(verify_certificate(lp, &out), "solver produced an invalid certificate");
    Ok(out)
}

enum Presolved {
    Reduced { ineq_rows: Vec<usize>, eq_rows: Vec<usize> },
    Infeasible { farkas_ineq: Vec<Rational>, farkas_eq: Vec<Rational> },
}

/// Drops duplicate and vacuous inequalities and linearly dependent
/// equalities; inconsistent equality systems are answered directly.
fn presolve(lp: &LinearProgram) -> Presolved {
    let mut seen: HashSet<(&[Rational], &Rational)> = HashSet::new();
    let mut ineq_rows = Vec::new();
    for (i, (row, rhs)) in lp.ineq.iter().zip(&lp.ineq_rhs).enumerate() {
        if row.iter().all(Zero::is_zero) {
            if rhs.is_negative() {
                let mut farkas_ineq = zeros(lp.ineq.len());
                farkas_ineq[i] = crate::rational::one();
                return Presolved::Infeasible { farkas_ineq, farkas_eq: zeros(lp.eq.len()) };
            }
            continue;
        }
        if seen.insert((row.as_slice(), rhs)) {
            ineq_rows.push(i);
        }
    }

    // Row echelon of [E | e], tracking each reduced row as a combination of
    // the original equalities.
    let m = lp.eq.len();
    let mut basis: Vec<(usize, Vec<Rational>, Rational, Vec<Rational>)> = Vec::new();
    let mut eq_rows = Vec::new();
    for i in 0..m {
        let mut row = lp.eq[i].clone();
        let mut rhs = lp.eq_rhs[i].clone();
        let mut combo = zeros(m);
        combo[i] = crate::rational::one();
        for (pivot, brow, brhs, bcombo) in &basis {
            if row[*pivot].is_zero() {
                continue;
            }
            let factor = &row[*pivot] / &brow[*pivot];
            for (a, b) in row.iter_mut().zip(brow) {
                *a -= &factor * b;
            }
            rhs -= &factor * brhs;
            for (a, b) in combo.iter_mut().zip(bcombo) {
                *a -= &factor * b;
            }
        }
        match row.iter().position(|v| !v.is_zero()) {
            Some(pivot) => {
                eq_rows.push(i);
                basis.push((pivot, row, rhs, combo));
            }
            None if rhs.is_zero() => {}
            None => {
                // 0ᵀx = rhs ≠ 0; orient so that the combined rhs is negative.
                if rhs.is_positive() {
                    combo.iter_mut().for_each(|v| *v = -v.clone());
                }
                return Presolved::Infeasible { farkas_ineq: zeros(lp.ineq.len()), farkas_eq: combo };
            }
        }
    }
    Presolved::Reduced { ineq_rows, eq_rows }
}

struct Reduced<'a> {
    lp: &'a LinearProgram,
    ineq_rows: &'a [usize],
    eq_rows: &'a [usize],
}

impl Reduced<'_> {
    fn solve(&self) -> LpOutcome {
        let lp = self.lp;
        let n = lp.num_vars;
        let mi = self.ineq_rows.len();
        let m = mi + self.eq_rows.len();
        let slack0 = 2 * n;
        let art0 = slack0 + mi;

        // Sign flips making every right-hand side nonnegative.
        let mut sign = Vec::with_capacity(m);
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut identity_col = Vec::with_capacity(m);
        let mut n_art = 0;
        let sources = self
            .ineq_rows
            .iter()
            .map(|&i| (&lp.ineq[i], &lp.ineq_rhs[i], true))
            .chain(self.eq_rows.iter().map(|&i| (&lp.eq[i], &lp.eq_rhs[i], false)));
        let mut art_rows = Vec::new();
        for (r, (coeffs, rhs, is_ineq)) in sources.enumerate() {
            let flip = rhs.is_negative();
            sign.push(!flip);
            let s = |v: &Rational| if flip { -v } else { v.clone() };
            let mut row = Vec::with_capacity(art0 + 1);
            row.extend(coeffs.iter().map(s));
            row.extend(coeffs.iter().map(|v| -s(v)));
            row.extend(zeros(mi));
            if is_ineq {
                row[slack0 + r] = if flip { -crate::rational::one() } else { crate::rational::one() };
            }
            row.push(s(rhs));
            if is_ineq && !flip {
                basis.push(slack0 + r);
                identity_col.push(slack0 + r);
            } else {
                basis.push(art0 + n_art);
                identity_col.push(art0 + n_art);
                art_rows.push(r);
                n_art += 1;
            }
            rows.push(row);
        }
        let ncols = art0 + n_art;
        for row in rows.iter_mut() {
            let rhs = row.pop().unwrap();
            row.extend(zeros(n_art));
            row.push(rhs);
        }
        for (k, &r) in art_rows.iter().enumerate() {
            rows[r][art0 + k] = crate::rational::one();
        }

        let mut tab = Tableau { rows, obj: Vec::new(), basis, ncols, allowed: ncols };

        if n_art > 0 {
            // Phase 1: maximize −Σ artificials.
            let mut cost = zeros(ncols);
            cost[art0..].iter_mut().for_each(|c| *c = -crate::rational::one());
            tab.reset_objective(&cost);
            let done = tab.run();
            debug_assert!(done.is_none(), "phase one is bounded");
            let value = -tab.obj[ncols].clone();
            if value.is_negative() {
                let pi = tab.duals(&cost, &identity_col);
                let (farkas_ineq, farkas_eq) = self.scatter_duals(&pi, &sign);
                return LpOutcome::Infeasible { farkas_ineq, farkas_eq };
            }
            tab.drive_out_artificials(art0);
            tab.allowed = art0;
        }

        // Phase 2.
        let mut cost = zeros(ncols);
        for j in 0..n {
            cost[j] = lp.objective[j].clone();
            cost[n + j] = -lp.objective[j].clone();
        }
        tab.reset_objective(&cost);
        match tab.run() {
            Some(entering) => {
                let values = tab.basic_values();
                let mut dir = zeros(ncols);
                dir[entering] = crate::rational::one();
                for (r, &b) in tab.basis.iter().enumerate() {
                    dir[b] = -tab.rows[r][entering].clone();
                }
                LpOutcome::Unbounded { point: split_free(&values, n), ray: split_free(&dir, n) }
            }
            None => {
                let values = tab.basic_values();
                let primal = split_free(&values, n);
                let value = -tab.obj[ncols].clone();
                let pi = tab.duals(&cost, &identity_col);
                let (dual_ineq, dual_eq) = self.scatter_duals(&pi, &sign);
                LpOutcome::Optimal { value, primal, dual_ineq, dual_eq }
            }
        }
    }

    /// Maps tableau-row duals back to the original rows, undoing sign flips
    /// and presolve deletions.
    fn scatter_duals(&self, pi: &[Rational], sign: &[bool]) -> (Vec<Rational>, Vec<Rational>) {
        let signed = |r: usize| if sign[r] { pi[r].clone() } else { -pi[r].clone() };
        let mut y = zeros(self.lp.ineq.len());
        let mut z = zeros(self.lp.eq.len());
        for (r, &i) in self.ineq_rows.iter().enumerate() {
            y[i] = signed(r);
        }
        let mi = self.ineq_rows.len();
        for (k, &i) in self.eq_rows.iter().enumerate() {
            z[i] = signed(mi + k);
        }
        (y, z)
    }
}

fn split_free(values: &[Rational], n: usize) -> Vec<Rational> {
    (0..n).map(|j| &values[j] - &values[n + j]).collect()
}

struct Tableau {
    /// `B⁻¹A | B⁻¹b`.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs `c − c_Bᵀ B⁻¹A`, then `−c_Bᵀ B⁻¹b`.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
    /// Columns `< allowed` may enter the basis.
    allowed: usize,
}

impl Tableau {
    fn reset_objective(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.push(zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, t) in obj.iter_mut().zip(&self.rows[r]) {
                *o -= cb * t;
            }
        }
        self.obj = obj;
    }

    /// Runs simplex iterations to optimality. Returns the entering column
    /// when an unbounded direction is found.
    fn run(&mut self) -> Option<usize> {
        loop {
            let q = (0..self.allowed).find(|&j| self.obj[j].is_positive())?;
            let rhs = self.ncols;
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[q].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[q];
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return Some(q),
                Some((r, _)) => self.pivot(r, q),
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let p = self.rows[r][q].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let prow = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            if row[q].is_zero() {
                return;
            }
            let factor = row[q].clone();
            for &j in &nz {
                row[j] -= &factor * &prow[j];
            }
        };
        for row in self.rows.iter_mut() {
            if !row.is_empty() {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = prow;
        self.basis[r] = q;
    }

    fn drive_out_artificials(&mut self, art0: usize) {
        for r in 0..self.rows.len() {
            if self.basis[r] < art0 {
                continue;
            }
            if let Some(j) = (0..art0).find(|&j| !self.rows[r][j].is_zero()) {
                self.pivot(r, j);
            }
            // Otherwise the row is redundant; its artificial stays basic at zero.
        }
    }

    fn basic_values(&self) -> Vec<Rational> {
        let mut x = zeros(self.ncols);
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rows[r][self.ncols].clone();
        }
        x
    }

    /// `π = c_Bᵀ B⁻¹`, read off the reduced costs of the columns that formed
    /// the initial identity basis.
    fn duals(&self, cost: &[Rational], identity_col: &[usize]) -> Vec<Rational> {
        identity_col.iter().map(|&j| &cost[j] - &self.obj[j]).collect()
    }
}
