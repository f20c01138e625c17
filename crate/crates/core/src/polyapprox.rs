//! One-sided polynomial approximation on a rational grid.
//!
//! For a band width `ε > 0`, minimize `Σ xᵢ/i` subject to
//! `g(t) ≤ Σ xᵢ t^{i−1} ≤ g(t) + ε` on every node. Each solve returns the
//! exact optimum together with grid multipliers `λ` and checks the moment
//! identities `Σ_t λ_t t^{i−1} = −1/i` and `−Σ_t (λ_t g(t) + ε λ_t⁺) = α`.

use num::{One, Signed};
use serde::Serialize;

use crate::convex::{FarkasInstance, IntervalBox, LinearOperator, MaxAffineFn, Polyhedron, Target};
use crate::engine::{check_existence, Equivalence};
use crate::error::{FarkasError, Result};
use crate::lp::{solve, LinearProgram, LpOutcome};
use crate::rational::{dot, format_pq, frac, one, serde_str, zero, Rational};
use crate::semiinf::SignedMultiplier;

/// How LP row duals map onto the grid multiplier.
pub const SIGN_DICTIONARY: &str =
    "λ_t = y_upper,t − y_lower,t; λ⁺ = y_upper (rows p(t) ≤ g(t)+ε), λ⁻ = y_lower (rows −p(t) ≤ −g(t))";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxProblem {
    pub degree: usize,
    pub nodes: Vec<Rational>,
    pub values: Vec<Rational>,
    pub epsilons: Vec<Rational>,
}

impl ApproxProblem {
    pub fn from_table(degree: usize, nodes: Vec<Rational>, values: Vec<Rational>, epsilons: Vec<Rational>) -> Result<Self> {
        if degree == 0 {
            return Err(FarkasError::Invalid("degree bound must be at least 1".into()));
        }
        crate::error::check_dim("grid values", nodes.len(), values.len())?;
        if nodes.iter().any(|t| t.is_negative() || t > &one()) {
            return Err(FarkasError::Invalid("grid nodes must lie in [0, 1]".into()));
        }
        let mut sorted = nodes.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(FarkasError::Invalid("grid nodes must be distinct".into()));
        }
        if epsilons.iter().any(|e| !e.is_positive()) {
            return Err(FarkasError::Invalid("every ε must be positive".into()));
        }
        Ok(ApproxProblem { degree, nodes, values, epsilons })
    }

    /// Samples the polynomial `Σ cₖ tᵏ` on the nodes.
    pub fn from_polynomial(degree: usize, coeffs: &[Rational], nodes: Vec<Rational>, epsilons: Vec<Rational>) -> Result<Self> {
        let values = nodes.iter().map(|t| dot(coeffs, &powers(t, coeffs.len()))).collect();
        ApproxProblem::from_table(degree, nodes, values, epsilons)
    }

    /// `(1, t, …, t^{n−1})` for every node.
    pub fn moment_rows(&self) -> Vec<Vec<Rational>> {
        self.nodes.iter().map(|t| powers(t, self.degree)).collect()
    }

    /// `Σ xᵢ/i`.
    pub fn objective(&self, x: &[Rational]) -> Rational {
        x.iter().enumerate().fold(zero(), |acc, (i, v)| acc + v / Rational::from_integer((i as i64 + 1).into()))
    }

    pub fn is_grid_feasible(&self, x: &[Rational], eps: &Rational) -> bool {
        self.moment_rows().iter().zip(&self.values).all(|(row, g)| {
            let p = dot(row, x);
            g <= &p && p <= g + eps
        })
    }

    fn band_lp(&self, eps: &Rational) -> LinearProgram {
        let objective = (1..=self.degree).map(|i| -frac(1, i as i64)).collect();
        let mut lp = LinearProgram::new(self.degree).maximize(objective);
        let rows = self.moment_rows();
        for (row, g) in rows.iter().zip(&self.values) {
            lp = lp.le(row.clone(), g + eps);
        }
        for (row, g) in rows.iter().zip(&self.values) {
            lp = lp.le(row.iter().map(|v| -v).collect(), -g.clone());
        }
        lp
    }
}

/// `0, 1/(k−1), …, 1`.
pub fn equispaced_nodes(k: usize) -> Vec<Rational> {
    match k {
        0 => vec![],
        1 => vec![zero()],
        _ => (0..k).map(|j| frac(j as i64, k as i64 - 1)).collect(),
    }
}

fn powers(t: &Rational, n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    let mut p = Rational::one();
    for _ in 0..n {
        out.push(p.clone());
        p *= t;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrontierRow {
    #[serde(with = "serde_str")]
    pub epsilon: Rational,
    #[serde(with = "serde_str")]
    pub objective: Rational,
    #[serde(with = "serde_str::vec")]
    pub coefficients: Vec<Rational>,
    pub dual: SignedMultiplier,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum EpsOutcome {
    Solved(FrontierRow),
    /// No polynomial of the degree bound fits the band on the grid.
    Infeasible {
        #[serde(with = "serde_str")]
        epsilon: Rational,
    },
    /// Fewer independent nodes than coefficients.
    Unbounded {
        #[serde(with = "serde_str")]
        epsilon: Rational,
    },
}

impl EpsOutcome {
    pub fn row(&self) -> Option<&FrontierRow> {
        match self {
            EpsOutcome::Solved(r) => Some(r),
            _ => None,
        }
    }
}

/// Solves the band problem for one `ε` and checks the moment identities.
pub fn solve_eps(prob: &ApproxProblem, eps: &Rational) -> Result<EpsOutcome> {
    if !eps.is_positive() {
        return Err(FarkasError::Invalid("ε must be positive".into()));
    }
    let (value, x, y) = match solve(&prob.band_lp(eps))? {
        LpOutcome::Optimal { value, primal, dual_ineq, .. } => (value, primal, dual_ineq),
        LpOutcome::Infeasible { .. } => return Ok(EpsOutcome::Infeasible { epsilon: eps.clone() }),
        LpOutcome::Unbounded { .. } => return Ok(EpsOutcome::Unbounded { epsilon: eps.clone() }),
    };
    let k = prob.nodes.len();
    let dual = SignedMultiplier { plus: y[..k].to_vec(), minus: y[k..].to_vec() };
    let alpha = -value;
    let row = FrontierRow { epsilon: eps.clone(), objective: alpha, coefficients: x, dual };
    verify_row(prob, &row)?;
    Ok(EpsOutcome::Solved(row))
}

/// Exact feasibility, sign split, moment identities and the value identity.
pub fn verify_row(prob: &ApproxProblem, row: &FrontierRow) -> Result<()> {
    let eps = &row.epsilon;
    if !prob.is_grid_feasible(&row.coefficients, eps) {
        return Err(FarkasError::Violated("coefficients leave the band on the grid".into()));
    }
    if prob.objective(&row.coefficients) != row.objective {
        return Err(FarkasError::Violated("objective does not match the coefficients".into()));
    }
    if !row.dual.is_canonical() {
        return Err(FarkasError::Violated("grid multiplier split is not canonical".into()));
    }
    let lambda = row.dual.lambda();
    for i in 0..prob.degree {
        let moment = prob.nodes.iter().zip(&lambda).fold(zero(), |acc, (t, l)| acc + l * &powers(t, i + 1)[i]);
        if moment != -frac(1, i as i64 + 1) {
            return Err(FarkasError::Violated(format!("moment identity fails for i = {}", i + 1)));
        }
    }
    let bound = lambda
        .iter()
        .zip(&row.dual.plus)
        .zip(&prob.values)
        .fold(zero(), |acc, ((l, p), g)| acc - l * g - eps * p);
    if bound != row.objective {
        return Err(FarkasError::Violated("dual value differs from the optimum".into()));
    }
    Ok(())
}

/// Solves every `ε` in order and checks that the objective never increases.
pub fn sweep(prob: &ApproxProblem) -> Result<Vec<EpsOutcome>> {
    if prob.epsilons.is_empty() {
        return Err(FarkasError::Empty("ε list"));
    }
    if prob.epsilons.windows(2).any(|w| w[0] > w[1]) {
        return Err(FarkasError::Invalid("ε list must be sorted ascending".into()));
    }
    let rows = prob.epsilons.iter().map(|e| solve_eps(prob, e)).collect::<Result<Vec<_>>>()?;
    let mut last: Option<&Rational> = None;
    for out in &rows {
        match (out, last) {
            (EpsOutcome::Solved(r), Some(prev)) if &r.objective > prev => {
                return Err(FarkasError::Violated("objective increased with ε".into()));
            }
            (EpsOutcome::Solved(r), _) => last = Some(&r.objective),
            (EpsOutcome::Infeasible { .. }, Some(_)) => {
                return Err(FarkasError::Violated("band became infeasible as ε grew".into()));
            }
            _ => {}
        }
    }
    Ok(rows)
}

/// `epsilon,objective,x1,…,xn`, one line per `ε`; infeasible rows carry
/// the status in the objective column and empty coefficients.
pub fn frontier_csv(degree: usize, rows: &[EpsOutcome]) -> String {
    let mut header = vec!["epsilon".to_string(), "objective".to_string()];
    header.extend((1..=degree).map(|i| format!("x{i}")));
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = match r {
            EpsOutcome::Solved(row) => {
                let mut c = vec![format_pq(&row.epsilon), format_pq(&row.objective)];
                c.extend(row.coefficients.iter().map(format_pq));
                c
            }
            EpsOutcome::Infeasible { epsilon } => blank_row(epsilon, "infeasible", degree),
            EpsOutcome::Unbounded { epsilon } => blank_row(epsilon, "unbounded", degree),
        };
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn blank_row(eps: &Rational, status: &str, degree: usize) -> Vec<String> {
    let mut c = vec![format_pq(eps), status.to_string()];
    c.extend(std::iter::repeat_n(String::new(), degree));
    c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    #[serde(with = "serde_str")]
    pub epsilon: Rational,
    /// A feasibility LP on the band.
    pub direct: bool,
    /// `(0, −1)` lies outside the moment cone of the band data.
    pub via_cone: bool,
    pub equivalence: Equivalence,
}

/// The band as a Farkas instance: `C = ℝⁿ`, `A` the moment rows, `D` the box
/// `[g, g + ε]`.
pub fn band_instance(prob: &ApproxProblem, eps: &Rational) -> Result<FarkasInstance> {
    let a = LinearOperator::new(prob.moment_rows(), prob.degree)?;
    let hi = prob.values.iter().map(|g| g + eps).collect();
    let d = Target::Box(IntervalBox::new(prob.values.clone(), hi)?);
    FarkasInstance::new(MaxAffineFn::zero(prob.degree), Polyhedron::whole(prob.degree), a, d)
}

/// Decides band feasibility by an LP and through the cone test, and checks
/// that they agree.
pub fn check_consistency(prob: &ApproxProblem, eps: &Rational) -> Result<ConsistencyReport> {
    let direct = !solve(&prob.band_lp(eps).maximize(vec![zero(); prob.degree]))?.is_infeasible();
    let existence = check_existence(&band_instance(prob, eps)?)?;
    let via_cone = !existence.negative_vertical_in_cone;
    let ok = direct == via_cone && existence.equivalence == Equivalence::Consistent;
    Ok(ConsistencyReport { epsilon: eps.clone(), direct, via_cone, equivalence: Equivalence::from_bool(ok) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rats};

    /// The dual LP solved directly: minimize `(g+ε)ᵀp − gᵀq` over
    /// `p, q ≥ 0`, `Vᵀ(p − q) = −(1/i)`, with `q` ordered first.
    pub(crate) fn dual_oracle(prob: &ApproxProblem, eps: &Rational) -> Rational {
        let k = prob.nodes.len();
        let rows = prob.moment_rows();
        let mut objective = vec![zero(); 2 * k];
        for j in 0..k {
            objective[j] = prob.values[j].clone();
            objective[k + j] = -(&prob.values[j] + eps);
        }
        let mut lp = LinearProgram::new(2 * k).maximize(objective);
        for j in 0..2 * k {
            let mut r = vec![zero(); 2 * k];
            r[j] = -one();
            lp = lp.le(r, zero());
        }
        for i in 0..prob.degree {
            let mut r = vec![zero(); 2 * k];
            for j in 0..k {
                r[j] = -rows[j][i].clone();
                r[k + j] = rows[j][i].clone();
            }
            lp = lp.equal(r, -frac(1, i as i64 + 1));
        }
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { value, .. } => value,
            other => panic!("dual oracle: {other:?}"),
        }
    }

    fn square(eps: Vec<Rational>) -> ApproxProblem {
        ApproxProblem::from_polynomial(3, &rats(&[0, 0, 1]), equispaced_nodes(101), eps).unwrap()
    }

    #[test]
    fn zero_target_constant_fit() {
        let prob = ApproxProblem::from_table(1, equispaced_nodes(5), vec![zero(); 5], vec![frac(1, 10)]).unwrap();
        let row = solve_eps(&prob, &frac(1, 10)).unwrap();
        let row = row.row().unwrap();
        assert_eq!(row.coefficients, rats(&[0]));
        assert_eq!(row.objective, zero());
    }

    #[test]
    fn square_fits_exactly_and_matches_the_dual_oracle() {
        let prob = square(vec![frac(1, 100), frac(1, 10)]);
        let rows = sweep(&prob).unwrap();
        for (out, eps) in rows.iter().zip(&prob.epsilons) {
            let row = out.row().unwrap();
            assert_eq!(row.objective, frac(1, 3));
            assert_eq!(row.objective, dual_oracle(&prob, eps));
        }
    }

    #[test]
    fn sweep_is_monotone_on_a_cubic() {
        let prob = ApproxProblem::from_polynomial(
            3,
            &rats(&[0, 0, 0, 1]),
            equispaced_nodes(11),
            vec![frac(1, 10), frac(1, 4), rat(1)],
        )
        .unwrap();
        let rows = sweep(&prob).unwrap();
        let objs: Vec<_> = rows.iter().map(|r| r.row().unwrap().objective.clone()).collect();
        assert!(objs.windows(2).all(|w| w[1] <= w[0]));
        for (o, eps) in objs.iter().zip(&prob.epsilons) {
            assert_eq!(o, &dual_oracle(&prob, eps));
        }
    }

    #[test]
    fn sweep_rejects_bad_lists() {
        let mut prob = square(vec![]);
        assert!(matches!(sweep(&prob), Err(FarkasError::Empty(_))));
        prob.epsilons = vec![rat(1), frac(1, 2)];
        assert!(sweep(&prob).is_err());
        assert!(ApproxProblem::from_table(2, rats(&[0, 0]), rats(&[1, 1]), vec![rat(1)]).is_err());
        assert!(ApproxProblem::from_table(0, rats(&[0]), rats(&[1]), vec![rat(1)]).is_err());
    }

    #[test]
    fn non_collinear_values_defeat_a_line() {
        let prob = ApproxProblem::from_table(2, equispaced_nodes(3), rats(&[0, 1, 0]), vec![frac(1, 10)]).unwrap();
        let report = check_consistency(&prob, &frac(1, 10)).unwrap();
        assert!(!report.direct && !report.via_cone);
        assert_eq!(report.equivalence, Equivalence::Consistent);
        assert!(matches!(solve_eps(&prob, &frac(1, 10)).unwrap(), EpsOutcome::Infeasible { .. }));

        let wider = ApproxProblem { degree: 3, ..prob };
        let report = check_consistency(&wider, &frac(1, 10)).unwrap();
        assert!(report.direct && report.via_cone);
    }

    #[test]
    fn csv_layout() {
        let prob = ApproxProblem::from_table(2, equispaced_nodes(3), rats(&[0, 1, 0]), vec![frac(1, 10), rat(2)]).unwrap();
        let rows = vec![solve_eps(&prob, &frac(1, 10)).unwrap(), solve_eps(&prob, &rat(2)).unwrap()];
        let csv = frontier_csv(2, &rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "epsilon,objective,x1,x2");
        assert_eq!(lines[1], "1/10,infeasible,,");
        assert!(lines[2].starts_with("2/1,"));
        assert_eq!(lines[2].split(',').count(), 4);
    }
}
