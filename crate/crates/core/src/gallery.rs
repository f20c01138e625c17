//! Three curated instances with hand-derived verdicts.
//!
//! * `g1`: an infeasible system on which the implication holds vacuously
//!   while no certificate exists, so both perturbation criteria fail.
//! * `g2`: a second-order-cone constraint whose adjoint image is not closed.
//!   Membership is decided analytically rather than by LP.
//! * `g3`: a small feasible instance on which every criterion holds.

use std::fmt;
use std::str::FromStr;

use num::Signed;
use serde::Serialize;

use crate::convex::{constraint_cone, AffinePiece, FarkasInstance, IntervalBox, LinearOperator, MaxAffineFn, Polyhedron, Target};
use crate::duality::{check_optimality, check_strong_duality, DualOutcome, PrimalOutcome};
use crate::engine::{
    check_concave, check_dual_criterion, check_existence, check_implication, check_primal_criterion,
    check_reduced_criterion, Certificate, CheckReport, Equivalence, Implication, ProbeConfig,
};
use crate::error::{FarkasError, Result};
use crate::lifted::Closedness;
use crate::rational::{format_vec, frac, rat, rats, zero, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GalleryName {
    G1,
    G2,
    G3,
}

impl FromStr for GalleryName {
    type Err = FarkasError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g1" => Ok(GalleryName::G1),
            "g2" => Ok(GalleryName::G2),
            "g3" => Ok(GalleryName::G3),
            other => Err(FarkasError::Parse(format!("unknown gallery instance `{other}` (expected g1, g2 or g3)"))),
        }
    }
}

impl fmt::Display for GalleryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GalleryName::G1 => "g1",
            GalleryName::G2 => "g2",
            GalleryName::G3 => "g3",
        })
    }
}

/// `f = x₁ − x₂`, `C = ℝ²`, `A = [[1, 1], [1, 1]]`, `D = {(0, 1)}`.
pub fn g1() -> FarkasInstance {
    FarkasInstance::new(
        MaxAffineFn::affine(rats(&[1, -1]), zero()),
        Polyhedron::whole(2),
        LinearOperator::new(vec![rats(&[1, 1]), rats(&[1, 1])], 2).expect("2×2 matrix"),
        Target::Polyhedron(Polyhedron::singleton(&rats(&[0, 1]))),
    )
    .expect("g1 dimensions")
}

/// `f = max(x₁ + x₂ − 1, x₁ − x₂)`, `C = ℝ²₊`, `A = [1 1]`, `D = [1, 3]`.
pub fn g3() -> FarkasInstance {
    FarkasInstance::new(
        MaxAffineFn::new(
            2,
            vec![AffinePiece::new(rats(&[1, 1]), rat(-1)), AffinePiece::new(rats(&[1, -1]), zero())],
            None,
        )
        .expect("g3 pieces"),
        Polyhedron::nonneg_orthant(2),
        LinearOperator::new(vec![rats(&[1, 1])], 2).expect("1×2 matrix"),
        Target::Box(IntervalBox::new(rats(&[1]), rats(&[3])).expect("g3 box")),
    )
    .expect("g3 dimensions")
}

/// The certificate for `g3` worked out by hand: `u′ = (1, 1)`, `v′ = 0`,
/// `λ = −1`.
pub fn g3_hand_certificate() -> Certificate {
    Certificate {
        u_prime: rats(&[1, 1]),
        v_prime: rats(&[0, 0]),
        lambda: rats(&[-1]),
        f_star: rat(1),
        sigma_c: zero(),
        sigma_d: rat(-1),
    }
}

/// Analytic model of `g2`: `A = [[1, 0], [0, −1], [0, 1]]` maps into `ℝ³`
/// with `Q` the second-order cone `μ₃ ≥ ‖(μ₁, μ₂)‖`, so
/// `Aᵀμ = (μ₁, μ₃ − μ₂)` and `Aᵀ(Q⁺) = {b > 0} ∪ ({0} × ℝ₊)`.
pub mod soc {
    use super::*;

    pub fn in_cone(mu: &[Rational; 3]) -> bool {
        !mu[2].is_negative() && &mu[2] * &mu[2] >= &mu[0] * &mu[0] + &mu[1] * &mu[1]
    }

    pub fn adjoint(mu: &[Rational; 3]) -> [Rational; 2] {
        [mu[0].clone(), &mu[2] - &mu[1]]
    }

    /// A preimage of `(a, b)` in `Q`, if one exists.
    pub fn witness(a: &Rational, b: &Rational) -> Option<[Rational; 3]> {
        if b.is_positive() {
            let two_b = b * rat(2);
            Some([a.clone(), (a * a - b * b) / &two_b, (a * a + b * b) / two_b])
        } else if a == &zero() && b == &zero() {
            Some([zero(), zero(), zero()])
        } else {
            None
        }
    }

    /// `a′ ∈ Aᵀ(Q⁺)`, with any witness re-checked exactly.
    pub fn in_image(p: &[Rational; 2]) -> bool {
        witness(&p[0], &p[1]).is_some_and(|mu| in_cone(&mu) && adjoint(&mu) == *p)
    }

    pub fn in_closure(p: &[Rational; 2]) -> bool {
        !p[1].is_negative()
    }

    /// `Ax ∈ Q ⟹ ⟨a′, x⟩ ≥ 0`; the premise set is `{0} × ℝ₊`.
    pub fn implication(p: &[Rational; 2]) -> bool {
        !p[1].is_negative()
    }

    /// Exact preimages of `(a, b + 1/k)` for `k = 1..=steps`.
    pub fn approach_is_exact(p: &[Rational; 2], steps: i64) -> bool {
        (1..=steps).all(|k| {
            let q = [p[0].clone(), &p[1] + frac(1, k)];
            in_image(&q)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GalleryCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GalleryReport {
    pub instance: String,
    pub summary: &'static str,
    pub checks: Vec<GalleryCheck>,
    pub all_match: bool,
}

struct Checks(Vec<GalleryCheck>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, expected: &str, actual: impl fmt::Display) {
        let actual = actual.to_string();
        self.0.push(GalleryCheck { name: name.into(), matches: actual == expected, expected: expected.into(), actual });
    }

    fn report(self, name: GalleryName, summary: &'static str) -> GalleryReport {
        let all_match = self.0.iter().all(|c| c.matches);
        GalleryReport { instance: name.to_string(), summary, checks: self.0, all_match }
    }
}

pub fn describe_closedness(c: &Closedness) -> String {
    match c {
        Closedness::Holds => "Holds".into(),
        Closedness::FailsAt(z) => format!("FailsAt{}", format_vec(z)),
    }
}

fn describe_implication(i: &Implication) -> &'static str {
    match i {
        Implication::Holds => "Holds",
        Implication::VacuouslyTrue => "VacuouslyTrue",
        Implication::Fails { .. } => "Fails",
    }
}

fn presence(b: bool) -> &'static str {
    if b {
        "present"
    } else {
        "absent"
    }
}

fn push_criterion(checks: &mut Checks, report: &CheckReport, criterion: &str, certificate: bool) {
    let label = report.check;
    checks.push(format!("{label}: criterion"), criterion, describe_closedness(&report.criterion));
    checks.push(format!("{label}: certificate"), presence(certificate), presence(report.certificate.is_some()));
    checks.push(format!("{label}: equivalence"), "Consistent", format!("{:?}", report.equivalence));
}

pub fn run_gallery(name: GalleryName) -> Result<GalleryReport> {
    match name {
        GalleryName::G1 => run_g1(),
        GalleryName::G2 => Ok(run_g2()),
        GalleryName::G3 => run_g3(),
    }
}

fn run_g1() -> Result<GalleryReport> {
    let inst = g1();
    let mut c = Checks(Vec::new());
    c.push("implication", "VacuouslyTrue", describe_implication(&check_implication(&inst)?));
    push_criterion(&mut c, &check_primal_criterion(&inst)?, "FailsAt(0, 0, 0, 0, -1)", false);
    push_criterion(&mut c, &check_reduced_criterion(&inst)?, "FailsAt(0, 0, -1)", false);
    let duality = check_strong_duality(&inst)?;
    c.push("primal problem", "Infeasible", status_primal(&duality.primal));
    c.push("dual problem", "Infeasible", status_dual(&duality.dual));
    let existence = check_existence(&inst)?;
    c.push("feasible point", "absent", presence(existence.feasible_point.is_some()));
    c.push("(0, 0, -1) in K", "true", existence.negative_vertical_in_cone);
    let epi = inst.f.conjugate_epigraph()?;
    c.push("epi f* inside K", "false", constraint_cone(&inst)?.contains_generated(&epi)?);
    Ok(c.report(
        GalleryName::G1,
        "infeasible system: the implication holds vacuously but no certificate exists, so both perturbation criteria fail",
    ))
}

fn run_g2() -> GalleryReport {
    let mut c = Checks(Vec::new());
    let cases: [([i64; 2], bool, bool, bool); 3] = [
        ([1, 0], true, false, true),
        ([1, 1], true, true, true),
        ([0, -1], false, false, false),
    ];
    for (p, implication, image, closure) in cases {
        let a = [rat(p[0]), rat(p[1])];
        let tag = format_vec(&a);
        let (imp, img, cl) = (soc::implication(&a), soc::in_image(&a), soc::in_closure(&a));
        c.push(format!("{tag}: implication"), &implication.to_string(), imp);
        c.push(format!("{tag}: certificate"), presence(image), presence(img));
        c.push(format!("{tag}: in closure of the adjoint image"), &closure.to_string(), cl);
        if cl {
            c.push(format!("{tag}: approaching preimages are exact"), "true", soc::approach_is_exact(&a, 5));
        }
        let criterion = if cl && !img { Closedness::FailsAt(a.to_vec()) } else { Closedness::Holds };
        let expected_criterion =
            if closure && !image { format!("FailsAt{tag}") } else { "Holds".to_string() };
        c.push(format!("{tag}: criterion"), &expected_criterion, describe_closedness(&criterion));
        let equivalent = imp == img;
        c.push(format!("{tag}: statements equivalent"), &(implication == image).to_string(), equivalent);
        c.push(
            format!("{tag}: criterion matches equivalence"),
            "Consistent",
            format!("{:?}", Equivalence::from_bool(criterion.holds() == equivalent)),
        );
    }
    c.report(
        GalleryName::G2,
        "second-order-cone constraint: the adjoint image misses the ray (ℝ₊, 0), so equivalence fails exactly there",
    )
}

fn run_g3() -> Result<GalleryReport> {
    let inst = g3();
    let mut c = Checks(Vec::new());
    c.push("implication", "Holds", describe_implication(&check_implication(&inst)?));
    push_criterion(&mut c, &check_primal_criterion(&inst)?, "Holds", true);
    push_criterion(&mut c, &check_reduced_criterion(&inst)?, "Holds", true);
    push_criterion(&mut c, &check_dual_criterion(&inst, ProbeConfig::default())?, "Holds", true);
    c.push("hand certificate verifies", "true", g3_hand_certificate().verify(&inst)?);
    c.push("feasible point", "present", presence(check_existence(&inst)?.feasible_point.is_some()));
    let duality = check_strong_duality(&inst)?;
    c.push("primal value", "0", &duality.primal_value);
    c.push("dual value", "0", &duality.dual_value);
    c.push("dual attained", "true", duality.attained);
    let opt = check_optimality(&inst, &rats(&[0, 1]))?;
    c.push("(0, 1) optimal", "true", opt.optimal);
    c.push("(0, 1) certificate", "present", presence(opt.certificate.is_some()));
    c.push("(0, 1) zero subgradient sum", "true", opt.subgradient);
    let k = constraint_cone(&inst)?;
    c.push("(1, 1, 1) in K", "false", k.member(&rats(&[1, 1, 1]))?);
    c.push("(1, -1, 0) in K", "false", k.member(&rats(&[1, -1, 0]))?);
    let concave = check_concave(&inst)?;
    c.push("sup of f over the premise", "3", &concave.sup_over_premise);
    c.push("f ≤ 0 on the premise", "false", concave.upper_bound_holds);
    c.push("epi f* inside K", "false", concave.epigraph_in_cone);
    c.push("concave equivalence", "Consistent", format!("{:?}", concave.equivalence));
    Ok(c.report(GalleryName::G3, "regular feasible instance: every criterion holds and every equivalence is consistent"))
}

fn status_primal(p: &PrimalOutcome) -> &'static str {
    match p {
        PrimalOutcome::Optimal { .. } => "Optimal",
        PrimalOutcome::Unbounded => "Unbounded",
        PrimalOutcome::Infeasible => "Infeasible",
    }
}

fn status_dual(d: &DualOutcome) -> &'static str {
    match d {
        DualOutcome::Optimal(_) => "Optimal",
        DualOutcome::Unbounded => "Unbounded",
        DualOutcome::Infeasible => "Infeasible",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_matches() {
        for name in [GalleryName::G1, GalleryName::G2, GalleryName::G3] {
            let report = run_gallery(name).unwrap();
            for c in &report.checks {
                assert!(c.matches, "{name} {}: expected {} got {}", c.name, c.expected, c.actual);
            }
            assert!(report.all_match);
        }
    }

    #[test]
    fn soc_witness_formula() {
        for (a, b) in [(3, 2), (-1, 5), (0, 1), (7, 7)] {
            let mu = soc::witness(&rat(a), &rat(b)).unwrap();
            assert!(soc::in_cone(&mu));
            assert_eq!(soc::adjoint(&mu), [rat(a), rat(b)]);
            // The witness sits on the boundary of the cone.
            assert_eq!(&mu[2] * &mu[2], &mu[0] * &mu[0] + &mu[1] * &mu[1]);
        }
        assert!(soc::witness(&rat(1), &zero()).is_none());
        assert!(soc::witness(&rat(0), &rat(-1)).is_none());
    }

    #[test]
    fn unknown_name_is_rejected() {
        assert!("g4".parse::<GalleryName>().is_err());
        assert_eq!("g2".parse::<GalleryName>().unwrap(), GalleryName::G2);
    }
}
