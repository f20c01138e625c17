use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    check_implication, find_certificate, find_reduced_certificate, CheckReport, Equivalence, Implication,
    ProbeConfig, Witness,
};
use crate::convex::{constraint_cone, perturbation_set, reduced_perturbation_set, FarkasInstance};
use crate::error::{FarkasError, Result};
use crate::lifted::{probe_directions, support_disagreement, Closedness};
use crate::rational::{one, serde_str, zeros, Rational};

const POLYHEDRAL_NOTE: &str = "the set is a linear image of a polyhedron, hence closed";

fn require_nonempty_c_and_d(inst: &FarkasInstance) -> Result<()> {
    if inst.c.is_empty()? {
        return Err(FarkasError::Hypothesis("C is empty".into()));
    }
    if inst.d.is_empty()? {
        return Err(FarkasError::Hypothesis("D is empty".into()));
    }
    Ok(())
}

fn implication_notes(implication: &Implication) -> Vec<String> {
    match implication {
        Implication::VacuouslyTrue => vec!["C ∩ A⁻¹(D) ∩ dom f is empty; the implication holds vacuously".into()],
        _ => vec![],
    }
}

/// Closedness of `ℝ₊𝓕` regarding `(0, 0, −1)` against the equivalence of
/// the implication and the full certificate.
pub fn check_primal_criterion(inst: &FarkasInstance) -> Result<CheckReport> {
    require_nonempty_c_and_d(inst)?;
    let (n, m) = (inst.n(), inst.m());
    let mut target = zeros(n + m + 1);
    target[n + m] = -one();
    let criterion = perturbation_set(inst)?.closed_regarding(&target)?;
    let implication = check_implication(inst)?;
    let certificate = find_certificate(inst)?;
    let present = certificate.is_some();
    Ok(CheckReport {
        check: "primal perturbation criterion",
        equivalence: biconditional(&criterion, &implication, present),
        notes: implication_notes(&implication),
        implication,
        certificate: certificate.map(Witness::Full),
        criterion,
    })
}

/// Closedness of `ℝ₊𝓕₀` regarding `(0, −1)` against the equivalence of the
/// implication and the reduced certificate.
pub fn check_reduced_criterion(inst: &FarkasInstance) -> Result<CheckReport> {
    if inst.d.is_empty()? {
        return Err(FarkasError::Hypothesis("D is empty".into()));
    }
    if !inst.c_meets_domain()? {
        return Err(FarkasError::Hypothesis("C ∩ dom f is empty".into()));
    }
    let m = inst.m();
    let mut target = zeros(m + 1);
    target[m] = -one();
    let criterion = reduced_perturbation_set(inst)?.closed_regarding(&target)?;
    let implication = check_implication(inst)?;
    let certificate = find_reduced_certificate(inst)?;
    let present = certificate.is_some();
    Ok(CheckReport {
        check: "reduced perturbation criterion",
        equivalence: biconditional(&criterion, &implication, present),
        notes: implication_notes(&implication),
        implication,
        certificate: certificate.map(Witness::Reduced),
        criterion,
    })
}

/// The criterion holds iff the implication entails the certificate; the
/// certificate must always entail the implication.
fn biconditional(criterion: &Closedness, implication: &Implication, certificate: bool) -> Equivalence {
    let weak = !certificate || implication.is_true();
    let strong = !implication.is_true() || certificate;
    Equivalence::from_bool(weak && criterion.holds() == strong)
}

/// `epi f* + K` closed regarding `(0, 0)`, with the closure of the sum
/// compared by support probes against the conjugate of `f + δ_{B∩C}`.
pub fn check_dual_criterion(inst: &FarkasInstance, probes: ProbeConfig) -> Result<CheckReport> {
    if inst.feasible_point()?.is_none() {
        return Err(FarkasError::Hypothesis("C ∩ A⁻¹(D) ∩ dom f is empty".into()));
    }
    let n = inst.n();
    let sum = inst.f.conjugate_epigraph_lifted().minkowski_sum(&constraint_cone(inst)?)?;
    let origin_in_sum = sum.member(&zeros(n + 1))?;
    // A projected polyhedron is closed: membership and closure membership agree.
    let criterion = Closedness::Holds;

    let implication = check_implication(inst)?;
    let certificate = find_certificate(inst)?;
    let present = certificate.is_some();

    let restricted = inst.f.restrict(&inst.feasible_polyhedron()?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(probes.seed);
    let directions = probe_directions(n + 1, probes.random_directions, &mut rng);
    let mismatch = support_disagreement(&sum, &restricted.conjugate_epigraph_lifted(), &directions)?;

    let mut notes = implication_notes(&implication);
    notes.push(format!("epi f* + K: {POLYHEDRAL_NOTE}"));
    if let Some((d, a, b)) = &mismatch {
        notes.push(format!("closure probe mismatch at {}: {a} vs {b}", crate::rational::format_vec(d)));
    }
    let equivalent = implication.is_true() == present;
    let ok = mismatch.is_none() && origin_in_sum == present && criterion.holds() == equivalent;
    Ok(CheckReport {
        check: "dual cone criterion",
        implication,
        certificate: certificate.map(Witness::Full),
        criterion,
        equivalence: Equivalence::from_bool(ok),
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TiltRow {
    #[serde(with = "serde_str::vec")]
    pub x_prime: Vec<Rational>,
    #[serde(with = "serde_str")]
    pub r: Rational,
    pub implication: bool,
    pub certificate: bool,
    pub equivalence: Equivalence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableReport {
    pub rows: Vec<TiltRow>,
    pub criterion: Closedness,
    pub equivalence: Equivalence,
    pub note: String,
}

/// Runs the dual criterion on `f − ⟨x′, ·⟩ − r` for every tilt.
pub fn check_stable(inst: &FarkasInstance, tilts: &[(Vec<Rational>, Rational)], probes: ProbeConfig) -> Result<StableReport> {
    let mut rows = Vec::with_capacity(tilts.len());
    for (x_prime, r) in tilts {
        let tilted = FarkasInstance { f: inst.f.tilt(x_prime, r)?, ..inst.clone() };
        let report = check_dual_criterion(&tilted, probes)?;
        rows.push(TiltRow {
            x_prime: x_prime.clone(),
            r: r.clone(),
            implication: report.implication.is_true(),
            certificate: report.certificate.is_some(),
            equivalence: report.equivalence,
        });
    }
    let ok = rows.iter().all(|r| r.equivalence == Equivalence::Consistent);
    Ok(StableReport {
        rows,
        criterion: Closedness::Holds,
        equivalence: Equivalence::from_bool(ok),
        note: format!(
            "epi f* + K: {POLYHEDRAL_NOTE}, so stability holds for every tilt; only the listed tilts were checked"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{AffinePiece, IntervalBox, LinearOperator, MaxAffineFn, Polyhedron, Target};
    use crate::rational::{rat, rats, zero};

    fn bounded_instance() -> FarkasInstance {
        FarkasInstance::new(
            MaxAffineFn::new(
                2,
                vec![AffinePiece::new(rats(&[1, 1]), rat(-1)), AffinePiece::new(rats(&[1, -1]), zero())],
                None,
            )
            .unwrap(),
            Polyhedron::nonneg_orthant(2),
            LinearOperator::new(vec![rats(&[1, 1])], 2).unwrap(),
            Target::Box(IntervalBox::new(rats(&[1]), rats(&[3])).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn regular_instance_satisfies_every_criterion() {
        let inst = bounded_instance();
        for report in [
            check_primal_criterion(&inst).unwrap(),
            check_reduced_criterion(&inst).unwrap(),
            check_dual_criterion(&inst, ProbeConfig::default()).unwrap(),
        ] {
            assert_eq!(report.implication, Implication::Holds, "{}", report.check);
            assert!(report.certificate.is_some());
            assert!(report.criterion.holds());
            assert_eq!(report.equivalence, Equivalence::Consistent);
        }
    }

    #[test]
    fn singleton_instance_is_trivially_consistent() {
        let inst = FarkasInstance::new(
            MaxAffineFn::zero(1),
            Polyhedron::singleton(&rats(&[0])),
            LinearOperator::identity(1),
            Target::Polyhedron(Polyhedron::singleton(&rats(&[0]))),
        )
        .unwrap();
        let report = check_primal_criterion(&inst).unwrap();
        assert_eq!(report.equivalence, Equivalence::Consistent);
        assert!(report.criterion.holds());
    }

    #[test]
    fn dual_criterion_requires_feasibility() {
        let inst = FarkasInstance::new(
            MaxAffineFn::zero(1),
            Polyhedron::whole(1),
            LinearOperator::zero(1, 1),
            Target::Polyhedron(Polyhedron::singleton(&rats(&[1]))),
        )
        .unwrap();
        assert!(matches!(check_dual_criterion(&inst, ProbeConfig::default()), Err(FarkasError::Hypothesis(_))));
    }

    #[test]
    fn stable_report_covers_every_tilt() {
        let inst = bounded_instance();
        let tilts = vec![(rats(&[0, 0]), zero()), (rats(&[1, 0]), rat(2)), (rats(&[-3, 5]), rat(-1))];
        let report = check_stable(&inst, &tilts, ProbeConfig::default()).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert_eq!(report.equivalence, Equivalence::Consistent);
        let untilted = check_dual_criterion(&inst, ProbeConfig::default()).unwrap();
        assert_eq!(report.rows[0].certificate, untilted.certificate.is_some());
    }
}
