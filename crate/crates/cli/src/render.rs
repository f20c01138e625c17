//! Human-readable reports. Every number is printed exactly.

use std::fmt::Write;

use farkas_core::gallery::{describe_closedness, GalleryReport};
use farkas_core::polyapprox::ConsistencyReport;
use farkas_core::rational::{format_rational, format_vec};
use farkas_core::{
    Certificate, CheckReport, ConcaveReport, DualOutcome, EpsOutcome, Equivalence, ExistenceReport, GridReport,
    Implication, OptimalityReport, SignedMultiplier, StableDualityReport, StableReport, StrongDualityReport, Witness,
};

fn implication(i: &Implication) -> String {
    match i {
        Implication::Holds => "holds".into(),
        Implication::VacuouslyTrue => "vacuously true (the premise set is empty)".into(),
        Implication::Fails { witness, value } => {
            format!("fails at x = {} with f(x) = {}", format_vec(witness), format_rational(value))
        }
    }
}

fn equivalence(e: Equivalence) -> &'static str {
    match e {
        Equivalence::Consistent => "consistent",
        Equivalence::PaperViolated => "VIOLATED",
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn certificate(out: &mut String, c: &Certificate) {
    writeln!(out, "  u' = {}", format_vec(&c.u_prime)).unwrap();
    writeln!(out, "  v' = {}", format_vec(&c.v_prime)).unwrap();
    writeln!(out, "  lambda = {}", format_vec(&c.lambda)).unwrap();
    writeln!(
        out,
        "  f*(u') = {}, sigma_C(v') = {}, sigma_D(lambda) = {}, total = {}",
        format_rational(&c.f_star),
        format_rational(&c.sigma_c),
        format_rational(&c.sigma_d),
        format_rational(&c.total())
    )
    .unwrap();
}

fn multiplier(out: &mut String, m: &SignedMultiplier) {
    writeln!(out, "  lambda+ = {}", format_vec(&m.plus)).unwrap();
    writeln!(out, "  lambda- = {}", format_vec(&m.minus)).unwrap();
}

pub fn check(r: &CheckReport) -> String {
    let mut out = String::new();
    writeln!(out, "check: {}", r.check).unwrap();
    writeln!(out, "implication: {}", implication(&r.implication)).unwrap();
    match &r.certificate {
        None => writeln!(out, "certificate: absent").unwrap(),
        Some(Witness::Full(c)) => {
            writeln!(out, "certificate: present").unwrap();
            certificate(&mut out, c);
        }
        Some(Witness::Reduced(c)) => {
            writeln!(out, "certificate: present (reduced)").unwrap();
            writeln!(out, "  lambda = {}", format_vec(&c.lambda)).unwrap();
            writeln!(
                out,
                "  (f + delta_C)*(-A^T lambda) = {}, sigma_D(lambda) = {}, total = {}",
                format_rational(&c.restricted_conjugate),
                format_rational(&c.sigma_d),
                format_rational(&c.total())
            )
            .unwrap();
        }
    }
    writeln!(out, "criterion: {}", describe_closedness(&r.criterion)).unwrap();
    writeln!(out, "equivalence: {}", equivalence(r.equivalence)).unwrap();
    for n in &r.notes {
        writeln!(out, "note: {n}").unwrap();
    }
    out
}

pub fn concave(r: &ConcaveReport) -> String {
    let mut out = String::new();
    writeln!(out, "check: upper bound f <= 0 on the premise set").unwrap();
    writeln!(out, "premise nonempty: {}", yes(r.premise_nonempty)).unwrap();
    writeln!(out, "sup f over the premise: {}", r.sup_over_premise).unwrap();
    writeln!(out, "upper bound holds: {}", yes(r.upper_bound_holds)).unwrap();
    writeln!(out, "epi f* inside K: {}", yes(r.epigraph_in_cone)).unwrap();
    writeln!(out, "closure condition: {}", yes(r.simili_closed)).unwrap();
    writeln!(out, "equivalence: {}", equivalence(r.equivalence)).unwrap();
    out
}

pub fn existence(r: &ExistenceReport) -> String {
    let mut out = String::new();
    match &r.feasible_point {
        Some(x) => writeln!(out, "feasible: yes, x = {}", format_vec(x)).unwrap(),
        None => writeln!(out, "feasible: no").unwrap(),
    }
    writeln!(out, "(0, -1) in K: {}", yes(r.negative_vertical_in_cone)).unwrap();
    writeln!(out, "equivalence: {}", equivalence(r.equivalence)).unwrap();
    out
}

pub fn strong_duality(r: &StrongDualityReport) -> String {
    let mut out = String::new();
    writeln!(out, "primal value: {}", r.primal_value).unwrap();
    if let farkas_core::PrimalOutcome::Optimal { point, .. } = &r.primal {
        writeln!(out, "  attained at x = {}", format_vec(point)).unwrap();
    }
    writeln!(out, "dual value: {}", r.dual_value).unwrap();
    out.push_str(&dual(&r.dual));
    writeln!(out, "zero gap with dual attainment: {}", yes(r.attained)).unwrap();
    writeln!(out, "criterion: {}", describe_closedness(&r.criterion)).unwrap();
    writeln!(out, "equivalence: {}", equivalence(r.equivalence)).unwrap();
    for n in &r.notes {
        writeln!(out, "note: {n}").unwrap();
    }
    out
}

pub fn dual(d: &DualOutcome) -> String {
    let mut out = String::new();
    match d {
        DualOutcome::Optimal(s) => {
            writeln!(out, "dual optimum: {}", format_rational(&s.value)).unwrap();
            certificate(&mut out, &s.parts);
            multiplier(&mut out, &s.lambda_split);
        }
        DualOutcome::Unbounded => writeln!(out, "dual: unbounded").unwrap(),
        DualOutcome::Infeasible => writeln!(out, "dual: infeasible").unwrap(),
    }
    out
}

pub fn optimality(r: &OptimalityReport) -> String {
    let mut out = String::new();
    writeln!(out, "point: {}, f = {}", format_vec(&r.point), format_rational(&r.value)).unwrap();
    writeln!(out, "optimal: {}", yes(r.optimal)).unwrap();
    match &r.certificate {
        Some(c) => {
            writeln!(out, "certificate for f - f(x) >= 0: present").unwrap();
            certificate(&mut out, c);
        }
        None => writeln!(out, "certificate for f - f(x) >= 0: absent").unwrap(),
    }
    writeln!(out, "0 in the subdifferential sum: {}", yes(r.subgradient)).unwrap();
    writeln!(out, "equivalence: {}", equivalence(r.equivalence)).unwrap();
    out
}

pub fn stable_duality(r: &StableDualityReport) -> String {
    let mut out = String::new();
    writeln!(out, "{:<24} {:>12} {:>12}  equivalence", "x'", "primal", "dual").unwrap();
    for row in &r.rows {
        writeln!(
            out,
            "{:<24} {:>12} {:>12}  {}",
            format_vec(&row.x_prime),
            row.primal_value.to_string(),
            row.dual_value.to_string(),
            equivalence(row.equivalence)
        )
        .unwrap();
    }
    writeln!(
        out,
        "containment epi f* + K in epi (f + delta)*: {} ({} samples)",
        yes(r.containment_holds),
        r.containment_checked
    )
    .unwrap();
    writeln!(out, "equivalence: {}", equivalence(r.equivalence)).unwrap();
    out
}

pub fn grid(r: &GridReport) -> String {
    let mut out = check(&r.report);
    if let Some(m) = &r.multiplier {
        writeln!(out, "multiplier split:").unwrap();
        multiplier(&mut out, m);
    }
    out
}

pub fn stable(r: &StableReport) -> String {
    let mut out = String::new();
    writeln!(out, "{:<24} {:>8}  implication  certificate  equivalence", "x'", "r").unwrap();
    for row in &r.rows {
        writeln!(
            out,
            "{:<24} {:>8}  {:<11}  {:<11}  {}",
            format_vec(&row.x_prime),
            format_rational(&row.r),
            yes(row.implication),
            yes(row.certificate),
            equivalence(row.equivalence)
        )
        .unwrap();
    }
    writeln!(out, "criterion: {}", describe_closedness(&r.criterion)).unwrap();
    writeln!(out, "equivalence: {}", equivalence(r.equivalence)).unwrap();
    writeln!(out, "note: {}", r.note).unwrap();
    out
}

pub fn frontier(rows: &[EpsOutcome], consistency: &[ConsistencyReport]) -> String {
    let mut out = String::new();
    for (row, c) in rows.iter().zip(consistency) {
        match row {
            EpsOutcome::Solved(r) => writeln!(
                out,
                "eps = {}: objective {}, x = {}",
                format_rational(&r.epsilon),
                format_rational(&r.objective),
                format_vec(&r.coefficients)
            )
            .unwrap(),
            EpsOutcome::Infeasible { epsilon } => {
                writeln!(out, "eps = {}: infeasible", format_rational(epsilon)).unwrap()
            }
            EpsOutcome::Unbounded { epsilon } => {
                writeln!(out, "eps = {}: unbounded", format_rational(epsilon)).unwrap()
            }
        }
        writeln!(
            out,
            "  band feasible by LP: {}, by cone test: {}, {}",
            yes(c.direct),
            yes(c.via_cone),
            equivalence(c.equivalence)
        )
        .unwrap();
    }
    out
}

pub fn gallery(r: &GalleryReport) -> String {
    let mut out = String::new();
    writeln!(out, "{}: {}", r.instance, r.summary).unwrap();
    for c in &r.checks {
        let mark = if c.matches { "ok  " } else { "DIFF" };
        if c.matches {
            writeln!(out, "  {mark} {}: {}", c.name, c.actual).unwrap();
        } else {
            writeln!(out, "  {mark} {}: expected {}, got {}", c.name, c.expected, c.actual).unwrap();
        }
    }
    let matched = r.checks.iter().filter(|c| c.matches).count();
    writeln!(out, "{matched}/{} verdicts match the fixture", r.checks.len()).unwrap();
    out
}
