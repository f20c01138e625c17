//! Decision procedures for Farkas-type statements and their closedness
//! criteria.
//!
//! The implication `x ∈ C ∩ A⁻¹(D) ⟹ f(x) ≥ 0` and its dual certificate
//! form are decided by separate LPs, and each criterion is evaluated on its
//! own lifted set, so every report cross-checks three independent
//! computations against the equivalence that links them.

mod concave;
mod criteria;
mod existence;
mod probes;
mod sandwich;
mod statements;

use serde::Serialize;

pub use concave::{check_concave, ConcaveReport};
pub use criteria::{
    check_dual_criterion, check_primal_criterion, check_reduced_criterion, check_stable, StableReport, TiltRow,
};
pub use existence::{check_existence, ExistenceReport};
pub use probes::{adjoint_cone_matches_preimage, constraint_cone_matches_feasible_set, ProbeMismatch};
pub use sandwich::{check_sandwich, SandwichReport};
pub(crate) use sandwich::grid_operator;
pub use statements::{check_implication, find_certificate, find_reduced_certificate};
pub(crate) use statements::CertificateLp;

use crate::lifted::Closedness;
use crate::rational::{serde_str, Rational};

/// Verdict on `x ∈ C ∩ A⁻¹(D) ⟹ f(x) ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Implication {
    Holds,
    /// The premise set is empty.
    VacuouslyTrue,
    /// A feasible point with `f(x) < 0`.
    Fails {
        #[serde(with = "serde_str::vec")]
        witness: Vec<Rational>,
        #[serde(with = "serde_str")]
        value: Rational,
    },
}

impl Implication {
    pub fn is_true(&self) -> bool {
        !matches!(self, Implication::Fails { .. })
    }
}

/// `(u′, v′, λ)` with `u′ + v′ = −Aᵀλ` and `f*(u′) + σ_C(v′) + σ_D(λ) ≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    #[serde(with = "serde_str::vec")]
    pub u_prime: Vec<Rational>,
    #[serde(with = "serde_str::vec")]
    pub v_prime: Vec<Rational>,
    #[serde(with = "serde_str::vec")]
    pub lambda: Vec<Rational>,
    #[serde(with = "serde_str")]
    pub f_star: Rational,
    #[serde(with = "serde_str")]
    pub sigma_c: Rational,
    #[serde(with = "serde_str")]
    pub sigma_d: Rational,
}

impl Certificate {
    pub fn total(&self) -> Rational {
        &self.f_star + &self.sigma_c + &self.sigma_d
    }
}

/// `λ` with `(f + δ_C)*(−Aᵀλ) + σ_D(λ) ≤ 0`, i.e.
/// `f(x) + ⟨λ, Ax⟩ ≥ σ_D(λ)` for all `x ∈ C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedCertificate {
    #[serde(with = "serde_str::vec")]
    pub lambda: Vec<Rational>,
    /// Conjugate of `f + δ_C` at `−Aᵀλ`.
    #[serde(with = "serde_str")]
    pub restricted_conjugate: Rational,
    #[serde(with = "serde_str")]
    pub sigma_d: Rational,
}

impl ReducedCertificate {
    pub fn total(&self) -> Rational {
        &self.restricted_conjugate + &self.sigma_d
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form")]
pub enum Witness {
    Full(Certificate),
    Reduced(ReducedCertificate),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Equivalence {
    Consistent,
    /// An equivalence that holds for every valid input failed.
    PaperViolated,
}

impl Equivalence {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Equivalence::Consistent
        } else {
            Equivalence::PaperViolated
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: &'static str,
    pub implication: Implication,
    pub certificate: Option<Witness>,
    pub criterion: Closedness,
    pub equivalence: Equivalence,
    pub notes: Vec<String>,
}

/// Seed and count of random directions for support probing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    pub seed: u64,
    pub random_directions: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { seed: 0, random_directions: 10 }
    }
}
