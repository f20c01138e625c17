//! Exact rational machinery for Farkas-type statements over polyhedral data.
//!
//! Everything is decided by an exact two-phase simplex ([`lp`]) over sets
//! given in lifted form ([`lifted`]). On top of that sit the convex objects
//! of a standing instance `f`, `C`, `A`, `D` ([`convex`]), decision
//! procedures for the implication, certificates and closedness criteria
//! ([`engine`]), grid systems ([`semiinf`]), Lagrangian duality
//! ([`duality`]) and one-sided polynomial approximation ([`polyapprox`]).
//!
//! ```
//! use farkas_core::{check_implication, gallery, Implication};
//!
//! let inst = gallery::g3();
//! assert_eq!(check_implication(&inst).unwrap(), Implication::Holds);
//! ```

pub mod convex;
pub mod duality;
pub mod engine;
pub mod error;
pub mod gallery;
pub mod generate;
pub mod lifted;
pub mod lp;
pub mod polyapprox;
pub mod rational;
pub mod semiinf;
pub mod system;

pub use convex::{
    adjoint_support_cone, constraint_cone, moment_cone, perturbation_set, reduced_perturbation_set, AffinePiece,
    FarkasInstance, IntervalBox, LinearOperator, MaxAffineFn, MomentRow, Polyhedron, Target,
};
pub use duality::{
    check_optimality, check_stable_strong_duality, check_strong_duality, solve_dual, solve_primal, DualOutcome,
    DualSolution, OptimalityReport, PrimalOutcome, StableDualityReport, StrongDualityReport,
};
pub use engine::{
    adjoint_cone_matches_preimage, check_concave, check_dual_criterion, check_existence, check_implication,
    check_primal_criterion, check_reduced_criterion, check_sandwich, check_stable, constraint_cone_matches_feasible_set,
    find_certificate, find_reduced_certificate, Certificate, CheckReport, ConcaveReport, Equivalence, ExistenceReport,
    Implication, ProbeConfig, ReducedCertificate, SandwichReport, StableReport, Witness,
};
pub use error::{FarkasError, Result};
pub use lifted::{Closedness, GeneratedSet, LiftedSet};
pub use lp::{solve, verify_certificate, LinearProgram, LpOutcome};
pub use polyapprox::{check_consistency, solve_eps, sweep, ApproxProblem, EpsOutcome, FrontierRow};
pub use rational::{parse_rational, Extended, Rational};
pub use semiinf::{
    check_grid_dual, check_grid_primal, check_grid_reduced, grid_constraint_cone, sigma_d_box, GridReport, GridSystem,
    SignedMultiplier,
};
pub use system::{LinExpr, SystemBuilder};
