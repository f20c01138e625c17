//! `farkas`: exact Farkas-type certificates, closedness criteria and duality
//! reports for JSON instance files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use farkas_core::gallery::{run_gallery, GalleryName};
use farkas_core::generate::tilt_grid;
use farkas_core::polyapprox::frontier_csv;
use farkas_core::{
    check_concave, check_consistency, check_dual_criterion, check_existence, check_grid_dual, check_grid_primal,
    check_grid_reduced, check_optimality, check_primal_criterion, check_reduced_criterion,
    check_stable_strong_duality, check_strong_duality, solve_dual, sweep, DualOutcome, Equivalence, FarkasError,
    PrimalOutcome, ProbeConfig, Rational,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use farkas_cli::instance::{parse_point, InstanceFile, Q};
use farkas_cli::render;

const OK: u8 = 0;
const INFEASIBLE: u8 = 1;
const VIOLATED: u8 = 3;
const MALFORMED: u8 = 64;
const HYPOTHESIS: u8 = 65;

const SAMPLES: usize = 50;

#[derive(Parser, Debug)]
#[command(name = "farkas", version, about = "Exact Farkas-type certificates and duality reports")]
struct Cli {
    /// Print a JSON report instead of prose.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Theorem {
    /// Implication vs full certificate, perturbation-set criterion.
    #[value(name = "1")]
    Primal,
    /// Implication vs reduced certificate, reduced criterion.
    #[value(name = "2")]
    Reduced,
    /// Implication vs full certificate, dual cone criterion.
    #[value(name = "3")]
    Dual,
    /// Upper bound `f <= 0` against `epi f*` inside `K`.
    #[value(name = "concave")]
    Concave,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridCheck {
    /// Full certificate with the box support.
    #[value(name = "7-8")]
    Primal,
    /// Reduced certificate on `C`.
    #[value(name = "7-9")]
    Reduced,
    /// Dual criterion and its tilted version.
    #[value(name = "9-10")]
    Dual,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide the implication, search for a certificate and test the criterion.
    Check {
        path: PathBuf,
        #[arg(long, value_enum)]
        theorem: Theorem,
    },
    /// Decide whether the premise set is nonempty by two routes.
    Feasible { path: PathBuf },
    /// Solve the primal and the dual problem and compare values.
    Solve { path: PathBuf },
    /// Solve the dual problem and print its multiplier decomposition.
    Dual { path: PathBuf },
    /// Check the three optimality conditions at a point.
    Optimality {
        path: PathBuf,
        /// Comma-separated coordinates, e.g. `0,1/2`.
        #[arg(long)]
        point: String,
    },
    /// Strong duality for every tilt `f - <x', .>`.
    Stable {
        path: PathBuf,
        /// JSON array of tilt vectors; defaults to the file's tilts, then a
        /// 25-point grid.
        #[arg(long)]
        tilts: Option<String>,
    },
    /// Criteria for the finite grid system of the file's `grid` block.
    Semiinf {
        #[arg(value_enum)]
        which: GridCheck,
        path: PathBuf,
    },
    /// Sweep the one-sided approximation band over the file's epsilons.
    Polyapprox {
        path: PathBuf,
        /// Destination of the frontier CSV.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a built-in instance against its frozen verdicts.
    Gallery { name: String },
}

struct Output {
    code: u8,
    prose: String,
    json: serde_json::Value,
}

impl Output {
    fn new(code: u8, prose: String, report: impl Serialize) -> Self {
        let json = serde_json::to_value(report).expect("reports always serialize");
        Output { code, prose, json }
    }
}

fn exit_code(e: &FarkasError) -> u8 {
    match e {
        FarkasError::Dimension(_) | FarkasError::Parse(_) | FarkasError::Invalid(_) => MALFORMED,
        FarkasError::Hypothesis(_) | FarkasError::Empty(_) => HYPOTHESIS,
        FarkasError::Violated(_) => VIOLATED,
    }
}

fn consistent(e: Equivalence) -> u8 {
    match e {
        Equivalence::Consistent => OK,
        Equivalence::PaperViolated => VIOLATED,
    }
}

fn seed() -> Result<u64, FarkasError> {
    match std::env::var("FARKAS_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| FarkasError::Parse(format!("FARKAS_SEED is not a u64: {s:?}"))),
        Err(_) => Ok(0),
    }
}

fn probes() -> Result<ProbeConfig, FarkasError> {
    Ok(ProbeConfig { seed: seed()?, ..ProbeConfig::default() })
}

fn cmd_check(path: &Path, theorem: Theorem) -> Result<Output, FarkasError> {
    let inst = InstanceFile::load(path)?.instance()?;
    let report = match theorem {
        Theorem::Primal => check_primal_criterion(&inst)?,
        Theorem::Reduced => check_reduced_criterion(&inst)?,
        Theorem::Dual => check_dual_criterion(&inst, probes()?)?,
        Theorem::Concave => {
            let r = check_concave(&inst)?;
            return Ok(Output::new(consistent(r.equivalence), render::concave(&r), r));
        }
    };
    Ok(Output::new(consistent(report.equivalence), render::check(&report), report))
}

fn cmd_feasible(path: &Path) -> Result<Output, FarkasError> {
    let r = check_existence(&InstanceFile::load(path)?.instance()?)?;
    let code = match (r.equivalence, r.is_feasible()) {
        (Equivalence::PaperViolated, _) => VIOLATED,
        (_, true) => OK,
        (_, false) => INFEASIBLE,
    };
    Ok(Output::new(code, render::existence(&r), r))
}

fn cmd_solve(path: &Path) -> Result<Output, FarkasError> {
    let r = check_strong_duality(&InstanceFile::load(path)?.instance()?)?;
    let code = match (r.equivalence, &r.primal) {
        (Equivalence::PaperViolated, _) => VIOLATED,
        (_, PrimalOutcome::Infeasible) => INFEASIBLE,
        _ => OK,
    };
    Ok(Output::new(code, render::strong_duality(&r), r))
}

fn cmd_dual(path: &Path) -> Result<Output, FarkasError> {
    let d = solve_dual(&InstanceFile::load(path)?.instance()?)?;
    let code = if matches!(d, DualOutcome::Infeasible) { INFEASIBLE } else { OK };
    Ok(Output::new(code, render::dual(&d), d))
}

fn cmd_optimality(path: &Path, point: &str) -> Result<Output, FarkasError> {
    let inst = InstanceFile::load(path)?.instance()?;
    let r = check_optimality(&inst, &parse_point(point)?)?;
    Ok(Output::new(consistent(r.equivalence), render::optimality(&r), r))
}

fn cmd_stable(path: &Path, tilts: Option<&str>) -> Result<Output, FarkasError> {
    let file = InstanceFile::load(path)?;
    let inst = file.instance()?;
    let seed = seed()?;
    let tilts: Vec<Vec<Rational>> = match tilts {
        Some(text) => {
            let raw: Vec<Vec<Q>> =
                serde_json::from_str(text).map_err(|e| FarkasError::Parse(format!("--tilts: {e}")))?;
            raw.into_iter().map(|v| v.into_iter().map(|q| q.0).collect()).collect()
        }
        None => match file.tilts(inst.n())? {
            Some(t) => t.into_iter().map(|(x, _)| x).collect(),
            None => tilt_grid(&mut ChaCha8Rng::seed_from_u64(seed), inst.n()),
        },
    };
    if let Some(bad) = tilts.iter().find(|t| t.len() != inst.n()) {
        return Err(FarkasError::Dimension(format!("tilt: expected {}, got {}", inst.n(), bad.len())));
    }
    let r = check_stable_strong_duality(&inst, &tilts, SAMPLES, seed)?;
    Ok(Output::new(consistent(r.equivalence), render::stable_duality(&r), r))
}

fn cmd_semiinf(path: &Path, which: GridCheck) -> Result<Output, FarkasError> {
    let file = InstanceFile::load(path)?;
    let grid = file.grid()?;
    match which {
        GridCheck::Primal | GridCheck::Reduced => {
            let r = if matches!(which, GridCheck::Primal) { check_grid_primal(&grid)? } else { check_grid_reduced(&grid)? };
            Ok(Output::new(consistent(r.report.equivalence), render::grid(&r), r))
        }
        GridCheck::Dual => {
            let tilts = match file.tilts(grid.n)? {
                Some(t) => t,
                None => tilt_grid(&mut ChaCha8Rng::seed_from_u64(seed()?), grid.n)
                    .into_iter()
                    .map(|x| (x, Rational::from_integer(0.into())))
                    .collect(),
            };
            let (r, s) = check_grid_dual(&grid, &tilts, probes()?)?;
            let ok = r.report.equivalence == Equivalence::Consistent && s.equivalence == Equivalence::Consistent;
            let prose = format!("{}\ntilted:\n{}", render::grid(&r), render::stable(&s));
            Ok(Output::new(consistent(Equivalence::from_bool(ok)), prose, json!({ "report": r, "stable": s })))
        }
    }
}

fn cmd_polyapprox(path: &Path, out: &Path) -> Result<Output, FarkasError> {
    let prob = InstanceFile::load(path)?.approx()?;
    let rows = sweep(&prob)?;
    let consistency = prob.epsilons.iter().map(|e| check_consistency(&prob, e)).collect::<Result<Vec<_>, _>>()?;
    std::fs::write(out, frontier_csv(prob.degree, &rows))
        .map_err(|e| FarkasError::Invalid(format!("cannot write {}: {e}", out.display())))?;
    let code = if consistency.iter().any(|c| c.equivalence == Equivalence::PaperViolated) {
        VIOLATED
    } else if rows.iter().all(|r| r.row().is_none()) {
        INFEASIBLE
    } else {
        OK
    };
    let mut prose = render::frontier(&rows, &consistency);
    prose.push_str(&format!("frontier written to {}\n", out.display()));
    Ok(Output::new(code, prose, json!({ "rows": rows, "consistency": consistency })))
}

fn cmd_gallery(name: &str) -> Result<Output, FarkasError> {
    let r = run_gallery(name.parse::<GalleryName>()?)?;
    let code = if r.all_match { OK } else { VIOLATED };
    Ok(Output::new(code, render::gallery(&r), r))
}

fn run(cli: &Cli) -> Result<Output, FarkasError> {
    match &cli.command {
        Command::Check { path, theorem } => cmd_check(path, *theorem),
        Command::Feasible { path } => cmd_feasible(path),
        Command::Solve { path } => cmd_solve(path),
        Command::Dual { path } => cmd_dual(path),
        Command::Optimality { path, point } => cmd_optimality(path, point),
        Command::Stable { path, tilts } => cmd_stable(path, tilts.as_deref()),
        Command::Semiinf { which, path } => cmd_semiinf(path, *which),
        Command::Polyapprox { path, out } => cmd_polyapprox(path, out),
        Command::Gallery { name } => cmd_gallery(name),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { MALFORMED } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let body = json!({ "exit": out.code, "report": out.json });
                println!("{}", serde_json::to_string_pretty(&body).expect("json values serialize"));
            } else {
                print!("{}", out.prose);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.json {
                println!("{}", json!({ "exit": code, "error": e.to_string() }));
            } else {
                eprintln!("farkas: {e}");
            }
            ExitCode::from(code)
        }
    }
}
