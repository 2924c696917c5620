//! Command-line front end: generate instances, run any solver, run the
//! exhaustive oracle, and emit comparison reports that certify the
//! approximation bounds with exact arithmetic.
//!
//! Exit codes: 0 solution, 2 proven infeasibility, 3 undecided
//! (cutting-plane iteration cap), 1 usage or IO error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use priosup::instance::{generate_random, GeneratorConfig, Geometry, Instance, RadiusMode};
use priosup::oracle::{brute_force_opt, ConstraintKind, OracleResult};
use priosup::rational::{format_rat, parse_rat, Rat};
use priosup::solvers::{
    bound_for_algorithm, certify, solve_ksupplier_outliers, solve_pcks, solve_pknapso,
    solve_pkso, solve_pkso_powers_of_b, solve_pkso_three_radii, solve_pkso_two_radii,
    solve_upcks_two_colors, KnapsackBackend, Solution, SolveError,
};

#[derive(Parser)]
#[command(name = "priosup", version, about = "Priority supplier solvers with exact certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance on an integer line or grid (L1 metric).
    Generate(GenerateArgs),
    /// Run a solver through the decision-version alpha search.
    Solve(SolveArgs),
    /// Exhaustive optimum by facility-subset enumeration.
    Oracle(OracleArgs),
    /// Run a solver and the oracle; certify the algorithm's bound.
    Compare(CompareArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    clients: usize,
    #[arg(long)]
    facilities: usize,
    #[arg(long, default_value_t = 1)]
    colors: usize,
    #[arg(long)]
    k: u64,
    /// Comma-separated radii to draw from, e.g. "1,2,5" or "1/2,3".
    #[arg(long, default_value = "1")]
    radius_set: String,
    /// One radius per color (UPCkS-style); overrides --radius-set.
    #[arg(long)]
    radius_per_color: Option<String>,
    /// Cycle deterministically through --radius-set instead of sampling.
    #[arg(long, default_value_t = false)]
    radius_cycle: bool,
    /// Comma-separated per-color coverage fractions, e.g. "1/2,2/3".
    #[arg(long, default_value = "1/2")]
    requirements: String,
    #[arg(long)]
    seed: u64,
    /// Place points on a line of this span instead of a grid.
    #[arg(long)]
    line: Option<u64>,
    /// Grid span (points in [0,span]^2, L1 distance).
    #[arg(long, default_value_t = 20)]
    grid: u64,
    /// Draw facility weights uniformly from 0..=MAX (default: all 1).
    #[arg(long)]
    weight_max: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    #[value(name = "ksupplier-outliers")]
    KsupplierOutliers,
    Pkso,
    #[value(name = "pkso-powers")]
    PksoPowers,
    #[value(name = "pkso-2radii")]
    Pkso2Radii,
    #[value(name = "pkso-3radii")]
    Pkso3Radii,
    Pknapso,
    Pcks,
    Upcks2,
}

impl Algo {
    fn tag(self) -> &'static str {
        match self {
            Algo::KsupplierOutliers => "ksupplier-outliers",
            Algo::Pkso => "pkso",
            Algo::PksoPowers => "pkso-powers",
            Algo::Pkso2Radii => "pkso-2radii",
            Algo::Pkso3Radii => "pkso-3radii",
            Algo::Pknapso => "pknapso",
            Algo::Pcks => "pcks",
            Algo::Upcks2 => "upcks2",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Auto,
    Explicit,
    Cutting,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    algo: Algo,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Power base for pkso-powers, as a rational ("2" or "3/2").
    #[arg(long)]
    b: Option<String>,
    /// Configuration-polytope access for pknapso.
    #[arg(long, default_value = "auto")]
    backend: BackendArg,
    /// Cutting-plane iteration cap.
    #[arg(long, default_value_t = 500)]
    iteration_cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstraintArg {
    Cardinality,
    Knapsack,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "cardinality")]
    constraint: ConstraintArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    algo: Algo,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long, default_value = "auto")]
    backend: BackendArg,
    #[arg(long, default_value_t = 500)]
    iteration_cap: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit 2 on usage errors; the exit-code contract
            // reserves 2 for infeasibility
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_rat_list(s: &str) -> Result<Vec<Rat>, String> {
    s.split(',').map(|t| parse_rat(t.trim())).collect()
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("writing {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &PathBuf) -> Result<Instance, String> {
    let bytes = fs::read(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    Instance::from_json(&bytes).map_err(|e| e.to_string())
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode, String> {
    let radii = match &args.radius_per_color {
        Some(s) => RadiusMode::PerColor(parse_rat_list(s)?),
        None => {
            let set = parse_rat_list(&args.radius_set)?;
            if args.radius_cycle {
                RadiusMode::Cycle(set)
            } else {
                RadiusMode::Set(set)
            }
        }
    };
    let mut fractions = parse_rat_list(&args.requirements)?;
    if fractions.len() == 1 && args.colors > 1 {
        fractions = vec![fractions[0].clone(); args.colors];
    }
    let config = GeneratorConfig {
        clients: args.clients,
        facilities: args.facilities,
        colors: args.colors,
        k: args.k,
        geometry: match args.line {
            Some(span) => Geometry::Line { span },
            None => Geometry::Grid { span: args.grid },
        },
        radii,
        requirement_fractions: fractions,
        weight_max: args.weight_max,
    };
    let inst = generate_random(&config, args.seed).map_err(|e| e.to_string())?;
    fs::write(&args.out, inst.to_json_string())
        .map_err(|e| format!("writing {}: {e}", args.out.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn run_solver(
    algo: Algo,
    inst: &Instance,
    b: Option<&Rat>,
    backend: BackendArg,
    iteration_cap: usize,
) -> Result<Solution, SolveError> {
    match algo {
        Algo::KsupplierOutliers => solve_ksupplier_outliers(inst),
        Algo::Pkso => solve_pkso(inst),
        Algo::PksoPowers => {
            let b = b.ok_or_else(|| SolveError::Precondition("pkso-powers requires --b".into()))?;
            solve_pkso_powers_of_b(inst, b)
        }
        Algo::Pkso2Radii => solve_pkso_two_radii(inst),
        Algo::Pkso3Radii => solve_pkso_three_radii(inst),
        Algo::Pknapso => {
            let backend = match backend {
                BackendArg::Explicit => KnapsackBackend::Explicit,
                BackendArg::Cutting => KnapsackBackend::CuttingPlane { iteration_cap },
                BackendArg::Auto => {
                    if inst.n_facilities() <= 15 {
                        KnapsackBackend::Explicit
                    } else {
                        KnapsackBackend::CuttingPlane { iteration_cap }
                    }
                }
            };
            solve_pknapso(inst, backend)
        }
        Algo::Pcks => solve_pcks(inst),
        Algo::Upcks2 => solve_upcks_two_colors(inst),
    }
}

fn solve_exit(err: &SolveError) -> ExitCode {
    match err {
        SolveError::Infeasible { .. } => ExitCode::from(2),
        SolveError::Undecided { .. } => ExitCode::from(3),
        _ => ExitCode::from(1),
    }
}

fn parse_b(b: &Option<String>) -> Result<Option<Rat>, String> {
    b.as_deref().map(parse_rat).transpose()
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, String> {
    let inst = load_instance(&args.input)?;
    let b = parse_b(&args.b)?;
    match run_solver(args.algo, &inst, b.as_ref(), args.backend, args.iteration_cap) {
        Ok(sol) => {
            let mut text = serde_json::to_string_pretty(&sol.to_json(&inst))
                .expect("solution serialization");
            text.push('\n');
            write_output(args.out.as_ref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(solve_exit(&e))
        }
    }
}

fn oracle_json(inst: &Instance, res: &OracleResult) -> serde_json::Value {
    serde_json::json!({
        "optimal_alpha": format_rat(&res.optimal_alpha),
        "witness": res.witness.iter().map(|&f| inst.facilities[f].id.clone()).collect::<Vec<_>>(),
        "enumerated": res.enumerated,
    })
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode, String> {
    let inst = load_instance(&args.input)?;
    let constraint = match args.constraint {
        ConstraintArg::Cardinality => ConstraintKind::Cardinality,
        ConstraintArg::Knapsack => ConstraintKind::Knapsack,
    };
    match brute_force_opt(&inst, constraint) {
        Ok(res) => {
            let mut text =
                serde_json::to_string_pretty(&oracle_json(&inst, &res)).expect("oracle json");
            text.push('\n');
            write_output(args.out.as_ref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(priosup::oracle::OracleError::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            Ok(ExitCode::from(2))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn instance_digest(inst: &Instance) -> String {
    let canonical = inst.to_json_string();
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn cmd_compare(args: CompareArgs) -> Result<ExitCode, String> {
    let inst = load_instance(&args.input)?;
    let b = parse_b(&args.b)?;
    let sol = match run_solver(args.algo, &inst, b.as_ref(), args.backend, args.iteration_cap) {
        Ok(sol) => sol,
        Err(e) => {
            eprintln!("{e}");
            return Ok(solve_exit(&e));
        }
    };
    let constraint = if args.algo == Algo::Pknapso {
        ConstraintKind::Knapsack
    } else {
        ConstraintKind::Cardinality
    };
    let oracle = brute_force_opt(&inst, constraint).map_err(|e| e.to_string())?;
    let bound = bound_for_algorithm(args.algo.tag(), b.as_ref())
        .ok_or_else(|| format!("no certified bound for {}", args.algo.tag()))?;
    let cert = certify(&sol, bound, &oracle.optimal_alpha);
    let report = serde_json::json!({
        "instance_digest": instance_digest(&inst),
        "algorithm": args.algo.tag(),
        "solution": sol.to_json(&inst),
        "oracle": oracle_json(&inst, &oracle),
        "certified_bound": {
            "bound": cert.guarantee.label(),
            "pass": cert.pass,
            "lp_alpha": format_rat(&cert.lp_alpha),
        },
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report json");
    text.push('\n');
    write_output(args.out.as_ref(), &text)?;
    Ok(ExitCode::SUCCESS)
}
