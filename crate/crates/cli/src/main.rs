use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rewire::code::StabilizerCode;
use rewire::library;
use rewire::metrics::{code_distance, path_distance_profile};
use rewire::pauli::PauliOperator;
use rewire::planner::{
    constrained_path_search, decompose_with, build_plan, ConstraintSet, PlanOptions, Reduction, RewirePlan, SearchOutcome,
};
use rewire::search::Parallelism;
use rewire::sim::{
    cat_state_measure, execute_all_branches, execute_plan, extract_logical_action, prepare_codespace,
    single_error_footprint, transcript, transport, OutcomeSource, StabilizerState,
};

/// Largest plan whose outcome branches are enumerated.
const MAX_BRANCH_STEPS: usize = 12;

#[derive(Parser)]
#[command(name = "rewire", version, about = "Plan and check measurement-based conversions between stabilizer codes")]
struct Cli {
    /// Worker threads for searches and branch enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Print extra detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Row,
    Column,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a code file describes a valid stabilizer code.
    Validate { code: PathBuf },
    /// Build a measurement plan between two codes.
    Plan {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "row")]
        reduction: Direction,
    },
    /// Execute one or more chained plans on a simulated state.
    Simulate {
        #[arg(long = "plan", required = true)]
        plans: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate every outcome branch.
        #[arg(long)]
        branches: bool,
        /// Logical operator to fix at +1 before running (repeatable).
        #[arg(long = "fix-logical")]
        fix_logical: Vec<String>,
        /// Require the chained plans to act as the logical identity.
        #[arg(long)]
        round_trip: bool,
        /// Transcript file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Code distance of a code, or the distance profile along a plan.
    Distance {
        #[arg(long, conflicts_with = "plan", required_unless_present = "plan")]
        code: Option<PathBuf>,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_weight: usize,
    },
    /// Compare cat-state measurement of a generator with direct measurement.
    Catcheck {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for a plan measuring only operators from a given list.
    Constrained {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// File with one allowed Pauli operator per line.
        #[arg(long)]
        allowed: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write every built-in code as a code file.
    ExportFixtures {
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    /// Bad input: exit status 1.
    Input(String),
    /// Verification or search failure: exit status 2.
    Check(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_code(path: &Path) -> Result<StabilizerCode, Failure> {
    StabilizerCode::from_text(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_valid_code(path: &Path) -> Result<StabilizerCode, Failure> {
    let code = load_code(path)?;
    let report = code.validate();
    if !report.is_valid() {
        return Err(Failure::Input(format!("{}: {report}", path.display())));
    }
    Ok(code)
}

fn load_plan(path: &Path) -> Result<RewirePlan, Failure> {
    RewirePlan::from_text(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn validate(path: &Path) -> Outcome {
    let code = load_code(path)?;
    let report = code.validate();
    if report.is_valid() {
        println!("code={} n={} k={} valid", code.label(), code.n(), code.k());
        Ok(())
    } else {
        Err(Failure::Input(format!("code={} invalid: {report}", code.label())))
    }
}

fn plan(from: &Path, to: &Path, out: Option<&Path>, reduction: Direction, par: Parallelism, verbose: u8) -> Outcome {
    let (a, b) = (load_valid_code(from)?, load_valid_code(to)?);
    let reduction = match reduction {
        Direction::Row => Reduction::Row,
        Direction::Column => Reduction::Column,
    };
    let decomp = decompose_with(&a, &b, &PlanOptions { reduction, parallelism: par }).map_err(input)?;
    let plan = build_plan(&decomp, a.label(), b.label());
    plan.check().map_err(|e| Failure::Check(e.to_string()))?;
    let summary = format!("a={} b={} c={} N={}", decomp.a(), decomp.b(), decomp.c(), plan.len());
    if verbose > 0 {
        for step in &plan.steps {
            eprintln!("measure {} correct {}", step.measure.compact(), step.correction.compact());
        }
    }
    match out {
        Some(_) => println!("{summary}"),
        None => eprintln!("{summary}"),
    }
    write_or_print(out, &plan.to_text())
}

struct SimArgs<'a> {
    plans: &'a [PathBuf],
    seed: u64,
    branches: bool,
    fix_logical: &'a [String],
    round_trip: bool,
    out: Option<&'a Path>,
}

fn simulate(args: SimArgs<'_>, par: Parallelism) -> Outcome {
    let plans = args.plans.iter().map(|p| load_plan(p)).collect::<Result<Vec<_>, _>>()?;
    if plans.iter().any(|p| p.intermediate_codes.is_empty()) {
        return Err(Failure::Input("plan files must include their intermediate codes".into()));
    }
    let plan = RewirePlan::chain(&plans).map_err(input)?;
    let initial = plan.initial_code().expect("checked above").clone();
    let last = plan.final_code().expect("checked above").clone();
    plan.check().map_err(input)?;
    let logicals = initial.compute_logicals().map_err(input)?;
    let fixings = if args.fix_logical.is_empty() {
        logicals.iter().map(|(_, z)| z.clone()).collect::<Vec<_>>()
    } else {
        args.fix_logical
            .iter()
            .map(|s| PauliOperator::parse(s, Some(initial.n())).map_err(input))
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut state = prepare_codespace(&initial, &fixings, OutcomeSource::seeded(args.seed)).map_err(input)?;
    let start = state.clone();
    let run = execute_plan(&mut state, &plan, &logicals).map_err(|e| Failure::Check(e.to_string()))?;
    write_or_print(args.out, &transcript(args.seed, &run.records))?;

    let moved: Vec<PauliOperator> = fixings
        .iter()
        .map(|f| plan.steps.iter().fold(f.clone(), |acc, s| transport(&acc, &s.correction, &s.measure)))
        .collect();
    let holds = |s: &StabilizerState| {
        last.generators().iter().chain(&moved).all(|g| matches!(s.expectation(g), Ok(Some(1))))
    };
    let mut problems = Vec::new();
    if !holds(&state) {
        problems.push("final state is not in the final codespace with the logicals preserved".to_string());
    }
    if args.branches {
        if plan.len() > MAX_BRANCH_STEPS {
            return Err(Failure::Input(format!(
                "branch enumeration is limited to {MAX_BRANCH_STEPS} steps; plan has {}",
                plan.len()
            )));
        }
        let all = execute_all_branches(&start, &plan, par).map_err(|e| Failure::Check(e.to_string()))?;
        let reference = all[0].state.canonical();
        let identical = all.iter().all(|b| b.state.canonical() == reference);
        let ok = all.iter().all(|b| holds(&b.state));
        println!("branches={} identical={identical}", all.len());
        if !identical || !ok {
            problems.push("outcome branches disagree".into());
        }
    }
    if args.round_trip {
        if !last.same_group(&initial, true) {
            return Err(Failure::Input("round trip requires the plans to return to the initial code".into()));
        }
        let action = extract_logical_action(&initial.clone().with_logicals(logicals), &run.logicals)
            .map_err(|e| Failure::Check(e.to_string()))?;
        println!("logical_action={}", if action.is_identity() { "identity" } else { "non-identity" });
        if !action.is_identity() {
            problems.push(format!("logical action {:?} signs {:?}", action.symplectic.to_nested(), action.signs));
        }
    }
    if problems.is_empty() {
        println!("verdict=pass steps={}", plan.len());
        Ok(())
    } else {
        Err(Failure::Check(format!("verdict=fail: {}", problems.join("; "))))
    }
}

fn distance(code: Option<&Path>, plan: Option<&Path>, max_weight: usize, par: Parallelism) -> Outcome {
    let reports = match (code, plan) {
        (Some(c), _) => vec![code_distance(&load_valid_code(c)?, max_weight, par).map_err(input)?],
        (None, Some(p)) => path_distance_profile(&load_plan(p)?, max_weight, par).map_err(input)?,
        (None, None) => return Err(Failure::Input("give --code or --plan".into())),
    };
    for r in &reports {
        println!("{r}");
    }
    if reports.len() > 1 {
        let min = reports.iter().min_by_key(|r| r.at_least()).expect("non-empty");
        match min.distance {
            Some(d) => println!("profile_min={d}"),
            None => println!("profile_min=>{max_weight}"),
        }
    }
    Ok(())
}

fn catcheck(path: &Path, index: usize, trials: u64, seed: u64) -> Outcome {
    let code = load_valid_code(path)?;
    let g = code
        .generators()
        .get(index)
        .ok_or_else(|| Failure::Input(format!("generator index {index} out of range")))?
        .clone();
    // a state where the other generators hold but `g` is undetermined
    let others: Vec<PauliOperator> =
        code.generators().iter().enumerate().filter(|&(i, _)| i != index).map(|(_, h)| h.clone()).collect();
    let rest = code.with_generators(others);
    let mut discrepancies = 0;
    let mut minus = 0;
    let mut spread = 0;
    for t in 0..trials {
        let fresh = prepare_codespace(&rest, &[], OutcomeSource::seeded(seed.wrapping_add(t))).map_err(input)?;
        let mut cat = fresh.clone();
        let out = cat_state_measure(&mut cat, &g, None).map_err(input)?;
        let mut direct = fresh.clone();
        direct.set_outcomes(OutcomeSource::forced([out.outcome == -1], 0));
        let direct_outcome = direct.measure(&g).map_err(input)?;
        if direct_outcome != out.outcome || direct.canonical() != cat.canonical() {
            discrepancies += 1;
        }
        if out.outcome == -1 {
            minus += 1;
        }
        if t == 0 {
            for j in 0..g.weight() {
                let mut clean = fresh.clone();
                clean.set_outcomes(OutcomeSource::seeded(seed ^ j as u64));
                let mut dirty = clean.clone();
                cat_state_measure(&mut clean, &g, None).map_err(input)?;
                cat_state_measure(&mut dirty, &g, Some(j)).map_err(input)?;
                spread = spread.max(single_error_footprint(&clean, &dirty, 1).map_or(usize::MAX, |e| e.weight()));
            }
        }
    }
    let spread_text = if spread == usize::MAX { ">1".to_string() } else { spread.to_string() };
    println!(
        "operator={} trials={trials} minus_outcomes={minus} discrepancies={discrepancies} ancilla_error_spread={spread_text}",
        g.compact()
    );
    if discrepancies > 0 || spread > 1 {
        return Err(Failure::Check("cat-state measurement differs from direct measurement".into()));
    }
    println!("verdict=equivalent");
    Ok(())
}

fn constrained(from: &Path, to: &Path, allowed: &Path, depth: usize, out: Option<&Path>, par: Parallelism) -> Outcome {
    let (a, b) = (load_valid_code(from)?, load_valid_code(to)?);
    let n = a.n().max(b.n());
    let ops = read(allowed)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| PauliOperator::parse(l, Some(n)).map_err(input))
        .collect::<Result<Vec<_>, _>>()?;
    let set = ConstraintSet { allowed: ops, depth_bound: depth };
    match constrained_path_search(&a, &b, &set, par).map_err(input)? {
        SearchOutcome::Found(plan) => {
            match out {
                Some(_) => println!("verdict=found steps={}", plan.len()),
                None => eprintln!("verdict=found steps={}", plan.len()),
            }
            write_or_print(out, &plan.to_text())
        }
        SearchOutcome::NecessaryConditionFails => {
            println!("verdict=necessary-condition-fails");
            Err(Failure::Check("some target generator is outside the reachable span".into()))
        }
        SearchOutcome::NotFoundWithinBound => {
            println!("verdict=not-found depth={depth}");
            Err(Failure::Check(format!("no plan within {depth} steps")))
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if cli.jobs == 0 {
        return Err(Failure::Input("--jobs must be at least 1".into()));
    }
    // a second initialization in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    let par = if cli.jobs > 1 { Parallelism::Parallel } else { Parallelism::Sequential };
    match cli.command {
        Command::Validate { code } => validate(&code),
        Command::Plan { from, to, out, reduction } => plan(&from, &to, out.as_deref(), reduction, par, cli.verbose),
        Command::Simulate { plans, seed, branches, fix_logical, round_trip, out } => simulate(
            SimArgs { plans: &plans, seed, branches, fix_logical: &fix_logical, round_trip, out: out.as_deref() },
            par,
        ),
        Command::Distance { code, plan, max_weight } => distance(code.as_deref(), plan.as_deref(), max_weight, par),
        Command::Catcheck { code, index, trials, seed } => catcheck(&code, index, trials, seed),
        Command::Constrained { from, to, allowed, depth, out } => {
            constrained(&from, &to, &allowed, depth, out.as_deref(), par)
        }
        Command::ExportFixtures { out } => {
            library::export_fixtures(&out).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            println!("wrote {} fixtures to {}", library::fixtures().len(), out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
