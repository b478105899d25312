//! rumorsim: run rumor-propagation simulations, inspect colony homogeneity,
//! validate scenarios, sweep seeds and dump the built-in examples.

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use rumor_colony::{
    builtin_example, heterogeneity, homogeneity, load_scenario_path, run, scenario_from,
    validate_colony, write_scenario, write_scenario_path, write_trace, write_trace_path,
    AcceptMode, Colony, RunConfig, ScenarioError, Trace, ValidationReport,
};

#[derive(Parser)]
#[command(
    name = "rumorsim",
    about = "Rumor propagation over trust-weighted agent colonies",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write its trace
    Run(RunArgs),
    /// Print homogeneity and the pairwise heterogeneity matrix (no simulation)
    Homogeneity(SourceArgs),
    /// Check a scenario against the structural and trust assumptions
    Validate(SourceArgs),
    /// Run a range of seeds and aggregate convergence statistics
    Sweep(SweepArgs),
    /// Write a built-in example as a scenario file
    Example(ExampleArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Scenario file to load
    #[arg(long, conflicts_with = "example")]
    scenario: Option<PathBuf>,
    /// Built-in example number (1..7)
    #[arg(long)]
    example: Option<u32>,
}

#[derive(Args)]
struct OverrideArgs {
    /// Generation budget (default: scenario setting, 5000 for examples)
    #[arg(long)]
    generations: Option<u64>,
    /// Accept-ratio mode: eq8 | alg5
    #[arg(long)]
    mode: Option<String>,
    /// Override every agent's accepting threshold
    #[arg(long)]
    threshold: Option<f64>,
    /// Stability window in generations (default: 20 per agent)
    #[arg(long)]
    window: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Random seed (overrides the scenario default)
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    overrides: OverrideArgs,
    /// Trace output path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Inclusive seed range, e.g. 0..99
    #[arg(long)]
    seeds: String,
    #[command(flatten)]
    overrides: OverrideArgs,
    /// Directory for per-seed traces and the summary table
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ExampleArgs {
    /// Built-in example number (1..7)
    number: u32,
    /// Output path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failures mapped to exit codes: usage and scenario problems exit 1,
/// filesystem problems exit 2.
enum CliError {
    Usage(String),
    Io(String),
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Io(inner) => CliError::Io(inner.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Homogeneity(args) => cmd_homogeneity(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Example(args) => cmd_example(args),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Io(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Loaded source plus the nominal homogeneity when it came from a fixture.
struct Source {
    colony: Colony,
    run: RunConfig,
    report: ValidationReport,
    nominal_homogeneity: Option<f64>,
    notes: Vec<String>,
}

fn load_source(args: &SourceArgs) -> Result<Source, CliError> {
    match (&args.scenario, args.example) {
        (Some(path), None) => {
            let loaded = load_scenario_path(path)?;
            Ok(Source {
                colony: loaded.colony,
                run: loaded.run,
                report: loaded.report,
                nominal_homogeneity: None,
                notes: Vec::new(),
            })
        }
        (None, Some(n)) => {
            let ex = builtin_example(n)
                .ok_or_else(|| CliError::Usage("example out of range (1..7)".to_string()))?;
            let report = validate_colony(&ex.colony);
            Ok(Source {
                colony: ex.colony,
                run: ex.run,
                report,
                nominal_homogeneity: Some(ex.nominal_homogeneity),
                notes: ex.notes,
            })
        }
        (None, None) => Err(CliError::Usage(
            "provide --scenario <path> or --example <1..7>".to_string(),
        )),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "provide either --scenario or --example, not both".to_string(),
        )),
    }
}

fn apply_overrides(source: &mut Source, overrides: &OverrideArgs) -> Result<(), CliError> {
    if let Some(generations) = overrides.generations {
        if generations == 0 {
            return Err(CliError::Usage(
                "generations must be at least 1".to_string(),
            ));
        }
        source.run.generations = generations;
    }
    if let Some(mode) = &overrides.mode {
        source.run.accept_mode = AcceptMode::from_str(mode).map_err(CliError::Usage)?;
    }
    if let Some(window) = overrides.window {
        if window == 0 {
            return Err(CliError::Usage("window must be at least 1".to_string()));
        }
        source.run.stability_window = Some(window);
    }
    if let Some(threshold) = overrides.threshold {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(CliError::Usage(format!(
                "threshold {threshold} is outside [0, 1]"
            )));
        }
        for agent in &mut source.colony.agents {
            agent.accept_threshold = threshold;
        }
    }
    Ok(())
}

fn summary_line(trace: &Trace) -> String {
    match trace.converged_at {
        Some(m) => format!("h_C={} converged_at={m}", trace.homogeneity),
        None => format!("h_C={} converged_at=none", trace.homogeneity),
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, CliError> {
    let mut source = load_source(&args.source)?;
    apply_overrides(&mut source, &args.overrides)?;
    if let Some(seed) = args.seed {
        source.run.seed = seed;
    }
    let trace = run(source.colony, &source.run);
    match &args.out {
        Some(path) => write_trace_path(&trace, path)?,
        None => {
            let stdout = io::stdout();
            write_trace(&trace, stdout.lock())?;
        }
    }
    println!("{}", summary_line(&trace));
    Ok(ExitCode::SUCCESS)
}

fn cmd_homogeneity(args: SourceArgs) -> Result<ExitCode, CliError> {
    let source = load_source(&args)?;
    let colony = &source.colony;
    let h = homogeneity(colony);
    println!("h_C={h}");
    let ids: Vec<String> = colony.agents.iter().map(|a| a.id.to_string()).collect();
    println!("agents: {}", ids.join(" "));
    println!("H:");
    let n = colony.agent_count();
    for a in 0..n {
        let row: Vec<String> = (0..n)
            .map(|b| heterogeneity(colony, a, b).to_string())
            .collect();
        println!("{}", row.join(" "));
    }
    if let Some(nominal) = source.nominal_homogeneity {
        let tolerance = (0.05 * nominal).max(1e-9);
        if (h - nominal).abs() > tolerance {
            eprintln!(
                "warning: computed h_C={h} differs from the example's nominal value {nominal}"
            );
            for note in &source.notes {
                eprintln!("note: {note}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(args: SourceArgs) -> Result<ExitCode, CliError> {
    let source = load_source(&args)?;
    let report = &source.report;
    if report.desire_overlaps.is_empty() {
        println!("desires: ok");
    } else {
        println!("desires: {} overlap error(s)", report.desire_overlaps.len());
        for overlap in &report.desire_overlaps {
            let props: Vec<String> = overlap
                .propositions
                .iter()
                .map(|&k| source.colony.space.name(k).to_string())
                .collect();
            println!("  agent {} overlaps on {}", overlap.agent, props.join(", "));
        }
    }
    if report.dimension_mismatches.is_empty() {
        println!("dimensions: ok");
    } else {
        println!("dimensions: {} error(s)", report.dimension_mismatches.len());
        for problem in &report.dimension_mismatches {
            println!("  {problem}");
        }
    }
    if report.diagonal_violations.is_empty() {
        println!("self-trust: ok");
    } else {
        println!(
            "self-trust: {} warning(s), agents {:?}",
            report.diagonal_violations.len(),
            report.diagonal_violations
        );
    }
    if report.relative_trust_violations.is_empty() {
        println!("relative trust: ok");
    } else {
        println!(
            "relative trust: {} warning(s)",
            report.relative_trust_violations.len()
        );
        for v in &report.relative_trust_violations {
            println!(
                "  ({},{},{}): direct {} < relayed {}",
                v.a, v.b, v.c, v.direct, v.relayed
            );
        }
    }
    let errors = report.error_count();
    let warnings = report.warning_count();
    println!("result: {} error(s), {} warning(s)", errors, warnings);
    if errors == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

/// Inclusive range written as `a..b`.
fn parse_seed_range(text: &str) -> Result<(u64, u64), CliError> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| CliError::Usage(format!("bad seed range {text:?} (expected a..b)")))?;
    let lo: u64 = lo
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad seed range start {lo:?}")))?;
    let hi: u64 = hi
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad seed range end {hi:?}")))?;
    if lo > hi {
        return Err(CliError::Usage(format!(
            "empty seed range {text:?} (start exceeds end)"
        )));
    }
    Ok((lo, hi))
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, CliError> {
    let mut source = load_source(&args.source)?;
    apply_overrides(&mut source, &args.overrides)?;
    let (lo, hi) = parse_seed_range(&args.seeds)?;
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut converged = 0u64;
    let mut converged_sum = 0u64;
    let mut rows = Vec::new();
    let total = hi - lo + 1;
    for seed in lo..=hi {
        let config = RunConfig {
            seed,
            ..source.run.clone()
        };
        let trace = run(source.colony.clone(), &config);
        if let Some(m) = trace.converged_at {
            converged += 1;
            converged_sum += m;
        }
        rows.push((seed, trace.homogeneity, trace.converged_at));
        if let Some(dir) = &args.out_dir {
            write_trace_path(&trace, dir.join(format!("trace-{seed}.csv")))?;
        }
    }
    if let Some(dir) = &args.out_dir {
        let mut summary = String::from("seed,h_C,converged_at\n");
        for (seed, h, m) in &rows {
            match m {
                Some(m) => summary.push_str(&format!("{seed},{h},{m}\n")),
                None => summary.push_str(&format!("{seed},{h},none\n")),
            }
        }
        std::fs::write(dir.join("summary.csv"), summary)?;
    }
    let fraction = converged as f64 / total as f64;
    let mean = if converged > 0 {
        format!("{}", converged_sum as f64 / converged as f64)
    } else {
        "none".to_string()
    };
    println!("seeds={total} converged={converged} fraction={fraction} mean_converged_at={mean}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_example(args: ExampleArgs) -> Result<ExitCode, CliError> {
    let ex = builtin_example(args.number)
        .ok_or_else(|| CliError::Usage("example out of range (1..7)".to_string()))?;
    let file = scenario_from(&ex.colony, &ex.run, ex.notes);
    match &args.out {
        Some(path) => write_scenario_path(&file, path)?,
        None => {
            let stdout = io::stdout();
            write_scenario(&file, stdout.lock())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
