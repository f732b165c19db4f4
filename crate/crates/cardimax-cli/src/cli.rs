//! Command-line front end. `solve` speaks the MaxSAT-evaluation line
//! protocol ("c" comments, "o <cost>", "s <verdict>", "v <literals>") and
//! uses exit code 0 for an optimum, 20 for an unsatisfiable hard part, and
//! 1 for errors and timeouts.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use cardimax::algorithms::{solve, Algorithm, MaxSatOutcome, SolveOptions, Strategy};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::bench::{run_bench, BenchConfig};
use crate::generate::{generate_suite, write_suite, Profile};
use crate::wcnf::parse_wcnf;

pub const EXIT_OPTIMUM: i32 = 0;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_ERROR: i32 = 1;

/// Seed environment variable; an explicit `--seed` flag wins over it.
pub const SEED_ENV: &str = "CARDIMAX_SEED";

#[derive(Parser)]
#[command(name = "cardimax", version, about = "Partial MaxSAT solver with incremental cardinality constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a DIMACS WCNF instance.
    Solve {
        /// Input file in DIMACS WCNF (p wcnf) format.
        input: PathBuf,
        /// Algorithm: linear-us, fu-malik, or msu3.
        #[arg(long, default_value = "msu3")]
        algorithm: String,
        /// Strategy: none, blocking, weakening, or iterative.
        #[arg(long, default_value = "iterative")]
        strategy: String,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        timeout: Option<u64>,
        /// Print run statistics as a comment line.
        #[arg(long)]
        stats: bool,
        /// Print one comment line per main SAT call.
        #[arg(long)]
        trace: bool,
        /// Seed recorded in the output; solving itself is deterministic.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Solve every .wcnf file in a directory with every admissible
    /// algorithm/strategy pair and report solved counts and speedups.
    Bench {
        dir: PathBuf,
        /// Per-run budget in seconds.
        #[arg(long, default_value_t = 60)]
        budget: u64,
        /// Write per-run rows to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Generate a seeded instance suite into a directory.
    Generate {
        dir: PathBuf,
        /// Profile: tiny (oracle-checkable) or medium (planted optimum).
        #[arg(long, default_value = "tiny")]
        profile: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Generator seed; defaults to CARDIMAX_SEED or 1.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Runs the CLI on the given arguments and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_ERROR,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Solve { input, algorithm, strategy, timeout, stats, trace, seed } => {
            cmd_solve(&input, &algorithm, &strategy, timeout, stats, trace, seed)
        }
        Command::Bench { dir, budget, csv } => cmd_bench(&dir, budget, csv.as_deref()),
        Command::Generate { dir, profile, count, seed } => {
            cmd_generate(&dir, &profile, count, seed)
        }
    }
}

fn seed_from_env() -> Option<u64> {
    std::env::var(SEED_ENV).ok().and_then(|v| v.parse().ok())
}

fn cmd_solve(
    input: &std::path::Path,
    algorithm: &str,
    strategy: &str,
    timeout: Option<u64>,
    stats: bool,
    trace: bool,
    seed: Option<u64>,
) -> i32 {
    let Some(algorithm) = Algorithm::from_name(algorithm) else {
        eprintln!("error: unknown algorithm {algorithm:?} (expected linear-us, fu-malik, or msu3)");
        return EXIT_ERROR;
    };
    let Some(strategy) = Strategy::from_name(strategy) else {
        eprintln!("error: unknown strategy {strategy:?} (expected none, blocking, weakening, or iterative)");
        return EXIT_ERROR;
    };
    if !algorithm.admits(strategy) {
        eprintln!(
            "error: {} does not admit the {} strategy; fu-malik admits {{none, blocking}}, \
             linear-us and msu3 admit {{none, blocking, weakening, iterative}}",
            algorithm.name(),
            strategy.name()
        );
        return EXIT_ERROR;
    }
    let text = match fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: reading {}: {e}", input.display());
            return EXIT_ERROR;
        }
    };
    let doc = match parse_wcnf(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}: {e}", input.display());
            return EXIT_ERROR;
        }
    };
    let seed = seed.or_else(seed_from_env);

    println!(
        "c cardimax algorithm={} strategy={} vars={} hard={} soft={}{}",
        algorithm.name(),
        strategy.name(),
        doc.instance.num_vars(),
        doc.instance.hard().len(),
        doc.instance.soft().len(),
        seed.map(|s| format!(" seed={s}")).unwrap_or_default()
    );
    let options = SolveOptions {
        deadline: timeout.map(|secs| Instant::now() + Duration::from_secs(secs)),
    };
    match solve(&doc.instance, algorithm, strategy, &options) {
        MaxSatOutcome::Optimum(result) => {
            if trace {
                for it in &result.iterations {
                    println!("c strategy={} {}", strategy.name(), it);
                }
            }
            if stats {
                println!("c {}", result.stats);
            }
            println!("o {}", result.optimum);
            println!("s OPTIMUM FOUND");
            let values: Vec<String> = (1..=result.model.num_vars())
                .map(|i| {
                    let v = cardimax::Var::from_index(i);
                    if result.model.value(v) { i.to_string() } else { format!("-{i}") }
                })
                .collect();
            println!("v {}", values.join(" "));
            EXIT_OPTIMUM
        }
        MaxSatOutcome::Unsatisfiable { stats: run_stats } => {
            if stats {
                println!("c {run_stats}");
            }
            println!("s UNSATISFIABLE");
            EXIT_UNSAT
        }
        MaxSatOutcome::Interrupted { stats: run_stats } => {
            if stats {
                println!("c {run_stats}");
            }
            println!("c timeout after {}s", timeout.unwrap_or_default());
            println!("s UNKNOWN");
            EXIT_ERROR
        }
    }
}

fn cmd_bench(dir: &std::path::Path, budget: u64, csv: Option<&std::path::Path>) -> i32 {
    let config = BenchConfig {
        algorithms: Algorithm::ALL.to_vec(),
        budget: Duration::from_secs(budget),
    };
    let report = match run_bench(dir, &config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    if let Some(path) = csv {
        if let Err(e) = fs::write(path, report.to_csv()) {
            eprintln!("error: writing {}: {e}", path.display());
            return EXIT_ERROR;
        }
        println!("c wrote {} rows to {}", report.records.len(), path.display());
    }
    print!("{}", report.summary_table());
    EXIT_OPTIMUM
}

fn cmd_generate(dir: &std::path::Path, profile: &str, count: usize, seed: Option<u64>) -> i32 {
    let Some(profile) = Profile::from_name(profile) else {
        eprintln!("error: unknown profile {profile:?} (expected tiny or medium)");
        return EXIT_ERROR;
    };
    let seed = seed.or_else(seed_from_env).unwrap_or(1);
    let suite = generate_suite(seed, profile, count);
    match write_suite(dir, &suite) {
        Ok(paths) => {
            println!(
                "c generated {} {} instances (seed {seed}) in {}",
                paths.len(),
                profile.name(),
                dir.display()
            );
            EXIT_OPTIMUM
        }
        Err(e) => {
            eprintln!("error: writing to {}: {e}", dir.display());
            EXIT_ERROR
        }
    }
}
