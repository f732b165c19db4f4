//! Benchmark runner: every `.wcnf` file in a directory is solved by every
//! admissible algorithm/strategy pair within a per-run budget, the optima
//! are cross-checked, and the results come out as CSV rows plus a rendered
//! summary (solved counts and median speedups against the non-incremental
//! strategy of each algorithm).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use cardimax::algorithms::{solve, Algorithm, MaxSatOutcome, SolveOptions, Strategy};
use cardimax::stats::RunStats;
use thiserror::Error;

use crate::wcnf::{parse_wcnf, WcnfError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parsing {path}: {source}")]
    Parse { path: PathBuf, source: WcnfError },
    /// Two admissible combinations disagree on an instance: a correctness
    /// bug, so the whole report aborts.
    #[error("optima disagree on {instance}: {details}")]
    OptimaMismatch { instance: String, details: String },
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    /// Per-run wall-clock budget.
    pub budget: Duration,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { algorithms: Algorithm::ALL.to_vec(), budget: Duration::from_secs(60) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunStatus {
    Optimum(usize),
    Unsatisfiable,
    Timeout,
}

impl RunStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RunStatus::Optimum(_) => "optimum",
            RunStatus::Unsatisfiable => "unsat",
            RunStatus::Timeout => "timeout",
        }
    }

    pub fn solved(&self) -> bool {
        !matches!(self, RunStatus::Timeout)
    }
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: Algorithm,
    pub strategy: Strategy,
    pub status: RunStatus,
    pub time: Duration,
    pub stats: RunStats,
}

#[derive(Debug, Clone)]
pub struct ComboSummary {
    pub algorithm: Algorithm,
    pub strategy: Strategy,
    pub solved: usize,
    /// Median of `time(NonIncremental) / time(strategy)` over the
    /// instances solved by every strategy of this algorithm; `None` for
    /// the non-incremental baseline itself or when that set is empty.
    pub median_speedup: Option<f64>,
    pub total_conflicts: u64,
    pub total_clauses: u64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub records: Vec<RunRecord>,
    pub summaries: Vec<ComboSummary>,
}

pub fn run_bench(dir: &Path, config: &BenchConfig) -> Result<BenchReport, BenchError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|source| BenchError::Io { path: dir.to_path_buf(), source })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "wcnf"))
        .collect();
    files.sort();

    let mut records = Vec::new();
    for path in &files {
        let text = fs::read_to_string(path)
            .map_err(|source| BenchError::Io { path: path.clone(), source })?;
        let doc = parse_wcnf(&text)
            .map_err(|source| BenchError::Parse { path: path.clone(), source })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();

        let mut verdicts: Vec<(String, RunStatus)> = Vec::new();
        for algorithm in &config.algorithms {
            for strategy in algorithm.admissible_strategies() {
                let options = SolveOptions { deadline: Some(Instant::now() + config.budget) };
                let outcome = solve(&doc.instance, *algorithm, strategy, &options);
                let (status, stats) = match outcome {
                    MaxSatOutcome::Optimum(r) => (RunStatus::Optimum(r.optimum), r.stats),
                    MaxSatOutcome::Unsatisfiable { stats } => (RunStatus::Unsatisfiable, stats),
                    MaxSatOutcome::Interrupted { stats } => (RunStatus::Timeout, stats),
                };
                if status.solved() {
                    verdicts.push((
                        format!("{}/{}", algorithm.name(), strategy.name()),
                        status.clone(),
                    ));
                }
                records.push(RunRecord {
                    instance: name.clone(),
                    algorithm: *algorithm,
                    strategy,
                    status,
                    time: stats.wall_time,
                    stats,
                });
            }
        }
        check_agreement(&name, &verdicts)?;
    }

    let summaries = summarize(&records, &config.algorithms);
    Ok(BenchReport { records, summaries })
}

fn check_agreement(instance: &str, verdicts: &[(String, RunStatus)]) -> Result<(), BenchError> {
    let mut first: Option<&(String, RunStatus)> = None;
    for v in verdicts {
        match first {
            None => first = Some(v),
            Some(f) if f.1 == v.1 => {}
            Some(f) => {
                return Err(BenchError::OptimaMismatch {
                    instance: instance.to_string(),
                    details: format!("{} says {:?}, {} says {:?}", f.0, f.1, v.0, v.1),
                });
            }
        }
    }
    Ok(())
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = xs.len() / 2;
    Some(if xs.len() % 2 == 1 { xs[mid] } else { (xs[mid - 1] + xs[mid]) / 2.0 })
}

fn summarize(records: &[RunRecord], algorithms: &[Algorithm]) -> Vec<ComboSummary> {
    let mut out = Vec::new();
    for &algorithm in algorithms {
        let strategies = algorithm.admissible_strategies();
        // Instances solved by every strategy of this algorithm.
        let instances: Vec<&str> = {
            let mut names: Vec<&str> = records
                .iter()
                .filter(|r| r.algorithm == algorithm)
                .map(|r| r.instance.as_str())
                .collect();
            names.sort();
            names.dedup();
            names
                .into_iter()
                .filter(|name| {
                    strategies.iter().all(|&s| {
                        records.iter().any(|r| {
                            r.algorithm == algorithm
                                && r.strategy == s
                                && r.instance == *name
                                && r.status.solved()
                        })
                    })
                })
                .collect()
        };
        let time_of = |name: &str, s: Strategy| -> f64 {
            records
                .iter()
                .find(|r| r.algorithm == algorithm && r.strategy == s && r.instance == name)
                .map(|r| r.time.as_secs_f64().max(1e-7))
                .unwrap_or(f64::NAN)
        };
        for &strategy in &strategies {
            let runs: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.algorithm == algorithm && r.strategy == strategy)
                .collect();
            let solved = runs.iter().filter(|r| r.status.solved()).count();
            let median_speedup = if strategy == Strategy::NonIncremental {
                None
            } else {
                median(
                    instances
                        .iter()
                        .map(|name| {
                            time_of(name, Strategy::NonIncremental) / time_of(name, strategy)
                        })
                        .collect(),
                )
            };
            out.push(ComboSummary {
                algorithm,
                strategy,
                solved,
                median_speedup,
                total_conflicts: runs.iter().map(|r| r.stats.conflicts).sum(),
                total_clauses: runs.iter().map(|r| r.stats.clauses_emitted).sum(),
            });
        }
    }
    out
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("instance,algorithm,strategy,status,time,sat_calls,conflicts,clauses_emitted,solver_instances\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.6},{},{},{},{}",
                r.instance,
                r.algorithm.name(),
                r.strategy.name(),
                r.status.label(),
                r.time.as_secs_f64(),
                r.stats.sat_calls,
                r.stats.conflicts,
                r.stats.clauses_emitted,
                r.stats.solver_instances
            );
        }
        out
    }

    /// Solved counts and median speedups per algorithm row, one strategy
    /// pair of columns each.
    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:>14} {:>9} {:>14} {:>9} {:>14} {:>9} {:>14} {:>9}",
            "", "none #inst", "speedup", "block #inst", "speedup", "weak #inst", "speedup", "iter #inst", "speedup"
        );
        for &algorithm in &Algorithm::ALL {
            let row: Vec<&ComboSummary> = self
                .summaries
                .iter()
                .filter(|s| s.algorithm == algorithm)
                .collect();
            if row.is_empty() {
                continue;
            }
            let cell = |strategy: Strategy| -> (String, String) {
                match row.iter().find(|s| s.strategy == strategy) {
                    None => ("-".to_string(), "-".to_string()),
                    Some(s) => (
                        s.solved.to_string(),
                        match s.median_speedup {
                            None if strategy == Strategy::NonIncremental => "1.0".to_string(),
                            None => "-".to_string(),
                            Some(x) => format!("{x:.1}"),
                        },
                    ),
                }
            };
            let cells: Vec<(String, String)> = Strategy::ALL.iter().map(|&s| cell(s)).collect();
            let _ = writeln!(
                out,
                "{:<10} {:>14} {:>9} {:>14} {:>9} {:>14} {:>9} {:>14} {:>9}",
                algorithm.name(),
                cells[0].0,
                cells[0].1,
                cells[1].0,
                cells[1].1,
                cells[2].0,
                cells[2].1,
                cells[3].0,
                cells[3].1
            );
        }
        out
    }
}
