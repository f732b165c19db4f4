//! Core-guided MaxSAT algorithm drivers.
//!
//! Three algorithms (linear unsat-sat search, Fu-Malik, MSU3) are each
//! parameterized by a strategy describing how cardinality constraints and
//! the SAT solver are reused across iterations:
//!
//! - `NonIncremental`: a fresh solver and a fresh encoding every iteration.
//! - `Blocking`: one solver; each iteration's encoding is extended with a
//!   fresh blocking literal, enabled by assumption and permanently disabled
//!   by a unit clause once the iteration is over.
//! - `Weakening`: one solver; the encoding is built once at a conservative
//!   upper bound obtained from a model of the hard clauses, and the
//!   per-iteration bound is selected with output-literal assumptions.
//! - `Iterative`: one solver; a single totalizer tree is kept and its bound
//!   raised (and, for MSU3, merged with subtrees over newly relaxed
//!   clauses), emitting only the clause difference.
//!
//! All admissible algorithm/strategy combinations compute the same optimum;
//! they differ in solver instantiations, clause volume, and speed. Fu-Malik
//! only admits `NonIncremental` and `Blocking` since it modifies soft
//! clauses across iterations instead of updating one cardinality constraint.

mod fu_malik;
mod linear_us;
mod msu3;

use std::collections::HashMap;
use std::time::Instant;

use crate::solver::{SolveResult, Solver};
use crate::stats::{IterationTrace, RunStats};
use crate::totalizer::ClauseSink;
use crate::types::{cost, Lit, MaxSatResult, Model, Var, WcnfInstance};

/// How solver state and cardinality encodings carry across iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    NonIncremental,
    Blocking,
    Weakening,
    Iterative,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::NonIncremental,
        Strategy::Blocking,
        Strategy::Weakening,
        Strategy::Iterative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::NonIncremental => "none",
            Strategy::Blocking => "blocking",
            Strategy::Weakening => "weakening",
            Strategy::Iterative => "iterative",
        }
    }

    pub fn from_name(name: &str) -> Option<Strategy> {
        Strategy::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// The MaxSAT search algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    LinearUs,
    FuMalik,
    Msu3,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::LinearUs, Algorithm::FuMalik, Algorithm::Msu3];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LinearUs => "linear-us",
            Algorithm::FuMalik => "fu-malik",
            Algorithm::Msu3 => "msu3",
        }
    }

    pub fn from_name(name: &str) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.name() == name)
    }

    /// Applicability matrix: Fu-Malik admits only `NonIncremental` and
    /// `Blocking`; the other algorithms admit every strategy.
    pub fn admits(self, strategy: Strategy) -> bool {
        match self {
            Algorithm::FuMalik => {
                matches!(strategy, Strategy::NonIncremental | Strategy::Blocking)
            }
            _ => true,
        }
    }

    /// The strategies this algorithm admits, in canonical order.
    pub fn admissible_strategies(self) -> Vec<Strategy> {
        Strategy::ALL.into_iter().filter(|&s| self.admits(s)).collect()
    }
}

/// Options shared by all drivers.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Cooperative deadline; the backend checks it every 1024 conflicts.
    pub deadline: Option<Instant>,
}

/// Verdict of a MaxSAT solve.
#[derive(Debug, Clone)]
pub enum MaxSatOutcome {
    Optimum(MaxSatResult),
    /// The hard clauses alone are unsatisfiable.
    Unsatisfiable { stats: RunStats },
    /// The deadline expired before a verdict.
    Interrupted { stats: RunStats },
}

impl MaxSatOutcome {
    pub fn stats(&self) -> &RunStats {
        match self {
            MaxSatOutcome::Optimum(r) => &r.stats,
            MaxSatOutcome::Unsatisfiable { stats } => stats,
            MaxSatOutcome::Interrupted { stats } => stats,
        }
    }
}

/// Runs `algorithm` under `strategy`.
///
/// Panics if the pair is inadmissible (see [`Algorithm::admits`]).
pub fn solve(
    instance: &WcnfInstance,
    algorithm: Algorithm,
    strategy: Strategy,
    options: &SolveOptions,
) -> MaxSatOutcome {
    assert!(
        algorithm.admits(strategy),
        "{} does not admit the {} strategy",
        algorithm.name(),
        strategy.name()
    );
    match algorithm {
        Algorithm::LinearUs => linear_us::solve(instance, strategy, options),
        Algorithm::FuMalik => fu_malik::solve(instance, strategy, options),
        Algorithm::Msu3 => msu3::solve(instance, strategy, options),
    }
}

/// Linear unsat-sat search: relax every soft clause up front and raise the
/// bound by one per unsatisfiable iteration.
pub fn solve_linear_us(
    instance: &WcnfInstance,
    strategy: Strategy,
    options: &SolveOptions,
) -> MaxSatOutcome {
    solve(instance, Algorithm::LinearUs, strategy, options)
}

/// Fu-Malik: relax the soft clauses of each unsatisfiable core with fresh
/// relaxation variables tied by an at-most-one constraint.
pub fn solve_fu_malik(
    instance: &WcnfInstance,
    strategy: Strategy,
    options: &SolveOptions,
) -> MaxSatOutcome {
    solve(instance, Algorithm::FuMalik, strategy, options)
}

/// MSU3: grow the set of relaxed soft clauses from unsatisfiable cores and
/// bound their sum by the number of iterations.
pub fn solve_msu3(
    instance: &WcnfInstance,
    strategy: Strategy,
    options: &SolveOptions,
) -> MaxSatOutcome {
    solve(instance, Algorithm::Msu3, strategy, options)
}

/// Conservative upper bound on the optimum: the number of soft clauses a
/// model of the hard clauses leaves unsatisfied. The optimum can never
/// exceed it.
pub fn upper_bound_from_model(instance: &WcnfInstance, hard_model: &Model) -> usize {
    cost(&hard_model.restrict(instance.num_vars()), instance.soft())
}

/// Model of the hard clauses, or the verdict that there is none.
pub(crate) enum Prelim {
    Sat(Model),
    Unsat,
    Interrupted,
}

/// Shared bookkeeping for one driver run: the instance, deadline, stats
/// accumulation across solver instances, and the per-iteration trace.
pub(crate) struct Engine<'a> {
    pub instance: &'a WcnfInstance,
    deadline: Option<Instant>,
    started: Instant,
    pub stats: RunStats,
    pub traces: Vec<IterationTrace>,
}

impl<'a> Engine<'a> {
    pub fn new(instance: &'a WcnfInstance, options: &SolveOptions) -> Engine<'a> {
        Engine {
            instance,
            deadline: options.deadline,
            started: Instant::now(),
            stats: RunStats::default(),
            traces: Vec::new(),
        }
    }

    /// Fresh solver with the instance variables allocated (identity
    /// mapping: instance variable i is solver variable i).
    pub fn fresh_solver(&mut self) -> Solver {
        let mut solver = Solver::new();
        for _ in 0..self.instance.num_vars() {
            solver.new_var();
        }
        solver.set_deadline(self.deadline);
        self.stats.solver_instances += 1;
        solver
    }

    pub fn load_hard(&mut self, solver: &mut Solver) {
        for i in 0..self.instance.hard().len() {
            let lits = self.instance.hard()[i].lits().to_vec();
            self.emit(solver, &lits);
        }
    }

    pub fn emit(&mut self, solver: &mut Solver, lits: &[Lit]) {
        solver.add_clause(lits);
        self.stats.clauses_emitted += 1;
    }

    /// Preliminary satisfiability check of the hard clauses, run on the
    /// given solver so that no extra solver instance is created.
    pub fn check_hard(&mut self, solver: &mut Solver) -> Prelim {
        self.stats.prelim_sat_calls += 1;
        let before = solver.stats().conflicts;
        let result = solver.solve(&[]);
        self.stats.conflicts += solver.stats().conflicts - before;
        match result {
            SolveResult::Sat(m) => Prelim::Sat(m),
            SolveResult::Unsat(_) => Prelim::Unsat,
            SolveResult::Interrupted => Prelim::Interrupted,
        }
    }

    /// One main-loop SAT call.
    pub fn run_main(&mut self, solver: &mut Solver, assumptions: &[Lit]) -> SolveResult {
        self.stats.sat_calls += 1;
        let before = solver.stats().conflicts;
        let result = solver.solve(assumptions);
        self.stats.conflicts += solver.stats().conflicts - before;
        result
    }

    pub fn record_core(&mut self, soft_ids: &[usize]) {
        self.stats.cores_found += 1;
        self.stats.core_size_total += soft_ids.len() as u64;
    }

    pub fn trace(&mut self, lambda: usize, core_softs: Vec<usize>, emitted_before: u64) {
        self.traces.push(IterationTrace {
            index: self.traces.len(),
            lambda,
            core_softs,
            clauses_emitted: self.stats.clauses_emitted - emitted_before,
        });
    }

    pub fn unsatisfiable(mut self) -> MaxSatOutcome {
        self.stats.wall_time = self.started.elapsed();
        MaxSatOutcome::Unsatisfiable { stats: self.stats }
    }

    pub fn interrupted(mut self) -> MaxSatOutcome {
        self.stats.wall_time = self.started.elapsed();
        MaxSatOutcome::Interrupted { stats: self.stats }
    }

    /// Finishes a solve: restricts the model to the original variables and
    /// checks it witnesses the reported optimum.
    pub fn optimum(mut self, optimum: usize, model: &Model) -> MaxSatOutcome {
        let restricted = model.restrict(self.instance.num_vars());
        assert!(
            restricted.satisfies_all(self.instance.hard()),
            "model violates a hard clause"
        );
        assert_eq!(
            cost(&restricted, self.instance.soft()),
            optimum,
            "model cost must equal the reported optimum"
        );
        self.stats.wall_time = self.started.elapsed();
        MaxSatOutcome::Optimum(MaxSatResult {
            optimum,
            model: restricted,
            stats: self.stats,
            iterations: self.traces,
        })
    }
}

/// Clause sink that forwards to a solver, optionally extending every clause
/// with a blocking literal, and counts cardinality clauses.
pub(crate) struct CardSink<'s> {
    solver: &'s mut Solver,
    stats: &'s mut RunStats,
    block: Option<Lit>,
    buf: Vec<Lit>,
}

impl<'s> CardSink<'s> {
    pub fn new(solver: &'s mut Solver, stats: &'s mut RunStats, block: Option<Lit>) -> CardSink<'s> {
        CardSink { solver, stats, block, buf: Vec::new() }
    }
}

impl ClauseSink for CardSink<'_> {
    fn add_clause(&mut self, lits: &[Lit]) {
        self.buf.clear();
        self.buf.extend_from_slice(lits);
        if let Some(b) = self.block {
            self.buf.push(b);
        }
        self.solver.add_clause(&self.buf);
        self.stats.clauses_emitted += 1;
        self.stats.card_clauses += 1;
    }

    fn new_var(&mut self) -> Var {
        self.solver.new_var()
    }
}

/// Relaxes every soft clause with a fresh literal, in soft-id order, and
/// emits the relaxed clauses. Returns the relaxation literals.
pub(crate) fn relax_all_softs(eng: &mut Engine<'_>, solver: &mut Solver) -> Vec<Lit> {
    let relax: Vec<Lit> = eng
        .instance
        .soft()
        .iter()
        .map(|_| solver.new_var().pos_lit())
        .collect();
    for (j, r) in relax.iter().enumerate() {
        let mut lits = eng.instance.soft()[j].lits().to_vec();
        lits.push(*r);
        eng.emit(solver, &lits);
    }
    relax
}

/// Maps core literals back to soft-clause ids via a sentinel-variable map.
/// Literals without an entry (blocking or comparator literals) are skipped.
pub(crate) fn core_soft_ids(core: &[Lit], by_var: &HashMap<Var, usize>) -> Vec<usize> {
    core.iter().filter_map(|l| by_var.get(&l.var()).copied()).collect()
}
