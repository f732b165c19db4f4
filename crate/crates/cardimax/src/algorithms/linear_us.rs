//! Linear unsat-sat search: every soft clause gets a relaxation literal up
//! front, and the number of relaxation literals allowed to be true is
//! raised from zero until the formula turns satisfiable. The final bound is
//! the optimum. No unsatisfiable cores are consulted.

use crate::solver::{SolveResult, Solver};
use crate::totalizer::TotalizerTree;
use crate::types::WcnfInstance;

use super::{
    relax_all_softs, upper_bound_from_model, CardSink, Engine, MaxSatOutcome, Prelim,
    SolveOptions, Strategy,
};

pub(super) fn solve(
    instance: &WcnfInstance,
    strategy: Strategy,
    options: &SolveOptions,
) -> MaxSatOutcome {
    let mut eng = Engine::new(instance, options);
    let mut solver = eng.fresh_solver();
    eng.load_hard(&mut solver);
    let hard_model = match eng.check_hard(&mut solver) {
        Prelim::Sat(m) => m,
        Prelim::Unsat => return eng.unsatisfiable(),
        Prelim::Interrupted => return eng.interrupted(),
    };
    match strategy {
        Strategy::NonIncremental => non_incremental(eng, solver),
        Strategy::Blocking => blocking(eng, solver),
        Strategy::Weakening => weakening(eng, solver, hard_model),
        Strategy::Iterative => iterative(eng, solver),
    }
}

/// One fresh solver and one fresh encoding, k-simplified at the current
/// bound, per iteration. The comparator is asserted as a unit clause since
/// nothing outlives the iteration. The solver that performed the hard check
/// hosts the first iteration, so solver instances equal main SAT calls.
fn non_incremental(mut eng: Engine<'_>, mut solver: Solver) -> MaxSatOutcome {
    let n_soft = eng.instance.soft().len();
    let mut lambda = 0usize;
    loop {
        let emitted_before = eng.stats.clauses_emitted;
        let relax = relax_all_softs(&mut eng, &mut solver);
        if !relax.is_empty() && lambda < n_soft {
            let mut sink = CardSink::new(&mut solver, &mut eng.stats, None);
            let tree = TotalizerTree::build(&relax, lambda, &mut sink);
            for l in tree.at_most_assumption(lambda) {
                eng.emit(&mut solver, &[l]);
            }
        }
        let result = eng.run_main(&mut solver, &[]);
        eng.trace(lambda, Vec::new(), emitted_before);
        match result {
            SolveResult::Sat(model) => return eng.optimum(lambda, &model),
            SolveResult::Unsat(_) => {
                lambda += 1;
                solver = eng.fresh_solver();
                eng.load_hard(&mut solver);
            }
            SolveResult::Interrupted => return eng.interrupted(),
        }
    }
}

/// One solver for the whole run. Each iteration encodes the cardinality
/// constraint afresh with every clause carrying a fresh blocking literal;
/// the constraint is enabled by assuming the blocking literal false and
/// retired by adding it as a unit clause.
fn blocking(mut eng: Engine<'_>, mut solver: Solver) -> MaxSatOutcome {
    let mut emitted_before = eng.stats.clauses_emitted;
    let relax = relax_all_softs(&mut eng, &mut solver);
    let n_soft = relax.len();
    let mut lambda = 0usize;
    loop {
        let mut assumptions = Vec::new();
        let mut block = None;
        if !relax.is_empty() && lambda < n_soft {
            let b = solver.new_var().pos_lit();
            let mut sink = CardSink::new(&mut solver, &mut eng.stats, Some(b));
            let tree = TotalizerTree::build(&relax, lambda, &mut sink);
            assumptions.push(!b);
            assumptions.extend(tree.at_most_assumption(lambda));
            block = Some(b);
        }
        let result = eng.run_main(&mut solver, &assumptions);
        eng.trace(lambda, Vec::new(), emitted_before);
        emitted_before = eng.stats.clauses_emitted;
        match result {
            SolveResult::Sat(model) => return eng.optimum(lambda, &model),
            SolveResult::Unsat(_) => {
                if let Some(b) = block {
                    eng.emit(&mut solver, &[b]);
                }
                lambda += 1;
            }
            SolveResult::Interrupted => return eng.interrupted(),
        }
    }
}

/// One solver and one encoding, built once at the upper bound given by the
/// hard-clause model; per-iteration bounds are selected purely through
/// output-literal assumptions. When the hard model already satisfies every
/// soft clause the encoding is never built and that call doubles as the
/// single main call.
fn weakening(
    mut eng: Engine<'_>,
    mut solver: Solver,
    hard_model: crate::types::Model,
) -> MaxSatOutcome {
    let k_u = upper_bound_from_model(eng.instance, &hard_model);
    if k_u == 0 {
        eng.stats.sat_calls += 1;
        eng.stats.prelim_sat_calls -= 1;
        eng.trace(0, Vec::new(), eng.stats.clauses_emitted);
        return eng.optimum(0, &hard_model);
    }
    let mut emitted_before = eng.stats.clauses_emitted;
    let relax = relax_all_softs(&mut eng, &mut solver);
    let tree = {
        let mut sink = CardSink::new(&mut solver, &mut eng.stats, None);
        TotalizerTree::build(&relax, k_u, &mut sink)
    };
    let mut lambda = 0usize;
    loop {
        let assumptions = tree.at_most_assumption(lambda);
        let result = eng.run_main(&mut solver, &assumptions);
        eng.trace(lambda, Vec::new(), emitted_before);
        emitted_before = eng.stats.clauses_emitted;
        match result {
            SolveResult::Sat(model) => return eng.optimum(lambda, &model),
            // Satisfiability is guaranteed by the time lambda reaches k_u.
            SolveResult::Unsat(_) => lambda += 1,
            SolveResult::Interrupted => return eng.interrupted(),
        }
    }
}

/// One solver and one tree, built at bound zero and raised by one per
/// unsatisfiable iteration, emitting only the clause difference.
fn iterative(mut eng: Engine<'_>, mut solver: Solver) -> MaxSatOutcome {
    let mut emitted_before = eng.stats.clauses_emitted;
    let relax = relax_all_softs(&mut eng, &mut solver);
    let mut tree = if relax.is_empty() {
        None
    } else {
        let mut sink = CardSink::new(&mut solver, &mut eng.stats, None);
        Some(TotalizerTree::build(&relax, 0, &mut sink))
    };
    let mut lambda = 0usize;
    loop {
        let assumptions = tree
            .as_ref()
            .map(|t| t.at_most_assumption(lambda))
            .unwrap_or_default();
        let result = eng.run_main(&mut solver, &assumptions);
        eng.trace(lambda, Vec::new(), emitted_before);
        emitted_before = eng.stats.clauses_emitted;
        match result {
            SolveResult::Sat(model) => return eng.optimum(lambda, &model),
            SolveResult::Unsat(_) => {
                lambda += 1;
                if let Some(t) = tree.as_mut() {
                    let mut sink = CardSink::new(&mut solver, &mut eng.stats, None);
                    t.raise_bound(lambda, &mut sink);
                }
            }
            SolveResult::Interrupted => return eng.interrupted(),
        }
    }
}
