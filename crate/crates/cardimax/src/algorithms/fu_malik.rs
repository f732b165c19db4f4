//! Fu-Malik: soft clauses are relaxed lazily, one fresh relaxation variable
//! per appearance in an unsatisfiable core, with an at-most-one constraint
//! over each core's fresh variables. Every unsatisfiable iteration raises
//! the lower bound by one, so the optimum equals the number of cores.
//!
//! The backend reports cores over assumptions, so every active soft clause
//! carries one sentinel literal whose negation is assumed; a core naming
//! the sentinel names the clause. Under the blocking strategy the sentinel
//! is the clause's blocking literal, which also lets the superseded clause
//! copy be disabled permanently with a unit.

use std::collections::HashMap;

use crate::solver::{SolveResult, Solver};
use crate::totalizer::TotalizerTree;
use crate::types::{Lit, Var, WcnfInstance};

use super::{core_soft_ids, CardSink, Engine, MaxSatOutcome, Prelim, SolveOptions, Strategy};

pub(super) fn solve(
    instance: &WcnfInstance,
    strategy: Strategy,
    options: &SolveOptions,
) -> MaxSatOutcome {
    let mut eng = Engine::new(instance, options);
    let mut solver = eng.fresh_solver();
    eng.load_hard(&mut solver);
    match eng.check_hard(&mut solver) {
        Prelim::Sat(_) => {}
        Prelim::Unsat => return eng.unsatisfiable(),
        Prelim::Interrupted => return eng.interrupted(),
    }
    match strategy {
        Strategy::NonIncremental => non_incremental(eng, solver),
        Strategy::Blocking => blocking(eng, solver),
        Strategy::Weakening | Strategy::Iterative => {
            unreachable!("inadmissible strategy is rejected by the dispatcher")
        }
    }
}

/// Rebuilds the whole soft side on a fresh solver every iteration: each
/// soft clause gets its accumulated relaxation variables plus a sentinel,
/// and each past core contributes an at-most-one constraint (a bound-one
/// counter with its comparator output asserted as a unit).
fn non_incremental(mut eng: Engine<'_>, mut solver: Solver) -> MaxSatOutcome {
    let n_soft = eng.instance.soft().len();
    // Soft-clause ids relaxed by each unsatisfiable iteration so far.
    let mut core_groups: Vec<Vec<usize>> = Vec::new();
    loop {
        let emitted_before = eng.stats.clauses_emitted;
        let mut relax_of: Vec<Vec<Lit>> = vec![Vec::new(); n_soft];
        let mut amo_groups: Vec<Vec<Lit>> = Vec::new();
        for group in &core_groups {
            let fresh: Vec<Lit> = group.iter().map(|_| solver.new_var().pos_lit()).collect();
            for (&j, &r) in group.iter().zip(fresh.iter()) {
                relax_of[j].push(r);
            }
            amo_groups.push(fresh);
        }
        let mut sentinel_of: HashMap<Var, usize> = HashMap::new();
        let mut assumptions = Vec::with_capacity(n_soft);
        for (j, relax) in relax_of.iter().enumerate() {
            let s = solver.new_var().pos_lit();
            sentinel_of.insert(s.var(), j);
            assumptions.push(!s);
            let mut lits = eng.instance.soft()[j].lits().to_vec();
            lits.extend(relax);
            lits.push(s);
            eng.emit(&mut solver, &lits);
        }
        for group in &amo_groups {
            if group.len() < 2 {
                continue;
            }
            let tree = {
                let mut sink = CardSink::new(&mut solver, &mut eng.stats, None);
                TotalizerTree::build(group, 1, &mut sink)
            };
            for l in tree.at_most_assumption(1) {
                eng.emit(&mut solver, &[l]);
            }
        }
        let result = eng.run_main(&mut solver, &assumptions);
        match result {
            SolveResult::Sat(model) => {
                eng.trace(core_groups.len(), Vec::new(), emitted_before);
                return eng.optimum(core_groups.len(), &model);
            }
            SolveResult::Unsat(core) => {
                let ids = core_soft_ids(&core, &sentinel_of);
                assert!(
                    !ids.is_empty(),
                    "unsatisfiable core without soft clauses despite satisfiable hard part"
                );
                eng.record_core(&ids);
                eng.trace(core_groups.len(), ids.clone(), emitted_before);
                core_groups.push(ids);
                solver = eng.fresh_solver();
                eng.load_hard(&mut solver);
            }
            SolveResult::Interrupted => return eng.interrupted(),
        }
    }
}

/// One solver for the whole run. The current copy of each soft clause
/// carries its accumulated relaxation variables and one blocking literal;
/// relaxing a core replaces each named copy by a new one (old blocking
/// literal stripped, relaxation variables kept, fresh relaxation and
/// blocking literals added) and disables the old copy with a unit clause.
fn blocking(mut eng: Engine<'_>, mut solver: Solver) -> MaxSatOutcome {
    struct SoftState {
        relax: Vec<Lit>,
        block: Lit,
    }

    let mut emitted_before = eng.stats.clauses_emitted;
    let mut block_of: HashMap<Var, usize> = HashMap::new();
    let mut softs: Vec<SoftState> = Vec::with_capacity(eng.instance.soft().len());
    for j in 0..eng.instance.soft().len() {
        let b = solver.new_var().pos_lit();
        block_of.insert(b.var(), j);
        let mut lits = eng.instance.soft()[j].lits().to_vec();
        lits.push(b);
        eng.emit(&mut solver, &lits);
        softs.push(SoftState { relax: Vec::new(), block: b });
    }
    let mut rounds = 0usize;
    loop {
        let assumptions: Vec<Lit> = softs.iter().map(|s| !s.block).collect();
        let result = eng.run_main(&mut solver, &assumptions);
        match result {
            SolveResult::Sat(model) => {
                eng.trace(rounds, Vec::new(), emitted_before);
                return eng.optimum(rounds, &model);
            }
            SolveResult::Unsat(core) => {
                let ids = core_soft_ids(&core, &block_of);
                assert!(
                    !ids.is_empty(),
                    "unsatisfiable core without soft clauses despite satisfiable hard part"
                );
                eng.record_core(&ids);
                eng.trace(rounds, ids.clone(), emitted_before);
                emitted_before = eng.stats.clauses_emitted;
                let mut fresh_relax = Vec::with_capacity(ids.len());
                for &j in &ids {
                    let r = solver.new_var().pos_lit();
                    let b_new = solver.new_var().pos_lit();
                    softs[j].relax.push(r);
                    fresh_relax.push(r);
                    let mut lits = eng.instance.soft()[j].lits().to_vec();
                    lits.extend(&softs[j].relax);
                    lits.push(b_new);
                    eng.emit(&mut solver, &lits);
                    // Disable the superseded copy for good.
                    let b_old = softs[j].block;
                    eng.emit(&mut solver, &[b_old]);
                    block_of.remove(&b_old.var());
                    block_of.insert(b_new.var(), j);
                    softs[j].block = b_new;
                }
                // The at-most-one over this core's fresh variables stays
                // valid forever, so it needs no blocking literal.
                if fresh_relax.len() >= 2 {
                    let tree = {
                        let mut sink = CardSink::new(&mut solver, &mut eng.stats, None);
                        TotalizerTree::build(&fresh_relax, 1, &mut sink)
                    };
                    for l in tree.at_most_assumption(1) {
                        eng.emit(&mut solver, &[l]);
                    }
                }
                rounds += 1;
            }
            SolveResult::Interrupted => return eng.interrupted(),
        }
    }
}
