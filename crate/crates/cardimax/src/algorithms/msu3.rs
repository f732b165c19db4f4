//! MSU3: soft clauses are relaxed only once they appear in an
//! unsatisfiable core, and the sum of relaxation literals over the relaxed
//! set is bounded by the iteration count. Every soft clause is extended
//! with one fresh literal up front; while the clause is unrelaxed that
//! literal is assumed false (so cores name the clause), and once relaxed
//! the same literal serves as the clause's relaxation variable.

use std::collections::{BTreeSet, HashMap};

use crate::solver::{SolveResult, Solver};
use crate::totalizer::TotalizerTree;
use crate::types::{Lit, Var, WcnfInstance};

use super::{
    core_soft_ids, relax_all_softs, upper_bound_from_model, CardSink, Engine, MaxSatOutcome,
    Prelim, SolveOptions, Strategy,
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

/// Fresh solver and fresh encoding over the currently relaxed set each
/// iteration; the comparator is a unit clause. The hard-check solver hosts
/// the first iteration.
fn non_incremental(mut eng: Engine<'_>, mut solver: Solver) -> MaxSatOutcome {
    let n_soft = eng.instance.soft().len();
    let mut relaxed: BTreeSet<usize> = BTreeSet::new();
    let mut lambda = 0usize;
    loop {
        let emitted_before = eng.stats.clauses_emitted;
        let mut sentinel_of: HashMap<Var, usize> = HashMap::new();
        let mut vlits = Vec::with_capacity(n_soft);
        let mut assumptions = Vec::new();
        for j in 0..n_soft {
            let v = solver.new_var().pos_lit();
            vlits.push(v);
            let mut lits = eng.instance.soft()[j].lits().to_vec();
            lits.push(v);
            eng.emit(&mut solver, &lits);
            if relaxed.contains(&j) {
                continue;
            }
            sentinel_of.insert(v.var(), j);
            assumptions.push(!v);
        }
        if !relaxed.is_empty() && lambda < relaxed.len() {
            let inputs: Vec<Lit> = relaxed.iter().map(|&j| vlits[j]).collect();
            let tree = {
                let mut sink = CardSink::new(&mut solver, &mut eng.stats, None);
                TotalizerTree::build(&inputs, lambda, &mut sink)
            };
            for l in tree.at_most_assumption(lambda) {
                eng.emit(&mut solver, &[l]);
            }
        }
        let result = eng.run_main(&mut solver, &assumptions);
        match result {
            SolveResult::Sat(model) => {
                eng.trace(lambda, Vec::new(), emitted_before);
                return eng.optimum(lambda, &model);
            }
            SolveResult::Unsat(core) => {
                let ids = core_soft_ids(&core, &sentinel_of);
                eng.record_core(&ids);
                eng.trace(lambda, ids.clone(), emitted_before);
                relaxed.extend(ids);
                lambda += 1;
                solver = eng.fresh_solver();
                eng.load_hard(&mut solver);
            }
            SolveResult::Interrupted => return eng.interrupted(),
        }
    }
}

/// One solver; each iteration encodes the constraint over the current
/// relaxed set afresh behind a fresh blocking literal, assumed false for
/// the call and retired as a unit afterwards.
fn blocking(mut eng: Engine<'_>, mut solver: Solver) -> MaxSatOutcome {
    let mut emitted_before = eng.stats.clauses_emitted;
    let vlits = relax_all_softs(&mut eng, &mut solver);
    let mut sentinel_of: HashMap<Var, usize> = HashMap::new();
    for (j, v) in vlits.iter().enumerate() {
        sentinel_of.insert(v.var(), j);
    }
    let mut relaxed: BTreeSet<usize> = BTreeSet::new();
    let mut lambda = 0usize;
    loop {
        let mut assumptions: Vec<Lit> = (0..vlits.len())
            .filter(|j| !relaxed.contains(j))
            .map(|j| !vlits[j])
            .collect();
        let mut block = None;
        if !relaxed.is_empty() && lambda < relaxed.len() {
            let b = solver.new_var().pos_lit();
            let inputs: Vec<Lit> = relaxed.iter().map(|&j| vlits[j]).collect();
            let tree = {
                let mut sink = CardSink::new(&mut solver, &mut eng.stats, Some(b));
                TotalizerTree::build(&inputs, lambda, &mut sink)
            };
            assumptions.push(!b);
            assumptions.extend(tree.at_most_assumption(lambda));
            block = Some(b);
        }
        let result = eng.run_main(&mut solver, &assumptions);
        match result {
            SolveResult::Sat(model) => {
                eng.trace(lambda, Vec::new(), emitted_before);
                return eng.optimum(lambda, &model);
            }
            SolveResult::Unsat(core) => {
                let ids = core_soft_ids(&core, &sentinel_of);
                for &j in &ids {
                    sentinel_of.remove(&vlits[j].var());
                }
                eng.record_core(&ids);
                eng.trace(lambda, ids.clone(), emitted_before);
                emitted_before = eng.stats.clauses_emitted;
                if let Some(b) = block {
                    eng.emit(&mut solver, &[b]);
                }
                relaxed.extend(ids);
                lambda += 1;
            }
            SolveResult::Interrupted => return eng.interrupted(),
        }
    }
}

/// Relax-all variant: every soft clause is relaxed up front and one
/// encoding over all relaxation literals is built at the upper bound from
/// the hard-clause model. Clauses never seen in a core stay enforced by
/// assuming their relaxation literal false; once a core names them the
/// assumption is dropped from the next call on.
///
/// The bound only rises on cores that involve no enforced soft clause:
/// such a core shows that every hard-clause model leaves more than lambda
/// soft clauses unsatisfied, which keeps lambda a sound lower bound even
/// though the counter ranges over all relaxation literals. Cores that do
/// name enforced clauses only unenforce them. Termination still holds (each
/// iteration raises the bound or shrinks the enforced set) and the final
/// bound equals the optimum, at the price of occasionally more main calls
/// than bound increments.
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
    let vlits = relax_all_softs(&mut eng, &mut solver);
    let mut sentinel_of: HashMap<Var, usize> = HashMap::new();
    for (j, v) in vlits.iter().enumerate() {
        sentinel_of.insert(v.var(), j);
    }
    let tree = {
        let mut sink = CardSink::new(&mut solver, &mut eng.stats, None);
        TotalizerTree::build(&vlits, k_u, &mut sink)
    };
    let mut enforced: BTreeSet<usize> = (0..vlits.len()).collect();
    let mut lambda = 0usize;
    loop {
        let mut assumptions: Vec<Lit> = enforced.iter().map(|&j| !vlits[j]).collect();
        assumptions.extend(tree.at_most_assumption(lambda));
        let result = eng.run_main(&mut solver, &assumptions);
        match result {
            SolveResult::Sat(model) => {
                eng.trace(lambda, Vec::new(), emitted_before);
                return eng.optimum(lambda, &model);
            }
            SolveResult::Unsat(core) => {
                let ids = core_soft_ids(&core, &sentinel_of);
                eng.record_core(&ids);
                eng.trace(lambda, ids.clone(), emitted_before);
                emitted_before = eng.stats.clauses_emitted;
                if ids.is_empty() {
                    lambda += 1;
                } else {
                    for &j in &ids {
                        sentinel_of.remove(&vlits[j].var());
                        enforced.remove(&j);
                    }
                }
            }
            SolveResult::Interrupted => return eng.interrupted(),
        }
    }
}

/// One solver and one growing tree. After an unsatisfiable iteration the
/// old comparator assumption is dropped, the existing tree's bound is
/// raised, a subtree over the newly relaxed literals is built, and the two
/// are merged under a fresh root — emitting only new clauses throughout.
fn iterative(mut eng: Engine<'_>, mut solver: Solver) -> MaxSatOutcome {
    let mut emitted_before = eng.stats.clauses_emitted;
    let vlits = relax_all_softs(&mut eng, &mut solver);
    let mut sentinel_of: HashMap<Var, usize> = HashMap::new();
    for (j, v) in vlits.iter().enumerate() {
        sentinel_of.insert(v.var(), j);
    }
    let mut relaxed: BTreeSet<usize> = BTreeSet::new();
    let mut tree: Option<TotalizerTree> = None;
    let mut lambda = 0usize;
    loop {
        let mut assumptions: Vec<Lit> = (0..vlits.len())
            .filter(|j| !relaxed.contains(j))
            .map(|j| !vlits[j])
            .collect();
        if let Some(t) = tree.as_ref() {
            assumptions.extend(t.at_most_assumption(lambda));
        }
        let result = eng.run_main(&mut solver, &assumptions);
        match result {
            SolveResult::Sat(model) => {
                eng.trace(lambda, Vec::new(), emitted_before);
                return eng.optimum(lambda, &model);
            }
            SolveResult::Unsat(core) => {
                let ids = core_soft_ids(&core, &sentinel_of);
                for &j in &ids {
                    sentinel_of.remove(&vlits[j].var());
                }
                eng.record_core(&ids);
                eng.trace(lambda, ids.clone(), emitted_before);
                emitted_before = eng.stats.clauses_emitted;
                lambda += 1;
                let fresh: Vec<Lit> = ids.iter().map(|&j| vlits[j]).collect();
                relaxed.extend(ids);
                let mut sink = CardSink::new(&mut solver, &mut eng.stats, None);
                tree = match (tree.take(), fresh.is_empty()) {
                    (None, true) => None,
                    (None, false) => Some(TotalizerTree::build(&fresh, lambda, &mut sink)),
                    (Some(mut t), true) => {
                        t.raise_bound(lambda, &mut sink);
                        Some(t)
                    }
                    (Some(t), false) => {
                        let sub = TotalizerTree::build(&fresh, lambda, &mut sink);
                        Some(TotalizerTree::merge(t, sub, lambda, &mut sink))
                    }
                };
            }
            SolveResult::Interrupted => return eng.interrupted(),
        }
    }
}
