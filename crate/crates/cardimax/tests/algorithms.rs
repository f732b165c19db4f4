//! Driver-level tests: hand-traced instances, agreement with an exhaustive
//! oracle across every admissible algorithm/strategy pair, and the
//! iteration-count / solver-reuse / clause-growth invariants.

use std::time::Instant;

use cardimax::algorithms::{solve, Algorithm, MaxSatOutcome, SolveOptions, Strategy};
use cardimax::types::{cost, Clause, Lit, Model, WcnfInstance};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn lit(v: i32) -> Lit {
    Lit::from_dimacs(v)
}

fn clause(lits: &[i32]) -> Clause {
    Clause::new(lits.iter().map(|&v| lit(v)).collect())
}

fn instance(num_vars: usize, hard: &[&[i32]], soft: &[&[i32]]) -> WcnfInstance {
    WcnfInstance::new(
        num_vars,
        hard.iter().map(|c| clause(c)).collect(),
        soft.iter().map(|c| clause(c)).collect(),
    )
}

fn all_combos() -> Vec<(Algorithm, Strategy)> {
    Algorithm::ALL
        .into_iter()
        .flat_map(|a| a.admissible_strategies().into_iter().map(move |s| (a, s)))
        .collect()
}

/// Exhaustive oracle: minimal soft cost over assignments satisfying the
/// hard clauses, or `None` when the hard clauses are unsatisfiable.
fn oracle(inst: &WcnfInstance) -> Option<usize> {
    let n = inst.num_vars();
    assert!(n <= 16);
    let mut best = None;
    for bits in 0u32..(1u32 << n) {
        let model = Model::new((0..n).map(|i| bits >> i & 1 == 1).collect());
        if !model.satisfies_all(inst.hard()) {
            continue;
        }
        let c = cost(&model, inst.soft());
        if best.is_none_or(|b| c < b) {
            best = Some(c);
        }
    }
    best
}

fn expect_optimum(outcome: &MaxSatOutcome) -> &cardimax::MaxSatResult {
    match outcome {
        MaxSatOutcome::Optimum(r) => r,
        other => panic!("expected an optimum, got {other:?}"),
    }
}

#[test]
fn linear_us_two_soft_units() {
    let inst = instance(2, &[&[1, 2]], &[&[-1], &[-2]]);
    for strategy in Strategy::ALL {
        let r = solve(&inst, Algorithm::LinearUs, strategy, &SolveOptions::default());
        let r = expect_optimum(&r);
        assert_eq!(r.optimum, 1, "{}", strategy.name());
        assert_eq!(r.stats.sat_calls, 2, "{}", strategy.name());
    }
}

#[test]
fn all_soft_satisfiable_takes_one_call() {
    let inst = instance(2, &[&[1, 2]], &[&[1], &[2, 1]]);
    for (a, s) in all_combos() {
        let r = solve(&inst, a, s, &SolveOptions::default());
        let r = expect_optimum(&r);
        assert_eq!(r.optimum, 0, "{}/{}", a.name(), s.name());
        assert_eq!(r.stats.sat_calls, 1, "{}/{}", a.name(), s.name());
    }
}

/// Tautological soft clauses are never violated and never enter cores;
/// duplicate soft clauses count separately.
#[test]
fn tautological_and_duplicate_softs_are_costed_correctly() {
    let inst = instance(1, &[&[1]], &[&[1, -1], &[-1], &[-1]]);
    for (a, s) in all_combos() {
        let r = solve(&inst, a, s, &SolveOptions::default());
        let r = expect_optimum(&r);
        assert_eq!(r.optimum, 2, "{}/{}", a.name(), s.name());
        for it in &r.iterations {
            assert!(!it.core_softs.contains(&0), "{}/{}", a.name(), s.name());
        }
    }
}

#[test]
fn empty_soft_list_is_optimum_zero() {
    let inst = instance(1, &[&[1]], &[]);
    for (a, s) in all_combos() {
        let r = solve(&inst, a, s, &SolveOptions::default());
        assert_eq!(expect_optimum(&r).optimum, 0);
    }
}

#[test]
fn fu_malik_single_core() {
    let inst = instance(1, &[], &[&[1], &[-1]]);
    for strategy in [Strategy::NonIncremental, Strategy::Blocking] {
        let r = solve(&inst, Algorithm::FuMalik, strategy, &SolveOptions::default());
        let r = expect_optimum(&r);
        assert_eq!(r.optimum, 1);
        assert_eq!(r.stats.cores_found, 1);
        // The single core names both soft clauses.
        assert_eq!(r.iterations[0].core_softs, vec![0, 1]);
    }
}

#[test]
fn fu_malik_two_disjoint_cores() {
    let inst = instance(2, &[], &[&[1], &[-1], &[2], &[-2]]);
    for strategy in [Strategy::NonIncremental, Strategy::Blocking] {
        let r = solve(&inst, Algorithm::FuMalik, strategy, &SolveOptions::default());
        let r = expect_optimum(&r);
        assert_eq!(r.optimum, 2);
        assert_eq!(r.stats.cores_found, 2);
        assert_eq!(r.stats.sat_calls, 3);
    }
}

#[test]
fn msu3_untouched_soft_keeps_assumption() {
    let inst = instance(3, &[&[1, 2]], &[&[-1], &[-2], &[3]]);
    for strategy in Strategy::ALL {
        let r = solve(&inst, Algorithm::Msu3, strategy, &SolveOptions::default());
        let r = expect_optimum(&r);
        assert_eq!(r.optimum, 1, "{}", strategy.name());
        // Soft clause 2 is satisfiable alongside everything else and never
        // enters a core.
        for it in &r.iterations {
            assert!(!it.core_softs.contains(&2), "{}", strategy.name());
        }
    }
}

#[test]
fn msu3_iterative_exercises_the_merge_path() {
    // Two independent conflicts: the first core relaxes one pair, the
    // second core arrives later and forces a subtree merge.
    let inst = instance(4, &[&[1, 2], &[3, 4]], &[&[-1], &[-2], &[-3], &[-4]]);
    let r = solve(&inst, Algorithm::Msu3, Strategy::Iterative, &SolveOptions::default());
    let r = expect_optimum(&r);
    assert_eq!(r.optimum, 2);
    let core_sizes: Vec<usize> = r
        .iterations
        .iter()
        .filter(|it| !it.core_softs.is_empty())
        .map(|it| it.core_softs.len())
        .collect();
    assert_eq!(core_sizes, vec![2, 2]);
}

/// Regression: enforcing a never-cored soft clause must not inflate the
/// bound. Here the hard clauses tie x and y to z, and the cheapest model
/// violates only the third soft; a naive per-iteration bound increment
/// under the relax-all weakening variant overshoots and can return 2.
#[test]
fn msu3_weakening_does_not_overshoot_on_coupled_softs() {
    let inst = instance(3, &[&[3, -1], &[3, -2]], &[&[1], &[2], &[-3]]);
    assert_eq!(oracle(&inst), Some(1));
    for strategy in Strategy::ALL {
        let r = solve(&inst, Algorithm::Msu3, strategy, &SolveOptions::default());
        let r = expect_optimum(&r);
        assert_eq!(r.optimum, 1, "{}", strategy.name());
        assert_eq!(r.iterations.last().unwrap().lambda, 1, "{}", strategy.name());
    }
}

#[test]
fn unsatisfiable_hard_part_is_reported_by_every_combo() {
    let inst = instance(1, &[&[1], &[-1]], &[&[1]]);
    for (a, s) in all_combos() {
        match solve(&inst, a, s, &SolveOptions::default()) {
            MaxSatOutcome::Unsatisfiable { .. } => {}
            other => panic!("{}/{}: expected UNSAT, got {other:?}", a.name(), s.name()),
        }
    }
}

#[test]
fn empty_hard_clause_means_unsatisfiable() {
    let inst = instance(1, &[&[]], &[&[1]]);
    for (a, s) in all_combos() {
        assert!(matches!(
            solve(&inst, a, s, &SolveOptions::default()),
            MaxSatOutcome::Unsatisfiable { .. }
        ));
    }
}

#[test]
#[should_panic(expected = "does not admit")]
fn fu_malik_rejects_iterative() {
    let inst = instance(1, &[], &[&[1]]);
    solve(&inst, Algorithm::FuMalik, Strategy::Iterative, &SolveOptions::default());
}

#[test]
fn expired_deadline_interrupts() {
    // Pigeonhole: enough conflicts to reach the first deadline check.
    let pigeons = 8;
    let holes = 7;
    let var = |p: usize, h: usize| (p * holes + h + 1) as i32;
    let mut hard: Vec<Clause> = Vec::new();
    for p in 0..pigeons {
        hard.push(clause(&(0..holes).map(|h| var(p, h)).collect::<Vec<_>>()));
    }
    for h in 0..holes {
        for p1 in 0..pigeons {
            for p2 in (p1 + 1)..pigeons {
                hard.push(clause(&[-var(p1, h), -var(p2, h)]));
            }
        }
    }
    let inst = WcnfInstance::new(pigeons * holes, hard, vec![clause(&[var(0, 0)])]);
    let opts = SolveOptions { deadline: Some(Instant::now()) };
    match solve(&inst, Algorithm::LinearUs, Strategy::Iterative, &opts) {
        MaxSatOutcome::Interrupted { .. } => {}
        other => panic!("expected interruption, got {other:?}"),
    }
}

fn random_planted_instance(rng: &mut ChaCha8Rng) -> WcnfInstance {
    let n = rng.gen_range(2..=10);
    let planted: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut hard = Vec::new();
    for _ in 0..rng.gen_range(0..=2 * n) {
        let len = rng.gen_range(1..=3.min(n));
        let mut vars: Vec<usize> = (1..=n).collect();
        vars.shuffle(rng);
        let mut lits: Vec<Lit> = vars[..len]
            .iter()
            .map(|&v| Lit::new(cardimax::Var::from_index(v), rng.gen_bool(0.5)))
            .collect();
        // Keep the hard part satisfiable: force one literal to agree with
        // the planted assignment.
        let fix = rng.gen_range(0..len);
        let v = lits[fix].var();
        lits[fix] = Lit::new(v, planted[v.index() - 1]);
        hard.push(Clause::new(lits));
    }
    let mut soft = Vec::new();
    for _ in 0..rng.gen_range(1..=20) {
        let len = rng.gen_range(1..=2.min(n));
        let mut vars: Vec<usize> = (1..=n).collect();
        vars.shuffle(rng);
        let lits: Vec<Lit> = vars[..len]
            .iter()
            .map(|&v| Lit::new(cardimax::Var::from_index(v), rng.gen_bool(0.5)))
            .collect();
        soft.push(Clause::new(lits));
    }
    WcnfInstance::new(n, hard, soft)
}

/// Every admissible pair returns the brute-force optimum, with the
/// solver-reuse, iteration-count, and bound-soundness invariants holding.
#[test]
fn combos_agree_with_oracle_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for round in 0..150 {
        let inst = random_planted_instance(&mut rng);
        let expected = oracle(&inst).expect("hard part is satisfiable by construction");
        for (a, s) in all_combos() {
            let outcome = solve(&inst, a, s, &SolveOptions::default());
            let r = expect_optimum(&outcome);
            let label = format!("round {round} {}/{}", a.name(), s.name());
            assert_eq!(r.optimum, expected, "{label}");
            assert_eq!(cost(&r.model, inst.soft()), r.optimum, "{label}");
            assert!(r.model.satisfies_all(inst.hard()), "{label}");

            // Solver-reuse invariant.
            if s == Strategy::NonIncremental {
                assert_eq!(r.stats.solver_instances, r.stats.sat_calls, "{label}");
            } else {
                assert_eq!(r.stats.solver_instances, 1, "{label}");
            }

            // Iteration counts.
            match a {
                Algorithm::LinearUs | Algorithm::FuMalik => {
                    assert_eq!(r.stats.sat_calls, r.optimum as u64 + 1, "{label}")
                }
                Algorithm::Msu3 => {
                    assert_eq!(r.iterations.last().unwrap().lambda, r.optimum, "{label}");
                    if s != Strategy::Weakening {
                        assert_eq!(r.stats.sat_calls, r.optimum as u64 + 1, "{label}");
                    }
                }
            }

            // The bound is a sound lower bound throughout.
            for it in &r.iterations {
                assert!(it.lambda <= r.optimum, "{label}");
            }
        }
    }
}

/// Fully random instances, unsatisfiable hard parts included: every combo
/// reports the same verdict as the oracle.
#[test]
fn verdicts_agree_on_unrestricted_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut unsat_seen = 0;
    for round in 0..120 {
        let n = rng.gen_range(2..=8);
        fn clauses(rng: &mut ChaCha8Rng, n: usize, count: usize, max_len: usize) -> Vec<Clause> {
            (0..count)
                .map(|_| {
                    let len = rng.gen_range(1..=max_len.min(n));
                    let mut vars: Vec<usize> = (1..=n).collect();
                    vars.shuffle(rng);
                    Clause::new(
                        vars[..len]
                            .iter()
                            .map(|&v| Lit::new(cardimax::Var::from_index(v), rng.gen_bool(0.5)))
                            .collect(),
                    )
                })
                .collect()
        }
        let n_hard = rng.gen_range(1..=3 * n);
        let hard = clauses(&mut rng, n, n_hard, 2);
        let n_soft = rng.gen_range(1..=8);
        let soft = clauses(&mut rng, n, n_soft, 2);
        let inst = WcnfInstance::new(n, hard, soft);
        let expected = oracle(&inst);
        if expected.is_none() {
            unsat_seen += 1;
        }
        for (a, s) in all_combos() {
            let label = format!("round {round} {}/{}", a.name(), s.name());
            match (solve(&inst, a, s, &SolveOptions::default()), expected) {
                (MaxSatOutcome::Optimum(r), Some(opt)) => assert_eq!(r.optimum, opt, "{label}"),
                (MaxSatOutcome::Unsatisfiable { .. }, None) => {}
                (got, want) => panic!("{label}: verdict {got:?} vs oracle {want:?}"),
            }
        }
    }
    assert!(unsat_seen >= 10, "suite produced too few UNSAT cases ({unsat_seen})");
}

/// Cumulative cardinality clauses: re-encoding per iteration (blocking)
/// always emits at least as much as raising one tree (iterative), and
/// strictly more once two or more bound raises happen.
#[test]
fn blocking_emits_at_least_as_many_card_clauses_as_iterative() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut seen_nontrivial = 0;
    for _ in 0..120 {
        let inst = random_planted_instance(&mut rng);
        let blocking = expect_optimum(&solve(
            &inst,
            Algorithm::LinearUs,
            Strategy::Blocking,
            &SolveOptions::default(),
        ))
        .clone();
        let iterative = expect_optimum(&solve(
            &inst,
            Algorithm::LinearUs,
            Strategy::Iterative,
            &SolveOptions::default(),
        ))
        .clone();
        assert_eq!(blocking.optimum, iterative.optimum);
        if blocking.optimum >= 2 {
            seen_nontrivial += 1;
            assert!(
                blocking.stats.card_clauses >= iterative.stats.card_clauses,
                "optimum {}: blocking {} < iterative {}",
                blocking.optimum,
                blocking.stats.card_clauses,
                iterative.stats.card_clauses
            );
        }
    }
    assert!(seen_nontrivial >= 10, "suite too easy: {seen_nontrivial}");
}

/// The documented concurrency contract: everything a solve touches can
/// move between threads, and the immutable inputs can be shared.
#[test]
fn solve_state_moves_between_threads() {
    fn movable<T: Send>() {}
    fn shareable<T: Send + Sync>() {}
    shareable::<WcnfInstance>();
    shareable::<Model>();
    shareable::<cardimax::MaxSatResult>();
    movable::<cardimax::solver::Solver>();
    movable::<cardimax::totalizer::TotalizerTree>();

    let inst = instance(2, &[&[1, 2]], &[&[-1], &[-2]]);
    let handle = std::thread::spawn(move || {
        let r = solve(&inst, Algorithm::Msu3, Strategy::Iterative, &SolveOptions::default());
        expect_optimum(&r).optimum
    });
    assert_eq!(handle.join().unwrap(), 1);
}

/// Any hard-clause model's soft cost is an upper bound on the optimum.
#[test]
fn hard_model_cost_bounds_the_optimum() {
    use cardimax::algorithms::upper_bound_from_model;
    use cardimax::solver::{SolveResult, Solver};
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let inst = random_planted_instance(&mut rng);
        let mut solver = Solver::new();
        for _ in 0..inst.num_vars() {
            solver.new_var();
        }
        for c in inst.hard() {
            solver.add_clause(c.lits());
        }
        let model = match solver.solve(&[]) {
            SolveResult::Sat(m) => m,
            other => panic!("hard part is satisfiable by construction, got {other:?}"),
        };
        let k_u = upper_bound_from_model(&inst, &model);
        let optimum = oracle(&inst).unwrap();
        assert!(k_u >= optimum, "k_u {k_u} below optimum {optimum}");
    }
}

/// Weakening never exceeds the upper bound in encoded width and stops at
/// the same optimum; its trace bounds never decrease.
#[test]
fn traces_are_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..60 {
        let inst = random_planted_instance(&mut rng);
        for (a, s) in all_combos() {
            let r = solve(&inst, a, s, &SolveOptions::default());
            let r = expect_optimum(&r);
            for w in r.iterations.windows(2) {
                assert!(w[0].lambda <= w[1].lambda, "{}/{}", a.name(), s.name());
                assert!(w[0].index < w[1].index);
            }
        }
    }
}
