//! Incremental CDCL SAT solver.
//!
//! The clause store only ever grows between calls: permanent clauses are
//! never deleted, so learned clauses (which are consequences of the
//! permanent store alone, never of assumptions) stay sound across calls and
//! may be dropped at will. Solving under an assumption list returns either a
//! model or a subset of the assumptions that is unsatisfiable together with
//! the permanent clauses.
//!
//! The heuristics are fixed and deterministic: two-watched-literal
//! propagation, first-UIP learning with basic clause minimization,
//! exponential-decay variable activity with ties broken on the lowest
//! variable index, geometric restarts (first at 100 conflicts, factor 1.5),
//! and phase saving. There is no preprocessing; external literals keep their
//! meaning across the whole session, which the cardinality encodings rely
//! on.

use std::time::Instant;

use crate::types::{Lit, Model, NormalizedClause, Var, normalize_clause};

/// Outcome of [`Solver::add_clause`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddResult {
    Accepted,
    /// The permanent store is now unsatisfiable at decision level zero.
    RootConflict,
}

/// Outcome of [`Solver::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    /// Total model over all allocated variables; satisfies every permanent
    /// clause and every assumption.
    Sat(Model),
    /// Subset of the assumptions passed in, in assumption order and
    /// deduplicated, unsatisfiable together with the permanent clauses.
    /// Empty iff the permanent store itself is unsatisfiable.
    Unsat(Vec<Lit>),
    /// The deadline set via [`Solver::set_deadline`] expired.
    Interrupted,
}

/// Snapshot of the solver's work counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub solve_calls: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Value {
    True,
    False,
    Unset,
}

struct ClauseRec {
    lits: Vec<Lit>,
    learnt: bool,
    removed: bool,
    activity: f64,
}

#[derive(Clone, Copy)]
struct Watch {
    cref: usize,
    blocker: Lit,
}

/// Activity-ordered max-heap over variables; ties go to the lower index.
#[derive(Default)]
struct VarOrder {
    heap: Vec<u32>,
    // pos[var] = heap index + 1, 0 when absent
    pos: Vec<u32>,
}

impl VarOrder {
    fn grow_to(&mut self, n_vars: usize) {
        self.pos.resize(n_vars + 1, 0);
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != 0
    }

    fn before(act: &[f64], a: u32, b: u32) -> bool {
        act[a as usize] > act[b as usize] || (act[a as usize] == act[b as usize] && a < b)
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        self.pos[v as usize] = self.heap.len() as u32;
        self.sift_up(self.heap.len() - 1, act);
    }

    fn update(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            let i = (self.pos[v as usize] - 1) as usize;
            self.sift_up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = 0;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 1;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if Self::before(act, self.heap[i], self.heap[parent]) {
                self.swap(i, parent);
                i = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        loop {
            let l = 2 * i + 1;
            let r = 2 * i + 2;
            let mut best = i;
            if l < self.heap.len() && Self::before(act, self.heap[l], self.heap[best]) {
                best = l;
            }
            if r < self.heap.len() && Self::before(act, self.heap[r], self.heap[best]) {
                best = r;
            }
            if best == i {
                break;
            }
            self.swap(i, best);
            i = best;
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.pos[self.heap[a] as usize] = a as u32 + 1;
        self.pos[self.heap[b] as usize] = b as u32 + 1;
    }
}

const VAR_DECAY: f64 = 0.95;
const CLA_DECAY: f64 = 0.999;
const RESTART_FIRST: u64 = 100;
const RESTART_FACTOR: f64 = 1.5;
const DEADLINE_CHECK_INTERVAL: u64 = 1024;

/// Incremental CDCL solver with a monotone clause store.
pub struct Solver {
    clauses: Vec<ClauseRec>,
    learnt_refs: Vec<usize>,
    n_permanent: usize,
    watches: Vec<Vec<Watch>>,
    // All per-variable arrays are indexed by the 1-based variable index.
    assign: Vec<Value>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    activity: Vec<f64>,
    polarity: Vec<bool>,
    order: VarOrder,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    ok: bool,
    var_inc: f64,
    cla_inc: f64,
    max_learnts: f64,
    seen: Vec<bool>,
    stats: SolverStats,
    deadline: Option<Instant>,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

impl Solver {
    pub fn new() -> Solver {
        Solver {
            clauses: Vec::new(),
            learnt_refs: Vec::new(),
            n_permanent: 0,
            watches: vec![Vec::new(), Vec::new()],
            assign: vec![Value::Unset],
            level: vec![0],
            reason: vec![None],
            activity: vec![0.0],
            polarity: vec![false],
            order: VarOrder::default(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            ok: true,
            var_inc: 1.0,
            cla_inc: 1.0,
            max_learnts: 0.0,
            seen: vec![false],
            stats: SolverStats::default(),
            deadline: None,
        }
    }

    /// Allocates the next variable; indices are dense and increasing.
    pub fn new_var(&mut self) -> Var {
        let idx = self.assign.len();
        self.assign.push(Value::Unset);
        self.level.push(0);
        self.reason.push(None);
        self.activity.push(0.0);
        self.polarity.push(false);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.order.grow_to(idx);
        self.order.insert(idx as u32, &self.activity);
        Var::from_index(idx)
    }

    pub fn num_vars(&self) -> usize {
        self.assign.len() - 1
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// Wall-clock deadline checked every 1024 conflicts during solving.
    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    fn lit_value(&self, l: Lit) -> Value {
        match self.assign[l.var().index()] {
            Value::Unset => Value::Unset,
            Value::True => {
                if l.is_positive() {
                    Value::True
                } else {
                    Value::False
                }
            }
            Value::False => {
                if l.is_positive() {
                    Value::False
                } else {
                    Value::True
                }
            }
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    /// Adds a permanent clause. The clause is normalized first; tautologies
    /// are accepted and dropped. Returns [`AddResult::RootConflict`] once
    /// the store is unsatisfiable at decision level zero.
    ///
    /// Panics if a literal mentions an unallocated variable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> AddResult {
        for l in lits {
            assert!(
                l.var().index() <= self.num_vars(),
                "clause mentions unallocated variable {}",
                l.var()
            );
        }
        debug_assert_eq!(self.decision_level(), 0, "clauses are added between solves");
        if !self.ok {
            return AddResult::RootConflict;
        }
        let mut c = match normalize_clause(lits) {
            NormalizedClause::Tautology => return AddResult::Accepted,
            NormalizedClause::Clause(c) => c.lits().to_vec(),
        };
        // Root-level simplification.
        c.retain(|&l| self.lit_value(l) != Value::False);
        if c.iter().any(|&l| self.lit_value(l) == Value::True) {
            return AddResult::Accepted;
        }
        match c.len() {
            0 => {
                self.ok = false;
                AddResult::RootConflict
            }
            1 => {
                self.enqueue(c[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                    AddResult::RootConflict
                } else {
                    AddResult::Accepted
                }
            }
            _ => {
                let cref = self.clauses.len();
                self.clauses.push(ClauseRec {
                    lits: c,
                    learnt: false,
                    removed: false,
                    activity: 0.0,
                });
                self.n_permanent += 1;
                self.attach(cref);
                AddResult::Accepted
            }
        }
    }

    fn attach(&mut self, cref: usize) {
        let (l0, l1) = {
            let c = &self.clauses[cref].lits;
            (c[0], c[1])
        };
        self.watches[(!l0).code()].push(Watch { cref, blocker: l1 });
        self.watches[(!l1).code()].push(Watch { cref, blocker: l0 });
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        debug_assert_eq!(self.lit_value(l), Value::Unset);
        let v = l.var().index();
        self.assign[v] = if l.is_positive() { Value::True } else { Value::False };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = if self.decision_level() == 0 { None } else { reason };
        self.trail.push(l);
    }

    /// Unit propagation; returns the conflicting clause reference if any.
    fn propagate(&mut self) -> Option<usize> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let mut ws = std::mem::take(&mut self.watches[p.code()]);
            let mut kept = 0;
            let mut i = 0;
            'watches: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.clauses[w.cref].removed {
                    continue;
                }
                if self.lit_value(w.blocker) == Value::True {
                    ws[kept] = w;
                    kept += 1;
                    continue;
                }
                // Make sure the falsified literal is at position 1.
                let false_lit = !p;
                {
                    let c = &mut self.clauses[w.cref].lits;
                    if c[0] == false_lit {
                        c.swap(0, 1);
                    }
                    debug_assert_eq!(c[1], false_lit);
                }
                let first = self.clauses[w.cref].lits[0];
                if first != w.blocker && self.lit_value(first) == Value::True {
                    ws[kept] = Watch { cref: w.cref, blocker: first };
                    kept += 1;
                    continue;
                }
                // Look for a new literal to watch.
                for k in 2..self.clauses[w.cref].lits.len() {
                    if self.lit_value(self.clauses[w.cref].lits[k]) != Value::False {
                        self.clauses[w.cref].lits.swap(1, k);
                        let new_watch = !self.clauses[w.cref].lits[1];
                        self.watches[new_watch.code()].push(Watch {
                            cref: w.cref,
                            blocker: first,
                        });
                        continue 'watches;
                    }
                }
                // Unit or conflicting.
                ws[kept] = Watch { cref: w.cref, blocker: first };
                kept += 1;
                if self.lit_value(first) == Value::False {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    // Keep the remaining watchers.
                    while i < ws.len() {
                        ws[kept] = ws[i];
                        kept += 1;
                        i += 1;
                    }
                    break;
                }
                self.enqueue(first, Some(w.cref));
            }
            ws.truncate(kept);
            self.watches[p.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.update(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, cref: usize) {
        let c = &mut self.clauses[cref];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &r in &self.learnt_refs {
                self.clauses[r].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis; returns the learnt clause (asserting
    /// literal first) and the backtrack level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, usize) {
        let mut learnt: Vec<Lit> = vec![Lit::from_dimacs(1)]; // placeholder slot
        let mut seen_list: Vec<usize> = Vec::new();
        let mut path_c = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level() as u32;

        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl].lits.len() {
                let q = self.clauses[confl].lits[k];
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    seen_list.push(v);
                    self.bump_var(v);
                    if self.level[v] >= current {
                        path_c += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            // Next literal on the trail that participates in the conflict.
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let pl = self.trail[index];
            self.seen[pl.var().index()] = false;
            path_c -= 1;
            if path_c == 0 {
                learnt[0] = !pl;
                break;
            }
            confl = self.reason[pl.var().index()].expect("non-decision on conflict path");
            p = Some(pl);
        }

        // Basic minimization: drop a literal whose reason is subsumed by the
        // rest of the learnt clause.
        let mut j = 1;
        for i in 1..learnt.len() {
            let l = learnt[i];
            let keep = match self.reason[l.var().index()] {
                None => true,
                Some(r) => {
                    let c = &self.clauses[r].lits;
                    c[1..].iter().any(|&q| {
                        !self.seen[q.var().index()] && self.level[q.var().index()] > 0
                    })
                }
            };
            if keep {
                learnt[j] = l;
                j += 1;
            }
        }
        learnt.truncate(j);

        let backtrack = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var().index()] > self.level[learnt[max_i].var().index()] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var().index()] as usize
        };

        for v in seen_list {
            self.seen[v] = false;
        }
        (learnt, backtrack)
    }

    /// Expresses a failed assumption in terms of the assumptions that forced
    /// it; returns them in trail-discovery order (including `failed`).
    fn analyze_final(&mut self, failed: Lit) -> Vec<Lit> {
        let mut out = vec![failed];
        if self.trail_lim.is_empty() {
            return out;
        }
        let mut seen_list = vec![failed.var().index()];
        self.seen[failed.var().index()] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().index();
            if !self.seen[v] {
                continue;
            }
            match self.reason[v] {
                None => out.push(l),
                Some(r) => {
                    for k in 1..self.clauses[r].lits.len() {
                        let q = self.clauses[r].lits[k];
                        let qv = q.var().index();
                        if !self.seen[qv] && self.level[qv] > 0 {
                            self.seen[qv] = true;
                            seen_list.push(qv);
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        for v in seen_list {
            self.seen[v] = false;
        }
        out
    }

    fn cancel_until(&mut self, target: usize) {
        if self.decision_level() <= target {
            return;
        }
        let lim = self.trail_lim[target];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().index();
            self.polarity[v] = self.assign[v] == Value::True;
            self.assign[v] = Value::Unset;
            self.reason[v] = None;
            self.order.insert(v as u32, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(target);
        self.qhead = lim;
    }

    fn record_learnt(&mut self, learnt: Vec<Lit>) {
        if learnt.len() == 1 {
            self.enqueue(learnt[0], None);
            return;
        }
        let cref = self.clauses.len();
        self.clauses.push(ClauseRec {
            lits: learnt,
            learnt: true,
            removed: false,
            activity: self.cla_inc,
        });
        self.learnt_refs.push(cref);
        self.attach(cref);
        let asserting = self.clauses[cref].lits[0];
        self.enqueue(asserting, Some(cref));
    }

    /// Drops the less active half of the learnt clauses. Only called at
    /// decision level zero, where no learnt clause is a reason.
    fn reduce_learnts(&mut self) {
        debug_assert_eq!(self.decision_level(), 0);
        let clauses = &self.clauses;
        self.learnt_refs.sort_by(|&a, &b| {
            clauses[b]
                .activity
                .partial_cmp(&clauses[a].activity)
                .unwrap()
                .then(a.cmp(&b))
        });
        let keep = self.learnt_refs.len() / 2;
        let mut kept = Vec::with_capacity(keep + 8);
        for (i, &r) in self.learnt_refs.iter().enumerate() {
            if i < keep || self.clauses[r].lits.len() <= 2 {
                kept.push(r);
            } else {
                self.clauses[r].removed = true;
                self.clauses[r].lits.clear();
                self.clauses[r].lits.shrink_to_fit();
            }
        }
        self.learnt_refs = kept;
    }

    fn snapshot_model(&self) -> Model {
        let values = (1..=self.num_vars())
            .map(|v| match self.assign[v] {
                Value::True => true,
                Value::False => false,
                Value::Unset => unreachable!("model requested with unassigned variable"),
            })
            .collect();
        Model::new(values)
    }

    /// Solves the permanent store under the given assumptions.
    ///
    /// Assumptions hold for this call only. Panics if the assumption list
    /// contains a literal and its negation or an unallocated variable.
    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.stats.solve_calls += 1;
        let mut polarity_of: std::collections::HashMap<Var, bool> = std::collections::HashMap::new();
        for &a in assumptions {
            assert!(
                a.var().index() <= self.num_vars(),
                "assumption mentions unallocated variable {}",
                a.var()
            );
            if let Some(prev) = polarity_of.insert(a.var(), a.is_positive()) {
                assert_eq!(prev, a.is_positive(), "contradictory assumptions on {}", a.var());
            }
        }
        if !self.ok {
            return SolveResult::Unsat(Vec::new());
        }
        if self.max_learnts == 0.0 {
            self.max_learnts = f64::max(1000.0, self.n_permanent as f64 / 3.0);
        }

        let mut until_restart = RESTART_FIRST;
        let mut restart_interval = RESTART_FIRST as f64;
        let result = loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    break SolveResult::Unsat(Vec::new());
                }
                let (learnt, backtrack) = self.analyze(confl);
                self.cancel_until(backtrack);
                self.record_learnt(learnt);
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLA_DECAY;

                if self.stats.conflicts.is_multiple_of(DEADLINE_CHECK_INTERVAL) {
                    if let Some(d) = self.deadline {
                        if Instant::now() >= d {
                            break SolveResult::Interrupted;
                        }
                    }
                }
                until_restart = until_restart.saturating_sub(1);
                if until_restart == 0 {
                    restart_interval *= RESTART_FACTOR;
                    until_restart = restart_interval as u64;
                    self.stats.restarts += 1;
                    self.cancel_until(0);
                    if self.learnt_refs.len() as f64 >= self.max_learnts {
                        self.reduce_learnts();
                        self.max_learnts *= 1.1;
                    }
                }
            } else if self.decision_level() < assumptions.len() {
                let p = assumptions[self.decision_level()];
                match self.lit_value(p) {
                    Value::True => self.trail_lim.push(self.trail.len()),
                    Value::False => {
                        let core = self.analyze_final(p);
                        break SolveResult::Unsat(order_core(core, assumptions));
                    }
                    Value::Unset => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(p, None);
                    }
                }
            } else {
                // Regular decision.
                let next = loop {
                    match self.order.pop(&self.activity) {
                        None => break None,
                        Some(v) if self.assign[v as usize] != Value::Unset => continue,
                        Some(v) => break Some(v),
                    }
                };
                match next {
                    None => break SolveResult::Sat(self.snapshot_model()),
                    Some(v) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        let lit = Lit::new(Var::from_index(v as usize), self.polarity[v as usize]);
                        self.enqueue(lit, None);
                    }
                }
            }
        };
        self.cancel_until(0);
        result
    }
}

/// Reorders a core by first occurrence in the assumption list, dropping
/// duplicates.
fn order_core(core: Vec<Lit>, assumptions: &[Lit]) -> Vec<Lit> {
    let mut out: Vec<Lit> = Vec::with_capacity(core.len());
    for &a in assumptions {
        if core.contains(&a) && !out.contains(&a) {
            out.push(a);
        }
    }
    debug_assert_eq!(out.len(), {
        let mut c = core.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn lit(v: i32) -> Lit {
        Lit::from_dimacs(v)
    }

    fn vars(s: &mut Solver, n: usize) -> Vec<Var> {
        (0..n).map(|_| s.new_var()).collect()
    }

    /// Exhaustive satisfiability check over `n` variables.
    fn brute_force_sat(n: usize, clauses: &[Vec<Lit>]) -> bool {
        assert!(n <= 20);
        'outer: for bits in 0u32..(1 << n) {
            for c in clauses {
                let sat = c.iter().any(|l| {
                    let val = bits >> (l.var().index() - 1) & 1 == 1;
                    val == l.is_positive()
                });
                if !sat {
                    continue 'outer;
                }
            }
            return true;
        }
        false
    }

    #[test]
    fn fresh_solver_is_empty() {
        let s = Solver::new();
        assert_eq!(s.num_vars(), 0);
        assert_eq!(s.stats(), SolverStats::default());
    }

    #[test]
    fn var_allocation_is_dense() {
        let mut s = Solver::new();
        assert_eq!(s.new_var().index(), 1);
        assert_eq!(s.new_var().index(), 2);
        s.add_clause(&[lit(1), lit(2)]);
        assert_eq!(s.new_var().index(), 3);
        for i in 4..=5 {
            assert_eq!(s.new_var().index(), i);
        }
    }

    #[test]
    fn empty_clause_gives_root_conflict() {
        let mut s = Solver::new();
        assert_eq!(s.add_clause(&[]), AddResult::RootConflict);
        assert_eq!(s.solve(&[]), SolveResult::Unsat(vec![]));
    }

    #[test]
    fn unit_conflict_on_add() {
        let mut s = Solver::new();
        vars(&mut s, 1);
        assert_eq!(s.add_clause(&[lit(1)]), AddResult::Accepted);
        assert_eq!(s.add_clause(&[lit(-1)]), AddResult::RootConflict);
    }

    #[test]
    fn simple_sat() {
        let mut s = Solver::new();
        vars(&mut s, 2);
        assert_eq!(s.add_clause(&[lit(1), lit(2)]), AddResult::Accepted);
        match s.solve(&[]) {
            SolveResult::Sat(m) => assert!(m.value(Var::from_index(1)) || m.value(Var::from_index(2))),
            other => panic!("expected SAT, got {other:?}"),
        }
    }

    #[test]
    fn empty_store_is_sat_with_total_model() {
        let mut s = Solver::new();
        vars(&mut s, 3);
        match s.solve(&[]) {
            SolveResult::Sat(m) => assert_eq!(m.num_vars(), 3),
            other => panic!("expected SAT, got {other:?}"),
        }
    }

    #[test]
    fn assumption_core_covers_both_assumptions() {
        let mut s = Solver::new();
        vars(&mut s, 2);
        s.add_clause(&[lit(1), lit(2)]);
        match s.solve(&[lit(-1), lit(-2)]) {
            SolveResult::Unsat(core) => assert_eq!(core, vec![lit(-1), lit(-2)]),
            other => panic!("expected UNSAT, got {other:?}"),
        }
        // The other polarity is satisfiable.
        match s.solve(&[lit(-1)]) {
            SolveResult::Sat(m) => assert!(m.value(Var::from_index(2))),
            other => panic!("expected SAT, got {other:?}"),
        }
    }

    #[test]
    fn totalizer_style_conflict_under_assumption() {
        // Counting clauses of a two-leaf unary counter: with both inputs
        // asserted, assuming the first output false must conflict.
        let mut s = Solver::new();
        vars(&mut s, 4); // l1 l2 o1 o2
        s.add_clause(&[lit(-1), lit(3)]);
        s.add_clause(&[lit(-2), lit(3)]);
        s.add_clause(&[lit(-1), lit(-2), lit(4)]);
        s.add_clause(&[lit(1)]);
        s.add_clause(&[lit(2)]);
        match s.solve(&[lit(-3)]) {
            SolveResult::Unsat(core) => assert_eq!(core, vec![lit(-3)]),
            other => panic!("expected UNSAT, got {other:?}"),
        }
    }

    #[test]
    #[should_panic(expected = "contradictory assumptions")]
    fn contradictory_assumptions_are_a_defect() {
        let mut s = Solver::new();
        vars(&mut s, 1);
        s.solve(&[lit(1), lit(-1)]);
    }

    #[test]
    fn stats_track_solve_calls() {
        let mut s = Solver::new();
        vars(&mut s, 1);
        s.add_clause(&[lit(1)]);
        assert_eq!(s.stats().solve_calls, 0);
        s.solve(&[]);
        assert_eq!(s.stats().solve_calls, 1);
        let before = s.stats().conflicts;
        s.solve(&[]);
        assert_eq!(s.stats().solve_calls, 2);
        assert!(s.stats().conflicts >= before);
    }

    fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<Lit>> {
        (0..m)
            .map(|_| {
                let len = rng.gen_range(1..=3.min(n));
                let mut vars: Vec<usize> = (1..=n).collect();
                vars.shuffle(rng);
                vars[..len]
                    .iter()
                    .map(|&v| Lit::new(Var::from_index(v), rng.gen_bool(0.5)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn verdict_and_model_agree_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for round in 0..400 {
            let n = rng.gen_range(2..=12);
            let m = rng.gen_range(1..=4 * n);
            let clauses = random_instance(&mut rng, n, m);
            let mut s = Solver::new();
            vars(&mut s, n);
            for c in &clauses {
                s.add_clause(c);
            }
            let expected = brute_force_sat(n, &clauses);
            match s.solve(&[]) {
                SolveResult::Sat(model) => {
                    assert!(expected, "round {round}: solver SAT, oracle UNSAT");
                    for c in &clauses {
                        assert!(
                            c.iter().any(|&l| model.lit_value(l)),
                            "round {round}: model violates {c:?}"
                        );
                    }
                }
                SolveResult::Unsat(core) => {
                    assert!(!expected, "round {round}: solver UNSAT, oracle SAT");
                    assert!(core.is_empty());
                }
                SolveResult::Interrupted => unreachable!(),
            }
        }
    }

    #[test]
    fn models_satisfy_every_clause_on_a_large_random_suite() {
        // Independent clause evaluation only; random 3-CNF up to 30 vars,
        // below the satisfiability threshold so most instances have models.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut sat_seen = 0;
        for _ in 0..1200 {
            let n = rng.gen_range(3..=30);
            let m = rng.gen_range(n..=3 * n);
            let clauses: Vec<Vec<Lit>> = (0..m)
                .map(|_| {
                    let mut vars: Vec<usize> = (1..=n).collect();
                    vars.shuffle(&mut rng);
                    vars[..3.min(n)]
                        .iter()
                        .map(|&v| Lit::new(Var::from_index(v), rng.gen_bool(0.5)))
                        .collect()
                })
                .collect();
            let mut s = Solver::new();
            vars(&mut s, n);
            for c in &clauses {
                s.add_clause(c);
            }
            if let SolveResult::Sat(model) = s.solve(&[]) {
                sat_seen += 1;
                assert_eq!(model.num_vars(), n);
                for c in &clauses {
                    assert!(c.iter().any(|&l| model.lit_value(l)), "model violates {c:?}");
                }
            }
        }
        assert!(sat_seen > 400, "suite produced too few SAT cases ({sat_seen})");
    }

    #[test]
    fn models_under_assumptions_satisfy_them() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..600 {
            let n = rng.gen_range(3..=14);
            let m = rng.gen_range(1..=3 * n);
            let clauses = random_instance(&mut rng, n, m);
            let n_assumps = rng.gen_range(1..=n);
            let mut pool: Vec<usize> = (1..=n).collect();
            pool.shuffle(&mut rng);
            let assumps: Vec<Lit> = pool[..n_assumps]
                .iter()
                .map(|&v| Lit::new(Var::from_index(v), rng.gen_bool(0.5)))
                .collect();
            let mut s = Solver::new();
            vars(&mut s, n);
            for c in &clauses {
                s.add_clause(c);
            }
            if let SolveResult::Sat(model) = s.solve(&assumps) {
                checked += 1;
                for &a in &assumps {
                    assert!(model.lit_value(a), "model violates assumption {a}");
                }
                for c in &clauses {
                    assert!(c.iter().any(|&l| model.lit_value(l)));
                }
            }
        }
        assert!(checked > 100, "suite produced too few SAT cases ({checked})");
    }

    #[test]
    fn assumption_cores_are_unsat_with_store() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut checked = 0;
        for _ in 0..600 {
            let n = rng.gen_range(3..=12);
            let m = rng.gen_range(n..=4 * n);
            let clauses = random_instance(&mut rng, n, m);
            let n_assumps = rng.gen_range(1..=n);
            let mut pool: Vec<usize> = (1..=n).collect();
            pool.shuffle(&mut rng);
            let assumps: Vec<Lit> = pool[..n_assumps]
                .iter()
                .map(|&v| Lit::new(Var::from_index(v), rng.gen_bool(0.5)))
                .collect();
            let mut s = Solver::new();
            vars(&mut s, n);
            for c in &clauses {
                s.add_clause(c);
            }
            if let SolveResult::Unsat(core) = s.solve(&assumps) {
                checked += 1;
                for l in &core {
                    assert!(assumps.contains(l), "core literal {l} not among assumptions");
                }
                let mut all = clauses.clone();
                all.extend(core.iter().map(|&l| vec![l]));
                assert!(
                    !brute_force_sat(n, &all),
                    "core {core:?} is satisfiable with the store"
                );
            }
        }
        assert!(checked > 100, "suite produced too few UNSAT cases ({checked})");
    }

    #[test]
    fn incremental_equals_from_scratch() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.gen_range(3..=10);
            let m = rng.gen_range(2..=3 * n);
            let clauses = random_instance(&mut rng, n, m);

            let mut incremental = Solver::new();
            vars(&mut incremental, n);
            let mut verdicts = Vec::new();
            for i in 0..clauses.len() {
                incremental.add_clause(&clauses[i]);
                let v = matches!(incremental.solve(&[]), SolveResult::Sat(_));
                verdicts.push(v);

                let mut fresh = Solver::new();
                vars(&mut fresh, n);
                for c in &clauses[..=i] {
                    fresh.add_clause(c);
                }
                let f = matches!(fresh.solve(&[]), SolveResult::Sat(_));
                assert_eq!(v, f, "incremental and fresh verdicts differ");
            }
            // Verdicts are monotone: once UNSAT, always UNSAT.
            for w in verdicts.windows(2) {
                assert!(w[0] || !w[1]);
            }
        }
    }

    #[test]
    fn identical_call_sequences_are_deterministic() {
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            let mut s = Solver::new();
            vars(&mut s, 14);
            let mut outcomes = Vec::new();
            for _ in 0..30 {
                let c = random_instance(&mut rng, 14, 1).pop().unwrap();
                s.add_clause(&c);
                match s.solve(&[]) {
                    SolveResult::Sat(m) => outcomes.push(format!("sat {m:?}")),
                    SolveResult::Unsat(core) => outcomes.push(format!("unsat {core:?}")),
                    SolveResult::Interrupted => unreachable!(),
                }
            }
            (outcomes, s.stats())
        };
        assert_eq!(run(), run());
    }

    /// Pigeonhole instance: n+1 pigeons into n holes, unsatisfiable. Heavy
    /// enough to exercise restarts and learnt-clause handling.
    #[test]
    fn pigeonhole_is_unsat() {
        let pigeons = 6;
        let holes = 5;
        let mut s = Solver::new();
        let var = |p: usize, h: usize| Var::from_index(p * holes + h + 1);
        vars(&mut s, pigeons * holes);
        for p in 0..pigeons {
            let c: Vec<Lit> = (0..holes).map(|h| var(p, h).pos_lit()).collect();
            s.add_clause(&c);
        }
        for h in 0..holes {
            for p1 in 0..pigeons {
                for p2 in (p1 + 1)..pigeons {
                    s.add_clause(&[var(p1, h).neg_lit(), var(p2, h).neg_lit()]);
                }
            }
        }
        assert_eq!(s.solve(&[]), SolveResult::Unsat(vec![]));
        assert!(s.stats().conflicts > 100);
        assert!(s.stats().restarts >= 1);
    }
}
