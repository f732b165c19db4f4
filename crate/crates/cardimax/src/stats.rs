//! Counters describing the work a MaxSAT solve performed. These feed the
//! CLI stats lines and the benchmark reports.

use std::fmt;
use std::time::Duration;

/// Aggregated counters for one MaxSAT solve.
///
/// `sat_calls` counts the main-loop SAT calls of the algorithm; the
/// preliminary hard-clause satisfiability check is tracked separately in
/// `prelim_sat_calls`. `clauses_emitted` is cumulative over all solver
/// instances created during the solve, and `card_clauses` is the subset
/// produced by cardinality encoders.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunStats {
    pub sat_calls: u64,
    pub prelim_sat_calls: u64,
    pub conflicts: u64,
    pub clauses_emitted: u64,
    pub card_clauses: u64,
    pub solver_instances: u64,
    pub cores_found: u64,
    pub core_size_total: u64,
    pub wall_time: Duration,
}

impl fmt::Display for RunStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sat_calls={} prelim_calls={} conflicts={} clauses_emitted={} card_clauses={} \
             solver_instances={} cores={} core_lits={} wall_ms={}",
            self.sat_calls,
            self.prelim_sat_calls,
            self.conflicts,
            self.clauses_emitted,
            self.card_clauses,
            self.solver_instances,
            self.cores_found,
            self.core_size_total,
            self.wall_time.as_millis()
        )
    }
}

/// One main-loop SAT call of an algorithm driver.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IterationTrace {
    /// 0-based main-call index.
    pub index: usize,
    /// Bound in effect for this call.
    pub lambda: usize,
    /// Soft-clause ids named by the unsatisfiable core of this call, empty
    /// when the call was satisfiable or the algorithm does not use cores.
    pub core_softs: Vec<usize>,
    /// Clauses emitted into the solver while setting up this call.
    pub clauses_emitted: u64,
}

impl fmt::Display for IterationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "it={} lambda={} core={} emitted={}",
            self.index,
            self.lambda,
            self.core_softs
                .iter()
                .map(|id| id.to_string())
                .collect::<Vec<_>>()
                .join(","),
            self.clauses_emitted
        )
    }
}
