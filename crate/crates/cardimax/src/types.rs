//! Shared vocabulary types: variables, literals, clauses, MaxSAT instances,
//! models, and solve results. No solving logic lives here.

use std::fmt;
use std::ops::Not;

use crate::stats::{IterationTrace, RunStats};

/// A Boolean variable, identified by a 1-based index.
///
/// Indices are allocated densely by a single allocator per solving session
/// (usually a [`Solver`](crate::solver::Solver)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Creates a variable from a 1-based index.
    ///
    /// Panics if `index` is zero.
    pub fn from_index(index: usize) -> Var {
        assert!(index >= 1, "variable indices are 1-based");
        Var(u32::try_from(index).expect("variable index overflow"))
    }

    /// The 1-based index of this variable.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The positive literal over this variable.
    pub fn pos_lit(self) -> Lit {
        Lit::new(self, true)
    }

    /// The negative literal over this variable.
    pub fn neg_lit(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A literal: a variable together with a polarity.
///
/// Encoded as `var << 1 | sign` with sign 0 for positive, so literals order
/// by variable index first and positive before negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 << 1 | u32::from(!positive))
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense code usable as an array index (codes start at 2).
    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }

    /// Parses a non-zero DIMACS literal (`3` / `-3`).
    ///
    /// Panics if `value` is zero.
    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != 0, "DIMACS literals are non-zero");
        Lit::new(Var::from_index(value.unsigned_abs() as usize), value > 0)
    }

    /// Renders the literal as a signed DIMACS integer.
    pub fn to_dimacs(self) -> i64 {
        let idx = self.var().index() as i64;
        if self.is_positive() {
            idx
        } else {
            -idx
        }
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals.
///
/// A freshly constructed clause keeps the literals as given; see
/// [`normalize_clause`] for the canonical duplicate-free form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: Vec<Lit>) -> Clause {
        Clause { lits }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    /// The empty clause represents falsum.
    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Lit> {
        self.lits.iter()
    }

    /// Largest variable index occurring in the clause, 0 if empty.
    pub fn max_var_index(&self) -> usize {
        self.lits.iter().map(|l| l.var().index()).max().unwrap_or(0)
    }
}

impl From<Vec<Lit>> for Clause {
    fn from(lits: Vec<Lit>) -> Clause {
        Clause::new(lits)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Result of clause normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizedClause {
    /// Duplicate-free clause with literals in stable (var, polarity) order.
    Clause(Clause),
    /// The input contained a complementary pair and is always satisfied.
    Tautology,
}

/// Removes duplicate literals and sorts by variable index, positive polarity
/// first. An input containing both `l` and `!l` yields
/// [`NormalizedClause::Tautology`]; an empty input yields the empty clause.
pub fn normalize_clause(lits: &[Lit]) -> NormalizedClause {
    let mut out: Vec<Lit> = lits.to_vec();
    out.sort_unstable();
    out.dedup();
    for pair in out.windows(2) {
        if pair[0].var() == pair[1].var() {
            return NormalizedClause::Tautology;
        }
    }
    NormalizedClause::Clause(Clause::new(out))
}

/// A partial MaxSAT instance: hard clauses that must hold and soft clauses
/// that count toward the cost when unsatisfied.
///
/// Soft clauses are identified by their position in the soft list; those ids
/// are stable, unique, and preserve input order (unsatisfiable cores are
/// reported in them). Duplicate soft clauses are distinct constraints and
/// each counts separately toward the cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WcnfInstance {
    num_vars: usize,
    hard: Vec<Clause>,
    soft: Vec<Clause>,
}

impl WcnfInstance {
    /// Builds an instance, checking that every variable index is in range.
    ///
    /// Panics if a clause mentions a variable above `num_vars`.
    pub fn new(num_vars: usize, hard: Vec<Clause>, soft: Vec<Clause>) -> WcnfInstance {
        for c in hard.iter().chain(soft.iter()) {
            assert!(
                c.max_var_index() <= num_vars,
                "clause {c} mentions a variable above num_vars = {num_vars}"
            );
        }
        WcnfInstance { num_vars, hard, soft }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn hard(&self) -> &[Clause] {
        &self.hard
    }

    pub fn soft(&self) -> &[Clause] {
        &self.soft
    }
}

/// A total assignment over the variables of a solving session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    /// `values[i]` is the assignment of the variable with index `i + 1`.
    pub fn new(values: Vec<bool>) -> Model {
        Model { values }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    /// Panics if `var` is outside the model (a defect in the caller).
    pub fn value(&self, var: Var) -> bool {
        self.values[var.index() - 1]
    }

    pub fn lit_value(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    pub fn satisfies(&self, clause: &Clause) -> bool {
        clause.iter().any(|&l| self.lit_value(l))
    }

    pub fn satisfies_all(&self, clauses: &[Clause]) -> bool {
        clauses.iter().all(|c| self.satisfies(c))
    }

    /// Restricts the model to the first `num_vars` variables.
    pub fn restrict(&self, num_vars: usize) -> Model {
        assert!(num_vars <= self.values.len());
        Model { values: self.values[..num_vars].to_vec() }
    }
}

/// Number of soft clauses unsatisfied under `model`.
///
/// Panics if a soft clause mentions a variable outside the model.
pub fn cost(model: &Model, soft: &[Clause]) -> usize {
    soft.iter().filter(|c| !model.satisfies(c)).count()
}

/// Outcome of a successful MaxSAT solve.
#[derive(Debug, Clone)]
pub struct MaxSatResult {
    /// Minimal number of unsatisfied soft clauses.
    pub optimum: usize,
    /// Witness restricted to the instance's original variables.
    pub model: Model,
    pub stats: RunStats,
    /// Per-main-SAT-call trace, in call order.
    pub iterations: Vec<IterationTrace>,
}
