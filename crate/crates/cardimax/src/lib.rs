//! Partial MaxSAT solving built from three pieces: a small incremental CDCL
//! solver, a totalizer-based cardinality encoder whose bound can be raised
//! and whose trees can be merged in place, and core-guided algorithm drivers
//! (linear unsat-sat search, Fu-Malik, MSU3) that each run under several
//! solver-reuse strategies while computing the same optimum.

pub mod algorithms;
pub mod solver;
pub mod stats;
pub mod totalizer;
pub mod types;

pub use stats::{IterationTrace, RunStats};
pub use types::{cost, Clause, Lit, MaxSatResult, Model, Var, WcnfInstance};
