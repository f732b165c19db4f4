//! WCNF front end for the cardimax solving stack: DIMACS parsing, a
//! brute-force oracle, seeded instance generation, a benchmark harness, and
//! the `cardimax` command-line interface.

pub mod bench;
pub mod cli;
pub mod generate;
pub mod oracle;
pub mod wcnf;

pub use cli::run;
