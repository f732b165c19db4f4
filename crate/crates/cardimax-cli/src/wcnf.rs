//! DIMACS WCNF parsing and rendering, pre-2022 dialect: a `p wcnf <vars>
//! <clauses> <top>` header followed by one clause per line, each line
//! starting with a weight and ending with 0. A clause weighing `top` is
//! hard; weight 1 is soft; anything else is rejected, since only partial
//! (unweighted) MaxSAT is supported.

use cardimax::types::{Clause, Lit, WcnfInstance};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WcnfError {
    #[error("line {line}: clause before the 'p wcnf' header")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate 'p wcnf' header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: malformed header, expected 'p wcnf <vars> <clauses> <top>'")]
    BadHeader { line: usize },
    #[error("line {line}: top weight must be at least 2")]
    BadTop { line: usize },
    #[error("line {line}: expected an integer, found {token:?}")]
    BadToken { line: usize, token: String },
    #[error("line {line}: weighted soft clauses are unsupported (weight {weight} with top {top})")]
    UnsupportedWeight { line: usize, weight: u64, top: u64 },
    #[error("line {line}: variable {var} exceeds the declared {max} variables")]
    VarOutOfRange { line: usize, var: usize, max: usize },
    #[error("line {line}: clause line does not end with 0")]
    UnterminatedClause { line: usize },
    #[error("line {line}: tokens after the terminating 0")]
    TrailingTokens { line: usize },
    #[error("no 'p wcnf' header found")]
    NoHeader,
    #[error("header declares {declared} clauses but the file contains {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
}

/// A parsed WCNF file: the header as declared plus the populated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WcnfDocument {
    pub declared_vars: usize,
    pub declared_clauses: usize,
    pub top: u64,
    pub instance: WcnfInstance,
}

pub fn parse_wcnf(text: &str) -> Result<WcnfDocument, WcnfError> {
    let mut header: Option<(usize, usize, u64)> = None;
    let mut hard: Vec<Clause> = Vec::new();
    let mut soft: Vec<Clause> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim_end_matches('\r').trim();
        if content.is_empty() || content.starts_with('c') {
            continue;
        }
        if content.starts_with('p') {
            if header.is_some() {
                return Err(WcnfError::DuplicateHeader { line });
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() != 5 || tokens[0] != "p" || tokens[1] != "wcnf" {
                return Err(WcnfError::BadHeader { line });
            }
            let vars: usize = tokens[2].parse().map_err(|_| WcnfError::BadHeader { line })?;
            let clauses: usize = tokens[3].parse().map_err(|_| WcnfError::BadHeader { line })?;
            let top: u64 = tokens[4].parse().map_err(|_| WcnfError::BadHeader { line })?;
            if top < 2 {
                return Err(WcnfError::BadTop { line });
            }
            header = Some((vars, clauses, top));
            continue;
        }
        let (declared_vars, _, top) = header.ok_or(WcnfError::MissingHeader { line })?;

        let mut tokens = content.split_whitespace();
        let weight_token = tokens.next().expect("non-empty line has a first token");
        let weight: u64 = weight_token.parse().map_err(|_| WcnfError::BadToken {
            line,
            token: weight_token.to_string(),
        })?;
        let mut lits: Vec<Lit> = Vec::new();
        let mut terminated = false;
        for token in tokens {
            if terminated {
                return Err(WcnfError::TrailingTokens { line });
            }
            let value: i64 = token.parse().map_err(|_| WcnfError::BadToken {
                line,
                token: token.to_string(),
            })?;
            if value == 0 {
                terminated = true;
                continue;
            }
            let var = value.unsigned_abs() as usize;
            if var > declared_vars {
                return Err(WcnfError::VarOutOfRange { line, var, max: declared_vars });
            }
            lits.push(Lit::from_dimacs(value as i32));
        }
        if !terminated {
            return Err(WcnfError::UnterminatedClause { line });
        }
        if weight == top {
            hard.push(Clause::new(lits));
        } else if weight == 1 {
            soft.push(Clause::new(lits));
        } else {
            return Err(WcnfError::UnsupportedWeight { line, weight, top });
        }
    }

    let (declared_vars, declared_clauses, top) = header.ok_or(WcnfError::NoHeader)?;
    let found = hard.len() + soft.len();
    if found != declared_clauses {
        return Err(WcnfError::ClauseCountMismatch { declared: declared_clauses, found });
    }
    Ok(WcnfDocument {
        declared_vars,
        declared_clauses,
        top,
        instance: WcnfInstance::new(declared_vars, hard, soft),
    })
}

/// Renders an instance in the same dialect `parse_wcnf` accepts. The top
/// weight is one above the number of soft clauses (at least 2).
pub fn render_wcnf(instance: &WcnfInstance) -> String {
    let top = (instance.soft().len() as u64 + 1).max(2);
    let mut out = String::new();
    out.push_str(&format!(
        "p wcnf {} {} {}\n",
        instance.num_vars(),
        instance.hard().len() + instance.soft().len(),
        top
    ));
    let mut push_clause = |weight: u64, clause: &Clause| {
        out.push_str(&weight.to_string());
        for l in clause.iter() {
            out.push_str(&format!(" {}", l.to_dimacs()));
        }
        out.push_str(" 0\n");
    };
    for c in instance.hard() {
        push_clause(top, c);
    }
    for c in instance.soft() {
        push_clause(1, c);
    }
    out
}
