//! Exhaustive-enumeration oracle for testing the solving stack. Walks every
//! assignment over the original variables with bit-mask clause evaluation,
//! so it is independent of the CDCL/encoding code paths it checks.

use cardimax::types::{Clause, Model, WcnfInstance};
use thiserror::Error;

/// Default enumeration cap; 2^22 assignments stay comfortably interactive.
pub const DEFAULT_VAR_CAP: usize = 22;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {vars} variables, above the enumeration cap of {cap}")]
    TooManyVars { vars: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Optimum { optimum: usize, model: Model },
    Unsatisfiable,
}

struct MaskClause {
    pos: u32,
    neg: u32,
}

impl MaskClause {
    fn from_clause(c: &Clause) -> MaskClause {
        let mut pos = 0u32;
        let mut neg = 0u32;
        for l in c.iter() {
            let bit = 1u32 << (l.var().index() - 1);
            if l.is_positive() {
                pos |= bit;
            } else {
                neg |= bit;
            }
        }
        MaskClause { pos, neg }
    }

    fn satisfied(&self, assignment: u32) -> bool {
        assignment & self.pos != 0 || !assignment & self.neg != 0
    }
}

pub fn brute_force_optimum(instance: &WcnfInstance) -> Result<OracleVerdict, OracleError> {
    brute_force_with_cap(instance, DEFAULT_VAR_CAP)
}

pub fn brute_force_with_cap(
    instance: &WcnfInstance,
    cap: usize,
) -> Result<OracleVerdict, OracleError> {
    let n = instance.num_vars();
    if n > cap || n >= 32 {
        return Err(OracleError::TooManyVars { vars: n, cap: cap.min(31) });
    }
    let hard: Vec<MaskClause> = instance.hard().iter().map(MaskClause::from_clause).collect();
    let soft: Vec<MaskClause> = instance.soft().iter().map(MaskClause::from_clause).collect();

    let mut best: Option<(usize, u32)> = None;
    'assignments: for assignment in 0u32..(1u32 << n) {
        for h in &hard {
            if !h.satisfied(assignment) {
                continue 'assignments;
            }
        }
        let cost = soft.iter().filter(|s| !s.satisfied(assignment)).count();
        if best.is_none_or(|(b, _)| cost < b) {
            best = Some((cost, assignment));
            if cost == 0 {
                break;
            }
        }
    }
    Ok(match best {
        None => OracleVerdict::Unsatisfiable,
        Some((optimum, bits)) => OracleVerdict::Optimum {
            optimum,
            model: Model::new((0..n).map(|i| bits >> i & 1 == 1).collect()),
        },
    })
}

/// Checks that the oracle cannot find a hard-clause model strictly cheaper
/// than `claimed`; used by agreement tests.
pub fn is_optimal(instance: &WcnfInstance, claimed: usize) -> Result<bool, OracleError> {
    Ok(match brute_force_optimum(instance)? {
        OracleVerdict::Optimum { optimum, .. } => optimum == claimed,
        OracleVerdict::Unsatisfiable => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cardimax::types::{cost, Lit};

    fn lit(v: i32) -> Lit {
        Lit::from_dimacs(v)
    }

    fn clause(lits: &[i32]) -> Clause {
        Clause::new(lits.iter().map(|&v| lit(v)).collect())
    }

    #[test]
    fn forced_violation_costs_one() {
        let inst = WcnfInstance::new(
            2,
            vec![clause(&[1, 2])],
            vec![clause(&[-1]), clause(&[-2])],
        );
        match brute_force_optimum(&inst).unwrap() {
            OracleVerdict::Optimum { optimum, model } => {
                assert_eq!(optimum, 1);
                assert!(model.satisfies_all(inst.hard()));
                assert_eq!(cost(&model, inst.soft()), 1);
            }
            OracleVerdict::Unsatisfiable => panic!("hard part is satisfiable"),
        }
    }

    #[test]
    fn contradictory_hard_part_is_unsatisfiable() {
        let inst = WcnfInstance::new(1, vec![clause(&[1]), clause(&[-1])], vec![]);
        assert_eq!(brute_force_optimum(&inst).unwrap(), OracleVerdict::Unsatisfiable);
    }

    #[test]
    fn empty_hard_clause_is_unsatisfiable() {
        let inst = WcnfInstance::new(1, vec![clause(&[])], vec![clause(&[1])]);
        assert_eq!(brute_force_optimum(&inst).unwrap(), OracleVerdict::Unsatisfiable);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = WcnfInstance::new(23, vec![], vec![]);
        assert_eq!(
            brute_force_optimum(&inst),
            Err(OracleError::TooManyVars { vars: 23, cap: 22 })
        );
    }
}
