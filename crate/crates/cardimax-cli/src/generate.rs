//! Seeded instance generation: a `tiny` profile small enough for the
//! enumeration oracle, and a `medium` profile whose optimum is forced by
//! construction, for stress and timing comparisons.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use cardimax::types::{Clause, Lit, Var, WcnfInstance};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::wcnf::render_wcnf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Up to 12 variables and 30 soft clauses; hard part satisfiable by a
    /// planted assignment, whole instance oracle-checkable in milliseconds.
    Tiny,
    /// 100-400 variables; a planted assignment plus per-target forcing
    /// gadgets pin the optimum to a known value in 3..=25.
    Medium,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Tiny => "tiny",
            Profile::Medium => "medium",
        }
    }

    pub fn from_name(name: &str) -> Option<Profile> {
        match name {
            "tiny" => Some(Profile::Tiny),
            "medium" => Some(Profile::Medium),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub name: String,
    pub instance: WcnfInstance,
    /// Optimum forced by construction; known for the medium profile.
    pub planted_optimum: Option<usize>,
}

pub fn generate_suite(seed: u64, profile: Profile, count: usize) -> Vec<GeneratedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let name = format!("{}_{seed:08x}_{i:04}", profile.name());
            let (instance, planted_optimum) = match profile {
                Profile::Tiny => (tiny_instance(&mut rng), None),
                Profile::Medium => {
                    let (inst, opt) = medium_instance(&mut rng);
                    (inst, Some(opt))
                }
            };
            GeneratedInstance { name, instance, planted_optimum }
        })
        .collect()
}

/// Writes one `<name>.wcnf` per instance and returns the paths.
pub fn write_suite(dir: &Path, suite: &[GeneratedInstance]) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(suite.len());
    for item in suite {
        let path = dir.join(format!("{}.wcnf", item.name));
        let mut text = String::new();
        text.push_str(&format!("c {}\n", item.name));
        if let Some(opt) = item.planted_optimum {
            text.push_str(&format!("c planted-optimum {opt}\n"));
        }
        text.push_str(&render_wcnf(&item.instance));
        fs::write(&path, text)?;
        paths.push(path);
    }
    Ok(paths)
}

fn random_agreeing_clause(
    rng: &mut ChaCha8Rng,
    planted: &[bool],
    len: usize,
) -> Clause {
    let n = planted.len();
    let mut vars: Vec<usize> = (1..=n).collect();
    vars.partial_shuffle(rng, len);
    let mut lits: Vec<Lit> = vars[..len]
        .iter()
        .map(|&v| Lit::new(Var::from_index(v), rng.gen_bool(0.5)))
        .collect();
    // At least one literal agrees with the planted assignment, keeping the
    // hard part satisfiable.
    let fix = rng.gen_range(0..len);
    let v = lits[fix].var();
    lits[fix] = Lit::new(v, planted[v.index() - 1]);
    Clause::new(lits)
}

fn tiny_instance(rng: &mut ChaCha8Rng) -> WcnfInstance {
    let n = rng.gen_range(3..=12);
    let planted: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let hard: Vec<Clause> = (0..rng.gen_range(0..=2 * n))
        .map(|_| {
            let len = rng.gen_range(1..=3.min(n));
            random_agreeing_clause(rng, &planted, len)
        })
        .collect();
    let soft: Vec<Clause> = (0..rng.gen_range(1..=30))
        .map(|_| {
            let len = rng.gen_range(1..=2.min(n));
            let mut vars: Vec<usize> = (1..=n).collect();
            vars.partial_shuffle(rng, len);
            Clause::new(
                vars[..len]
                    .iter()
                    .map(|&v| Lit::new(Var::from_index(v), rng.gen_bool(0.5)))
                    .collect(),
            )
        })
        .collect();
    WcnfInstance::new(n, hard, soft)
}

/// Plants an assignment and an optimum `m`: `m` target variables are forced
/// true by two-clause gadgets over helper variables, and the soft side has
/// one always-violated unit per target plus units and pairs the planted
/// assignment satisfies. Every model violates at least the `m` target
/// units, and the planted assignment violates exactly those, so the optimum
/// is `m`.
fn medium_instance(rng: &mut ChaCha8Rng) -> (WcnfInstance, usize) {
    let m = rng.gen_range(3..=25);
    let n = rng.gen_range(100..=400).max(4 * m);
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let targets = &order[..m];
    let helpers = &order[m..2 * m];
    let free = &order[2 * m..];

    let mut planted: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    for &t in targets {
        planted[t - 1] = true;
    }

    let mut hard: Vec<Clause> = Vec::new();
    for (&t, &h) in targets.iter().zip(helpers.iter()) {
        let tl = Var::from_index(t).pos_lit();
        let hl = Var::from_index(h).pos_lit();
        hard.push(Clause::new(vec![hl, tl]));
        hard.push(Clause::new(vec![!hl, tl]));
    }
    for _ in 0..3 * n {
        hard.push(random_agreeing_clause(rng, &planted, 3));
    }
    // Two-literal implication texture for longer propagation chains.
    for _ in 0..n / 2 {
        hard.push(random_agreeing_clause(rng, &planted, 2));
    }

    let mut soft: Vec<Clause> = Vec::new();
    for &t in targets {
        soft.push(Clause::new(vec![Var::from_index(t).neg_lit()]));
    }
    let extras = (n / 4).max(2 * m);
    for _ in 0..extras {
        if rng.gen_bool(0.7) {
            let &w = free.choose(rng).expect("free variables exist");
            soft.push(Clause::new(vec![Lit::new(Var::from_index(w), planted[w - 1])]));
        } else {
            soft.push(random_agreeing_clause(rng, &planted, 2));
        }
    }
    soft.shuffle(rng);
    (WcnfInstance::new(n, hard, soft), m)
}
