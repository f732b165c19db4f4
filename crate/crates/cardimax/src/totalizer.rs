//! Totalizer cardinality encoding over a binary tree of unary counters.
//!
//! Every node carries `node_vars`, an ordered list of literals where the
//! j-th one means "at least j of the leaves below this node are true". An
//! internal node with children counting up to `n2` and `n3` is wired with
//! the counting clauses `(!q_a | !r_b | p_s)` for all `a + b = s`, where
//! position 0 of a counter is constant true so those literals are dropped.
//!
//! The encoding is built bound-by-bound: building bound `b` allocates
//! counter position `b + 1` (capped at `k + 1` per node, the
//! k-simplification) for every node in post order, left child before right,
//! and emits exactly the counting clauses whose conclusion is that new
//! position. Because the clause sets for successive bounds are disjoint,
//! raising the bound later emits exactly the difference, and the union over
//! any increasing bound schedule equals a from-scratch build at the final
//! bound, variable indices included.
//!
//! Comparison is kept strictly separate from counting: to assert "at most k
//! inputs true" the caller takes [`TotalizerTree::at_most_assumption`] and
//! either assumes the literal for one call or adds it as a unit clause; no
//! clauses are emitted by that operation.

use crate::solver::Solver;
use crate::types::{Lit, Var};

/// Receiver for emitted clauses and fresh counter variables: either a real
/// solver or a recording buffer.
pub trait ClauseSink {
    fn add_clause(&mut self, lits: &[Lit]);
    fn new_var(&mut self) -> Var;
}

impl ClauseSink for Solver {
    fn add_clause(&mut self, lits: &[Lit]) {
        Solver::add_clause(self, lits);
    }

    fn new_var(&mut self) -> Var {
        Solver::new_var(self)
    }
}

/// Recording sink for tests and clause-set comparisons.
#[derive(Debug, Default, Clone)]
pub struct CnfBuffer {
    pub clauses: Vec<Vec<Lit>>,
    next_var: u32,
}

impl CnfBuffer {
    pub fn new() -> CnfBuffer {
        CnfBuffer::default()
    }

    /// Buffer whose next fresh variable is `first_free`.
    pub fn starting_at(first_free: usize) -> CnfBuffer {
        CnfBuffer { clauses: Vec::new(), next_var: first_free as u32 - 1 }
    }
}

impl ClauseSink for CnfBuffer {
    fn add_clause(&mut self, lits: &[Lit]) {
        self.clauses.push(lits.to_vec());
    }

    fn new_var(&mut self) -> Var {
        self.next_var += 1;
        Var::from_index(self.next_var as usize)
    }
}

struct Node {
    /// `None` for leaves.
    children: Option<(usize, usize)>,
    /// Counter literals; for a leaf this is exactly the input literal.
    vars: Vec<Lit>,
    /// Number of leaves below this node.
    capacity: usize,
}

impl Node {
    fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

/// A totalizer tree bound to the variable allocator of its sink.
pub struct TotalizerTree {
    nodes: Vec<Node>,
    root: usize,
    inputs: Vec<Lit>,
    /// Internal nodes in post order, left before right.
    emit_order: Vec<usize>,
    built_bound: usize,
    emitted: u64,
}

impl TotalizerTree {
    /// Builds a balanced tree over `inputs` and emits counting clauses for
    /// bounds `0..=k`. Counter variables come from `sink.new_var()`.
    ///
    /// Panics if `inputs` is empty.
    pub fn build(inputs: &[Lit], k: usize, sink: &mut dyn ClauseSink) -> TotalizerTree {
        assert!(!inputs.is_empty(), "totalizer over no inputs");
        let mut nodes = Vec::with_capacity(2 * inputs.len());
        let mut emit_order = Vec::new();
        let root = build_structure(inputs, &mut nodes, &mut emit_order);
        let mut tree = TotalizerTree {
            nodes,
            root,
            inputs: inputs.to_vec(),
            emit_order,
            built_bound: 0,
            emitted: 0,
        };
        for bound in 0..=k {
            tree.emit_bound(bound, sink);
        }
        tree.built_bound = k;
        tree
    }

    /// Input literals in build order.
    pub fn inputs(&self) -> &[Lit] {
        &self.inputs
    }

    /// Largest bound for which counting clauses exist.
    pub fn built_bound(&self) -> usize {
        self.built_bound
    }

    /// Clauses emitted by this tree so far.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Counter literals at the root; position j (0-based) means "at least
    /// j + 1 inputs are true".
    pub fn output_lits(&self) -> &[Lit] {
        &self.nodes[self.root].vars
    }

    /// Extends every counter to `min(capacity, new_k + 1)` positions,
    /// emitting only the counting clauses not emitted before.
    ///
    /// Panics if `new_k` is below the current bound: bounds never shrink.
    pub fn raise_bound(&mut self, new_k: usize, sink: &mut dyn ClauseSink) {
        assert!(
            new_k >= self.built_bound,
            "totalizer bound cannot shrink ({} -> {new_k})",
            self.built_bound
        );
        for bound in self.built_bound + 1..=new_k {
            self.emit_bound(bound, sink);
        }
        self.built_bound = new_k;
    }

    /// Joins two trees over disjoint inputs under a fresh root counting
    /// their union, with both sides and the new root built to bound `k`.
    ///
    /// Panics if the input literal sets overlap.
    pub fn merge(mut a: TotalizerTree, b: TotalizerTree, k: usize, sink: &mut dyn ClauseSink) -> TotalizerTree {
        {
            let vars_a: std::collections::HashSet<Var> =
                a.inputs.iter().map(|l| l.var()).collect();
            assert!(
                b.inputs.iter().all(|l| !vars_a.contains(&l.var())),
                "merged totalizers must have disjoint inputs"
            );
        }
        a.raise_bound(k, sink);
        let mut b = b;
        b.raise_bound(k, sink);

        let offset = a.nodes.len();
        let remap = |idx: usize| idx + offset;
        for node in b.nodes {
            a.nodes.push(Node {
                children: node.children.map(|(l, r)| (remap(l), remap(r))),
                vars: node.vars,
                capacity: node.capacity,
            });
        }
        let b_root = remap(b.root);
        let root = a.nodes.len();
        a.nodes.push(Node {
            children: Some((a.root, b_root)),
            vars: Vec::new(),
            capacity: a.nodes[a.root].capacity + a.nodes[b_root].capacity,
        });
        let mut tree = TotalizerTree {
            nodes: a.nodes,
            root,
            inputs: {
                let mut inputs = a.inputs;
                inputs.extend(b.inputs);
                inputs
            },
            emit_order: {
                let mut order = a.emit_order;
                order.extend(b.emit_order.into_iter().map(remap));
                order.push(root);
                order
            },
            built_bound: k,
            emitted: a.emitted + b.emitted,
        };
        // The children are already built to k; only the root is missing.
        for bound in 0..=k {
            tree.emit_node_position(root, bound + 1, sink);
        }
        tree
    }

    /// Literals to assume (or assert) for "at most k inputs true": `[!o_{k+1}]`,
    /// or empty when the constraint is vacuous because k reaches the number
    /// of inputs. Emits no clauses.
    ///
    /// Panics if `k` exceeds the built bound, i.e. the counting clauses for
    /// that comparison have not been emitted yet.
    pub fn at_most_assumption(&self, k: usize) -> Vec<Lit> {
        assert!(
            k <= self.built_bound,
            "at-most-{k} requested but counting is only built to {}",
            self.built_bound
        );
        let outputs = self.output_lits();
        if k < outputs.len() {
            vec![!outputs[k]]
        } else {
            Vec::new()
        }
    }

    /// Renders the tree one node per line as `(name:node_vars:node_sum)`,
    /// children indented below their parent, left child first.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        self.dump_node(self.root, 0, &mut out);
        out
    }

    fn dump_node(&self, idx: usize, depth: usize, out: &mut String) {
        let node = &self.nodes[idx];
        let vars = node
            .vars
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("(n{idx}:{vars}:{})\n", node.capacity));
        if let Some((l, r)) = node.children {
            self.dump_node(l, depth + 1, out);
            self.dump_node(r, depth + 1, out);
        }
    }

    /// Allocates counter position `bound + 1` and emits its clauses for
    /// every internal node, children before parents.
    fn emit_bound(&mut self, bound: usize, sink: &mut dyn ClauseSink) {
        for i in 0..self.emit_order.len() {
            let idx = self.emit_order[i];
            self.emit_node_position(idx, bound + 1, sink);
        }
    }

    /// Allocates position `pos` (1-based) of node `idx` if capacity allows
    /// and emits every counting clause concluding in it.
    fn emit_node_position(&mut self, idx: usize, pos: usize, sink: &mut dyn ClauseSink) {
        debug_assert!(!self.nodes[idx].is_leaf());
        if pos > self.nodes[idx].capacity || pos <= self.nodes[idx].vars.len() {
            return;
        }
        debug_assert_eq!(self.nodes[idx].vars.len(), pos - 1);
        let p = sink.new_var().pos_lit();
        self.nodes[idx].vars.push(p);
        let (left, right) = self.nodes[idx].children.unwrap();
        let cap_right = self.nodes[right].capacity;
        let lo = pos.saturating_sub(cap_right);
        let hi = pos.min(self.nodes[left].capacity);
        for a in lo..=hi {
            let b = pos - a;
            debug_assert!(a <= self.nodes[left].vars.len());
            debug_assert!(b <= self.nodes[right].vars.len());
            let mut clause = Vec::with_capacity(3);
            if a > 0 {
                clause.push(!self.nodes[left].vars[a - 1]);
            }
            if b > 0 {
                clause.push(!self.nodes[right].vars[b - 1]);
            }
            clause.push(p);
            sink.add_clause(&clause);
            self.emitted += 1;
        }
    }
}

/// Balanced construction: split the input run in half, left half first.
/// Gives the five-leaf shape (5 -> 2+3, 3 -> 1+2) and a deterministic
/// post-order emit schedule.
fn build_structure(inputs: &[Lit], nodes: &mut Vec<Node>, emit_order: &mut Vec<usize>) -> usize {
    if inputs.len() == 1 {
        nodes.push(Node { children: None, vars: vec![inputs[0]], capacity: 1 });
        return nodes.len() - 1;
    }
    let mid = inputs.len() / 2;
    let left = build_structure(&inputs[..mid], nodes, emit_order);
    let right = build_structure(&inputs[mid..], nodes, emit_order);
    nodes.push(Node {
        children: Some((left, right)),
        vars: Vec::new(),
        capacity: inputs.len(),
    });
    emit_order.push(nodes.len() - 1);
    nodes.len() - 1
}
