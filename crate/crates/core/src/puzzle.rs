//! Lock-and-key puzzle graphs.
//!
//! A derived terminal graph is read as a puzzle by node label: begin, end,
//! lock, key and neutral. A key opens the locks it has an edge to. Keys stay
//! active once visited, and a lock can be entered once any of its opening
//! keys is active. A lock without keys can never be entered.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::control::{SampleMode, Word};
use crate::grammar::Grammar;
use crate::graph::{LabeledDigraph, NodeId, Symbol};
use crate::rewrite::{game_gen, DerivationTrace, RewriteError, SelectionPolicy};

/// Upper bound on key nodes; the search space is `nodes * 2^keys`.
pub const MAX_KEYS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleMap {
    pub begin: BTreeSet<Symbol>,
    pub end: BTreeSet<Symbol>,
    pub lock: BTreeSet<Symbol>,
    pub key: BTreeSet<Symbol>,
    pub neutral: BTreeSet<Symbol>,
}

impl Default for RoleMap {
    /// `b` begin, `e` end, `l` lock, `k` key, `m` neutral.
    fn default() -> Self {
        let one = |s: &str| BTreeSet::from([s.to_string()]);
        Self {
            begin: one("b"),
            end: one("e"),
            lock: one("l"),
            key: one("k"),
            neutral: one("m"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PuzzleError {
    #[error("role map: label {0} is assigned to more than one role")]
    OverlappingRoles(Symbol),
    #[error("expected exactly one begin node, found {0:?}")]
    Begin(Vec<NodeId>),
    #[error("expected exactly one end node, found {0:?}")]
    End(Vec<NodeId>),
    #[error("{0} key nodes exceed the limit of {MAX_KEYS}")]
    TooManyKeys(usize),
    #[error("binding {key} -> {lock} does not join a key to a lock")]
    BadBinding { key: NodeId, lock: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuzzleGraph {
    pub graph: LabeledDigraph,
    pub begin: NodeId,
    pub end: NodeId,
    pub locks: BTreeSet<NodeId>,
    pub keys: BTreeSet<NodeId>,
    /// Key node to the lock nodes it opens.
    pub opens: BTreeMap<NodeId, BTreeSet<NodeId>>,
    /// Locks that no key opens, and nodes whose label has no role.
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub solvable: bool,
    /// Nodes visited from begin to end; empty when unsolvable.
    pub witness: Vec<NodeId>,
    /// Locks the player can never enter.
    pub unreachable_locks: Vec<NodeId>,
}

fn check_disjoint(roles: &RoleMap) -> Result<(), PuzzleError> {
    let mut seen = BTreeSet::new();
    for set in [
        &roles.begin,
        &roles.end,
        &roles.lock,
        &roles.key,
        &roles.neutral,
    ] {
        for l in set {
            if !seen.insert(l) {
                return Err(PuzzleError::OverlappingRoles(l.clone()));
            }
        }
    }
    Ok(())
}

/// Reads `g` as a puzzle, binding each key to the locks it points at.
pub fn classify(g: &LabeledDigraph, roles: &RoleMap) -> Result<PuzzleGraph, PuzzleError> {
    classify_inner(g, roles, None)
}

/// Like [`classify`], but with explicit key-to-lock bindings instead of
/// adjacency.
pub fn classify_with_bindings(
    g: &LabeledDigraph,
    roles: &RoleMap,
    bindings: &[(NodeId, NodeId)],
) -> Result<PuzzleGraph, PuzzleError> {
    classify_inner(g, roles, Some(bindings))
}

fn classify_inner(
    g: &LabeledDigraph,
    roles: &RoleMap,
    bindings: Option<&[(NodeId, NodeId)]>,
) -> Result<PuzzleGraph, PuzzleError> {
    check_disjoint(roles)?;
    let with = |set: &BTreeSet<Symbol>| -> Vec<NodeId> {
        g.nodes()
            .filter(|n| set.contains(&n.label))
            .map(|n| n.id)
            .collect()
    };
    let begins = with(&roles.begin);
    let ends = with(&roles.end);
    if begins.len() != 1 {
        return Err(PuzzleError::Begin(begins));
    }
    if ends.len() != 1 {
        return Err(PuzzleError::End(ends));
    }
    let locks: BTreeSet<NodeId> = with(&roles.lock).into_iter().collect();
    let keys: BTreeSet<NodeId> = with(&roles.key).into_iter().collect();
    if keys.len() > MAX_KEYS {
        return Err(PuzzleError::TooManyKeys(keys.len()));
    }

    let mut opens: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
    match bindings {
        Some(pairs) => {
            for &(key, lock) in pairs {
                if !keys.contains(&key) || !locks.contains(&lock) {
                    return Err(PuzzleError::BadBinding { key, lock });
                }
                opens.entry(key).or_default().insert(lock);
            }
        }
        None => {
            for e in g.edges() {
                if keys.contains(&e.src) && locks.contains(&e.dst) {
                    opens.entry(e.src).or_default().insert(e.dst);
                }
            }
        }
    }

    let mut diagnostics = Vec::new();
    let opened: BTreeSet<NodeId> = opens.values().flatten().copied().collect();
    for l in locks.difference(&opened) {
        diagnostics.push(format!("lock {l} has no key"));
    }
    for n in g.nodes() {
        let known = [
            &roles.begin,
            &roles.end,
            &roles.lock,
            &roles.key,
            &roles.neutral,
        ]
        .iter()
        .any(|s| s.contains(&n.label));
        if !known {
            diagnostics.push(format!("node {} has unassigned label {}", n.id, n.label));
        }
    }

    Ok(PuzzleGraph {
        graph: g.clone(),
        begin: begins[0],
        end: ends[0],
        locks,
        keys,
        opens,
        diagnostics,
    })
}

impl PuzzleGraph {
    /// Keys that open `lock`.
    pub fn openers(&self, lock: NodeId) -> BTreeSet<NodeId> {
        self.opens
            .iter()
            .filter(|(_, ls)| ls.contains(&lock))
            .map(|(k, _)| *k)
            .collect()
    }

    /// Breadth-first search over `(node, active keys)` states.
    pub fn solve(&self) -> SolveReport {
        let key_index: HashMap<NodeId, usize> =
            self.keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        // lock -> bitmask of opening keys
        let mut lock_mask: HashMap<NodeId, u32> = self.locks.iter().map(|&l| (l, 0)).collect();
        for (k, ls) in &self.opens {
            for l in ls {
                *lock_mask.entry(*l).or_default() |= 1 << key_index[k];
            }
        }
        let succ: HashMap<NodeId, Vec<NodeId>> = self
            .graph
            .node_ids()
            .map(|n| (n, self.graph.successors(n)))
            .collect();

        let enter = |mask: u32, node: NodeId| -> Option<u32> {
            if let Some(&need) = lock_mask.get(&node) {
                if need & mask == 0 {
                    return None;
                }
            }
            Some(match key_index.get(&node) {
                Some(&i) => mask | (1 << i),
                None => mask,
            })
        };

        type State = (NodeId, u32);
        let start: State = (self.begin, enter(0, self.begin).unwrap_or(0));
        let mut parent: HashMap<State, Option<State>> = HashMap::from([(start, None)]);
        let mut queue = VecDeque::from([start]);
        let mut entered_locks = BTreeSet::new();
        let mut goal = None;
        while let Some(state @ (node, mask)) = queue.pop_front() {
            if self.locks.contains(&node) {
                entered_locks.insert(node);
            }
            if node == self.end && goal.is_none() {
                goal = Some(state);
            }
            for &next in succ.get(&node).into_iter().flatten() {
                if let Some(m) = enter(mask, next) {
                    let s = (next, m);
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(s) {
                        e.insert(Some(state));
                        queue.push_back(s);
                    }
                }
            }
        }

        let witness = match goal {
            Some(mut s) => {
                let mut path = vec![s.0];
                while let Some(Some(p)) = parent.get(&s) {
                    path.push(p.0);
                    s = *p;
                }
                path.reverse();
                path
            }
            None => Vec::new(),
        };
        SolveReport {
            solvable: goal.is_some(),
            witness,
            unreachable_locks: self.locks.difference(&entered_locks).copied().collect(),
        }
    }
}

/// Free-function form of [`PuzzleGraph::solve`].
pub fn is_solvable(p: &PuzzleGraph) -> SolveReport {
    p.solve()
}

/// Checks a witness edge by edge: starts at begin, ends at end, follows
/// edges, and enters each lock only after one of its keys.
pub fn replay_witness(p: &PuzzleGraph, witness: &[NodeId]) -> Result<(), String> {
    let (first, last) = match (witness.first(), witness.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err("empty witness".into()),
    };
    if first != p.begin {
        return Err(format!("witness starts at {first}, not begin"));
    }
    if last != p.end {
        return Err(format!("witness ends at {last}, not end"));
    }
    let mut active: BTreeSet<NodeId> = BTreeSet::new();
    for (i, &n) in witness.iter().enumerate() {
        if i > 0 && !p.graph.has_edge(witness[i - 1], n) {
            return Err(format!("no edge {} -> {n}", witness[i - 1]));
        }
        if p.locks.contains(&n) && p.openers(n).is_disjoint(&active) {
            return Err(format!("lock {n} entered without a key"));
        }
        if p.keys.contains(&n) {
            active.insert(n);
        }
    }
    Ok(())
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Puzzle(#[from] PuzzleError),
}

#[derive(Debug, Clone)]
pub struct GeneratedPlot {
    pub word: Word,
    pub trace: DerivationTrace,
    pub puzzle: PuzzleGraph,
    pub report: SolveReport,
}

/// Samples, derives, classifies and solves one plot. Unsolvable plots are
/// returned as such, never retried.
pub fn generate_solvable(
    grammar: &Grammar,
    seed: u32,
    limit: u32,
    mode: SampleMode,
    policy: SelectionPolicy,
    roles: &RoleMap,
) -> Result<GeneratedPlot, GenerateError> {
    let (word, trace) = game_gen(grammar, seed, limit, mode, policy)?;
    let puzzle = classify(trace.final_graph(), roles)?;
    let report = puzzle.solve();
    Ok(GeneratedPlot {
        word,
        trace,
        puzzle,
        report,
    })
}
