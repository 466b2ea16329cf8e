//! Production application and controlled derivations.
//!
//! Applying a production to a mother node:
//!
//! 1. record the mother's incident edges (neighbor, edge label);
//! 2. delete the mother and its edges;
//! 3. insert a fresh copy of the daughter graph, keeping roles;
//! 4. fire every embed instruction for every matching former neighbor and
//!    every daughter node with the target role;
//! 5. fire every jump instruction for every matching daughter node and every
//!    matching node of the remaining host (the fresh copy excluded);
//! 6. optionally collapse exact duplicate edges.
//!
//! Instructions that match nothing are silently skipped.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::control::{sample_word, ControlNfa, Prng, SampleError, SampleMode, Word};
use crate::grammar::{ConnectionInstruction, Direction, Grammar, Production};
use crate::graph::{GraphError, LabeledDigraph, NodeId, Symbol};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RewriteError {
    #[error("mother node {0} is not in the host graph")]
    MotherAbsent(NodeId),
    #[error("node {node} is labeled {found}, production {production} expects {expected}")]
    LabelMismatch {
        node: NodeId,
        production: String,
        expected: Symbol,
        found: Symbol,
    },
    #[error("unknown production {name} at step {step}")]
    UnknownProduction { step: usize, name: String },
    #[error(
        "stuck derivation at step {step}: no node labeled {label} for production {production}"
    )]
    Stuck {
        step: usize,
        production: String,
        label: Symbol,
    },
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Which candidate mother node a derivation step rewrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionPolicy {
    /// Smallest node id.
    #[default]
    FirstById,
    /// `prng.next() % candidates`, with the generator threaded through the
    /// whole derivation.
    SeededRandom(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeriveOptions {
    /// Collapse edges equal in source, target and label after every step.
    pub dedupe_edges: bool,
}

impl Default for DeriveOptions {
    fn default() -> Self {
        Self { dedupe_edges: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub production: String,
    pub replaced: NodeId,
    /// Host graph after the step.
    pub graph: LabeledDigraph,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    pub start: LabeledDigraph,
    pub steps: Vec<DerivationStep>,
    /// The word is in the language of the grammar's control.
    pub word_in_control: bool,
    /// The final graph uses only terminal node and edge labels.
    pub final_terminal: bool,
}

impl DerivationTrace {
    pub fn final_graph(&self) -> &LabeledDigraph {
        self.steps.last().map_or(&self.start, |s| &s.graph)
    }

    /// The derived graph belongs to the grammar's language.
    pub fn in_language(&self) -> bool {
        self.word_in_control && self.final_terminal
    }

    pub fn word(&self) -> Word {
        self.steps.iter().map(|s| s.production.clone()).collect()
    }
}

/// Nodes labeled `label`, ascending by id.
pub fn find_candidates(host: &LabeledDigraph, label: &str) -> Vec<NodeId> {
    host.nodes_labeled(label).collect()
}

fn connect(g: &mut LabeledDigraph, from: NodeId, to: NodeId, label: &str, both: bool) {
    g.add_edge(from, to, label).expect("endpoints present");
    if both {
        g.add_edge(to, from, label).expect("endpoints present");
    }
}

pub fn apply_production(
    host: &LabeledDigraph,
    mother: NodeId,
    prod: &Production,
) -> Result<LabeledDigraph, RewriteError> {
    apply_production_with(host, mother, prod, DeriveOptions::default())
}

pub fn apply_production_with(
    host: &LabeledDigraph,
    mother: NodeId,
    prod: &Production,
    options: DeriveOptions,
) -> Result<LabeledDigraph, RewriteError> {
    let found = host
        .label(mother)
        .ok_or(RewriteError::MotherAbsent(mother))?;
    if found != prod.mother_label {
        return Err(RewriteError::LabelMismatch {
            node: mother,
            production: prod.name.clone(),
            expected: prod.mother_label.clone(),
            found: found.to_string(),
        });
    }

    // Former neighbors as (node, edge label), orientation-blind. Self-loops
    // on the mother disappear with it.
    let former: BTreeSet<(NodeId, Symbol)> = host
        .edges()
        .iter()
        .filter_map(|e| match (e.src == mother, e.dst == mother) {
            (true, false) => Some((e.dst, e.label.clone())),
            (false, true) => Some((e.src, e.label.clone())),
            _ => None,
        })
        .collect();

    let mut g = host.clone();
    g.remove_node(mother)?;
    let remaining: Vec<NodeId> = g.node_ids().collect();

    let mut copy: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for n in prod.daughter.nodes() {
        copy.insert(n.id, g.add_node(n.label.clone(), n.role));
    }
    for e in prod.daughter.edges() {
        g.add_edge(copy[&e.src], copy[&e.dst], e.label.clone())?;
    }
    let fresh: Vec<NodeId> = copy.values().copied().collect();

    for inst in &prod.instructions {
        match inst {
            ConnectionInstruction::Embed(ei) => {
                let targets: Vec<NodeId> = fresh
                    .iter()
                    .copied()
                    .filter(|&n| g.node(n).is_some_and(|n| n.role == ei.target_role))
                    .collect();
                let sources: Vec<NodeId> = former
                    .iter()
                    .filter(|(x, p)| {
                        *p == ei.old_edge_label && g.label(*x) == Some(&ei.neighbor_label)
                    })
                    .map(|(x, _)| *x)
                    .collect();
                for &x in &sources {
                    for &t in &targets {
                        match ei.direction {
                            Direction::Forward => connect(&mut g, x, t, &ei.new_edge_label, false),
                            Direction::Backward => connect(&mut g, t, x, &ei.new_edge_label, false),
                            Direction::Both => connect(&mut g, x, t, &ei.new_edge_label, true),
                        }
                    }
                }
            }
            ConnectionInstruction::Jump(ji) => {
                let locals: Vec<NodeId> = fresh
                    .iter()
                    .copied()
                    .filter(|&n| g.label(n) == Some(&ji.daughter_label))
                    .collect();
                let remotes: Vec<NodeId> = remaining
                    .iter()
                    .copied()
                    .filter(|&n| g.label(n) == Some(&ji.remote_label))
                    .collect();
                for &a in &locals {
                    for &b in &remotes {
                        match ji.direction {
                            Direction::Forward => connect(&mut g, b, a, &ji.edge_label, false),
                            Direction::Backward => connect(&mut g, a, b, &ji.edge_label, false),
                            Direction::Both => connect(&mut g, a, b, &ji.edge_label, true),
                        }
                    }
                }
            }
        }
    }

    if options.dedupe_edges {
        g.dedupe_edges();
    }
    Ok(g)
}

/// Applies `word` to a copy of the start graph, one production per step.
pub fn derive<S: AsRef<str>>(
    grammar: &Grammar,
    word: &[S],
    policy: SelectionPolicy,
) -> Result<DerivationTrace, RewriteError> {
    derive_with(grammar, word, policy, DeriveOptions::default())
}

pub fn derive_with<S: AsRef<str>>(
    grammar: &Grammar,
    word: &[S],
    policy: SelectionPolicy,
    options: DeriveOptions,
) -> Result<DerivationTrace, RewriteError> {
    let mut prng = match policy {
        SelectionPolicy::SeededRandom(seed) => Some(Prng::new(seed)),
        SelectionPolicy::FirstById => None,
    };
    let start = grammar.start.clone();
    let mut host = start.clone();
    let mut steps = Vec::with_capacity(word.len());
    for (i, name) in word.iter().enumerate() {
        let name = name.as_ref();
        let step = i + 1;
        let prod = grammar
            .production(name)
            .ok_or_else(|| RewriteError::UnknownProduction {
                step,
                name: name.to_string(),
            })?;
        let candidates = find_candidates(&host, &prod.mother_label);
        if candidates.is_empty() {
            return Err(RewriteError::Stuck {
                step,
                production: name.to_string(),
                label: prod.mother_label.clone(),
            });
        }
        let mother = match prng.as_mut() {
            Some(p) => candidates[p.below(candidates.len() as u32) as usize],
            None => candidates[0],
        };
        host = apply_production_with(&host, mother, prod, options)?;
        steps.push(DerivationStep {
            production: name.to_string(),
            replaced: mother,
            graph: host.clone(),
        });
    }
    let word_in_control = ControlNfa::compile(&grammar.control).accepts(word);
    let final_terminal = host.is_all_terminal(&grammar.delta, &grammar.omega);
    Ok(DerivationTrace {
        start,
        steps,
        word_in_control,
        final_terminal,
    })
}

/// Samples a control word and derives it.
pub fn game_gen(
    grammar: &Grammar,
    seed: u32,
    limit: u32,
    mode: SampleMode,
    policy: SelectionPolicy,
) -> Result<(Word, DerivationTrace), RewriteError> {
    let word = sample_word(&grammar.control, seed, limit, mode)?;
    let trace = derive(grammar, &word, policy)?;
    Ok((word, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::grammar::ConnectionInstruction as CI;

    fn single(label: &str) -> LabeledDigraph {
        let mut g = LabeledDigraph::new();
        g.add_node(label, 1);
        g
    }

    #[test]
    fn terminal_replacement_of_isolated_node() {
        let host = single("A");
        let prod = Production {
            name: "p".into(),
            mother_label: "A".into(),
            daughter: single("t"),
            instructions: vec![],
        };
        let out = apply_production(&host, NodeId(0), &prod).unwrap();
        assert_eq!(out.node_count(), 1);
        assert_eq!(out.edge_count(), 0);
        assert_eq!(out.nodes().next().unwrap().label, "t");
    }

    #[test]
    fn errors_for_bad_mother() {
        let host = single("A");
        let prod = Production {
            name: "p".into(),
            mother_label: "B".into(),
            daughter: single("t"),
            instructions: vec![],
        };
        assert_eq!(
            apply_production(&host, NodeId(4), &prod),
            Err(RewriteError::MotherAbsent(NodeId(4)))
        );
        assert!(matches!(
            apply_production(&host, NodeId(0), &prod),
            Err(RewriteError::LabelMismatch { .. })
        ));
    }

    #[test]
    fn find_candidates_sorted() {
        let mut g = LabeledDigraph::new();
        let a = g.add_node("A", 1);
        let b = g.add_node("B", 2);
        let c = g.add_node("A", 1);
        assert_eq!(find_candidates(&g, "A"), vec![a, c]);
        assert!(find_candidates(&g, "Z").is_empty());
        assert_eq!(find_candidates(&g, "B"), vec![b]);
    }

    #[test]
    fn embed_directions() {
        // x -p-> M, replaced by a single node with role 1
        for (d, expect_fwd, expect_back) in [
            (Direction::Forward, true, false),
            (Direction::Backward, false, true),
            (Direction::Both, true, true),
        ] {
            let mut host = LabeledDigraph::new();
            let x = host.add_node("x", 0);
            let m = host.add_node("M", 0);
            host.add_edge(m, x, "p").unwrap();
            let prod = Production {
                name: "r".into(),
                mother_label: "M".into(),
                daughter: single("t"),
                instructions: vec![CI::embed("x", "p", d, "q", 1)],
            };
            let g = apply_production(&host, m, &prod).unwrap();
            let t = g.nodes_labeled("t").next().unwrap();
            assert_eq!(g.has_edge(x, t), expect_fwd, "{d:?}");
            assert_eq!(g.has_edge(t, x), expect_back, "{d:?}");
            assert!(g.edges().iter().all(|e| e.label == "q"));
        }
    }

    #[test]
    fn embed_requires_matching_old_edge_label() {
        let mut host = LabeledDigraph::new();
        let x = host.add_node("x", 0);
        let m = host.add_node("M", 0);
        host.add_edge(x, m, "other").unwrap();
        let prod = Production {
            name: "r".into(),
            mother_label: "M".into(),
            daughter: single("t"),
            instructions: vec![CI::embed("x", "p", Direction::Forward, "q", 1)],
        };
        let g = apply_production(&host, m, &prod).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn jump_directions_and_exclusions() {
        for (d, remote_to_local, local_to_remote) in [
            (Direction::Forward, true, false),
            (Direction::Backward, false, true),
            (Direction::Both, true, true),
        ] {
            let mut host = LabeledDigraph::new();
            let far = host.add_node("b", 0);
            let m = host.add_node("M", 0);
            let prod = Production {
                name: "r".into(),
                mother_label: "M".into(),
                // the daughter carries its own b, which must not be targeted
                daughter: {
                    let mut dg = LabeledDigraph::new();
                    dg.add_node("a", 1);
                    dg.add_node("b", 2);
                    dg
                },
                instructions: vec![CI::jump("a", "j", "b", d)],
            };
            let g = apply_production(&host, m, &prod).unwrap();
            let a = g.nodes_labeled("a").next().unwrap();
            assert_eq!(g.has_edge(far, a), remote_to_local);
            assert_eq!(g.has_edge(a, far), local_to_remote);
            let own_b = g.nodes_labeled("b").find(|&n| n != far).unwrap();
            assert!(!g.has_edge(a, own_b) && !g.has_edge(own_b, a));
        }
    }

    #[test]
    fn dedupe_option() {
        // two instructions producing the same edge
        let mut host = LabeledDigraph::new();
        let x = host.add_node("x", 0);
        let m = host.add_node("M", 0);
        host.add_edge(x, m, "p").unwrap();
        let prod = Production {
            name: "r".into(),
            mother_label: "M".into(),
            daughter: single("t"),
            instructions: vec![
                CI::embed("x", "p", Direction::Forward, "q", 1),
                CI::embed("x", "p", Direction::Forward, "q", 1),
            ],
        };
        let deduped = apply_production(&host, m, &prod).unwrap();
        assert_eq!(deduped.edge_count(), 1);
        let raw = apply_production_with(
            &host,
            m,
            &prod,
            DeriveOptions {
                dedupe_edges: false,
            },
        )
        .unwrap();
        assert_eq!(raw.edge_count(), 2);
    }

    #[test]
    fn puzzle_shortest_word() {
        let g = bundled::puzzle();
        let t = derive(&g, &["p1", "p2", "p4"], SelectionPolicy::FirstById).unwrap();
        assert!(t.word_in_control && t.final_terminal);
        let f = t.final_graph();
        assert_eq!(f.node_count(), 4);
        let id = |l: &str| f.nodes_labeled(l).next().unwrap();
        let (b, l, k, e) = (id("b"), id("l"), id("k"), id("e"));
        let mut edges: Vec<_> = f.edges().iter().map(|e| (e.src, e.dst)).collect();
        edges.sort();
        let mut expected = vec![(b, l), (b, k), (k, l), (l, e)];
        expected.sort();
        assert_eq!(edges, expected);
    }

    #[test]
    fn wheel_limit_one_game_gen() {
        let g = bundled::wheel();
        let (word, t) =
            game_gen(&g, 77, 1, SampleMode::PerStar, SelectionPolicy::FirstById).unwrap();
        assert_eq!(word, ["p1", "p3"]);
        let f = t.final_graph();
        let mut labels: Vec<_> = f.nodes().map(|n| n.label.as_str()).collect();
        labels.sort();
        assert_eq!(labels, ["a", "c", "e", "s"]);
        assert!(t.in_language());
    }

    #[test]
    fn out_of_control_word_still_traced() {
        let g = bundled::wheel();
        let t = derive(&g, &["p1", "p3", "p2"], SelectionPolicy::FirstById);
        // p2 has no E left after p3
        assert!(matches!(t, Err(RewriteError::Stuck { step: 3, .. })));
        let t = derive(&g, &["p1", "p2"], SelectionPolicy::FirstById).unwrap();
        assert!(!t.word_in_control);
        assert!(!t.final_terminal);
    }

    #[test]
    fn stuck_and_unknown() {
        let g = bundled::wheel();
        let err = derive(&g, &["p3"], SelectionPolicy::FirstById).unwrap_err();
        assert!(err.to_string().contains("stuck derivation at step 1"));
        assert!(matches!(
            derive(&g, &["p7"], SelectionPolicy::FirstById),
            Err(RewriteError::UnknownProduction { step: 1, .. })
        ));
    }

    #[test]
    fn seeded_selection_is_deterministic() {
        let g = bundled::star();
        let w = ["p1", "p1", "p1", "p2"];
        let a = derive(&g, &w, SelectionPolicy::SeededRandom(9)).unwrap();
        let b = derive(&g, &w, SelectionPolicy::SeededRandom(9)).unwrap();
        assert_eq!(a, b);
    }
}
