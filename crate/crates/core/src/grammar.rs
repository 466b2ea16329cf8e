//! Grammar tuples, productions and connection instructions.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::control::ControlExpr;
use crate::graph::{LabeledDigraph, Symbol};

/// Orientation flag of a connection instruction.
///
/// The two instruction forms read `Forward` differently: an embed
/// instruction draws `neighbor -> daughter node`, a jump instruction draws
/// `remote node -> daughter node`. Both directions are stored as the same
/// flag; the rewrite engine interprets it per form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// `0`: bidirectional.
    Both,
    /// `+1`
    Forward,
    /// `-1`
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("direction flag must be 0, 1, or -1 (got {0})")]
pub struct BadDirection(pub i64);

impl Direction {
    pub fn as_flag(self) -> i8 {
        match self {
            Direction::Both => 0,
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

impl TryFrom<i64> for Direction {
    type Error = BadDirection;

    fn try_from(v: i64) -> Result<Self, Self::Error> {
        match v {
            0 => Ok(Direction::Both),
            1 => Ok(Direction::Forward),
            -1 => Ok(Direction::Backward),
            other => Err(BadDirection(other)),
        }
    }
}

/// `(a, p | d | q, B)`: every former neighbor labeled `a` that was joined
/// to the mother by an edge labeled `p` gets a new `q` edge to every
/// daughter node with role `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedInstruction {
    pub neighbor_label: Symbol,
    pub old_edge_label: Symbol,
    pub direction: Direction,
    pub new_edge_label: Symbol,
    pub target_role: u32,
}

/// `(a, alpha, b | d)`: every daughter node labeled `a` is joined by an
/// `alpha` edge to every node labeled `b` left in the host after the mother
/// was removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpInstruction {
    pub daughter_label: Symbol,
    pub edge_label: Symbol,
    pub remote_label: Symbol,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectionInstruction {
    Embed(EmbedInstruction),
    Jump(JumpInstruction),
}

impl ConnectionInstruction {
    pub fn embed(a: &str, p: &str, d: Direction, q: &str, role: u32) -> Self {
        ConnectionInstruction::Embed(EmbedInstruction {
            neighbor_label: a.into(),
            old_edge_label: p.into(),
            direction: d,
            new_edge_label: q.into(),
            target_role: role,
        })
    }

    pub fn jump(a: &str, alpha: &str, b: &str, d: Direction) -> Self {
        ConnectionInstruction::Jump(JumpInstruction {
            daughter_label: a.into(),
            edge_label: alpha.into(),
            remote_label: b.into(),
            direction: d,
        })
    }
}

/// `name: A -> (D, C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Production {
    pub name: String,
    pub mother_label: Symbol,
    pub daughter: LabeledDigraph,
    pub instructions: Vec<ConnectionInstruction>,
}

/// A directed node-replacement grammar with regular control.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    /// Node labels.
    pub sigma: BTreeSet<Symbol>,
    /// Terminal node labels.
    pub delta: BTreeSet<Symbol>,
    /// Edge labels.
    pub gamma: BTreeSet<Symbol>,
    /// Terminal edge labels.
    pub omega: BTreeSet<Symbol>,
    pub productions: Vec<Production>,
    pub start: LabeledDigraph,
    pub control: ControlExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    TerminalNotInSigma(Symbol),
    TerminalEdgeNotInGamma(Symbol),
    DuplicateProduction(String),
    TerminalMother {
        production: String,
        label: Symbol,
    },
    EmptyDaughter(String),
    UnknownNodeLabel {
        context: String,
        label: Symbol,
    },
    UnknownEdgeLabel {
        context: String,
        label: Symbol,
    },
    DanglingTargetRole {
        production: String,
        instruction: usize,
        role: u32,
    },
    MissingJumpLabel {
        production: String,
        instruction: usize,
        label: Symbol,
    },
    UnknownProduction(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Diagnostic::*;
        match self {
            TerminalNotInSigma(s) => write!(f, "terminal node label {s} is not in sigma"),
            TerminalEdgeNotInGamma(s) => write!(f, "terminal edge label {s} is not in gamma"),
            DuplicateProduction(n) => write!(f, "duplicate production name {n}"),
            TerminalMother { production, label } => {
                write!(f, "production {production}: mother label {label} is terminal")
            }
            EmptyDaughter(p) => write!(f, "production {p}: empty daughter graph"),
            UnknownNodeLabel { context, label } => {
                write!(f, "{context}: unknown node label {label}")
            }
            UnknownEdgeLabel { context, label } => {
                write!(f, "{context}: unknown edge label {label}")
            }
            DanglingTargetRole {
                production,
                instruction,
                role,
            } => write!(
                f,
                "production {production} instruction {instruction}: dangling target role {role}"
            ),
            MissingJumpLabel {
                production,
                instruction,
                label,
            } => write!(
                f,
                "production {production} instruction {instruction}: no daughter node labeled {label}"
            ),
            UnknownProduction(n) => write!(f, "unknown production {n} in control"),
        }
    }
}

impl Grammar {
    pub fn production(&self, name: &str) -> Option<&Production> {
        self.productions.iter().find(|p| p.name == name)
    }

    pub fn production_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.productions.iter().map(|p| p.name.as_str())
    }

    /// Every structural problem with the grammar; empty means well formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        out.extend(
            self.delta
                .difference(&self.sigma)
                .map(|s| Diagnostic::TerminalNotInSigma(s.clone())),
        );
        out.extend(
            self.omega
                .difference(&self.gamma)
                .map(|s| Diagnostic::TerminalEdgeNotInGamma(s.clone())),
        );

        self.check_graph("start graph", &self.start, &mut out);

        let mut names = BTreeSet::new();
        for p in &self.productions {
            if !names.insert(p.name.as_str()) {
                out.push(Diagnostic::DuplicateProduction(p.name.clone()));
            }
            self.check_production(p, &mut out);
        }

        for name in self.control.symbols() {
            if !names.contains(name.as_str()) {
                out.push(Diagnostic::UnknownProduction(name));
            }
        }
        out
    }

    fn check_node_label(&self, context: &str, label: &str, out: &mut Vec<Diagnostic>) {
        if !self.sigma.contains(label) {
            out.push(Diagnostic::UnknownNodeLabel {
                context: context.to_string(),
                label: label.to_string(),
            });
        }
    }

    fn check_edge_label(&self, context: &str, label: &str, out: &mut Vec<Diagnostic>) {
        if !self.gamma.contains(label) {
            out.push(Diagnostic::UnknownEdgeLabel {
                context: context.to_string(),
                label: label.to_string(),
            });
        }
    }

    fn check_graph(&self, context: &str, g: &LabeledDigraph, out: &mut Vec<Diagnostic>) {
        let node_labels: BTreeSet<&str> = g.nodes().map(|n| n.label.as_str()).collect();
        for l in node_labels {
            self.check_node_label(context, l, out);
        }
        let edge_labels: BTreeSet<&str> = g.edges().iter().map(|e| e.label.as_str()).collect();
        for l in edge_labels {
            self.check_edge_label(context, l, out);
        }
    }

    fn check_production(&self, p: &Production, out: &mut Vec<Diagnostic>) {
        let ctx = format!("production {}", p.name);
        self.check_node_label(&ctx, &p.mother_label, out);
        if self.delta.contains(&p.mother_label) {
            out.push(Diagnostic::TerminalMother {
                production: p.name.clone(),
                label: p.mother_label.clone(),
            });
        }
        if p.daughter.is_empty() {
            out.push(Diagnostic::EmptyDaughter(p.name.clone()));
        }
        self.check_graph(&format!("{ctx} daughter"), &p.daughter, out);

        let roles: BTreeSet<u32> = p.daughter.nodes().map(|n| n.role).collect();
        for (i, inst) in p.instructions.iter().enumerate() {
            let ictx = format!("{ctx} instruction {}", i + 1);
            match inst {
                ConnectionInstruction::Embed(e) => {
                    self.check_node_label(&ictx, &e.neighbor_label, out);
                    self.check_edge_label(&ictx, &e.old_edge_label, out);
                    self.check_edge_label(&ictx, &e.new_edge_label, out);
                    if !roles.contains(&e.target_role) {
                        out.push(Diagnostic::DanglingTargetRole {
                            production: p.name.clone(),
                            instruction: i + 1,
                            role: e.target_role,
                        });
                    }
                }
                ConnectionInstruction::Jump(j) => {
                    self.check_node_label(&ictx, &j.daughter_label, out);
                    self.check_node_label(&ictx, &j.remote_label, out);
                    self.check_edge_label(&ictx, &j.edge_label, out);
                    if p.daughter.nodes_labeled(&j.daughter_label).next().is_none() {
                        out.push(Diagnostic::MissingJumpLabel {
                            production: p.name.clone(),
                            instruction: i + 1,
                            label: j.daughter_label.clone(),
                        });
                    }
                }
            }
        }
    }
}

/// Free-function form of [`Grammar::validate`].
pub fn validate_grammar(g: &Grammar) -> Vec<Diagnostic> {
    g.validate()
}
