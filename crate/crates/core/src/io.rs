//! JSON documents for graphs, grammars and derivation traces, and DOT
//! export.
//!
//! Graph document:
//!
//! ```json
//! {"nodes":[{"id":0,"label":"b","role":2}],"edges":[{"src":0,"dst":0,"label":"alpha"}]}
//! ```
//!
//! Grammar document keys: `sigma`, `delta`, `gamma`, `omega`, `start`,
//! `control`, `productions`. An instruction is either
//! `{"form":"embed","a":..,"p":..,"d":..,"q":..,"B":..}` or
//! `{"form":"jump","a":..,"alpha":..,"b":..,"d":..}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::control::{parse_control, ParseError};
use crate::grammar::{
    BadDirection, ConnectionInstruction, Diagnostic, Direction, EmbedInstruction, Grammar,
    JumpInstruction, Production,
};
use crate::graph::{GraphError, LabeledDigraph, NodeId};
use crate::rewrite::DerivationTrace;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed document at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("missing control")]
    MissingControl,
    #[error("{context}: {source}")]
    Direction {
        context: String,
        source: BadDirection,
    },
    #[error("{context}: {source}")]
    Graph { context: String, source: GraphError },
    #[error("control: {0}")]
    Control(#[from] ParseError),
    #[error("invalid grammar: {}", join(.0))]
    Invalid(Vec<Diagnostic>),
}

fn join(d: &[Diagnostic]) -> String {
    d.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDocument {
    pub id: usize,
    pub label: String,
    #[serde(default)]
    pub role: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDocument {
    pub src: usize,
    pub dst: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub nodes: Vec<NodeDocument>,
    #[serde(default)]
    pub edges: Vec<EdgeDocument>,
}

impl GraphDocument {
    /// Nodes sorted by id, edges by `(src, dst, label)`.
    pub fn from_graph(g: &LabeledDigraph) -> Self {
        Self {
            nodes: g
                .nodes()
                .map(|n| NodeDocument {
                    id: n.id.0,
                    label: n.label.clone(),
                    role: n.role,
                })
                .collect(),
            edges: g
                .sorted_edges()
                .into_iter()
                .map(|e| EdgeDocument {
                    src: e.src.0,
                    dst: e.dst.0,
                    label: e.label,
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<LabeledDigraph, GraphError> {
        let mut g = LabeledDigraph::new();
        for n in &self.nodes {
            g.insert_node(NodeId(n.id), n.label.clone(), n.role)?;
        }
        for e in &self.edges {
            g.add_edge(NodeId(e.src), NodeId(e.dst), e.label.clone())?;
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum InstructionDocument {
    Embed {
        a: String,
        p: String,
        d: i64,
        q: String,
        #[serde(rename = "B")]
        b: u32,
    },
    Jump {
        a: String,
        alpha: String,
        b: String,
        d: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductionDocument {
    pub name: String,
    pub mother: String,
    pub daughter: GraphDocument,
    #[serde(default)]
    pub instructions: Vec<InstructionDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrammarDocument {
    pub sigma: Vec<String>,
    pub delta: Vec<String>,
    pub gamma: Vec<String>,
    pub omega: Vec<String>,
    pub start: GraphDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<String>,
    pub productions: Vec<ProductionDocument>,
}

impl GrammarDocument {
    pub fn from_grammar(g: &Grammar) -> Self {
        let list = |s: &std::collections::BTreeSet<String>| s.iter().cloned().collect();
        Self {
            sigma: list(&g.sigma),
            delta: list(&g.delta),
            gamma: list(&g.gamma),
            omega: list(&g.omega),
            start: GraphDocument::from_graph(&g.start),
            control: Some(g.control.to_string()),
            productions: g
                .productions
                .iter()
                .map(|p| ProductionDocument {
                    name: p.name.clone(),
                    mother: p.mother_label.clone(),
                    daughter: GraphDocument::from_graph(&p.daughter),
                    instructions: p.instructions.iter().map(instruction_doc).collect(),
                })
                .collect(),
        }
    }

    /// Builds the grammar without validating it.
    pub fn to_grammar(&self) -> Result<Grammar, DocumentError> {
        let control_text = self
            .control
            .as_deref()
            .ok_or(DocumentError::MissingControl)?;
        let control = parse_control(control_text)?;
        let start = self
            .start
            .to_graph()
            .map_err(|source| DocumentError::Graph {
                context: "start".into(),
                source,
            })?;
        let mut productions = Vec::with_capacity(self.productions.len());
        for p in &self.productions {
            let daughter = p
                .daughter
                .to_graph()
                .map_err(|source| DocumentError::Graph {
                    context: format!("production {} daughter", p.name),
                    source,
                })?;
            let mut instructions = Vec::with_capacity(p.instructions.len());
            for (i, inst) in p.instructions.iter().enumerate() {
                let context = format!("production {} instruction {}", p.name, i + 1);
                let dir = |d: i64| {
                    Direction::try_from(d).map_err(|source| DocumentError::Direction {
                        context: context.clone(),
                        source,
                    })
                };
                instructions.push(match inst {
                    InstructionDocument::Embed { a, p, d, q, b } => {
                        ConnectionInstruction::Embed(EmbedInstruction {
                            neighbor_label: a.clone(),
                            old_edge_label: p.clone(),
                            direction: dir(*d)?,
                            new_edge_label: q.clone(),
                            target_role: *b,
                        })
                    }
                    InstructionDocument::Jump { a, alpha, b, d } => {
                        ConnectionInstruction::Jump(JumpInstruction {
                            daughter_label: a.clone(),
                            edge_label: alpha.clone(),
                            remote_label: b.clone(),
                            direction: dir(*d)?,
                        })
                    }
                });
            }
            productions.push(Production {
                name: p.name.clone(),
                mother_label: p.mother.clone(),
                daughter,
                instructions,
            });
        }
        Ok(Grammar {
            sigma: self.sigma.iter().cloned().collect(),
            delta: self.delta.iter().cloned().collect(),
            gamma: self.gamma.iter().cloned().collect(),
            omega: self.omega.iter().cloned().collect(),
            productions,
            start,
            control,
        })
    }
}

fn instruction_doc(i: &ConnectionInstruction) -> InstructionDocument {
    match i {
        ConnectionInstruction::Embed(e) => InstructionDocument::Embed {
            a: e.neighbor_label.clone(),
            p: e.old_edge_label.clone(),
            d: e.direction.as_flag() as i64,
            q: e.new_edge_label.clone(),
            b: e.target_role,
        },
        ConnectionInstruction::Jump(j) => InstructionDocument::Jump {
            a: j.daughter_label.clone(),
            alpha: j.edge_label.clone(),
            b: j.remote_label.clone(),
            d: j.direction.as_flag() as i64,
        },
    }
}

/// Parses and validates a grammar document.
pub fn parse_grammar(text: &str) -> Result<Grammar, DocumentError> {
    let doc: GrammarDocument = serde_json::from_str(text)?;
    let grammar = doc.to_grammar()?;
    let diagnostics = grammar.validate();
    if diagnostics.is_empty() {
        Ok(grammar)
    } else {
        Err(DocumentError::Invalid(diagnostics))
    }
}

pub fn load_grammar(path: impl AsRef<Path>) -> Result<Grammar, DocumentError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_grammar(&text)
}

/// Pretty-printed grammar document, newline terminated.
pub fn grammar_to_json(g: &Grammar) -> String {
    let mut s = serde_json::to_string_pretty(&GrammarDocument::from_grammar(g))
        .expect("grammar documents serialize");
    s.push('\n');
    s
}

pub fn parse_graph(text: &str) -> Result<LabeledDigraph, DocumentError> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    doc.to_graph().map_err(|source| DocumentError::Graph {
        context: "graph".into(),
        source,
    })
}

pub fn graph_to_json(g: &LabeledDigraph) -> String {
    serde_json::to_string(&GraphDocument::from_graph(g)).expect("graph documents serialize")
}

/// One graph document per derivation step.
pub fn trace_to_json(t: &DerivationTrace) -> String {
    let docs: Vec<GraphDocument> = t
        .steps
        .iter()
        .map(|s| GraphDocument::from_graph(&s.graph))
        .collect();
    serde_json::to_string_pretty(&docs).expect("trace documents serialize")
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Deterministic DOT text: nodes by id, edges by `(src, dst, label)`.
/// With `merge_bidi`, each antiparallel pair with equal labels becomes one
/// `dir=both` edge from the smaller id.
pub fn export_dot(g: &LabeledDigraph, merge_bidi: bool) -> String {
    let mut out = String::from("digraph G {\n");
    for n in g.nodes() {
        let _ = writeln!(out, "  n{} [label=\"{}\"];", n.id, escape(&n.label));
    }

    let mut counts: BTreeMap<(NodeId, NodeId, &str), usize> = BTreeMap::new();
    for e in g.edges() {
        *counts.entry((e.src, e.dst, e.label.as_str())).or_default() += 1;
    }
    let mut lines: Vec<(NodeId, NodeId, &str, bool)> = Vec::new();
    for (&(s, d, l), &c) in &counts {
        let paired = if merge_bidi && s != d {
            counts.get(&(d, s, l)).copied().unwrap_or(0).min(c)
        } else {
            0
        };
        // the pair is emitted once, from the lower id
        let merged = if s < d { paired } else { 0 };
        let plain = c - paired;
        lines.extend(std::iter::repeat_n((s, d, l, true), merged));
        lines.extend(std::iter::repeat_n((s, d, l, false), plain));
    }
    lines.sort();
    for (s, d, l, both) in lines {
        let dir = if both { ", dir=both" } else { "" };
        let _ = writeln!(out, "  n{s} -> n{d} [label=\"{}\"{dir}];", escape(l));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn dot_single_node() {
        let mut g = LabeledDigraph::new();
        g.add_node("b", 2);
        assert_eq!(
            export_dot(&g, false),
            "digraph G {\n  n0 [label=\"b\"];\n}\n"
        );
    }

    #[test]
    fn dot_single_edge() {
        let mut g = LabeledDigraph::new();
        let b = g.add_node("b", 0);
        let e = g.add_node("e", 0);
        g.add_edge(b, e, "alpha").unwrap();
        let dot = export_dot(&g, true);
        assert_eq!(
            dot.lines()
                .filter(|l| l.contains("label=\"") && !l.contains("->"))
                .count(),
            2
        );
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 1);
        assert!(dot.contains("  n0 -> n1 [label=\"alpha\"];\n"));
    }

    #[test]
    fn dot_merges_pairs_only_on_request() {
        let mut g = LabeledDigraph::new();
        let a = g.add_node("a", 0);
        let b = g.add_node("b", 0);
        g.add_bidi_edge(b, a, "x").unwrap();
        g.add_edge(a, b, "y").unwrap();
        let merged = export_dot(&g, true);
        assert!(merged.contains("n0 -> n1 [label=\"x\", dir=both];"));
        assert!(merged.contains("n0 -> n1 [label=\"y\"];"));
        assert_eq!(merged.matches("->").count(), 2);
        assert_eq!(export_dot(&g, false).matches("->").count(), 3);
    }

    #[test]
    fn dot_escapes_labels() {
        let mut g = LabeledDigraph::new();
        g.add_node("say \"hi\"", 0);
        assert!(export_dot(&g, false).contains(r#"[label="say \"hi\""]"#));
    }

    #[test]
    fn bad_direction_flag() {
        let mut doc = GrammarDocument::from_grammar(&bundled::wheel());
        if let InstructionDocument::Embed { d, .. } = &mut doc.productions[1].instructions[0] {
            *d = 2;
        }
        let text = serde_json::to_string(&doc).unwrap();
        let err = parse_grammar(&text).unwrap_err();
        assert!(
            err.to_string()
                .contains("direction flag must be 0, 1, or -1"),
            "{err}"
        );
    }

    #[test]
    fn missing_control() {
        let mut doc = GrammarDocument::from_grammar(&bundled::wheel());
        doc.control = None;
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(
            parse_grammar(&text).unwrap_err().to_string(),
            "missing control"
        );
    }

    #[test]
    fn malformed_reports_position() {
        let err = parse_grammar("{\n  \"sigma\": [,]\n}").unwrap_err();
        assert!(
            matches!(err, DocumentError::Syntax { line: 2, .. }),
            "{err}"
        );
    }

    #[test]
    fn invalid_grammar_surfaces_diagnostics() {
        let mut g = bundled::wheel();
        g.control = parse_control("p1p9").unwrap();
        let err = parse_grammar(&grammar_to_json(&g)).unwrap_err();
        assert!(err.to_string().contains("unknown production p9"));
    }

    #[test]
    fn graph_document_rejects_dangling_edges() {
        let text =
            r#"{"nodes":[{"id":0,"label":"a","role":0}],"edges":[{"src":0,"dst":3,"label":"x"}]}"#;
        assert!(parse_graph(text).is_err());
        let dup = r#"{"nodes":[{"id":0,"label":"a"},{"id":0,"label":"b"}]}"#;
        assert!(parse_graph(dup).is_err());
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_grammar("/nonexistent/grammar.json"),
            Err(DocumentError::Read { .. })
        ));
    }
}
