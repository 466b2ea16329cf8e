//! Node- and edge-labeled directed multigraphs.
//!
//! Host graphs, daughter graphs and derivation outputs all share this type.
//! A bidirectional connection is stored as two antiparallel edges carrying
//! the same label.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Node and edge labels.
pub type Symbol = String;

/// Identifier of a node, unique within one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub label: Symbol,
    /// Derivation bookkeeping: the daughter-node number that connection
    /// instructions refer to. Carried unchanged into derived graphs.
    pub role: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub label: Symbol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Incoming,
    Outgoing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbor {
    pub node: NodeId,
    pub label: Symbol,
    pub orientation: Orientation,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
}

/// A labeled directed multigraph. Self-loops and parallel edges are allowed.
///
/// Fresh ids come from a monotone counter, so ids are never reused after a
/// node is removed.
#[derive(Debug, Clone, Default)]
pub struct LabeledDigraph {
    nodes: BTreeMap<NodeId, Node>,
    edges: Vec<Edge>,
    next_id: usize,
}

impl PartialEq for LabeledDigraph {
    /// Structural equality: same nodes and the same edge multiset. The id
    /// counter is not compared.
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for LabeledDigraph {}

impl LabeledDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a node with a freshly allocated id.
    pub fn add_node(&mut self, label: impl Into<Symbol>, role: u32) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        self.nodes.insert(
            id,
            Node {
                id,
                label: label.into(),
                role,
            },
        );
        id
    }

    /// Adds a node with a caller-chosen id, as when loading a document.
    pub fn insert_node(
        &mut self,
        id: NodeId,
        label: impl Into<Symbol>,
        role: u32,
    ) -> Result<(), GraphError> {
        if self.nodes.contains_key(&id) {
            return Err(GraphError::DuplicateNode(id));
        }
        self.nodes.insert(
            id,
            Node {
                id,
                label: label.into(),
                role,
            },
        );
        self.next_id = self.next_id.max(id.0 + 1);
        Ok(())
    }

    pub fn add_edge(
        &mut self,
        src: NodeId,
        dst: NodeId,
        label: impl Into<Symbol>,
    ) -> Result<(), GraphError> {
        for id in [src, dst] {
            if !self.nodes.contains_key(&id) {
                return Err(GraphError::UnknownNode(id));
            }
        }
        self.edges.push(Edge {
            src,
            dst,
            label: label.into(),
        });
        Ok(())
    }

    /// Adds the antiparallel pair `a -> b`, `b -> a`.
    pub fn add_bidi_edge(
        &mut self,
        a: NodeId,
        b: NodeId,
        label: impl Into<Symbol>,
    ) -> Result<(), GraphError> {
        let label = label.into();
        self.add_edge(a, b, label.clone())?;
        self.add_edge(b, a, label)
    }

    /// Removes a node together with every incident edge.
    pub fn remove_node(&mut self, id: NodeId) -> Result<Node, GraphError> {
        let node = self.nodes.remove(&id).ok_or(GraphError::UnknownNode(id))?;
        self.edges.retain(|e| e.src != id && e.dst != id);
        Ok(node)
    }

    /// Collapses edges that agree on source, target and label.
    pub fn dedupe_edges(&mut self) {
        let mut seen = BTreeSet::new();
        self.edges.retain(|e| seen.insert(e.clone()));
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn label(&self, id: NodeId) -> Option<&str> {
        self.nodes.get(&id).map(|n| n.label.as_str())
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = &Node> + '_ {
        self.nodes.values()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges sorted by `(src, dst, label)`.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut edges = self.edges.clone();
        edges.sort();
        edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Next id `add_node` will hand out.
    pub fn next_id(&self) -> NodeId {
        NodeId(self.next_id)
    }

    /// True when every edge endpoint refers to a present node.
    pub fn is_consistent(&self) -> bool {
        self.edges
            .iter()
            .all(|e| self.nodes.contains_key(&e.src) && self.nodes.contains_key(&e.dst))
    }

    /// Every node carrying `label`, ascending by id.
    pub fn nodes_labeled<'a>(&'a self, label: &'a str) -> impl Iterator<Item = NodeId> + 'a {
        self.nodes
            .values()
            .filter(move |n| n.label == label)
            .map(|n| n.id)
    }

    /// One entry per incident edge end, sorted by neighbor id, then edge
    /// label, then orientation. A self-loop yields one incoming and one
    /// outgoing entry.
    pub fn neighbors_of(&self, id: NodeId) -> Result<Vec<Neighbor>, GraphError> {
        if !self.contains(id) {
            return Err(GraphError::UnknownNode(id));
        }
        let mut out = Vec::new();
        for e in &self.edges {
            if e.src == id {
                out.push(Neighbor {
                    node: e.dst,
                    label: e.label.clone(),
                    orientation: Orientation::Outgoing,
                });
            }
            if e.dst == id {
                out.push(Neighbor {
                    node: e.src,
                    label: e.label.clone(),
                    orientation: Orientation::Incoming,
                });
            }
        }
        out.sort_by(|a, b| {
            (a.node, &a.label, a.orientation).cmp(&(b.node, &b.label, b.orientation))
        });
        Ok(out)
    }

    /// Targets of outgoing edges, ascending and without repeats.
    pub fn successors(&self, id: NodeId) -> Vec<NodeId> {
        let set: BTreeSet<NodeId> = self
            .edges
            .iter()
            .filter(|e| e.src == id)
            .map(|e| e.dst)
            .collect();
        set.into_iter().collect()
    }

    pub fn has_edge(&self, src: NodeId, dst: NodeId) -> bool {
        self.edges.iter().any(|e| e.src == src && e.dst == dst)
    }

    /// Whether a directed walk (possibly empty) leads from `from` to `to`.
    pub fn has_directed_path(&self, from: NodeId, to: NodeId) -> Result<bool, GraphError> {
        for id in [from, to] {
            if !self.contains(id) {
                return Err(GraphError::UnknownNode(id));
            }
        }
        let mut adj: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
        for e in &self.edges {
            adj.entry(e.src).or_default().push(e.dst);
        }
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(n) = queue.pop_front() {
            if n == to {
                return Ok(true);
            }
            for &m in adj.get(&n).into_iter().flatten() {
                if seen.insert(m) {
                    queue.push_back(m);
                }
            }
        }
        Ok(false)
    }

    /// Membership in the terminal graph class: every node label is in
    /// `delta` and every edge label is in `omega`.
    pub fn is_all_terminal(&self, delta: &BTreeSet<Symbol>, omega: &BTreeSet<Symbol>) -> bool {
        self.nodes.values().all(|n| delta.contains(&n.label))
            && self.edges.iter().all(|e| omega.contains(&e.label))
    }

    /// Label-preserving isomorphism test; roles are ignored.
    ///
    /// Backtracking search over bijections, restricted to same-label
    /// candidates and checked against edge multiplicities as the mapping
    /// grows. Meant for small graphs (about 15 nodes or fewer).
    pub fn is_isomorphic_to(&self, other: &LabeledDigraph) -> bool {
        are_isomorphic(self, other)
    }
}

/// Edge multiplicities keyed by `(src index, dst index, label)`.
type EdgeCounts = HashMap<(usize, usize, Symbol), usize>;

struct IsoSide<'a> {
    labels: Vec<&'a str>,
    counts: EdgeCounts,
    /// Per node: total edges touching it, used as an invariant for pruning.
    degree: Vec<(usize, usize)>,
}

impl<'a> IsoSide<'a> {
    fn new(g: &'a LabeledDigraph) -> Self {
        let index: HashMap<NodeId, usize> =
            g.node_ids().enumerate().map(|(i, id)| (id, i)).collect();
        let labels = g.nodes().map(|n| n.label.as_str()).collect::<Vec<_>>();
        let mut counts = EdgeCounts::new();
        let mut degree = vec![(0, 0); labels.len()];
        for e in g.edges() {
            let (s, d) = (index[&e.src], index[&e.dst]);
            *counts.entry((s, d, e.label.clone())).or_default() += 1;
            degree[s].1 += 1;
            degree[d].0 += 1;
        }
        Self {
            labels,
            counts,
            degree,
        }
    }

    fn between(&self, a: usize, b: usize) -> Vec<(&str, usize)> {
        let mut v: Vec<(&str, usize)> = self
            .counts
            .iter()
            .filter(|((s, d, _), _)| *s == a && *d == b)
            .map(|((_, _, l), c)| (l.as_str(), *c))
            .collect();
        v.sort();
        v
    }
}

pub fn are_isomorphic(g1: &LabeledDigraph, g2: &LabeledDigraph) -> bool {
    if g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let a = IsoSide::new(g1);
    let b = IsoSide::new(g2);
    let mut la = a.labels.clone();
    let mut lb = b.labels.clone();
    la.sort_unstable();
    lb.sort_unstable();
    if la != lb {
        return false;
    }
    let n = a.labels.len();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_mapping(&a, &b, 0, &mut map, &mut used)
}

fn extend_mapping(
    a: &IsoSide<'_>,
    b: &IsoSide<'_>,
    next: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if next == map.len() {
        return true;
    }
    for cand in 0..map.len() {
        if used[cand] || a.labels[next] != b.labels[cand] || a.degree[next] != b.degree[cand] {
            continue;
        }
        map[next] = cand;
        let consistent = (0..=next).all(|prev| {
            a.between(next, prev) == b.between(cand, map[prev])
                && a.between(prev, next) == b.between(map[prev], cand)
        });
        if consistent {
            used[cand] = true;
            if extend_mapping(a, b, next + 1, map, used) {
                return true;
            }
            used[cand] = false;
        }
    }
    map[next] = usize::MAX;
    false
}
