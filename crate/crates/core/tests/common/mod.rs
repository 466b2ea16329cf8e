//! Independent oracles and hand-built reference graphs shared by the
//! integration tests and the acceptance runner.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use ncgraph::puzzle::PuzzleGraph;
use ncgraph::{LabeledDigraph, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ALPHA: &str = "alpha";

/// Graph from labels and `(src, dst)` index pairs, all edges `alpha`.
pub fn build(labels: &[&str], edges: &[(usize, usize)]) -> LabeledDigraph {
    let mut g = LabeledDigraph::new();
    let ids: Vec<NodeId> = labels.iter().map(|l| g.add_node(*l, 0)).collect();
    for &(s, d) in edges {
        g.add_edge(ids[s], ids[d], ALPHA).unwrap();
    }
    g
}

/// Isomorphism by trying every bijection. Only for small graphs.
pub fn perm_isomorphic(g1: &LabeledDigraph, g2: &LabeledDigraph) -> bool {
    if g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let a: Vec<NodeId> = g1.node_ids().collect();
    let b: Vec<NodeId> = g2.node_ids().collect();
    let edges = |g: &LabeledDigraph, f: &dyn Fn(NodeId) -> NodeId| {
        g.edges()
            .iter()
            .map(|e| (f(e.src), f(e.dst), e.label.clone()))
            .sorted()
            .collect::<Vec<_>>()
    };
    let target = edges(g2, &|n| n);
    b.iter().copied().permutations(b.len()).any(|perm| {
        let map: BTreeMap<NodeId, NodeId> = a.iter().copied().zip(perm).collect();
        a.iter().all(|n| g1.label(*n) == g2.label(map[n])) && edges(g1, &|n| map[&n]) == target
    })
}

/// Reachability matrix by repeated boolean squaring of `I + A`.
#[allow(clippy::needless_range_loop)]
pub fn closure(g: &LabeledDigraph) -> (Vec<NodeId>, Vec<Vec<bool>>) {
    let ids: Vec<NodeId> = g.node_ids().collect();
    let ix: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let n = ids.len();
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for e in g.edges() {
        r[ix[&e.src]][ix[&e.dst]] = true;
    }
    loop {
        let mut next = r.clone();
        for i in 0..n {
            for k in 0..n {
                if r[i][k] {
                    for j in 0..n {
                        next[i][j] |= r[k][j];
                    }
                }
            }
        }
        if next == r {
            return (ids, r);
        }
        r = next;
    }
}

pub fn reaches(g: &LabeledDigraph, from: NodeId, to: NodeId) -> bool {
    let (ids, r) = closure(g);
    let i = ids.iter().position(|n| *n == from).unwrap();
    let j = ids.iter().position(|n| *n == to).unwrap();
    r[i][j]
}

/// Exhaustive depth-first search over walks that never repeat a
/// `(node, collected keys)` state. A lock may be entered once any key
/// pointing at it has been collected.
pub fn brute_solvable(p: &PuzzleGraph) -> bool {
    fn go(
        p: &PuzzleGraph,
        node: NodeId,
        keys: BTreeSet<NodeId>,
        seen: &mut Vec<(NodeId, BTreeSet<NodeId>)>,
    ) -> bool {
        if node == p.end {
            return true;
        }
        for e in p.graph.edges() {
            if e.src != node {
                continue;
            }
            let next = e.dst;
            if p.locks.contains(&next) && !keys.iter().any(|k| p.graph.has_edge(*k, next)) {
                continue;
            }
            let mut k2 = keys.clone();
            if p.keys.contains(&next) {
                k2.insert(next);
            }
            let state = (next, k2.clone());
            if seen.contains(&state) {
                continue;
            }
            seen.push(state);
            let found = go(p, next, k2, seen);
            seen.pop();
            if found {
                return true;
            }
        }
        false
    }
    let mut keys = BTreeSet::new();
    if p.keys.contains(&p.begin) {
        keys.insert(p.begin);
    }
    let mut seen = vec![(p.begin, keys.clone())];
    go(p, p.begin, keys, &mut seen)
}

/// Random labelled digraph on `n` nodes from `labels`, each ordered pair an
/// edge with probability `density`.
pub fn random_graph(
    rng: &mut ChaCha8Rng,
    n: usize,
    labels: &[&str],
    density: f64,
) -> LabeledDigraph {
    let mut g = LabeledDigraph::new();
    let ids: Vec<NodeId> = (0..n)
        .map(|_| g.add_node(labels[rng.gen_range(0..labels.len())], 0))
        .collect();
    for &s in &ids {
        for &d in &ids {
            if s != d && rng.gen_bool(density) {
                g.add_edge(s, d, ALPHA).unwrap();
            }
        }
    }
    g
}

/// Random puzzle: one `b`, one `e`, the rest drawn from `l`, `k`, `m`.
pub fn random_puzzle(rng: &mut ChaCha8Rng, max_nodes: usize) -> LabeledDigraph {
    let n = rng.gen_range(2..=max_nodes);
    let mut labels = vec!["b", "e"];
    for _ in 2..n {
        labels.push(["l", "k", "m"][rng.gen_range(0..3)]);
    }
    let mut g = LabeledDigraph::new();
    let ids: Vec<NodeId> = labels.iter().map(|l| g.add_node(*l, 0)).collect();
    let density = rng.gen_range(0.15..0.5);
    for &s in &ids {
        for &d in &ids {
            if s != d && rng.gen_bool(density) {
                g.add_edge(s, d, ALPHA).unwrap();
            }
        }
    }
    g
}

/// Random relabelling of node ids, preserving structure.
pub fn shuffled(rng: &mut ChaCha8Rng, g: &LabeledDigraph) -> LabeledDigraph {
    let mut ids: Vec<NodeId> = g.node_ids().collect();
    for i in (1..ids.len()).rev() {
        ids.swap(i, rng.gen_range(0..=i));
    }
    let mut out = LabeledDigraph::new();
    let mut map = BTreeMap::new();
    for old in ids {
        let n = g.node(old).unwrap();
        map.insert(old, out.add_node(n.label.clone(), n.role));
    }
    let mut edges = g.edges().to_vec();
    for i in (1..edges.len()).rev() {
        edges.swap(i, rng.gen_range(0..=i));
    }
    for e in edges {
        out.add_edge(map[&e.src], map[&e.dst], e.label).unwrap();
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Directed wheel with hub `c` and rim `s -> e -> a_{k+1} -> ... -> a_1 -> s`;
/// the hub points at every rim node.
pub fn wheel(k: usize) -> LabeledDigraph {
    let mut labels = vec!["s", "c", "e"];
    labels.extend(std::iter::repeat_n("a", k + 1));
    // rim order: s, e, a_{k+1}, ..., a_1 (indices 3.. hold a_1..a_{k+1})
    let mut rim = vec![0, 2];
    rim.extend((3..labels.len()).rev());
    let mut edges: Vec<(usize, usize)> = rim.iter().map(|&r| (1, r)).collect();
    for w in rim.windows(2) {
        edges.push((w[0], w[1]));
    }
    edges.push((*rim.last().unwrap(), 0));
    build(&labels, &edges)
}

/// The six-node wheel: s, c, a, a', a'', e.
pub fn w6() -> LabeledDigraph {
    build(
        &["s", "c", "a", "a", "a", "e"],
        &[
            (2, 0),
            (1, 0),
            (1, 2),
            (1, 3),
            (3, 2),
            (1, 4),
            (4, 3),
            (0, 5),
            (5, 4),
            (1, 5),
        ],
    )
}

/// Out-star with `k` leaves.
pub fn star(k: usize) -> LabeledDigraph {
    let mut labels = vec!["c"];
    labels.extend(std::iter::repeat_n("a", k));
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    build(&labels, &edges)
}

/// Final plot of the word `p1 p2 p3 p3 p4`.
pub fn plot_one() -> LabeledDigraph {
    // b e l l' l'' k' k'' k'''
    // 0 1 2 3  4   5  6   7
    build(
        &["b", "e", "l", "l", "l", "k", "k", "k"],
        &[
            (0, 2),
            (2, 1),
            (5, 2),
            (3, 5),
            (5, 3),
            (0, 3),
            (3, 0),
            (6, 3),
            (4, 6),
            (6, 4),
            (0, 4),
            (4, 0),
            (0, 7),
            (7, 4),
        ],
    )
}

/// Label multiset of a graph.
pub fn label_bag(g: &LabeledDigraph) -> Vec<String> {
    g.nodes().map(|n| n.label.clone()).sorted().collect()
}

pub fn dangling_edges(g: &LabeledDigraph) -> usize {
    g.edges()
        .iter()
        .filter(|e| !g.contains(e.src) || !g.contains(e.dst))
        .count()
}

/// Compares NFA acceptance with the enumerated language for every word over
/// the expression's alphabet up to `max_len`. Subtrees are skipped once the
/// NFA has no live state and no enumerated word extends the prefix, since
/// both sides then reject every extension. Returns the number of words
/// covered, explicit or skipped.
pub fn check_control_exhaustive(
    expr: &ncgraph::ControlExpr,
    max_len: usize,
) -> Result<u128, String> {
    use ncgraph::control::StateSet;
    let nfa = ncgraph::ControlNfa::compile(expr);
    let alphabet: Vec<String> = expr.symbols().into_iter().collect();
    let lang: BTreeSet<Vec<String>> = ncgraph::enumerate_words(expr, max_len)
        .into_iter()
        .collect();
    let prefixes: BTreeSet<Vec<String>> = lang
        .iter()
        .flat_map(|w| (0..=w.len()).map(move |i| w[..i].to_vec()))
        .collect();
    let a = alphabet.len() as u128;
    let subtree = |depth: usize| {
        (0..=(max_len - depth) as u32)
            .map(|i| a.pow(i))
            .sum::<u128>()
    };

    let mut covered = 0u128;
    let mut stack: Vec<(Vec<String>, StateSet)> = vec![(Vec::new(), nfa.start_set())];
    while let Some((w, set)) = stack.pop() {
        if nfa.is_accepting(&set) != lang.contains(&w) {
            return Err(format!("disagreement on {w:?}"));
        }
        if !set.iter().any(|live| *live) {
            if prefixes.contains(&w) {
                return Err(format!("dead NFA state but {w:?} extends to a word"));
            }
            covered += subtree(w.len());
            continue;
        }
        covered += 1;
        if w.len() < max_len {
            for s in &alphabet {
                let mut v = w.clone();
                v.push(s.clone());
                stack.push((v, nfa.step(&set, s)));
            }
        }
    }
    Ok(covered)
}
