//! The three reference grammars: directed wheels, directed out-stars and
//! lock-and-key puzzle plots.
//!
//! Each is also shipped as a JSON document under `grammars/`; a test keeps
//! the two in sync.

use std::collections::BTreeMap;

use crate::control::parse_control;
use crate::grammar::{ConnectionInstruction as CI, Direction, Grammar, Production};
use crate::graph::{LabeledDigraph, NodeId};

pub const ALPHA: &str = "alpha";

pub const WHEEL_JSON: &str = include_str!("../grammars/wheel.json");
pub const STAR_JSON: &str = include_str!("../grammars/star.json");
pub const PUZZLE_JSON: &str = include_str!("../grammars/puzzle.json");

/// Small builder for daughter and start graphs: nodes are `(label, role)`
/// pairs, edges index into that list.
fn graph(
    nodes: &[(&str, u32)],
    edges: &[(usize, usize)],
    bidi: &[(usize, usize)],
) -> LabeledDigraph {
    let mut g = LabeledDigraph::new();
    let ids: Vec<NodeId> = nodes.iter().map(|(l, r)| g.add_node(*l, *r)).collect();
    for &(s, d) in edges {
        g.add_edge(ids[s], ids[d], ALPHA).expect("builder edge");
    }
    for &(a, b) in bidi {
        g.add_bidi_edge(ids[a], ids[b], ALPHA)
            .expect("builder edge");
    }
    g
}

fn set(items: &[&str]) -> std::collections::BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn prod(name: &str, mother: &str, daughter: LabeledDigraph, instructions: Vec<CI>) -> Production {
    Production {
        name: name.into(),
        mother_label: mother.into(),
        daughter,
        instructions,
    }
}

fn embed(a: &str, d: i64, role: u32) -> CI {
    CI::embed(a, ALPHA, Direction::try_from(d).unwrap(), ALPHA, role)
}

/// Directed wheels: `p1 p2^k p3` derives the wheel on `k + 4` nodes.
pub fn wheel() -> Grammar {
    // p1 daughter: s(2), c(5), a(3), E(4)
    let p1 = graph(
        &[("s", 2), ("c", 5), ("a", 3), ("E", 4)],
        &[(2, 0), (0, 3), (1, 0), (3, 2), (1, 2), (1, 3)],
        &[],
    );
    let p2 = graph(&[("a", 3), ("E", 4)], &[(1, 0)], &[]);
    let p3 = graph(&[("e", 6)], &[], &[]);
    Grammar {
        sigma: set(&["W", "E", "a", "c", "s", "e"]),
        delta: set(&["a", "c", "s", "e"]),
        gamma: set(&[ALPHA]),
        omega: set(&[ALPHA]),
        productions: vec![
            prod("p1", "W", p1, vec![]),
            prod(
                "p2",
                "E",
                p2,
                vec![
                    embed("c", 1, 3),
                    embed("c", 1, 4),
                    embed("a", -1, 3),
                    embed("s", 1, 4),
                ],
            ),
            prod(
                "p3",
                "E",
                p3,
                vec![embed("c", 1, 6), embed("a", -1, 6), embed("s", 1, 6)],
            ),
        ],
        start: graph(&[("W", 1)], &[], &[]),
        control: parse_control("p1p2*p3").expect("wheel control"),
    }
}

/// Directed out-stars: `p1^k p2` derives the star with `k` leaves.
pub fn star() -> Grammar {
    let p1 = graph(&[("a", 2), ("C", 1)], &[(1, 0)], &[]);
    let p2 = graph(&[("c", 3)], &[], &[]);
    Grammar {
        sigma: set(&["C", "c", "a"]),
        delta: set(&["a", "c"]),
        gamma: set(&[ALPHA]),
        omega: set(&[ALPHA]),
        productions: vec![
            prod("p1", "C", p1, vec![]),
            prod(
                "p2",
                "C",
                p2,
                vec![CI::jump("c", ALPHA, "a", Direction::Backward)],
            ),
        ],
        start: graph(&[("C", 1)], &[], &[]),
        control: parse_control("p1*p2").expect("star control"),
    }
}

/// Lock-and-key puzzle plots. Labels: `b` begin, `e` end, `l` lock, `k` key,
/// `m` room marker; `S G K R D` are nonterminals.
pub fn puzzle() -> Grammar {
    let p1 = graph(&[("b", 2), ("G", 3), ("e", 4)], &[(0, 1), (1, 2)], &[]);
    let p2 = graph(&[("K", 5), ("l", 6)], &[(0, 1)], &[]);
    let p3 = graph(&[("K", 5), ("l", 6), ("k", 7)], &[(0, 1)], &[(1, 2)]);
    let p4 = graph(&[("k", 7)], &[], &[]);
    let p5 = graph(&[("R", 8), ("G", 3)], &[(0, 1)], &[]);
    let p6 = graph(&[("K", 5), ("m", 10)], &[(0, 1)], &[]);
    let p7 = graph(&[("D", 9), ("K", 5)], &[], &[]);
    let p8 = graph(&[("D", 9), ("l", 6), ("k", 7)], &[(0, 1), (1, 2)], &[]);
    let p9 = graph(&[("k", 7)], &[], &[]);
    Grammar {
        sigma: set(&["S", "K", "R", "G", "D", "b", "e", "l", "k", "m"]),
        delta: set(&["b", "e", "l", "m", "k"]),
        gamma: set(&[ALPHA]),
        omega: set(&[ALPHA]),
        productions: vec![
            prod("p1", "S", p1, vec![]),
            prod(
                "p2",
                "G",
                p2,
                vec![
                    embed("b", 1, 5),
                    embed("b", 1, 6),
                    embed("e", -1, 6),
                    embed("m", 1, 5),
                    embed("m", 1, 6),
                ],
            ),
            prod(
                "p3",
                "K",
                p3,
                vec![
                    embed("b", 1, 5),
                    embed("l", -1, 7),
                    embed("b", 0, 6),
                    embed("m", -1, 7),
                ],
            ),
            prod(
                "p4",
                "K",
                p4,
                vec![embed("b", 1, 7), embed("m", 1, 7), embed("l", -1, 7)],
            ),
            prod("p5", "G", p5, vec![embed("b", 1, 8), embed("e", -1, 3)]),
            prod(
                "p6",
                "R",
                p6,
                vec![embed("b", 1, 5), embed("b", 1, 10), embed("G", -1, 10)],
            ),
            prod(
                "p7",
                "K",
                p7,
                vec![
                    embed("b", 0, 9),
                    embed("b", 1, 5),
                    embed("l", -1, 9),
                    embed("l", 1, 5),
                ],
            ),
            prod(
                "p8",
                "D",
                p8,
                vec![embed("b", 1, 9), embed("l", -1, 7), embed("b", 0, 6)],
            ),
            prod("p9", "D", p9, vec![embed("l", -1, 7)]),
        ],
        start: graph(&[("S", 1)], &[], &[]),
        control: parse_control("p1(p5p6(p7p8*p9)*p3*p4)*p2p3*p4").expect("puzzle control"),
    }
}

/// All bundled grammars by name: `wheel`, `star`, `puzzle`.
pub fn bundled_grammars() -> BTreeMap<&'static str, Grammar> {
    BTreeMap::from([("wheel", wheel()), ("star", star()), ("puzzle", puzzle())])
}

/// JSON document text of a bundled grammar.
pub fn bundled_json(name: &str) -> Option<&'static str> {
    match name {
        "wheel" => Some(WHEEL_JSON),
        "star" => Some(STAR_JSON),
        "puzzle" => Some(PUZZLE_JSON),
        _ => None,
    }
}
