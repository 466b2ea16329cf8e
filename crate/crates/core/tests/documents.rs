mod common;

use std::path::PathBuf;

use common::*;
use ncgraph::io::{self, GraphDocument};
use ncgraph::*;

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, expected, "{name} differs from golden copy");
}

fn derived(grammar: &Grammar, word: &str) -> LabeledDigraph {
    let w: Vec<&str> = word.split_whitespace().collect();
    derive(grammar, &w, SelectionPolicy::FirstById)
        .unwrap()
        .final_graph()
        .clone()
}

#[test]
fn golden_dot() {
    golden(
        "wheel6.dot",
        &export_dot(&derived(&bundled::wheel(), "p1 p2 p2 p3"), false),
    );
    golden(
        "star7.dot",
        &export_dot(&derived(&bundled::star(), "p1 p1 p1 p1 p1 p1 p2"), false),
    );
    let plot = derived(&bundled::puzzle(), "p1 p2 p3 p3 p4");
    golden("plot1.dot", &export_dot(&plot, true));
    golden("plot1.json", &(io::graph_to_json(&plot) + "\n"));
}

#[test]
fn plot_dot_merges_key_lock_pairs() {
    let plot = derived(&bundled::puzzle(), "p1 p2 p3 p3 p4");
    let dot = export_dot(&plot, true);
    assert_eq!(dot.matches("dir=both").count(), 4);
    assert_eq!(dot.matches("->").count(), 10);
    assert_eq!(export_dot(&plot, false).matches("->").count(), 14);
}

#[test]
fn graph_round_trip() {
    let mut r = rng(9);
    for _ in 0..50 {
        let g = random_graph(&mut r, 6, &["a", "b", "c"], 0.3);
        let text = io::graph_to_json(&g);
        let back = io::parse_graph(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(io::graph_to_json(&back), text);
    }
}

#[test]
fn grammar_round_trip() {
    for (name, g) in bundled_grammars() {
        let text = io::grammar_to_json(&g);
        let back = parse_grammar(&text).unwrap();
        assert_eq!(back, g, "{name}");
    }
}

#[test]
fn grammar_files_load() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("grammars");
    for (name, g) in bundled_grammars() {
        assert_eq!(load_grammar(dir.join(format!("{name}.json"))).unwrap(), g);
    }
}

#[test]
fn outputs_are_byte_stable() {
    let runs: Vec<(String, String, String)> = (0..3)
        .map(|_| {
            let plot = generate_solvable(
                &bundled::puzzle(),
                2,
                3,
                SampleMode::PerStar,
                SelectionPolicy::FirstById,
                &RoleMap::default(),
            )
            .unwrap();
            (
                io::trace_to_json(&plot.trace),
                export_dot(plot.trace.final_graph(), true),
                serde_json::to_string(&plot.report).unwrap(),
            )
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn trace_json_has_one_document_per_step() {
    let w = ["p1", "p2", "p2", "p3"];
    let t = derive(&bundled::wheel(), &w, SelectionPolicy::FirstById).unwrap();
    let docs: Vec<GraphDocument> = serde_json::from_str(&io::trace_to_json(&t)).unwrap();
    assert_eq!(docs.len(), 4);
    assert_eq!(docs[3].to_graph().unwrap(), *t.final_graph());
}
