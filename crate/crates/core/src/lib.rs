//! Directed node-replacement graph grammars with regular control.
//!
//! A grammar rewrites one nonterminal node at a time: the node is removed,
//! a daughter graph is inserted, and connection instructions decide which
//! edges join the daughter to the rest of the host. A regular expression
//! over production names fixes the order in which productions may be used.
//!
//! On top of the engine sits a generator of lock-and-key puzzle plots:
//! sample a production word from the control with a seeded generator,
//! derive it, and check the result for solvability.
//!
//! ```
//! use ncgraph::{bundled, rewrite::{derive, SelectionPolicy}};
//!
//! let wheel = bundled::wheel();
//! let trace = derive(&wheel, &["p1", "p2", "p2", "p3"], SelectionPolicy::FirstById).unwrap();
//! assert!(trace.in_language());
//! assert_eq!(trace.final_graph().node_count(), 6);
//! ```

pub mod bundled;
pub mod control;
pub mod grammar;
pub mod graph;
pub mod io;
pub mod puzzle;
pub mod rewrite;
pub mod sweep;

pub use control::{
    enumerate_words, parse_control, sample_word, ControlExpr, ControlNfa, Prng, SampleMode, Word,
};
pub use grammar::{
    validate_grammar, ConnectionInstruction, Diagnostic, Direction, EmbedInstruction, Grammar,
    JumpInstruction, Production,
};
pub use graph::{
    are_isomorphic, Edge, GraphError, LabeledDigraph, Neighbor, Node, NodeId, Orientation,
};
pub use io::{export_dot, load_grammar, parse_grammar};
pub use puzzle::{classify, generate_solvable, is_solvable, PuzzleGraph, RoleMap, SolveReport};
pub use rewrite::{
    apply_production, derive, find_candidates, game_gen, DerivationTrace, SelectionPolicy,
};

pub use bundled::bundled_grammars;
