//! Batch plot generation over many `(seed, limit, mode)` cases.
//!
//! Cases are independent, so with the `parallel` feature they are spread
//! over the rayon pool; [`sweep_sequential`] is always available and gives
//! the same output in the same order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::control::{SampleMode, Word};
use crate::grammar::Grammar;
use crate::puzzle::{generate_solvable, RoleMap};
use crate::rewrite::SelectionPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepCase {
    pub seed: u32,
    pub limit: u32,
    pub mode: SampleMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutcome {
    pub case: SweepCase,
    pub word: Word,
    pub word_in_control: bool,
    pub final_terminal: bool,
    pub node_count: usize,
    pub solvable: bool,
    /// Derivation or classification failure, if any.
    pub error: Option<String>,
}

impl SweepOutcome {
    pub fn is_sound(&self) -> bool {
        self.error.is_none() && self.word_in_control && self.final_terminal && self.solvable
    }
}

/// Cartesian product of seeds, limits and modes, in that nesting order.
pub fn cases(
    seeds: impl IntoIterator<Item = u32>,
    limits: &[u32],
    modes: &[SampleMode],
) -> Vec<SweepCase> {
    let mut out = Vec::new();
    for seed in seeds {
        for &limit in limits {
            for &mode in modes {
                out.push(SweepCase { seed, limit, mode });
            }
        }
    }
    out
}

pub fn run_case(
    grammar: &Grammar,
    case: SweepCase,
    policy: SelectionPolicy,
    roles: &RoleMap,
) -> SweepOutcome {
    match generate_solvable(grammar, case.seed, case.limit, case.mode, policy, roles) {
        Ok(plot) => SweepOutcome {
            case,
            word_in_control: plot.trace.word_in_control,
            final_terminal: plot.trace.final_terminal,
            node_count: plot.trace.final_graph().node_count(),
            solvable: plot.report.solvable,
            word: plot.word,
            error: None,
        },
        Err(e) => SweepOutcome {
            case,
            word: Vec::new(),
            word_in_control: false,
            final_terminal: false,
            node_count: 0,
            solvable: false,
            error: Some(e.to_string()),
        },
    }
}

pub fn sweep_sequential(
    grammar: &Grammar,
    cases: &[SweepCase],
    policy: SelectionPolicy,
    roles: &RoleMap,
) -> Vec<SweepOutcome> {
    cases
        .iter()
        .map(|&c| run_case(grammar, c, policy, roles))
        .collect()
}

#[cfg(feature = "parallel")]
pub fn sweep_parallel(
    grammar: &Grammar,
    cases: &[SweepCase],
    policy: SelectionPolicy,
    roles: &RoleMap,
) -> Vec<SweepOutcome> {
    cases
        .par_iter()
        .map(|&c| run_case(grammar, c, policy, roles))
        .collect()
}

/// Parallel when the `parallel` feature is on, sequential otherwise.
pub fn sweep(
    grammar: &Grammar,
    cases: &[SweepCase],
    policy: SelectionPolicy,
    roles: &RoleMap,
) -> Vec<SweepOutcome> {
    #[cfg(feature = "parallel")]
    {
        sweep_parallel(grammar, cases, policy, roles)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_sequential(grammar, cases, policy, roles)
    }
}
