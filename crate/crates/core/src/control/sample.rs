use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ControlExpr, Word};

/// 32-bit linear congruential generator,
/// `next = (1664525 * state + 1013904223) mod 2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prng {
    state: u32,
}

impl Prng {
    pub const MULTIPLIER: u32 = 1_664_525;
    pub const INCREMENT: u32 = 1_013_904_223;

    pub fn new(seed: u32) -> Self {
        Self { state: seed }
    }

    pub fn state(&self) -> u32 {
        self.state
    }

    /// Advances the generator and returns the new state.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> u32 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// `next() mod bound`.
    pub fn below(&mut self, bound: u32) -> u32 {
        self.next() % bound
    }
}

/// How star repetition counts are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMode {
    /// One count per syntactic `*`, drawn in the order the stars appear in
    /// the text, then reused for every expansion of that star.
    #[default]
    PerStar,
    /// A fresh count each time a star is expanded.
    PerInstance,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("limit must be at least 1")]
    ZeroLimit,
}

/// Draws a word of `L(expr)`; star counts are `prng.next() % limit`.
pub fn sample_word(
    expr: &ControlExpr,
    seed: u32,
    limit: u32,
    mode: SampleMode,
) -> Result<Word, SampleError> {
    if limit == 0 {
        return Err(SampleError::ZeroLimit);
    }
    let mut prng = Prng::new(seed);
    let mut word = Vec::new();
    match mode {
        SampleMode::PerStar => {
            let mut choices = Vec::new();
            fix_choices(expr, &mut prng, limit, &mut choices);
            let mut cursor = 0;
            expand_fixed(expr, &choices, &mut cursor, &mut word);
        }
        SampleMode::PerInstance => expand_fresh(expr, &mut prng, limit, &mut word),
    }
    Ok(word)
}

/// Post-order walk: a star's count is drawn after everything inside it,
/// which is the left-to-right order of the `*` characters in the text.
/// Each choice is stored at the node's pre-order index.
fn fix_choices(expr: &ControlExpr, prng: &mut Prng, limit: u32, out: &mut Vec<u32>) {
    let slot = out.len();
    out.push(0);
    match expr {
        ControlExpr::Symbol(_) => {}
        ControlExpr::Concat(items) => items.iter().for_each(|i| fix_choices(i, prng, limit, out)),
        ControlExpr::Union(items) => {
            items.iter().for_each(|i| fix_choices(i, prng, limit, out));
            out[slot] = prng.below(items.len() as u32);
        }
        ControlExpr::Star(inner) => {
            fix_choices(inner, prng, limit, out);
            out[slot] = prng.below(limit);
        }
        ControlExpr::Group(inner) => fix_choices(inner, prng, limit, out),
    }
}

fn subtree_len(expr: &ControlExpr) -> usize {
    1 + match expr {
        ControlExpr::Symbol(_) => 0,
        ControlExpr::Concat(items) | ControlExpr::Union(items) => {
            items.iter().map(subtree_len).sum()
        }
        ControlExpr::Star(inner) | ControlExpr::Group(inner) => subtree_len(inner),
    }
}

fn expand_fixed(expr: &ControlExpr, choices: &[u32], cursor: &mut usize, word: &mut Word) {
    let here = *cursor;
    *cursor += 1;
    match expr {
        ControlExpr::Symbol(s) => word.push(s.clone()),
        ControlExpr::Concat(items) => items
            .iter()
            .for_each(|i| expand_fixed(i, choices, cursor, word)),
        ControlExpr::Union(items) => {
            let pick = choices[here] as usize;
            for (i, item) in items.iter().enumerate() {
                if i == pick {
                    expand_fixed(item, choices, cursor, word);
                } else {
                    *cursor += subtree_len(item);
                }
            }
        }
        ControlExpr::Star(inner) => {
            let start = *cursor;
            for _ in 0..choices[here] {
                *cursor = start;
                expand_fixed(inner, choices, cursor, word);
            }
            *cursor = start + subtree_len(inner);
        }
        ControlExpr::Group(inner) => expand_fixed(inner, choices, cursor, word),
    }
}

fn expand_fresh(expr: &ControlExpr, prng: &mut Prng, limit: u32, word: &mut Word) {
    match expr {
        ControlExpr::Symbol(s) => word.push(s.clone()),
        ControlExpr::Concat(items) => items
            .iter()
            .for_each(|i| expand_fresh(i, prng, limit, word)),
        ControlExpr::Union(items) => {
            let pick = prng.below(items.len() as u32) as usize;
            expand_fresh(&items[pick], prng, limit, word);
        }
        ControlExpr::Star(inner) => {
            let k = prng.below(limit);
            for _ in 0..k {
                expand_fresh(inner, prng, limit, word);
            }
        }
        ControlExpr::Group(inner) => expand_fresh(inner, prng, limit, word),
    }
}
