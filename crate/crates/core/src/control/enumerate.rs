use std::collections::BTreeSet;

use super::{ControlExpr, Word};

/// Largest `max_len` accepted by [`enumerate_words`].
pub const MAX_ENUMERATION_LEN: usize = 12;

/// All words of `L(expr)` with at most `max_len` symbols, sorted by length
/// and then lexicographically. Computed directly from the expression tree,
/// independent of the NFA. `max_len` is clamped to
/// [`MAX_ENUMERATION_LEN`].
pub fn enumerate_words(expr: &ControlExpr, max_len: usize) -> Vec<Word> {
    let max_len = max_len.min(MAX_ENUMERATION_LEN);
    let mut words: Vec<Word> = language(expr, max_len).into_iter().collect();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    words
}

fn language(expr: &ControlExpr, max_len: usize) -> BTreeSet<Word> {
    match expr {
        ControlExpr::Symbol(s) => {
            if max_len >= 1 {
                BTreeSet::from([vec![s.clone()]])
            } else {
                BTreeSet::new()
            }
        }
        ControlExpr::Group(inner) => language(inner, max_len),
        ControlExpr::Union(items) => items.iter().flat_map(|i| language(i, max_len)).collect(),
        ControlExpr::Concat(items) => {
            let mut acc = BTreeSet::from([Vec::new()]);
            for item in items {
                let part = language(item, max_len);
                acc = concat(&acc, &part, max_len);
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
        ControlExpr::Star(inner) => {
            let base = language(inner, max_len);
            let mut all = BTreeSet::from([Vec::new()]);
            let mut frontier = all.clone();
            while !frontier.is_empty() {
                let next = concat(&frontier, &base, max_len);
                frontier = next.difference(&all).cloned().collect();
                all.extend(frontier.iter().cloned());
            }
            all
        }
    }
}

fn concat(left: &BTreeSet<Word>, right: &BTreeSet<Word>, max_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for l in left {
        for r in right {
            if l.len() + r.len() <= max_len {
                let mut w = l.clone();
                w.extend(r.iter().cloned());
                out.insert(w);
            }
        }
    }
    out
}
