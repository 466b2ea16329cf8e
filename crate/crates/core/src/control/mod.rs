//! Regular control over production names.
//!
//! A control expression restricts the order in which productions may be
//! applied. Surface syntax: juxtaposition concatenates, postfix `*` is the
//! Kleene star, `|` is union, parentheses group, whitespace is ignored.
//! A production name is a run of letters or underscores followed by a run
//! of digits, so `p1p2` reads as two names and `p12` as one.

mod enumerate;
mod nfa;
mod parse;
mod sample;

use std::collections::BTreeSet;
use std::fmt;

pub use enumerate::{enumerate_words, MAX_ENUMERATION_LEN};
pub use nfa::{ControlNfa, StateSet};
pub use parse::{parse_control, ParseError};
pub use sample::{sample_word, Prng, SampleError, SampleMode};

/// A word over production names.
pub type Word = Vec<String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ControlExpr {
    Symbol(String),
    Concat(Vec<ControlExpr>),
    Star(Box<ControlExpr>),
    Union(Vec<ControlExpr>),
    /// Explicit parentheses from the source text.
    Group(Box<ControlExpr>),
}

impl ControlExpr {
    pub fn symbol(name: impl Into<String>) -> Self {
        ControlExpr::Symbol(name.into())
    }

    pub fn star(inner: ControlExpr) -> Self {
        ControlExpr::Star(Box::new(inner))
    }

    pub fn group(inner: ControlExpr) -> Self {
        ControlExpr::Group(Box::new(inner))
    }

    /// Every production name mentioned in the expression.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            ControlExpr::Symbol(s) => {
                out.insert(s.clone());
            }
            ControlExpr::Concat(items) | ControlExpr::Union(items) => {
                items.iter().for_each(|i| i.collect_symbols(out))
            }
            ControlExpr::Star(inner) | ControlExpr::Group(inner) => inner.collect_symbols(out),
        }
    }

    /// Number of syntactic `*` occurrences.
    pub fn star_count(&self) -> usize {
        match self {
            ControlExpr::Symbol(_) => 0,
            ControlExpr::Concat(items) | ControlExpr::Union(items) => {
                items.iter().map(ControlExpr::star_count).sum()
            }
            ControlExpr::Star(inner) => 1 + inner.star_count(),
            ControlExpr::Group(inner) => inner.star_count(),
        }
    }

    /// Word membership, by simulating the compiled NFA.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        ControlNfa::compile(self).accepts(word)
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, in_star: bool) -> fmt::Result {
        let needs_parens = match self {
            ControlExpr::Union(items) => items.len() > 1,
            ControlExpr::Concat(items) => in_star && items.len() > 1,
            ControlExpr::Star(_) => false,
            _ => false,
        };
        if needs_parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for ControlExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControlExpr::Symbol(s) => f.write_str(s),
            ControlExpr::Concat(items) => items.iter().try_for_each(|i| i.fmt_operand(f, false)),
            ControlExpr::Union(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    write!(f, "{item}")?;
                }
                Ok(())
            }
            ControlExpr::Star(inner) => {
                inner.fmt_operand(f, true)?;
                f.write_str("*")
            }
            ControlExpr::Group(inner) => write!(f, "({inner})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trips_parsed_text() {
        for text in [
            "p1p2*p3",
            "p1*p2",
            "p1(p5p6(p7p8*p9)*p3*p4)*p2p3*p4",
            "(p1|p2)*p3",
            "p1|p2p3",
        ] {
            let expr = parse_control(text).unwrap();
            assert_eq!(expr.to_string(), text);
            assert_eq!(parse_control(&expr.to_string()).unwrap(), expr);
        }
    }

    #[test]
    fn display_adds_needed_parens() {
        let e = ControlExpr::star(ControlExpr::Concat(vec![
            ControlExpr::symbol("a1"),
            ControlExpr::symbol("b1"),
        ]));
        assert_eq!(e.to_string(), "(a1b1)*");
    }

    #[test]
    fn symbols_and_stars() {
        let e = parse_control("p1(p5p6(p7p8*p9)*p3*p4)*p2p3*p4").unwrap();
        assert_eq!(e.star_count(), 5);
        assert_eq!(e.symbols().len(), 9);
    }
}
