use thiserror::Error;

use super::ControlExpr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("control parse error at offset {offset}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Star,
    Bar,
    Open,
    Close,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            b'|' => {
                out.push((i, Tok::Bar));
                i += 1;
            }
            b'(' => {
                out.push((i, Tok::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::Close));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Name(text[start..i].to_string())));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: i,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn union(&mut self) -> Result<ControlExpr, ParseError> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            ControlExpr::Union(branches)
        })
    }

    fn concat(&mut self) -> Result<ControlExpr, ParseError> {
        let mut items = Vec::new();
        while matches!(
            self.peek(),
            Some(Tok::Name(_)) | Some(Tok::Open) | Some(Tok::Star)
        ) {
            items.push(self.postfix()?);
        }
        match items.len() {
            0 => match self.peek() {
                None => self.err("expected a production name"),
                Some(Tok::Close) => self.err("unbalanced ')'"),
                Some(_) => self.err("empty alternative"),
            },
            1 => Ok(items.pop().unwrap()),
            _ => Ok(ControlExpr::Concat(items)),
        }
    }

    fn postfix(&mut self) -> Result<ControlExpr, ParseError> {
        let mut atom = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            atom = ControlExpr::star(atom);
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<ControlExpr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Name(n)) => {
                self.pos += 1;
                Ok(ControlExpr::Symbol(n))
            }
            Some(Tok::Open) => {
                let open_at = self.offset();
                self.pos += 1;
                if self.peek() == Some(&Tok::Close) {
                    return self.err("empty group");
                }
                let inner = self.union()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(ParseError {
                        offset: open_at,
                        message: "unbalanced '('".into(),
                    });
                }
                self.pos += 1;
                Ok(ControlExpr::group(inner))
            }
            Some(Tok::Star) => self.err("dangling '*'"),
            _ => self.err("expected a production name"),
        }
    }
}

/// Parses control surface syntax such as `p1p2*p3`.
pub fn parse_control(text: &str) -> Result<ControlExpr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    if p.peek().is_none() {
        return p.err("empty control expression");
    }
    let expr = p.union()?;
    match p.peek() {
        None => Ok(expr),
        Some(Tok::Close) => p.err("unbalanced ')'"),
        Some(_) => p.err("unexpected token"),
    }
}
