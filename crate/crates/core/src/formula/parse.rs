use std::fmt;

use super::{Formula, VarIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    ZeroIndex,
    LeadingZero,
    IndexOverflow,
}

/// Syntax error located at a byte offset of the input.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => {
                write!(f, "unexpected {c:?} at byte {}", self.offset)
            }
            ParseErrorKind::UnexpectedEnd => {
                write!(f, "unexpected end of input at byte {}", self.offset)
            }
            ParseErrorKind::ZeroIndex => write!(f, "variable index 0 at byte {}", self.offset),
            ParseErrorKind::LeadingZero => {
                write!(
                    f,
                    "variable index with leading zero at byte {}",
                    self.offset
                )
            }
            ParseErrorKind::IndexOverflow => {
                write!(f, "variable index too large at byte {}", self.offset)
            }
        }
    }
}

/// Parses one formula. Besides the `formula` nonterminal, the top level also
/// accepts a single bare `formula op formula`, the shape produced by
/// [`combine_or`](super::combine_or) and [`combine_and`](super::combine_and).
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let first = p.formula()?;
    let Some(op) = p.peek() else {
        return Ok(first);
    };
    let combined = match op {
        b'&' | b'|' => {
            p.pos += 1;
            let second = p.formula()?;
            if op == b'&' {
                Formula::And(Box::new(first), Box::new(second))
            } else {
                Formula::Or(Box::new(first), Box::new(second))
            }
        }
        _ => return Err(p.unexpected()),
    };
    match p.peek() {
        None => Ok(combined),
        Some(_) => Err(p.unexpected()),
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParseError {
        let kind = match self.peek() {
            None => ParseErrorKind::UnexpectedEnd,
            Some(_) => {
                // report the full (possibly multi-byte) character
                let rest = std::str::from_utf8(&self.bytes[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or(char::REPLACEMENT_CHARACTER);
                ParseErrorKind::UnexpectedChar(rest)
            }
        };
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(Formula::Const(false))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Formula::Const(true))
            }
            Some(b'x') => {
                self.pos += 1;
                self.index().map(Formula::Var)
            }
            Some(b'!') => {
                self.pos += 1;
                Ok(Formula::Not(Box::new(self.formula()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let left = self.formula()?;
                let inner = match self.peek() {
                    Some(b')') => left,
                    Some(op @ (b'&' | b'|')) => {
                        self.pos += 1;
                        let right = self.formula()?;
                        if op == b'&' {
                            Formula::And(Box::new(left), Box::new(right))
                        } else {
                            Formula::Or(Box::new(left), Box::new(right))
                        }
                    }
                    _ => return Err(self.unexpected()),
                };
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(Formula::Paren(Box::new(inner)))
            }
            _ => Err(self.unexpected()),
        }
    }

    fn index(&mut self) -> Result<VarIndex, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(b'0') => {
                let kind = match self.bytes.get(start + 1) {
                    Some(b'0'..=b'9') => ParseErrorKind::LeadingZero,
                    _ => ParseErrorKind::ZeroIndex,
                };
                return Err(ParseError {
                    offset: start,
                    kind,
                });
            }
            Some(b'1'..=b'9') => {}
            _ => return Err(self.unexpected()),
        }
        let mut value: VarIndex = 0;
        while let Some(d @ b'0'..=b'9') = self.peek() {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(VarIndex::from(d - b'0')))
                .ok_or(ParseError {
                    offset: start,
                    kind: ParseErrorKind::IndexOverflow,
                })?;
            self.pos += 1;
        }
        Ok(value)
    }
}
