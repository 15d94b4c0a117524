//! S-expression reader with source locations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    Symbol(String),
    Keyword(String),
    Numeral(BigInt),
    Decimal(BigRational),
    Str(String),
    /// `#x..` / `#b..` literals, kept as written.
    Other(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SExprKind {
    Atom(Atom),
    List(Vec<SExpr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SExpr {
    pub kind: SExprKind,
    pub line: usize,
    pub col: usize,
    /// Byte range in the source text.
    pub start: usize,
    pub end: usize,
}

impl SExpr {
    pub fn as_symbol(&self) -> Option<&str> {
        match &self.kind {
            SExprKind::Atom(Atom::Symbol(s)) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match &self.kind {
            SExprKind::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    pub fn sort_error(&self, message: impl Into<String>) -> Error {
        Error::Sort {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }
}

struct Reader<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

/// Reads every top-level s-expression of `text`.
pub fn read_all(text: &str) -> Result<Vec<SExpr>> {
    let mut reader = Reader {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        reader.skip_trivia();
        if reader.pos >= reader.bytes.len() {
            return Ok(out);
        }
        out.push(reader.read()?);
    }
}

fn is_symbol_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b"~!@$%^&*_-+=<>.?/".contains(&b)
}

impl Reader<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) {
        if let Some(b) = self.peek() {
            self.pos += 1;
            if b == b'\n' {
                self.line += 1;
                self.col = 1;
            } else if b & 0xC0 != 0x80 {
                // count characters, not UTF-8 continuation bytes
                self.col += 1;
            }
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                self.bump();
            } else if b == b';' {
                while let Some(b) = self.peek() {
                    if b == b'\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<SExpr> {
        let (line, col, start) = (self.line, self.col, self.pos);
        let b = self
            .peek()
            .ok_or_else(|| self.err("unexpected end of input"))?;
        let kind = match b {
            b'(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => {
                            return Err(Error::Parse {
                                line,
                                col,
                                message: "unclosed parenthesis".into(),
                            })
                        }
                        Some(b')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
                SExprKind::List(items)
            }
            b')' => return Err(self.err("unexpected `)`")),
            b'"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.peek() {
                        None => return Err(self.err("unterminated string literal")),
                        Some(b'"') => {
                            self.bump();
                            if self.peek() == Some(b'"') {
                                s.push('"');
                                self.bump();
                            } else {
                                break;
                            }
                        }
                        Some(_) => {
                            let c_start = self.pos;
                            self.bump();
                            while self.peek().is_some_and(|b| b & 0xC0 == 0x80) {
                                self.bump();
                            }
                            s.push_str(&self.text[c_start..self.pos]);
                        }
                    }
                }
                SExprKind::Atom(Atom::Str(s))
            }
            b'|' => {
                self.bump();
                loop {
                    match self.peek() {
                        None => return Err(self.err("unterminated quoted symbol")),
                        Some(b'|') => {
                            self.bump();
                            break;
                        }
                        Some(b'\\') => return Err(self.err("backslash in quoted symbol")),
                        Some(_) => self.bump(),
                    }
                }
                SExprKind::Atom(Atom::Symbol(self.text[start..self.pos].to_string()))
            }
            b':' => {
                self.bump();
                while self.peek().is_some_and(is_symbol_char) {
                    self.bump();
                }
                SExprKind::Atom(Atom::Keyword(self.text[start..self.pos].to_string()))
            }
            b'#' => {
                self.bump();
                while self.peek().is_some_and(|b| b.is_ascii_alphanumeric()) {
                    self.bump();
                }
                SExprKind::Atom(Atom::Other(self.text[start..self.pos].to_string()))
            }
            b if b.is_ascii_digit() => {
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.bump();
                }
                let int_end = self.pos;
                if self.peek() == Some(b'.') {
                    self.bump();
                    let frac_start = self.pos;
                    while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                        self.bump();
                    }
                    if frac_start == self.pos {
                        return Err(self.err("decimal literal without fractional digits"));
                    }
                    let int_part = BigInt::from_str_radix(&self.text[start..int_end], 10).unwrap();
                    let frac = &self.text[frac_start..self.pos];
                    let frac_num = BigInt::from_str_radix(frac, 10).unwrap();
                    let denom = num_traits::pow(BigInt::from(10u8), frac.len());
                    let value =
                        BigRational::from_integer(int_part) + BigRational::new(frac_num, denom);
                    SExprKind::Atom(Atom::Decimal(value))
                } else {
                    let digits = &self.text[start..int_end];
                    if digits.len() > 1 && digits.starts_with('0') {
                        return Err(self.err("numeral with leading zero"));
                    }
                    SExprKind::Atom(Atom::Numeral(
                        BigInt::from_str_radix(digits, 10).unwrap_or_else(|_| BigInt::zero()),
                    ))
                }
            }
            b if is_symbol_char(b) => {
                while self.peek().is_some_and(is_symbol_char) {
                    self.bump();
                }
                SExprKind::Atom(Atom::Symbol(self.text[start..self.pos].to_string()))
            }
            _ => {
                let c = self.text[self.pos..].chars().next().unwrap_or('?');
                return Err(self.err(format!("unexpected character `{c}`")));
            }
        };
        Ok(SExpr {
            kind,
            line,
            col,
            start,
            end: self.pos,
        })
    }
}
