//! Tokenizer shared by all the text formats.
//!
//! The formats are line-oriented but whitespace-insensitive; `#` starts a
//! comment running to end of line. Identifiers may contain the characters
//! substitution freshening introduces (`.`, `~`, `@`, `+`) plus `_` and `-`
//! is reserved for edge arrows. Every token carries its source position.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    /// Identifier or quoted string.
    Ident(String),
    /// Single punctuation character: `{ } ( ) ; : , /`.
    Punct(char),
    /// Edge arrow `-label->`, carrying the label.
    Arrow(String),
    /// Bare `->`, used by correspondence tables.
    MapsTo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, message: message.into() })
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '~' | '@' | '+')
}

pub fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let mut chars = line.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            let pos = Pos { line: lineno + 1, col: i + 1 };
            if c.is_whitespace() {
                chars.next();
            } else if c == '"' {
                chars.next();
                let mut s = String::new();
                let mut closed = false;
                for (_, c2) in chars.by_ref() {
                    if c2 == '"' {
                        closed = true;
                        break;
                    }
                    s.push(c2);
                }
                if !closed {
                    return err(pos, "unterminated string");
                }
                tokens.push(Token { kind: TokenKind::Ident(s), pos });
            } else if c == '-' {
                // Either a bare `->` or an edge arrow `-label->`.
                chars.next();
                if matches!(chars.peek(), Some(&(_, '>'))) {
                    chars.next();
                    tokens.push(Token { kind: TokenKind::MapsTo, pos });
                    continue;
                }
                let mut label = String::new();
                while let Some(&(_, c2)) = chars.peek() {
                    if is_ident_char(c2) {
                        label.push(c2);
                        chars.next();
                    } else {
                        break;
                    }
                }
                match (chars.next(), chars.next()) {
                    (Some((_, '-')), Some((_, '>'))) if !label.is_empty() => {
                        tokens.push(Token { kind: TokenKind::Arrow(label), pos });
                    }
                    _ => return err(pos, "malformed edge arrow; expected `-label->`"),
                }
            } else if is_ident_char(c) {
                let mut s = String::new();
                while let Some(&(_, c2)) = chars.peek() {
                    if is_ident_char(c2) {
                        s.push(c2);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token { kind: TokenKind::Ident(s), pos });
            } else if matches!(c, '{' | '}' | '(' | ')' | ';' | ':' | ',' | '/') {
                chars.next();
                tokens.push(Token { kind: TokenKind::Punct(c), pos });
            } else if c == '>' {
                // Bare `->` from correspondence tables: `a -> b`.
                return err(pos, "unexpected `>`");
            } else {
                return err(pos, format!("unexpected character `{c}`"));
            }
        }
    }
    Ok(tokens)
}

/// Token cursor with expectation helpers.
pub struct Cursor {
    tokens: Vec<Token>,
    at: usize,
}

impl Cursor {
    pub fn new(tokens: Vec<Token>) -> Self {
        Cursor { tokens, at: 0 }
    }

    pub fn eof_pos(&self) -> Pos {
        self.tokens.last().map(|t| t.pos).unwrap_or(Pos { line: 1, col: 1 })
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    pub fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    pub fn done(&self) -> bool {
        self.at >= self.tokens.len()
    }

    pub fn expect_ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.next() {
            Some(Token { kind: TokenKind::Ident(s), pos }) => Ok((s, pos)),
            Some(t) => err(t.pos, format!("expected identifier, found {:?}", t.kind)),
            None => err(self.eof_pos(), "expected identifier, found end of file"),
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<Pos, ParseError> {
        let (s, pos) = self.expect_ident()?;
        if s == kw {
            Ok(pos)
        } else {
            err(pos, format!("expected `{kw}`, found `{s}`"))
        }
    }

    pub fn expect_punct(&mut self, c: char) -> Result<Pos, ParseError> {
        match self.next() {
            Some(Token { kind: TokenKind::Punct(p), pos }) if p == c => Ok(pos),
            Some(t) => err(t.pos, format!("expected `{c}`, found {:?}", t.kind)),
            None => err(self.eof_pos(), format!("expected `{c}`, found end of file")),
        }
    }

    pub fn expect_arrow(&mut self) -> Result<(String, Pos), ParseError> {
        match self.next() {
            Some(Token { kind: TokenKind::Arrow(l), pos }) => Ok((l, pos)),
            Some(t) => err(t.pos, format!("expected edge arrow, found {:?}", t.kind)),
            None => err(self.eof_pos(), "expected edge arrow, found end of file"),
        }
    }

    pub fn expect_mapsto(&mut self) -> Result<Pos, ParseError> {
        match self.next() {
            Some(Token { kind: TokenKind::MapsTo, pos }) => Ok(pos),
            Some(t) => err(t.pos, format!("expected `->`, found {:?}", t.kind)),
            None => err(self.eof_pos(), "expected `->`, found end of file"),
        }
    }

    /// Consumes the token if it is the given keyword.
    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if let Some(Token { kind: TokenKind::Ident(s), .. }) = self.peek() {
            if s == kw {
                self.at += 1;
                return true;
            }
        }
        false
    }

    pub fn eat_punct(&mut self, c: char) -> bool {
        if let Some(Token { kind: TokenKind::Punct(p), .. }) = self.peek() {
            if *p == c {
                self.at += 1;
                return true;
            }
        }
        false
    }

    pub fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { kind: TokenKind::Ident(s), .. }) if s == kw)
    }
}

pub const FORMAT_HEADER: &str = "sgraft-format 1";

/// Consumes the `sgraft-format 1` header tokens, keeping source positions
/// absolute for later diagnostics.
pub fn expect_header(c: &mut Cursor) -> Result<(), ParseError> {
    let pos = c.expect_keyword("sgraft-format").map_err(|e| ParseError {
        pos: e.pos,
        message: format!("expected header `{FORMAT_HEADER}`"),
    })?;
    let (v, _) = c.expect_ident()?;
    if v != "1" {
        return err(pos, format!("unsupported format version `{v}`"));
    }
    Ok(())
}
