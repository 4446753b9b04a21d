//! Concrete syntax: a lexer and parser for the surface grammar, and the
//! pretty-printer behind [`Term`]'s `Display`.
//!
//! ```text
//! term  ::= atom+                      (application, left-associative)
//! atom  ::= ident                      (variable)
//!         | '^' ident                  (matchable)
//!         | '\' '[' binders ']' term '.' term
//!         | '(' term ')'
//! binders ::= (ident (',' ident)*)?    (may be empty)
//! ```
//!
//! An abstraction body extends as far right as possible, so
//! `\[x] ^x . x y` has body `x y`. Printing inverts parsing: for every
//! term `t`, parsing `t.to_string()` yields `t` again, character for
//! character.

use std::fmt;

use thiserror::Error;

use crate::term::Term;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Ident(String),
    Backslash,
    Caret,
    Dot,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "`{s}`"),
            TokenKind::Backslash => f.write_str("`\\`"),
            TokenKind::Caret => f.write_str("`^`"),
            TokenKind::Dot => f.write_str("`.`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::LBracket => f.write_str("`[`"),
            TokenKind::RBracket => f.write_str("`]`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub(crate) kind: TokenKind,
    pub(crate) line: usize,
    pub(crate) column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn lex(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    let mut line = 1;
    let mut column = 1;
    while let Some(&c) = chars.peek() {
        let (tok_line, tok_column) = (line, column);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        let kind = match c {
            '\\' => {
                advance(&mut chars);
                TokenKind::Backslash
            }
            '^' => {
                advance(&mut chars);
                TokenKind::Caret
            }
            '.' => {
                advance(&mut chars);
                TokenKind::Dot
            }
            ',' => {
                advance(&mut chars);
                TokenKind::Comma
            }
            '[' => {
                advance(&mut chars);
                TokenKind::LBracket
            }
            ']' => {
                advance(&mut chars);
                TokenKind::RBracket
            }
            '(' => {
                advance(&mut chars);
                TokenKind::LParen
            }
            ')' => {
                advance(&mut chars);
                TokenKind::RParen
            }
            c if is_ident_start(c) => {
                let mut name = String::new();
                name.push(advance(&mut chars));
                while chars.peek().is_some_and(|&c| is_ident_continue(c)) {
                    name.push(advance(&mut chars));
                }
                TokenKind::Ident(name)
            }
            other => {
                return Err(ParseError::new(
                    tok_line,
                    tok_column,
                    format!("unexpected character `{other}`"),
                ));
            }
        };
        tokens.push(Token {
            kind,
            line: tok_line,
            column: tok_column,
        });
    }
    Ok(tokens)
}

pub(crate) struct Cursor {
    tokens: Vec<Token>,
    index: usize,
    end_line: usize,
    end_column: usize,
}

impl Cursor {
    pub(crate) fn new(input: &str) -> Result<Self, ParseError> {
        let tokens = lex(input)?;
        let (end_line, end_column) = input.chars().fold((1, 1), |(l, c), ch| {
            if ch == '\n' {
                (l + 1, 1)
            } else {
                (l, c + 1)
            }
        });
        Ok(Cursor {
            tokens,
            index: 0,
            end_line,
            end_column,
        })
    }

    pub(crate) fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index)
    }

    pub(crate) fn next(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.index).cloned();
        if tok.is_some() {
            self.index += 1;
        }
        tok
    }

    pub(crate) fn here(&self) -> (usize, usize) {
        self.peek()
            .map_or((self.end_line, self.end_column), |t| (t.line, t.column))
    }

    pub(crate) fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.here();
        ParseError::new(line, column, message)
    }

    pub(crate) fn expect(&mut self, kind: &TokenKind) -> Result<Token, ParseError> {
        match self.peek() {
            Some(t) if &t.kind == kind => Ok(self.next().expect("peeked")),
            Some(t) => Err(ParseError::new(
                t.line,
                t.column,
                format!("expected {kind}, found {}", t.kind),
            )),
            None => Err(self.error_here(format!("expected {kind}, found end of input"))),
        }
    }

    pub(crate) fn expect_ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(_),
                ..
            }) => {
                let Some(Token {
                    kind: TokenKind::Ident(name),
                    ..
                }) = self.next()
                else {
                    unreachable!("peeked an identifier");
                };
                Ok(name)
            }
            Some(t) => Err(ParseError::new(
                t.line,
                t.column,
                format!("expected {what}, found {}", t.kind),
            )),
            None => Err(self.error_here(format!("expected {what}, found end of input"))),
        }
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ParseError::new(
                t.line,
                t.column,
                format!("expected end of input, found {}", t.kind),
            )),
        }
    }
}

/// Parse a term in the surface grammar.
pub fn parse_term(input: &str) -> Result<Term, ParseError> {
    let mut cursor = Cursor::new(input)?;
    let term = parse_application(&mut cursor)?;
    cursor.expect_end()?;
    Ok(term)
}

fn starts_atom(kind: &TokenKind) -> bool {
    matches!(
        kind,
        TokenKind::Ident(_) | TokenKind::Caret | TokenKind::Backslash | TokenKind::LParen
    )
}

fn parse_application(cursor: &mut Cursor) -> Result<Term, ParseError> {
    let mut term = parse_atom(cursor)?;
    while cursor.peek().is_some_and(|t| starts_atom(&t.kind)) {
        let arg = parse_atom(cursor)?;
        term = Term::app(term, arg);
    }
    Ok(term)
}

fn parse_atom(cursor: &mut Cursor) -> Result<Term, ParseError> {
    let Some(token) = cursor.peek() else {
        return Err(cursor.error_here("expected a term, found end of input"));
    };
    match &token.kind {
        TokenKind::Ident(_) => {
            let name = cursor.expect_ident("a variable")?;
            Ok(Term::var(name))
        }
        TokenKind::Caret => {
            cursor.next();
            let name = cursor.expect_ident("a matchable name")?;
            Ok(Term::matchable(name))
        }
        TokenKind::LParen => {
            cursor.next();
            let term = parse_application(cursor)?;
            cursor.expect(&TokenKind::RParen)?;
            Ok(term)
        }
        TokenKind::Backslash => {
            cursor.next();
            cursor.expect(&TokenKind::LBracket)?;
            let mut binders = Vec::new();
            if !matches!(
                cursor.peek().map(|t| &t.kind),
                Some(TokenKind::RBracket)
            ) {
                binders.push(cursor.expect_ident("a binder name")?);
                while matches!(cursor.peek().map(|t| &t.kind), Some(TokenKind::Comma)) {
                    cursor.next();
                    binders.push(cursor.expect_ident("a binder name")?);
                }
            }
            cursor.expect(&TokenKind::RBracket)?;
            let pattern = parse_application(cursor)?;
            cursor.expect(&TokenKind::Dot)?;
            let body = parse_application(cursor)?;
            Ok(Term::abs(binders, pattern, body))
        }
        other => Err(ParseError::new(
            token.line,
            token.column,
            format!("expected a term, found {other}"),
        )),
    }
}

/// Where a subterm sits, for parenthesization.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Place {
    /// Top level or abstraction body: nothing needs parentheses.
    Open,
    /// Function position: abstractions need parentheses.
    Fun,
    /// Argument position: applications and abstractions need parentheses.
    Arg,
    /// Abstraction pattern: abstractions need parentheses (their body
    /// would swallow the dot).
    Pattern,
}

fn needs_parens(term: &Term, place: Place) -> bool {
    match term {
        Term::Var(_) | Term::Matchable(_) => false,
        Term::App(_, _) => place == Place::Arg,
        Term::Abs(_, _, _) => place != Place::Open,
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, term: &Term, place: Place) -> fmt::Result {
    if needs_parens(term, place) {
        f.write_str("(")?;
        write_term(f, term, Place::Open)?;
        return f.write_str(")");
    }
    match term {
        Term::Var(x) => f.write_str(x),
        Term::Matchable(x) => write!(f, "^{x}"),
        Term::App(fun, arg) => {
            write_term(f, fun, Place::Fun)?;
            f.write_str(" ")?;
            write_term(f, arg, Place::Arg)
        }
        Term::Abs(theta, pattern, body) => {
            f.write_str("\\[")?;
            for (i, name) in theta.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(name)?;
            }
            f.write_str("] ")?;
            write_term(f, pattern, Place::Pattern)?;
            f.write_str(" . ")?;
            write_term(f, body, Place::Open)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, Place::Open)
    }
}
