//! Recursive-descent parser for the metric language:
//!
//! ```text
//! metric := "dim" INT ";" entry+
//! entry  := "h[" INT "," INT "]" "=" expr ";"
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := "-" factor | base ("^" SIGNED_INT)?
//! base   := NUMBER | "i" | "z" INT | "zb" INT | FUNC "(" expr ")" | "(" expr ")"
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use super::ast::{Expr, Func, Var};
use super::MetricDefinition;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("unknown function '{0}'")]
    UnknownFunction(String),
    #[error("variable index {index} out of range 1..{dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("exponent '{0}' is not an integer")]
    NonIntegerExponent(String),
    #[error("exponent must be nonzero")]
    ZeroExponent,
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("entry h[{0},{1}] defined twice")]
    DuplicateEntry(usize, usize),
    #[error("invalid number '{0}'")]
    InvalidNumber(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(String),
    Ident(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Number(s) => write!(f, "number '{s}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut bump = |i: &mut usize| {
            if chars[*i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            *i += 1;
        };
        if c.is_whitespace() {
            bump(&mut i);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                bump(&mut i);
            }
            continue;
        }
        let tok = if c.is_ascii_digit()
            || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                s.push(chars[i]);
                bump(&mut i);
            }
            // exponent part, only if followed by digits
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while i < j {
                        s.push(chars[i]);
                        bump(&mut i);
                    }
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        s.push(chars[i]);
                        bump(&mut i);
                    }
                }
            }
            Tok::Number(s)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                s.push(chars[i]);
                bump(&mut i);
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                bump(&mut i);
            }
            Tok::Ident(s)
        } else if "+-*/^()[],;=".contains(c) {
            bump(&mut i);
            Tok::Sym(c)
        } else {
            return Err(ParseError {
                kind: ParseErrorKind::UnexpectedChar(c),
                line: start_line,
                column: start_col,
            });
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    /// Upper bound on variable indices, when known.
    dim: Option<usize>,
}

impl Parser {
    fn new(src: &str, dim: Option<usize>) -> Result<Self, ParseError> {
        Ok(Self {
            toks: lex(src)?,
            pos: 0,
            dim,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            kind,
            line: t.line,
            column: t.column,
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.error_here(ParseErrorKind::Unexpected {
            expected: expected.to_string(),
            found: self.peek().to_string(),
        })
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    fn expect_int(&mut self) -> Result<usize, ParseError> {
        match self.peek().clone() {
            Tok::Number(s) => {
                let v = s
                    .parse::<usize>()
                    .map_err(|_| self.unexpected("an integer"))?;
                self.advance();
                Ok(v)
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Ident(name.to_string()) {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{name}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_sym('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_sym('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat_sym('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat_sym('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if !self.eat_sym('^') {
            return Ok(base);
        }
        let negative = if self.eat_sym('-') {
            true
        } else {
            self.eat_sym('+');
            false
        };
        let text = match self.peek().clone() {
            Tok::Number(s) => s,
            _ => return Err(self.unexpected("an integer exponent")),
        };
        let k: i32 = text
            .parse()
            .map_err(|_| self.error_here(ParseErrorKind::NonIntegerExponent(text.clone())))?;
        if k == 0 {
            return Err(self.error_here(ParseErrorKind::ZeroExponent));
        }
        self.advance();
        Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Number(s) => {
                let v: f64 = s
                    .parse()
                    .map_err(|_| self.error_here(ParseErrorKind::InvalidNumber(s.clone())))?;
                self.advance();
                Ok(Expr::real(v))
            }
            Tok::Sym('(') => {
                self.advance();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if name == "i" {
                    self.advance();
                    return Ok(Expr::Const(Complex64::new(0.0, 1.0)));
                }
                if let Some(var) = self.variable(&name)? {
                    self.advance();
                    return Ok(Expr::Var(var));
                }
                let is_call = matches!(
                    self.toks.get(self.pos + 1),
                    Some(Spanned {
                        tok: Tok::Sym('('),
                        ..
                    })
                );
                match Func::from_name(&name) {
                    Some(f) => {
                        self.advance();
                        self.expect_sym('(')?;
                        let arg = self.expr()?;
                        self.expect_sym(')')?;
                        Ok(Expr::Call(f, Box::new(arg)))
                    }
                    None if is_call => Err(self.error_here(ParseErrorKind::UnknownFunction(name))),
                    None => Err(self.error_here(ParseErrorKind::UnknownSymbol(name))),
                }
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    /// Recognizes `z<k>` / `zb<k>`.
    fn variable(&self, name: &str) -> Result<Option<Var>, ParseError> {
        let (conj, digits) = if let Some(d) = name.strip_prefix("zb") {
            (true, d)
        } else if let Some(d) = name.strip_prefix('z') {
            (false, d)
        } else {
            return Ok(None);
        };
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Ok(None);
        }
        let index: usize = digits
            .parse()
            .map_err(|_| self.error_here(ParseErrorKind::UnknownSymbol(name.to_string())))?;
        let dim = self.dim.unwrap_or(usize::MAX);
        if index == 0 || index > dim {
            return Err(self.error_here(ParseErrorKind::IndexOutOfRange {
                index,
                dim: self.dim.unwrap_or(0),
            }));
        }
        Ok(Some(Var {
            index: index - 1,
            conj,
        }))
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parses a single expression. Variable indices are checked against `dim`
/// when given.
pub fn parse_expr(src: &str, dim: Option<usize>) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src, dim)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses a full metric definition.
pub fn parse_metric(src: &str) -> Result<MetricDefinition, ParseError> {
    let mut p = Parser::new(src, None)?;
    p.expect_ident("dim")?;
    let dim_pos = p.pos;
    let n = p.expect_int()?;
    if n == 0 {
        p.pos = dim_pos;
        return Err(p.error_here(ParseErrorKind::InvalidDimension));
    }
    p.expect_sym(';')?;
    p.dim = Some(n);
    let mut given: Vec<Option<Expr>> = vec![None; n * n];
    loop {
        if *p.peek() == Tok::Eof && given.iter().any(Option::is_some) {
            break;
        }
        let entry_pos = p.pos;
        p.expect_ident("h")?;
        p.expect_sym('[')?;
        let index = |p: &mut Parser| -> Result<usize, ParseError> {
            let at = p.pos;
            let k = p.expect_int()?;
            if k == 0 || k > n {
                p.pos = at;
                return Err(p.error_here(ParseErrorKind::IndexOutOfRange { index: k, dim: n }));
            }
            Ok(k - 1)
        };
        let a = index(&mut p)?;
        p.expect_sym(',')?;
        let b = index(&mut p)?;
        p.expect_sym(']')?;
        p.expect_sym('=')?;
        let e = p.expr()?;
        p.expect_sym(';')?;
        if given[a * n + b].is_some() {
            p.pos = entry_pos;
            return Err(p.error_here(ParseErrorKind::DuplicateEntry(a + 1, b + 1)));
        }
        given[a * n + b] = Some(e);
    }
    Ok(MetricDefinition::from_partial(n, given))
}
