//! Expression grammar for the command line.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2` is
//! `-(x^2)` and `x^-1` is `x^(-1)`. A literal such as `3/2` is one token;
//! there is no division operator.

use std::fmt;

use formalcalc_core::Rational;
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

/// Abstract syntax. Generators are normalized at parse time, so `log(x)`,
/// `l_1(x)` and `log(l_0(x))` all become `Gen(1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Param(String),
    Gen(i64),
    /// `y_i` of the Faa di Bruno alphabet.
    Y(u32),
    /// `x_j`, `j >= 1`.
    X(u32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    Expected { expected: &'static str, found: String },
    UnknownIdentifier(String),
    Reserved(String),
    BadNumber(String),
    BadIndex(String),
    BadArgument,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::Expected { expected, found } => write!(f, "expected {expected}, found {found}"),
            ParseErrorKind::UnknownIdentifier(name) => write!(f, "unknown identifier `{name}`"),
            ParseErrorKind::Reserved(name) => write!(f, "`{name}` is reserved and cannot appear here"),
            ParseErrorKind::BadNumber(s) => write!(f, "invalid number `{s}`"),
            ParseErrorKind::BadIndex(s) => write!(f, "invalid index in `{s}`"),
            ParseErrorKind::BadArgument => f.write_str("function argument must be `x` or another generator"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(q) => write!(f, "number `{q}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn error(self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            kind,
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let start = i;
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let tok = match c {
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '^' => {
                i += 1;
                Tok::Caret
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                Tok::Num(parse_literal(&text).ok_or_else(|| pos.error(ParseErrorKind::BadNumber(text)))?)
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                // `l_-2`: a negative subscript directly after `_`
                if chars[i - 1] == '_' && i + 1 < chars.len() && chars[i] == '-' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                Tok::Ident(chars[start..i].iter().collect())
            }
            other => return Err(pos.error(ParseErrorKind::UnexpectedChar(other))),
        };
        col += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

fn parse_literal(text: &str) -> Option<Rational> {
    let (n, d) = text.split_once('/').unwrap_or((text, "1"));
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    (!d.is_zero()).then(|| Rational::new(n, d))
}

/// Subscript of `prefix_<int>`, if `name` has that shape.
fn subscript<'a>(name: &'a str, prefix: &str) -> Option<&'a str> {
    let rest = name.strip_prefix(prefix)?.strip_prefix('_')?;
    let digits = rest.strip_prefix('-').unwrap_or(rest);
    (!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())).then_some(rest)
}

/// Generator index of a function name: `log`, `exp`, `l_n`.
fn function_index(name: &str) -> Option<Result<i64, ()>> {
    match name {
        "log" => Some(Ok(1)),
        "exp" => Some(Ok(-1)),
        _ => subscript(name, "l").map(|s| s.parse().map_err(|_| ())),
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.pos().error(ParseErrorKind::Expected {
                expected,
                found: self.peek().to_string(),
            }))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(q) => Ok(Expr::Num(q)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(name, pos),
            other => Err(pos.error(ParseErrorKind::Expected {
                expected: "an operand",
                found: other.to_string(),
            })),
        }
    }

    fn identifier(&mut self, name: String, pos: Pos) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::LParen {
            let n = match function_index(&name) {
                Some(Ok(n)) => n,
                Some(Err(())) => return Err(pos.error(ParseErrorKind::BadIndex(name))),
                None => return Err(pos.error(ParseErrorKind::UnknownIdentifier(name))),
            };
            self.bump();
            let arg_pos = self.pos();
            let arg = self.expr()?;
            self.expect(Tok::RParen, "`)`")?;
            // l_n(l_m(x)) = l_{n+m}(x)
            return match arg {
                Expr::Gen(m) => n
                    .checked_add(m)
                    .map(Expr::Gen)
                    .ok_or_else(|| pos.error(ParseErrorKind::BadIndex(name))),
                _ => Err(arg_pos.error(ParseErrorKind::BadArgument)),
            };
        }
        if function_index(&name).is_some() {
            return Err(self.pos().error(ParseErrorKind::Expected {
                expected: "`(`",
                found: self.peek().to_string(),
            }));
        }
        match name.as_str() {
            "x" => return Ok(Expr::Gen(0)),
            "y" => return Err(pos.error(ParseErrorKind::Reserved(name))),
            _ => {}
        }
        for (prefix, make) in [("y", Expr::Y as fn(u32) -> Expr), ("x", Expr::X)] {
            if let Some(idx) = subscript(&name, prefix) {
                return match idx.parse::<u32>() {
                    Ok(j) if prefix == "y" || j >= 1 => Ok(make(j)),
                    _ => Err(pos.error(ParseErrorKind::BadIndex(name))),
                };
            }
        }
        Ok(Expr::Param(name))
    }
}

pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.pos().error(ParseErrorKind::Expected {
            expected: "an operator or end of input",
            found: p.peek().to_string(),
        }));
    }
    Ok(e)
}

pub fn gen_source(n: i64) -> String {
    match n {
        0 => "x".to_owned(),
        1 => "log(x)".to_owned(),
        -1 => "exp(x)".to_owned(),
        n => format!("l_{n}(x)"),
    }
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(q) if q < &Rational::zero() => 3,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Num(q) => write!(f, "{q}"),
            Expr::Param(p) => f.write_str(p),
            Expr::Gen(n) => f.write_str(&gen_source(*n)),
            Expr::Y(i) => write!(f, "y_{i}"),
            Expr::X(j) => write!(f, "x_{j}"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.fmt_prec(f, 3)
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 2)
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" - ")?;
                b.fmt_prec(f, 2)
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str("*")?;
                b.fmt_prec(f, 3)
            }
            Expr::Pow(a, b) => {
                a.fmt_prec(f, 5)?;
                f.write_str("^")?;
                b.fmt_prec(f, 5)
            }
        }
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(n: i64) -> Box<Expr> {
        Box::new(Expr::Num(Rational::from_integer(n.into())))
    }

    #[test]
    fn sum_of_power_and_product() {
        let e = parse("x^r + 2*log(x)").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Pow(Box::new(Expr::Gen(0)), Box::new(Expr::Param("r".into())))),
                Box::new(Expr::Mul(num(2), Box::new(Expr::Gen(1)))),
            )
        );
    }

    #[test]
    fn affine_exponent_on_iterated_log() {
        let e = parse("l_2(x)^(r-1)").unwrap();
        let exp = Expr::Sub(Box::new(Expr::Param("r".into())), num(1));
        assert_eq!(e, Expr::Pow(Box::new(Expr::Gen(2)), Box::new(exp)));
    }

    #[test]
    fn doubled_caret_reports_column() {
        let err = parse("x^^2").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
        assert!(err.to_string().contains("expected an operand"), "{err}");
    }

    #[test]
    fn positions_track_lines() {
        let err = parse("x +\n  * 2").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
    }

    #[test]
    fn unknown_function() {
        let err = parse("sin(x)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("sin".into()));
        assert_eq!(err.column, 1);
    }

    #[test]
    fn generator_aliases_and_composition() {
        assert_eq!(parse("l_-2(x)").unwrap(), Expr::Gen(-2));
        assert_eq!(parse("exp(exp(x))").unwrap(), Expr::Gen(-2));
        assert_eq!(parse("log(exp(x))").unwrap(), Expr::Gen(0));
        assert_eq!(parse("l_0(x)").unwrap(), Expr::Gen(0));
        assert_eq!(parse("log(r)").unwrap_err().kind, ParseErrorKind::BadArgument);
    }

    #[test]
    fn fdb_letters() {
        assert_eq!(parse("y_0").unwrap(), Expr::Y(0));
        assert_eq!(parse("x_3").unwrap(), Expr::X(3));
        assert!(matches!(parse("x_0").unwrap_err().kind, ParseErrorKind::BadIndex(_)));
        assert!(matches!(parse("y").unwrap_err().kind, ParseErrorKind::Reserved(_)));
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("-x^2").unwrap(), Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Gen(0)), num(2)))));
        assert_eq!(parse("x^-1").unwrap(), Expr::Pow(Box::new(Expr::Gen(0)), Box::new(Expr::Neg(num(1)))));
        assert_eq!(
            parse("x^2^3").unwrap(),
            Expr::Pow(Box::new(Expr::Gen(0)), Box::new(Expr::Pow(num(2), num(3))))
        );
        assert_eq!(parse("3/2").unwrap(), Expr::Num(Rational::new(3.into(), 2.into())));
        assert!(matches!(parse("1/0").unwrap_err().kind, ParseErrorKind::BadNumber(_)));
    }

    #[test]
    fn printer_minimal_parentheses() {
        for src in ["x - (r - 1)", "-(x*r)", "(x + 1)^2", "x^(r - 1)", "a*-b", "(-x)^2", "x*(r*s)"] {
            let e = parse(src).unwrap();
            assert_eq!(e.to_string(), src);
        }
        // compound exponents are always parenthesized
        let e = parse("x^2^3").unwrap();
        assert_eq!(e.to_string(), "x^(2^3)");
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn trailing_tokens_rejected() {
        let err = parse("x)").unwrap_err();
        assert_eq!(err.column, 2);
        assert!(parse("(x").is_err());
        assert!(parse("").is_err());
        assert_eq!(parse("x $").unwrap_err().kind, ParseErrorKind::UnexpectedChar('$'));
    }
}
