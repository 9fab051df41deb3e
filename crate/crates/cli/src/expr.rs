//! Expressions over a field with named variables.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' exp)?
//! exp   := ['-'] INT | '(' ['-'] INT ')'
//! atom  := INT | IDENT | '(' expr ')'
//! ```
//!
//! so `-t^2` is `-(t^2)` and `1/2*t` is `(1/2)*t`. Offsets in errors are byte
//! offsets into the input; the end of input is reported as its length.

use std::fmt;

use num_bigint::BigInt;
use quatval_core::fields::Field;
use thiserror::Error;

/// Exponents beyond this are rejected rather than computed.
pub const MAX_EXPONENT: i64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("undeclared variable '{name}' at offset {offset}")]
    UndeclaredVariable { name: String, offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    /// Evaluates with `lookup` resolving the variables the parser accepted.
    pub fn eval<K: Field>(&self, ctx: &K::Ctx, lookup: &dyn Fn(&str) -> K) -> Result<K, EvalError> {
        Ok(match self {
            Expr::Int(n) => K::from_bigint(ctx, n),
            Expr::Var(name) => lookup(name),
            Expr::Neg(e) => e.eval(ctx, lookup)?.neg(),
            Expr::Bin(op, l, r) => {
                let (l, r) = (l.eval(ctx, lookup)?, r.eval(ctx, lookup)?);
                match op {
                    BinOp::Add => l.add(&r),
                    BinOp::Sub => l.sub(&r),
                    BinOp::Mul => l.mul(&r),
                    BinOp::Div => l.mul(&r.try_inv().map_err(|_| EvalError::DivisionByZero)?),
                }
            }
            Expr::Pow(base, e) => {
                let b = base.eval(ctx, lookup)?;
                if *e < 0 && b.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                b.pow(*e)
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(_) | Expr::Var(_) => 5,
        }
    }
}

/// Fully determined printing: parenthesizes wherever reparsing could regroup.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                wrap(f, e, 3)
            }
            Expr::Bin(op, l, r) => {
                let (sym, p) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                };
                wrap(f, l, p)?;
                write!(f, " {sym} ")?;
                // left associative: an equal-precedence right operand needs parentheses
                wrap(f, r, p + 1)
            }
            Expr::Pow(b, e) => {
                wrap(f, b, 5)?;
                if *e < 0 {
                    write!(f, "^({e})")
                } else {
                    write!(f, "^{e}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            out.push((Tok::Int(text[i..end].parse().expect("digits")), i));
        } else if c.is_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '\'') {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            out.push((Tok::Ident(text[i..end].to_string()), i));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), i));
            chars.next();
        } else {
            return Err(syntax(i, format!("unexpected character '{c}'")));
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { offset, message: message.into() }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let negative = self.eat('-');
        let at = self.offset();
        let Tok::Int(n) = self.peek().clone() else {
            return Err(syntax(at, "expected an integer exponent"));
        };
        self.pos += 1;
        if paren {
            self.expect(')')?;
        }
        let e = i64::try_from(n).ok().filter(|e| *e <= MAX_EXPONENT);
        let e = e.ok_or_else(|| syntax(at, format!("exponent exceeds {MAX_EXPONENT}")))?;
        Ok(Expr::Pow(Box::new(base), if negative { -e } else { e }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Tok::Ident(name) => {
                if !self.vars.contains(&name.as_str()) {
                    return Err(ParseError::UndeclaredVariable { name, offset: at });
                }
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym(c) => Err(syntax(at, format!("unexpected '{c}'"))),
            Tok::End => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses `text` with `vars` as the declared variable names.
pub fn parse(text: &str, vars: &[&str]) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, vars };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}
