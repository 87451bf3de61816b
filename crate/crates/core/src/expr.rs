//! A small function-call expression language for Boolean functions.
//!
//! ```text
//! expr  := var | const | "NOT(" expr ")" | op "(" expr ("," expr)+ ")"
//! op    := "AND" | "OR" | "XOR" | "MAJ"
//! var   := "x" digits        (index >= 1)
//! const := "0" | "1"
//! ```
//!
//! Keywords are case-sensitive ASCII; whitespace is allowed between tokens.

use std::fmt;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::function::{check_exact_arity, BooleanFunction, Evaluate};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(usize),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Xor(Vec<Expr>),
    /// Strict majority; always an odd number of children.
    Maj(Vec<Expr>),
    Const(bool),
}

impl Expr {
    /// Largest variable index referenced (0 for closed expressions).
    pub fn arity(&self) -> usize {
        match self {
            Expr::Var(i) => *i,
            Expr::Const(_) => 0,
            Expr::Not(e) => e.arity(),
            Expr::And(es) | Expr::Or(es) | Expr::Xor(es) | Expr::Maj(es) => {
                es.iter().map(Expr::arity).max().unwrap_or(0)
            }
        }
    }

    /// `true` when the expression uses neither NOT nor XOR.
    pub fn is_monotone_fragment(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Const(_) => true,
            Expr::Not(_) | Expr::Xor(_) => false,
            Expr::And(es) | Expr::Or(es) | Expr::Maj(es) => {
                es.iter().all(Expr::is_monotone_fragment)
            }
        }
    }

    /// Evaluates on a configuration of arity at least `self.arity()`.
    pub fn eval(&self, omega: &Configuration) -> Result<bool> {
        if omega.arity() < self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: omega.arity(),
            });
        }
        Ok(self.eval_unchecked(omega))
    }

    fn eval_unchecked(&self, omega: &Configuration) -> bool {
        match self {
            Expr::Var(i) => omega.bit(i - 1),
            Expr::Const(b) => *b,
            Expr::Not(e) => !e.eval_unchecked(omega),
            Expr::And(es) => es.iter().all(|e| e.eval_unchecked(omega)),
            Expr::Or(es) => es.iter().any(|e| e.eval_unchecked(omega)),
            Expr::Xor(es) => es
                .iter()
                .fold(false, |acc, e| acc ^ e.eval_unchecked(omega)),
            Expr::Maj(es) => {
                let ones = es.iter().filter(|e| e.eval_unchecked(omega)).count();
                2 * ones > es.len()
            }
        }
    }

    /// Truth table over `n >= self.arity()` coordinates; extra coordinates
    /// are irrelevant.
    pub fn compile(&self, n: usize) -> Result<BooleanFunction> {
        check_exact_arity(n)?;
        BooleanFunction::tabulate(&self.bind(n)?)
    }

    /// Fixes the arity, producing an evaluator usable at any `n`.
    pub fn bind(&self, n: usize) -> Result<BoundExpr> {
        if n < self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: n,
            });
        }
        if n == 0 {
            return Err(Error::InvalidParameter("arity must be at least 1".into()));
        }
        Ok(BoundExpr {
            expr: self.clone(),
            n,
        })
    }
}

/// An expression with a fixed arity.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundExpr {
    expr: Expr,
    n: usize,
}

impl BoundExpr {
    pub fn expr(&self) -> &Expr {
        &self.expr
    }
}

impl Evaluate for BoundExpr {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, omega: &Configuration) -> bool {
        self.expr.eval_unchecked(omega)
    }

    fn origin(&self) -> String {
        format!("expr:{}", self.expr)
    }
}

fn write_call(f: &mut fmt::Formatter<'_>, name: &str, es: &[Expr]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (k, e) in es.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{e}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Const(b) => write!(f, "{}", u8::from(*b)),
            Expr::Not(e) => write!(f, "NOT({e})"),
            Expr::And(es) => write_call(f, "AND", es),
            Expr::Or(es) => write_call(f, "OR", es),
            Expr::Xor(es) => write_call(f, "XOR", es),
            Expr::Maj(es) => write_call(f, "MAJ", es),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Parses an expression; errors carry the byte offset of the problem.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", byte as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(Expr::Const(false))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Expr::Const(true))
            }
            Some(b'x') => {
                self.pos += 1;
                let digits_start = self.pos;
                while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                    self.pos += 1;
                }
                if self.pos == digits_start {
                    return Err(self.error("expected digits after 'x'"));
                }
                let text =
                    std::str::from_utf8(&self.src[digits_start..self.pos]).expect("ascii digits");
                let index: usize = text.parse().map_err(|_| Error::Parse {
                    offset: digits_start,
                    message: "variable index too large".into(),
                })?;
                if index == 0 {
                    return Err(Error::Parse {
                        offset: start,
                        message: "variable indices start at x1".into(),
                    });
                }
                Ok(Expr::Var(index))
            }
            Some(b) if b.is_ascii_uppercase() => {
                while matches!(self.peek(), Some(b) if b.is_ascii_uppercase()) {
                    self.pos += 1;
                }
                let keyword = &self.src[start..self.pos];
                self.expect(b'(')?;
                let children = self.arguments()?;
                match keyword {
                    b"NOT" => {
                        if children.len() != 1 {
                            return Err(Error::Parse {
                                offset: start,
                                message: "NOT takes exactly one argument".into(),
                            });
                        }
                        Ok(Expr::Not(Box::new(children.into_iter().next().unwrap())))
                    }
                    b"AND" | b"OR" | b"XOR" | b"MAJ" => {
                        if children.len() < 2 {
                            return Err(Error::Parse {
                                offset: start,
                                message: "operators need at least two arguments".into(),
                            });
                        }
                        Ok(match keyword {
                            b"AND" => Expr::And(children),
                            b"OR" => Expr::Or(children),
                            b"XOR" => Expr::Xor(children),
                            _ => {
                                if children.len() % 2 == 0 {
                                    return Err(Error::Parse {
                                        offset: start,
                                        message: format!(
                                            "MAJ needs an odd number of arguments, got {}",
                                            children.len()
                                        ),
                                    });
                                }
                                Expr::Maj(children)
                            }
                        })
                    }
                    _ => Err(Error::Parse {
                        offset: start,
                        message: format!("unknown operator {:?}", String::from_utf8_lossy(keyword)),
                    }),
                }
            }
            Some(_) => Err(self.error("expected an expression")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    /// Comma-separated expressions up to and including the closing paren.
    fn arguments(&mut self) -> Result<Vec<Expr>> {
        let mut out = vec![self.expr()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    out.push(self.expr()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.error("expected ',' or ')'")),
            }
        }
    }
}
