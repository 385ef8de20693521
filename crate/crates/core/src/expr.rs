//! A small expression language for nonlinearities `f(s, x)`.
//!
//! Grammar: literals, the variables `s` and `x`, `+ - * / ^` with the usual
//! precedence (`^` right-associative and binding tighter than unary minus),
//! parentheses, the functions `sin cos exp log sqrt abs pow`, and the
//! constant `pi`. Whitespace is insignificant. Errors carry a byte offset.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    S,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
    Pow,
}

impl Func {
    fn arity(self) -> usize {
        match self {
            Func::Pow => 2,
            _ => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Pow => "pow",
        }
    }
}

/// Abstract syntax tree of a parsed expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Ident(usize, usize), // byte range into the source
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // exponent part
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Parse {
                    offset: start,
                    detail: format!("invalid number literal `{text}`"),
                })?;
                toks.push((Tok::Num(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(start, i), start));
            }
            _ => {
                return Err(Error::Parse {
                    offset: i,
                    detail: format!("unexpected character `{}`", &src[i..i + 1]),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.lexer.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.lexer.toks.get(self.pos).copied();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_offset(&self) -> usize {
        self.lexer.src.len()
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        match self.next() {
            Some((t, _)) if t == tok => Ok(()),
            Some((_, o)) => Err(Error::Parse {
                offset: o,
                detail: format!("expected {what}"),
            }),
            None => Err(Error::Parse {
                offset: self.end_offset(),
                detail: format!("expected {what}, found end of input"),
            }),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_term()?;
        while let Some(&(tok, _)) = self.peek() {
            let op = match tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.next();
            let rhs = self.parse_term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_term(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_unary()?;
        while let Some(&(tok, _)) = self.peek() {
            let op = match tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.next();
            let rhs = self.parse_unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expr> {
        if let Some(&(Tok::Minus, _)) = self.peek() {
            self.next();
            let inner = self.parse_unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr> {
        let base = self.parse_atom()?;
        if let Some(&(Tok::Caret, _)) = self.peek() {
            self.next();
            // right-associative; the exponent may carry a unary minus
            let exp = self.parse_unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some((Tok::Num(v), _)) => Ok(Expr::Num(v)),
            Some((Tok::LParen, _)) => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some((Tok::Ident(a, b), offset)) => {
                let name = &self.lexer.src[a..b];
                match name {
                    "s" => Ok(Expr::Var(Var::S)),
                    "x" => Ok(Expr::Var(Var::X)),
                    "pi" => Ok(Expr::Pi),
                    "sin" | "cos" | "exp" | "log" | "sqrt" | "abs" | "pow" => {
                        let func = match name {
                            "sin" => Func::Sin,
                            "cos" => Func::Cos,
                            "exp" => Func::Exp,
                            "log" => Func::Log,
                            "sqrt" => Func::Sqrt,
                            "abs" => Func::Abs,
                            _ => Func::Pow,
                        };
                        self.expect(Tok::LParen, "`(` after function name")?;
                        let mut args = Vec::new();
                        args.push(self.parse_expr()?);
                        while let Some(&(Tok::Comma, _)) = self.peek() {
                            self.next();
                            args.push(self.parse_expr()?);
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        if args.len() != func.arity() {
                            return Err(Error::Parse {
                                offset,
                                detail: format!(
                                    "{} takes {} argument(s), got {}",
                                    func.name(),
                                    func.arity(),
                                    args.len()
                                ),
                            });
                        }
                        Ok(Expr::Call(func, args))
                    }
                    other => Err(Error::Parse {
                        offset,
                        detail: format!("unknown identifier `{other}`"),
                    }),
                }
            }
            Some((_, o)) => Err(Error::Parse {
                offset: o,
                detail: String::from("expected a value"),
            }),
            None => Err(Error::Parse {
                offset: self.end_offset(),
                detail: String::from("expected a value, found end of input"),
            }),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse(text: &str) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(Error::Parse {
            offset: 0,
            detail: String::from("empty expression"),
        });
    }
    let toks = lex(text)?;
    let mut parser = Parser {
        lexer: Lexer { src: text, toks },
        pos: 0,
    };
    let e = parser.parse_expr()?;
    if let Some(&(_, o)) = parser.peek() {
        return Err(Error::Parse {
            offset: o,
            detail: String::from("unexpected trailing input"),
        });
    }
    Ok(e)
}

/// Evaluates `e` at `(s, x)` in IEEE double precision.
///
/// Domain faults (division by zero, `log` of a nonpositive value, any
/// non-finite intermediate) are reported as errors, never as infinities.
pub fn eval(e: &Expr, s: f64, x: f64) -> Result<f64> {
    let fault = |detail: String| Error::Evaluation2 { s, x, detail };
    let v = match e {
        Expr::Num(v) => *v,
        Expr::Pi => core::f64::consts::PI,
        Expr::Var(Var::S) => s,
        Expr::Var(Var::X) => x,
        Expr::Neg(inner) => -eval(inner, s, x)?,
        Expr::Bin(op, lhs, rhs) => {
            let a = eval(lhs, s, x)?;
            let b = eval(rhs, s, x)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(fault(String::from("division by zero")));
                    }
                    a / b
                }
                BinOp::Pow => libm::pow(a, b),
            }
        }
        Expr::Call(func, args) => {
            let a = eval(&args[0], s, x)?;
            match func {
                Func::Sin => libm::sin(a),
                Func::Cos => libm::cos(a),
                Func::Exp => libm::exp(a),
                Func::Log => {
                    if a <= 0.0 {
                        return Err(fault(format!("log of nonpositive value {a}")));
                    }
                    libm::log(a)
                }
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(fault(format!("sqrt of negative value {a}")));
                    }
                    libm::sqrt(a)
                }
                Func::Abs => libm::fabs(a),
                Func::Pow => libm::pow(a, eval(&args[1], s, x)?),
            }
        }
    };
    if !v.is_finite() {
        return Err(fault(format!("non-finite value {v}")));
    }
    Ok(v)
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; re-parsing yields a structurally identical
    /// tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Pi => write!(f, "pi"),
            Expr::Var(Var::S) => write!(f, "s"),
            Expr::Var(Var::X) => write!(f, "x"),
            Expr::Neg(inner) => write!(f, "(-{inner})"),
            Expr::Bin(op, lhs, rhs) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({lhs}{sym}{rhs})")
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}
