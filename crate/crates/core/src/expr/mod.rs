//! Arithmetic expressions over the chart variables `x` and `y`.
//!
//! Expressions are parsed from text (see [`parse`]) and evaluated either on
//! plain floats or on [`Jet2`](crate::numerics::Jet2) values, in which case
//! first and second partial derivatives come out exactly.

mod eval;
mod parser;

use std::fmt;
use std::str::FromStr;

pub use parser::parse;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Atan,
    Asin,
    Acos,
    Exp,
    Ln,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Abs,
}

impl Func {
    pub const ALL: [Func; 13] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Atan,
        Func::Asin,
        Func::Acos,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "atan",
            Func::Asin => "asin",
            Func::Acos => "acos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Const(Constant),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn x() -> Expr {
        Expr::Var(Var::X)
    }

    pub fn y() -> Expr {
        Expr::Var(Var::Y)
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    /// Whether `v` occurs anywhere in the tree.
    pub fn uses(&self, v: Var) -> bool {
        match self {
            Expr::Var(w) => *w == v,
            Expr::Num(_) | Expr::Const(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.uses(v),
            Expr::Bin(_, a, b) => a.uses(v) || b.uses(v),
        }
    }

    /// Rejects expressions mentioning a variable outside `allowed`.
    pub fn validate_vars(&self, allowed: &[Var]) -> Result<()> {
        for v in [Var::X, Var::Y] {
            if !allowed.contains(&v) && self.uses(v) {
                return Err(Error::UnexpectedVariable(v.name().to_string()));
            }
        }
        Ok(())
    }

    /// Substitutes `x -> var` and `y -> other`; used to read a
    /// one-variable profile written in `x` as a function of `y`.
    pub fn rename(&self, from: Var, to: Var) -> Expr {
        match self {
            Expr::Var(v) if *v == from => Expr::Var(to),
            Expr::Num(_) | Expr::Var(_) | Expr::Const(_) => self.clone(),
            Expr::Neg(a) => Expr::neg(a.rename(from, to)),
            Expr::Call(f, a) => Expr::call(*f, a.rename(from, to)),
            Expr::Bin(op, a, b) => Expr::bin(*op, a.rename(from, to), b.rename(from, to)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            Expr::Num(_) | Expr::Var(_) | Expr::Const(_) | Expr::Call(..) => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => {
                if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) {
                    write!(f, "({v:?})")
                } else {
                    write!(f, "{v:?}")
                }
            }
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Const(Constant::Pi) => f.write_str("pi"),
            Expr::Const(Constant::E) => f.write_str("e"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, a.precedence() < 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Bin(op, a, b) => {
                let p = self.precedence();
                match op {
                    BinOp::Pow => {
                        // Right-associative; the exponent may be a negation.
                        write_child(f, a, a.precedence() <= p)?;
                        f.write_str("^")?;
                        write_child(f, b, b.precedence() < 3)
                    }
                    _ => {
                        write_child(f, a, a.precedence() < p)?;
                        write!(f, " {} ", op.symbol())?;
                        write_child(f, b, b.precedence() <= p)
                    }
                }
            }
        }
    }
}

impl FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Expr> {
        parse(s)
    }
}
