use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{BinOp, Constant, Expr, Func, Var};
use crate::error::{Error, Result};
use crate::numerics::Jet2;

/// Scalars an expression can be evaluated on.
trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lit(v: f64) -> Self;
    fn value(&self) -> f64;
    fn is_const(&self) -> bool;
    fn finite(&self) -> bool;
    fn apply(self, f: Func) -> Self;
    fn powf(self, p: f64) -> Self;
    fn pow(self, e: Self) -> Self;
}

impl Scalar for f64 {
    fn lit(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn is_const(&self) -> bool {
        true
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn apply(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Tan => self.tan(),
            Func::Atan => self.atan(),
            Func::Asin => self.asin(),
            Func::Acos => self.acos(),
            Func::Exp => self.exp(),
            Func::Ln => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
            Func::Tanh => self.tanh(),
            Func::Abs => self.abs(),
        }
    }
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
    fn pow(self, e: Self) -> Self {
        f64::powf(self, e)
    }
}

impl Scalar for Jet2 {
    fn lit(v: f64) -> Self {
        Jet2::constant(v)
    }
    fn value(&self) -> f64 {
        self.val
    }
    fn is_const(&self) -> bool {
        self.is_constant()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn apply(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Tan => self.tan(),
            Func::Atan => self.atan(),
            Func::Asin => self.asin(),
            Func::Acos => self.acos(),
            Func::Exp => self.exp(),
            Func::Ln => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
            Func::Tanh => self.tanh(),
            Func::Abs => self.abs(),
        }
    }
    fn powf(self, p: f64) -> Self {
        Jet2::powf(self, p)
    }
    fn pow(self, e: Self) -> Self {
        Jet2::pow(self, e)
    }
}

fn domain(func: &str, arg: f64) -> Error {
    Error::Domain {
        func: func.to_string(),
        arg,
    }
}

fn check_arg<S: Scalar>(f: Func, a: &S) -> Result<()> {
    let v = a.value();
    let ok = match f {
        Func::Ln => v > 0.0,
        Func::Sqrt => v > 0.0 || (v == 0.0 && a.is_const()),
        Func::Asin | Func::Acos => v.abs() < 1.0 || (v.abs() == 1.0 && a.is_const()),
        Func::Tan => v.cos() != 0.0,
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(domain(f.name(), v))
    }
}

fn eval_generic<S: Scalar>(e: &Expr, x: S, y: S) -> Result<S> {
    let out = match e {
        Expr::Num(v) => S::lit(*v),
        Expr::Var(Var::X) => x,
        Expr::Var(Var::Y) => y,
        Expr::Const(Constant::Pi) => S::lit(std::f64::consts::PI),
        Expr::Const(Constant::E) => S::lit(std::f64::consts::E),
        Expr::Neg(a) => -eval_generic(a, x, y)?,
        Expr::Call(f, a) => {
            let a = eval_generic(a, x, y)?;
            check_arg(*f, &a)?;
            let r = a.apply(*f);
            if !r.finite() {
                return Err(domain(f.name(), a.value()));
            }
            r
        }
        Expr::Bin(op, a, b) => {
            let a = eval_generic(a, x, y)?;
            let b = eval_generic(b, x, y)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.value() == 0.0 {
                        return Err(domain("/", a.value()));
                    }
                    a / b
                }
                BinOp::Pow => {
                    let base = a.value();
                    let r = if b.is_const() {
                        let p = b.value();
                        if base < 0.0 && p.fract() != 0.0 {
                            return Err(domain("^", base));
                        }
                        a.powf(p)
                    } else {
                        if base <= 0.0 {
                            return Err(domain("^", base));
                        }
                        a.pow(b)
                    };
                    if !r.finite() {
                        return Err(domain("^", base));
                    }
                    r
                }
            }
        }
    };
    if !out.finite() {
        return Err(domain("expression", out.value()));
    }
    Ok(out)
}

impl Expr {
    /// Evaluates the expression on jets, propagating derivatives.
    pub fn eval_jet(&self, x: Jet2, y: Jet2) -> Result<Jet2> {
        eval_generic(self, x, y)
    }

    /// Plain evaluation at a point.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        eval_generic(self, x, y)
    }

    /// Value, first and second derivative of a one-variable expression in
    /// `var` at `t` (the other variable is held at zero).
    pub fn eval_1d(&self, var: Var, t: f64) -> Result<(f64, f64, f64)> {
        let j = match var {
            Var::X => self.eval_jet(Jet2::var_x(t), Jet2::constant(0.0))?,
            Var::Y => self.eval_jet(Jet2::constant(0.0), Jet2::var_x(t))?,
        };
        Ok((j.val, j.dx, j.dxx))
    }
}
