//! Recursive-descent parser.
//!
//! ```text
//! expr  := term (('+'|'-') term)*
//! term  := unary (('*'|'/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative, so
//! `-x^2` is `-(x^2)` and `2^-x^2` is `2^(-(x^2))`.

use super::{BinOp, Constant, Expr, Func, Var};
use crate::error::{Error, ParseError, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

fn expected(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

impl<'a> Lexer<'a> {
    fn next_token(&mut self) -> Result<(Tok, usize)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(start) else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Tok::Op(c as char)
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' | b'.' => self.number(start)?,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < bytes.len()
                    && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Tok::Ident(self.src[start..self.pos].to_string())
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    expected: expected(&["number", "identifier", "operator", "`(`", "`)`"]),
                    found: format!("character `{ch}`"),
                }
                .into());
            }
        };
        Ok((tok, start))
    }

    fn number(&mut self, start: usize) -> Result<Tok> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            let s = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - s
        };
        let mut n = digits(&mut self.pos);
        if self.pos < bytes.len() && bytes[self.pos] == b'.' {
            self.pos += 1;
            n += digits(&mut self.pos);
        }
        if n == 0 {
            return Err(ParseError {
                offset: start,
                expected: expected(&["digit"]),
                found: "`.`".into(),
            }
            .into());
        }
        // Exponent only when followed by digits, so `2e` stays `2` then `e`.
        if self.pos < bytes.len() && (bytes[self.pos] == b'e' || bytes[self.pos] == b'E') {
            let mut p = self.pos + 1;
            if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
                p += 1;
            }
            if p < bytes.len() && bytes[p].is_ascii_digit() {
                self.pos = p;
                digits(&mut self.pos);
            }
        }
        let text = &self.src[start..self.pos];
        text.parse::<f64>().map(Tok::Num).map_err(|_| {
            ParseError {
                offset: start,
                expected: expected(&["number"]),
                found: format!("`{text}`"),
            }
            .into()
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, at) = lexer.next_token()?;
        Ok(Parser { lexer, tok, at })
    }

    fn bump(&mut self) -> Result<()> {
        let (tok, at) = self.lexer.next_token()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn fail<T>(&self, exp: &[&str]) -> Result<T> {
        Err(ParseError {
            offset: self.at,
            expected: expected(exp),
            found: self.tok.describe(),
        }
        .into())
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.tok == Tok::Op('-') {
            self.bump()?;
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.tok == Tok::Op('^') {
            self.bump()?;
            let exponent = self.unary()?;
            return Ok(Expr::bin(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn close_paren(&mut self) -> Result<()> {
        if self.tok != Tok::RParen {
            return self.fail(&["`)`"]);
        }
        self.bump()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                self.close_paren()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let offset = self.at;
                let simple = match name.as_str() {
                    "x" => Some(Expr::Var(Var::X)),
                    "y" => Some(Expr::Var(Var::Y)),
                    "pi" => Some(Expr::Const(Constant::Pi)),
                    "e" => Some(Expr::Const(Constant::E)),
                    _ => None,
                };
                if let Some(e) = simple {
                    self.bump()?;
                    return Ok(e);
                }
                let Some(func) = Func::from_name(&name) else {
                    return Err(Error::UnknownIdentifier { name, offset });
                };
                self.bump()?;
                if self.tok != Tok::LParen {
                    return self.fail(&["`(`"]);
                }
                self.bump()?;
                let arg = self.expr()?;
                self.close_paren()?;
                Ok(Expr::call(func, arg))
            }
            _ => self.fail(&["number", "identifier", "`(`", "`-`"]),
        }
    }
}

/// Parses an expression over `x` and `y`.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.fail(&["`+`", "`-`", "`*`", "`/`", "`^`", "end of input"]);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offset_of(src: &str) -> (usize, Vec<String>) {
        match parse(src) {
            Err(Error::Parse(p)) => (p.offset, p.expected),
            other => panic!("expected a syntax error for {src:?}, got {other:?}"),
        }
    }

    #[test]
    fn structure_of_angle_formula() {
        let e = parse("2*atan(exp(-x))").unwrap();
        let want = Expr::bin(
            BinOp::Mul,
            Expr::num(2.0),
            Expr::call(Func::Atan, Expr::call(Func::Exp, Expr::neg(Expr::x()))),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("x + y*x").unwrap(),
            Expr::bin(
                BinOp::Add,
                Expr::x(),
                Expr::bin(BinOp::Mul, Expr::y(), Expr::x())
            )
        );
        assert_eq!(
            parse("x - y - 1").unwrap(),
            Expr::bin(
                BinOp::Sub,
                Expr::bin(BinOp::Sub, Expr::x(), Expr::y()),
                Expr::num(1.0)
            )
        );
        assert_eq!(
            parse("x^y^2").unwrap(),
            Expr::bin(
                BinOp::Pow,
                Expr::x(),
                Expr::bin(BinOp::Pow, Expr::y(), Expr::num(2.0))
            )
        );
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::neg(Expr::bin(BinOp::Pow, Expr::x(), Expr::num(2.0)))
        );
        assert_eq!(parse(" x\t*\n2 ").unwrap(), parse("x*2").unwrap());
    }

    #[test]
    fn numbers() {
        assert_eq!(parse("1.5e-3").unwrap(), Expr::num(1.5e-3));
        assert_eq!(parse(".25").unwrap(), Expr::num(0.25));
        assert_eq!(parse("3.").unwrap(), Expr::num(3.0));
        assert_eq!(parse("2E+2").unwrap(), Expr::num(200.0));
    }

    #[test]
    fn unclosed_call() {
        let (off, exp) = offset_of("sin(x");
        assert_eq!(off, 5);
        assert_eq!(exp, vec!["`)`".to_string()]);
    }

    #[test]
    fn error_offsets() {
        assert_eq!(offset_of("").0, 0);
        assert_eq!(offset_of("x +").0, 3);
        assert_eq!(offset_of("x y").0, 2);
        assert_eq!(offset_of("(x").0, 2);
        assert_eq!(offset_of("sin x").0, 4);
        assert_eq!(offset_of("2 $ 3").0, 2);
        assert_eq!(offset_of("x * * y").0, 4);
        assert_eq!(offset_of("x)").0, 1);
        assert_eq!(offset_of("2e").0, 1);
    }

    #[test]
    fn unknown_identifier() {
        assert_eq!(
            parse("x + foo(1)"),
            Err(Error::UnknownIdentifier {
                name: "foo".into(),
                offset: 4
            })
        );
    }
}
