//! Bundle expression mini-grammar:
//!
//! ```text
//! expr := O(d) | sum(expr, k) | dual(expr) | twist(expr, N)
//!       | syz(expr, w) | tensor(expr, expr) | opaque(name)
//! ```
//!
//! Whitespace-insensitive; `d`, `N` are integers, `k`, `w` non-negative.

use syzygy_core::error::{Error, Result};
use syzygy_core::sheaf::SheafExpr;

pub fn parse_expr(text: &str) -> Result<SheafExpr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        text,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.error("trailing input after the expression"));
    }
    Ok(e)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at position {} in `{}`",
            self.pos, self.text
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') || self.peek() == Some('+') {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.trim()
            .parse()
            .map_err(|_| self.error("expected an integer"))
    }

    fn uint(&mut self) -> Result<usize> {
        let v = self.int()?;
        usize::try_from(v).map_err(|_| self.error("expected a non-negative integer"))
    }

    fn expr(&mut self) -> Result<SheafExpr> {
        let name = self.ident();
        match name.as_str() {
            "O" => {
                self.expect('(')?;
                let d = self.int()?;
                self.expect(')')?;
                Ok(SheafExpr::o(d))
            }
            "sum" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(',')?;
                let k = self.uint()?;
                self.expect(')')?;
                Ok(SheafExpr::sum(e, k))
            }
            "dual" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(SheafExpr::dual(e))
            }
            "twist" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(',')?;
                let n = self.int()?;
                self.expect(')')?;
                Ok(SheafExpr::twist(e, n))
            }
            "syz" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(',')?;
                let w = self.uint()?;
                self.expect(')')?;
                Ok(SheafExpr::syz(e, w))
            }
            "tensor" => {
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                Ok(SheafExpr::Tensor(Box::new(a), Box::new(b)))
            }
            "opaque" => {
                self.expect('(')?;
                let name = self.ident();
                if name.is_empty() {
                    return Err(self.error("expected a bundle name"));
                }
                self.expect(')')?;
                Ok(SheafExpr::opaque(&name))
            }
            "" => Err(self.error("expected an expression")),
            other => Err(self.error(&format!(
                "unknown constructor `{other}` (expected O, sum, dual, twist, syz, tensor, opaque)"
            ))),
        }
    }
}
