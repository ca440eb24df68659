//! Loop-expression input syntax.
//!
//! ```text
//! program := expr [';' 'poles' ':' pole (',' pole)*]
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := atom ['^' ['-'] integer]
//! atom    := integer | identifier | '(' expr ')'
//! ```
//!
//! Identifiers are `q`, coefficient-ring generators (`y`, `p3`, ...),
//! algebra generators (`L`, `L1`, ...), `zeta<n>` for `exp(2πi/n)` and `i`.
//! A `poles:` clause lists the only pole locations the result may have.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{GradedPoly, Ring};
use crate::kring::Algebra;
use crate::loops::{Pole, RationalLoop};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let v = text.parse::<i64>().map_err(|_| Error::Parse {
                line: l0,
                column: c0,
                message: format!("integer `{text}` too large"),
            })?;
            out.push(Spanned {
                tok: Tok::Num(v),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                column: c0,
            });
            continue;
        }
        let sym = match c {
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | ';' | ':' | ',' => c,
            '−' => '-',
            '·' | '×' => '*',
            _ => {
                return Err(Error::Parse {
                    line: l0,
                    column: c0,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push(Spanned {
            tok: Tok::Sym(sym),
            line: l0,
            column: c0,
        });
        col += 1;
        i += 1;
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    alg: &'a Arc<Algebra>,
    ring: &'a Arc<Ring>,
}

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, at: &Spanned, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: at.line,
            column: at.column,
            message: message.into(),
        })
    }

    fn wrap<T>(&self, at: &Spanned, r: Result<T>) -> Result<T> {
        r.or_else(|e| match e {
            Error::Parse { .. } => Err(e),
            other => self.err(at, other.to_string()),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let t = self.peek().clone();
            self.err(&t, format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<RationalLoop> {
        let mut acc = self.term()?;
        loop {
            let at = self.peek().clone();
            if self.eat('+') {
                let rhs = self.term()?;
                acc = self.wrap(&at, acc.add(&rhs))?;
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = self.wrap(&at, acc.sub(&rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalLoop> {
        let mut acc = self.unary()?;
        loop {
            let at = self.peek().clone();
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = self.wrap(&at, acc.mul(&rhs))?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = self.wrap(&at, acc.div(&rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalLoop> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalLoop> {
        let base = self.atom()?;
        let at = self.peek().clone();
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let t = self.next();
        let Tok::Num(e) = t.tok else {
            return self.err(&t, "expected an integer exponent");
        };
        let e = u32::try_from(e).or_else(|_| self.err(&t, "exponent too large"))?;
        let b = if neg { self.wrap(&at, base.recip())? } else { base };
        self.wrap(&at, b.pow(e))
    }

    fn atom(&mut self) -> Result<RationalLoop> {
        let t = self.next();
        match &t.tok {
            Tok::Num(n) => Ok(RationalLoop::scalar(self.alg, &GradedPoly::from_int(self.ring, *n))),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Ident(name) => self.ident(&t, name),
            Tok::End => self.err(&t, "unexpected end of input"),
            Tok::Sym(c) => self.err(&t, format!("unexpected `{c}`")),
        }
    }

    fn ident(&self, at: &Spanned, name: &str) -> Result<RationalLoop> {
        if name == "q" {
            return Ok(RationalLoop::q(self.alg, self.ring));
        }
        if self.ring.index_of(name).is_some() {
            let g = GradedPoly::generator(self.ring, name)?;
            return Ok(RationalLoop::scalar(self.alg, &g));
        }
        if self.alg.generator_names().any(|g| g == name) {
            let e = self.alg.named(name, self.ring)?;
            return Ok(RationalLoop::constant(self.alg, e));
        }
        let root = if name == "i" {
            Some(Scalar::root_of_unity(4, 1))
        } else {
            name.strip_prefix("zeta")
                .and_then(|n| n.parse::<u32>().ok())
                .filter(|&n| n > 0)
                .map(|n| Scalar::root_of_unity(n, 1))
        };
        match root {
            Some(z) => Ok(RationalLoop::one(self.alg, self.ring).map_elements(|e| e.scale_scalar(&z))),
            None => self.err(at, format!("unknown symbol `{name}`")),
        }
    }

    fn pole(&mut self) -> Result<Pole> {
        let start = self.peek().clone();
        let mut text = String::new();
        while !matches!(self.peek().tok, Tok::End | Tok::Sym(',')) {
            match self.next().tok {
                Tok::Num(n) => text.push_str(&n.to_string()),
                Tok::Ident(s) => text.push_str(&s),
                Tok::Sym(c) => text.push(c),
                Tok::End => unreachable!(),
            }
        }
        Pole::parse(&text).or_else(|e| self.err(&start, e.to_string()))
    }
}

/// Parse and evaluate a loop expression over `alg ⊗ ring`.
pub fn parse_loop(src: &str, alg: &Arc<Algebra>, ring: &Arc<Ring>) -> Result<RationalLoop> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        alg,
        ring,
    };
    let value = p.expr()?;
    let mut declared: Option<Vec<Pole>> = None;
    if p.eat(';') {
        let t = p.next();
        if t.tok != Tok::Ident("poles".into()) {
            return p.err(&t, "expected `poles`");
        }
        p.expect(':')?;
        let mut list = vec![p.pole()?];
        while p.eat(',') {
            list.push(p.pole()?);
        }
        declared = Some(list);
    }
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.err(&t, "unexpected trailing input");
    }
    if let Some(list) = declared {
        for (z, _) in value.poles() {
            if !list.contains(z) {
                return Err(Error::UndeclaredPole(z.render()));
            }
        }
    }
    Ok(value)
}

/// Parse a scalar expression (no `q`, no algebra generators) into the ring.
pub fn parse_scalar(src: &str, ring: &Arc<Ring>) -> Result<GradedPoly> {
    let alg = Arc::new(Algebra::point());
    let v = parse_loop(src, &alg, ring)?;
    if !v.is_laurent() || v.laurent().keys().any(|&n| n != 0) {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "expected a constant".into(),
        });
    }
    Ok(v.laurent()
        .get(&0)
        .map(|e| e.coords()[0].clone())
        .unwrap_or_else(|| GradedPoly::zero(ring)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reports_positions() {
        let a = Arc::new(Algebra::point());
        let r = Ring::hirzebruch(4);
        let f = parse_loop("q/(1-q)", &a, &r).unwrap();
        let g = parse_loop("-1 + 1/(1 − q)", &a, &r).unwrap();
        assert_eq!(f, g);
        let h = parse_loop("(1-q)/(1-y*q)", &a, &r).unwrap();
        assert!(h.is_laurent());
        match parse_loop("1/(1-q)\n + w", &a, &r) {
            Err(Error::Parse { line: 2, column: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_loop("1/(1+q); poles: 1", &a, &r),
            Err(Error::UndeclaredPole(_))
        ));
        assert!(parse_loop("1/(1+q^2); poles: i, zeta4^3", &a, &r).is_ok());
    }
}
