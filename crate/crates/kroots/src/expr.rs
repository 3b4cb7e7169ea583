//! Text forms of k-roots and monomials.
//!
//! Roots are products of parenthesized binomials, `(x1-x4)(x2+x3)`, with
//! an optional leading minus; each term may carry its own sign, so
//! unnormalized inputs like `(-x4-x3)(x2-x1)` are accepted and brought to
//! normal form. Monomials are `*`-separated variables, `x1*x3*x4`.
//! Whitespace between tokens is ignored. Parse errors report a byte
//! offset.

use crate::error::Error;
use crate::kroot::{normalize, KRoot, RawFactor, Sign};
use crate::space::{MonomialIndex, SpaceParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Root {
        negated: bool,
        factors: Vec<RawFactor>,
    },
    Monomial(Vec<u32>),
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_space();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), Error> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::parse(
                self.pos,
                format!("expected {:?}", byte as char),
            )),
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn variable(&mut self) -> Result<u32, Error> {
        self.expect(b'x')?;
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::parse(start, "expected a variable index"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits are utf8");
        let value: u32 = text
            .parse()
            .map_err(|_| Error::parse(start, format!("index {text} out of range")))?;
        if value == 0 {
            return Err(Error::parse(start, "variable indices start at 1"));
        }
        Ok(value)
    }

    /// `['-'] 'x' INT`, returning (negated, index).
    fn term(&mut self) -> Result<(bool, u32), Error> {
        let neg = self.eat(b'-');
        let idx = self.variable()?;
        Ok((neg, idx))
    }

    fn factor(&mut self) -> Result<RawFactor, Error> {
        self.expect(b'(')?;
        let (neg_a, a) = self.term()?;
        let op_pos = self.pos;
        let neg_op = match self.peek() {
            Some(b'+') => false,
            Some(b'-') => true,
            _ => return Err(Error::parse(op_pos, "expected '+' or '-'")),
        };
        self.pos += 1;
        let (neg_b, b) = self.term()?;
        self.expect(b')')?;
        Ok(RawFactor {
            neg_a,
            a,
            neg_b: neg_op != neg_b,
            b,
        })
    }

    fn root(&mut self) -> Result<Expr, Error> {
        let negated = self.eat(b'-');
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(b'(') {
            factors.push(self.factor()?);
        }
        self.end()?;
        Ok(Expr::Root { negated, factors })
    }

    fn monomial(&mut self) -> Result<Expr, Error> {
        let mut indices = vec![self.variable()?];
        while self.eat(b'*') {
            indices.push(self.variable()?);
        }
        self.end()?;
        Ok(Expr::Monomial(indices))
    }

    fn end(&mut self) -> Result<(), Error> {
        self.skip_space();
        if self.pos != self.bytes.len() {
            return Err(Error::parse(self.pos, "unexpected trailing input"));
        }
        Ok(())
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, Error> {
    let mut s = Scanner::new(text);
    match s.peek() {
        Some(b'(') | Some(b'-') => s.root(),
        Some(b'x') => s.monomial(),
        _ => Err(Error::parse(
            s.pos,
            "expected a product of factors or a monomial",
        )),
    }
}

/// Parses and normalizes a k-root; the sign of the input is baked into the
/// returned root.
pub fn parse_kroot(text: &str, params: &SpaceParams) -> Result<KRoot, Error> {
    match parse_expr(text)? {
        Expr::Root { negated, factors } => {
            let (root, sign) = normalize(*params, &factors)?;
            let sign = if negated { sign.flip() } else { sign };
            Ok(match sign {
                Sign::Plus => root,
                Sign::Minus => root.negated(),
            })
        }
        Expr::Monomial(_) => Err(Error::parse(0, "expected a product of factors")),
    }
}

pub fn parse_monomial(text: &str, params: &SpaceParams) -> Result<MonomialIndex, Error> {
    match parse_expr(text)? {
        Expr::Monomial(mut indices) => {
            indices.sort_unstable();
            MonomialIndex::new(params, indices)
        }
        Expr::Root { .. } => Err(Error::parse(0, "expected a monomial")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kroot::enumerate_positive_roots;

    fn params(n: u32, k: u32) -> SpaceParams {
        SpaceParams::new(n, k).unwrap()
    }

    #[test]
    fn parses_a_normal_form_root() {
        let p = params(4, 2);
        let r = parse_kroot("(x1-x4)(x2+x3)", &p).unwrap();
        assert_eq!(r.to_string(), "(x1-x4)(x2+x3)");
        assert_eq!(r.sign(), crate::kroot::Sign::Plus);
    }

    #[test]
    fn normalizes_scrambled_input() {
        let p = params(4, 2);
        let r = parse_kroot("(-x4-x3)(x2-x1)", &p).unwrap();
        assert_eq!(r.to_string(), "(x1-x2)(x3+x4)");
        let neg = parse_kroot("(-x4-x3)(x1-x2)", &p).unwrap();
        assert_eq!(neg.to_string(), "-(x1-x2)(x3+x4)");
    }

    #[test]
    fn tolerates_whitespace() {
        let p = params(4, 2);
        let r = parse_kroot(" ( x1 - x4 ) ( x2 + x3 ) ", &p).unwrap();
        assert_eq!(r.to_string(), "(x1-x4)(x2+x3)");
        let m = parse_monomial(" x1 * x3 ", &p).unwrap();
        assert_eq!(m.to_string(), "x1*x3");
    }

    #[test]
    fn parses_monomials() {
        let p = params(4, 2);
        assert_eq!(parse_monomial("x1*x3", &p).unwrap().indices(), &[1, 3]);
        assert_eq!(parse_monomial("x3*x1", &p).unwrap().indices(), &[1, 3]);
        let p1 = params(4, 1);
        assert_eq!(parse_monomial("x2", &p1).unwrap().indices(), &[2]);
    }

    #[test]
    fn reports_offsets() {
        let p = params(4, 2);
        match parse_kroot("(x1+x2)(x3", &p) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 10),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match parse_expr("y1") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match parse_expr("(x1*x2)") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
        assert!(parse_expr("x0").is_err());
        assert!(parse_expr("").is_err());
        assert!(parse_expr("x1 x2").is_err());
    }

    #[test]
    fn rejects_wrong_shapes() {
        let p = params(4, 2);
        assert!(parse_kroot("x1*x2", &p).is_err());
        assert!(parse_monomial("(x1+x2)(x3+x4)", &p).is_err());
        // wrong factor count and repeated indices
        assert!(parse_kroot("(x1+x2)", &p).is_err());
        assert!(parse_kroot("(x1+x2)(x2+x3)", &p).is_err());
        assert!(parse_monomial("x1*x1", &p).is_err());
        assert!(parse_monomial("x9", &params(4, 1)).is_err());
    }

    #[test]
    fn display_roundtrips() {
        let p = params(4, 2);
        for r in enumerate_positive_roots(&p) {
            assert_eq!(parse_kroot(&r.to_string(), &p).unwrap(), r);
            let neg = r.negated();
            assert_eq!(parse_kroot(&neg.to_string(), &p).unwrap(), neg);
        }
        for m in crate::space::enumerate_monomials(&p) {
            assert_eq!(parse_monomial(&m.to_string(), &p).unwrap(), m);
        }
    }
}
