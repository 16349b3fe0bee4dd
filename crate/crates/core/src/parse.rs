//! Text grammars for varieties and bundle expressions.
//!
//! Varieties: atoms `P<n>` and `H<m>,<n>` joined by `x`, or `pt` for a point.
//! Whitespace is ignored.
//!
//! Bundles, from loosest to tightest binding:
//!
//! ```text
//! sum     := product ('+' product)*
//! product := unary ('*' unary)*
//! unary   := ('~' | '-') unary | postfix        dual, negation
//! postfix := primary ('^' int)*                 exterior power
//! primary := 'T' | 'O' | 'O(' int ')@' int | int | '(' sum ')'
//! ```
//!
//! `O` is the trivial line bundle, a bare integer `r` the trivial bundle of
//! rank `r`, and `O(k)@f` the twist `O(k)` from projective factor `f`
//! (0-based). Error positions are byte offsets into the input.

use std::str::FromStr;

use crate::chow::Atom;
use crate::error::{Error, Result};
use crate::hrr::BundleExpr;

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    fn unexpected(&mut self, wanted: &str) -> Error {
        match self.peek() {
            Some(c) => parse_error(self.pos, format!("expected {wanted}, found '{c}'")),
            None => parse_error(self.pos, format!("expected {wanted}, found end of input")),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        let bytes = self.src.as_bytes();
        if end < bytes.len() && bytes[end] == b'-' {
            end += 1;
        }
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        let text = &self.src[start..end];
        if text.is_empty() || text == "-" {
            return Err(self.unexpected("an integer"));
        }
        let value = text.parse().map_err(|_| parse_error(start, format!("integer {text} out of range")))?;
        self.pos = end;
        Ok(value)
    }

    fn natural(&mut self) -> Result<u32> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let v = self.integer()?;
        u32::try_from(v).map_err(|_| parse_error(start, format!("expected a nonnegative integer, found {v}")))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses a variety spec such as `P2xH2,3` into its atoms.
pub fn parse_variety(src: &str) -> Result<Vec<Atom>> {
    let mut c = Cursor::new(src);
    if c.peek() == Some('p') {
        let start = c.pos;
        c.bump();
        if c.eat('t') && c.at_end() {
            return Ok(Vec::new());
        }
        return Err(parse_error(start, "expected 'pt', 'P<n>' or 'H<m>,<n>'"));
    }
    let mut atoms = Vec::new();
    loop {
        c.skip_ws();
        let start = c.pos;
        let atom = match c.bump() {
            Some('P') => Atom::Proj(c.natural()?),
            Some('H') => {
                let m = c.natural()?;
                c.expect(',')?;
                Atom::Milnor(m, c.natural()?)
            }
            _ => {
                c.pos = start;
                return Err(c.unexpected("'P<n>' or 'H<m>,<n>'"));
            }
        };
        atom.validate().map_err(|e| parse_error(start, e.to_string()))?;
        atoms.push(atom);
        if c.at_end() {
            return Ok(atoms);
        }
        if !c.eat('x') {
            return Err(c.unexpected("'x' or end of input"));
        }
    }
}

/// Prints atoms back in the variety grammar.
pub fn format_variety(atoms: &[Atom]) -> String {
    if atoms.is_empty() {
        return "pt".into();
    }
    atoms.iter().map(Atom::to_string).collect::<Vec<_>>().join("x")
}

/// Parses a bundle expression such as `~T^2 + O(3)@0`.
pub fn parse_bundle(src: &str) -> Result<BundleExpr> {
    let mut c = Cursor::new(src);
    let e = sum(&mut c)?;
    if !c.at_end() {
        return Err(c.unexpected("an operator or end of input"));
    }
    Ok(e)
}

fn sum(c: &mut Cursor) -> Result<BundleExpr> {
    let mut e = product(c)?;
    while c.eat('+') {
        e = e.sum(product(c)?);
    }
    Ok(e)
}

fn product(c: &mut Cursor) -> Result<BundleExpr> {
    let mut e = unary(c)?;
    while c.eat('*') {
        e = e.tensor(unary(c)?);
    }
    Ok(e)
}

fn unary(c: &mut Cursor) -> Result<BundleExpr> {
    if c.eat('~') {
        return Ok(unary(c)?.dual());
    }
    if c.eat('-') {
        return Ok(unary(c)?.negate());
    }
    postfix(c)
}

fn postfix(c: &mut Cursor) -> Result<BundleExpr> {
    let mut e = primary(c)?;
    while c.eat('^') {
        e = e.exterior_power(c.natural()?);
    }
    Ok(e)
}

fn primary(c: &mut Cursor) -> Result<BundleExpr> {
    match c.peek() {
        Some('T') => {
            c.bump();
            Ok(BundleExpr::Tangent)
        }
        Some('O') => {
            c.bump();
            if !c.eat('(') {
                return Ok(BundleExpr::Trivial(1));
            }
            let twist = c.integer()?;
            c.expect(')')?;
            c.expect('@')?;
            let factor = c.natural()? as usize;
            Ok(BundleExpr::Line { factor, twist })
        }
        Some('(') => {
            c.bump();
            let e = sum(c)?;
            c.expect(')')?;
            Ok(e)
        }
        Some(ch) if ch.is_ascii_digit() => Ok(BundleExpr::Trivial(c.natural()?)),
        _ => Err(c.unexpected("'T', 'O', 'O(k)@f', an integer or '('")),
    }
}

impl FromStr for BundleExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_bundle(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variety_examples() {
        assert_eq!(parse_variety("P2").unwrap(), vec![Atom::Proj(2)]);
        assert_eq!(parse_variety(" P1 x H2, 3 ").unwrap(), vec![Atom::Proj(1), Atom::Milnor(2, 3)]);
        assert_eq!(parse_variety("pt").unwrap(), vec![]);
        assert_eq!(format_variety(&parse_variety("P2xP2").unwrap()), "P2xP2");
    }

    #[test]
    fn variety_errors_report_position() {
        assert_eq!(parse_variety("P2xQ3"), Err(parse_error(3, "expected 'P<n>' or 'H<m>,<n>', found 'Q'")));
        assert!(matches!(parse_variety("P0"), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_variety("H3,2"), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_variety("P2x"), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_variety(""), Err(Error::Parse { position: 0, .. })));
    }

    #[test]
    fn bundle_precedence() {
        use BundleExpr as B;
        let e = parse_bundle("~T^2 + O(3)@0 * 2").unwrap();
        let expect = B::Tangent
            .exterior_power(2)
            .dual()
            .sum(B::Line { factor: 0, twist: 3 }.tensor(B::Trivial(2)));
        assert_eq!(e, expect);
        assert_eq!(parse_bundle("-(T+O)^2").unwrap(), B::Tangent.sum(B::Trivial(1)).exterior_power(2).negate());
        assert_eq!(parse_bundle("O(-2)@1").unwrap(), B::Line { factor: 1, twist: -2 });
    }

    #[test]
    fn bundle_errors_report_position() {
        assert!(matches!(parse_bundle("T +"), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_bundle("T ^ x"), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(parse_bundle("O(1)"), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(parse_bundle("T T"), Err(Error::Parse { position: 2, .. })));
    }

    #[test]
    fn bundle_display_round_trips() {
        for src in ["T", "O", "3", "~T^2", "-(T + O(1)@0)", "(T * T)^2 + -~O(-1)@0", "~(~T)", "-(-T)", "0^1"] {
            let e = parse_bundle(src).unwrap();
            assert_eq!(parse_bundle(&e.to_string()).unwrap(), e, "{src} -> {e}");
        }
    }
}
