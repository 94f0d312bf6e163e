//! Text literals for elements and derivations.
//!
//! ```text
//! element := '0' | ['+'|'-'] term (('+'|'-') term)*
//! term    := [rat ['*']] 'x[' rat ',' rat ';' int ',' int ']'
//! rat     := int | int '/' posint
//!
//! derivation := ['+'|'-'] dterm (('+'|'-') dterm)*
//! dterm      := [rat '*'] atom
//! atom       := 'ad(' element ')' | 'dmu(' rat (',' rat)* ')'
//!             | 'd1' | 'd1bar' | 'd2' | 'dt1' | 'dt2'
//! ```
//!
//! Elements print back in this grammar via `Display`.

use crate::algebra::{AlgebraSpec, BasisIdx, Element};
use crate::derivations::{Derivation, Named, Undefined};
use crate::lattice::{GroupHom, Vec2};
use crate::rat::Rat;
use crate::Error;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Cursor<'a> {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        let boundary = rest[word.len().min(rest.len())..]
            .chars()
            .next()
            .is_none_or(|c| !c.is_ascii_alphanumeric() && c != '_');
        if rest.starts_with(word) && boundary {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn int_text(&mut self) -> Result<&'a str, Error> {
        self.skip_ws();
        let rest = self.rest();
        let sign = usize::from(rest.starts_with('-'));
        let digits = rest[sign..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected integer"));
        }
        self.pos += sign + digits;
        Ok(&rest[..sign + digits])
    }

    fn uint(&mut self) -> Result<u32, Error> {
        let t = self.int_text()?;
        t.parse::<u32>().map_err(|_| self.error(&format!("expected a nonnegative index, got {t}")))
    }

    fn rat(&mut self) -> Result<Rat, Error> {
        let start = self.pos;
        let num = self.int_text()?;
        let text = if self.rest().starts_with('/') {
            self.pos += 1;
            let den = self.int_text()?;
            format!("{num}/{den}")
        } else {
            num.to_string()
        };
        text.parse::<Rat>().map_err(|e| {
            self.pos = start;
            self.error(&e.to_string())
        })
    }

    fn starts_rat(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit())
    }
}

fn term(cur: &mut Cursor<'_>) -> Result<(BasisIdx, Rat), Error> {
    let coeff = if cur.starts_rat() {
        let c = cur.rat()?;
        cur.eat('*');
        c
    } else {
        Rat::one()
    };
    if !cur.eat('x') {
        return Err(cur.error("expected 'x['"));
    }
    cur.expect('[')?;
    let a1 = cur.rat()?;
    cur.expect(',')?;
    let a2 = cur.rat()?;
    cur.expect(';')?;
    let i1 = cur.uint()?;
    cur.expect(',')?;
    let i2 = cur.uint()?;
    cur.expect(']')?;
    Ok((BasisIdx::x(Vec2 { c1: a1, c2: a2 }, i1, i2), coeff))
}

fn element(cur: &mut Cursor<'_>) -> Result<Element, Error> {
    let mut out = Element::zero();
    let mut first = true;
    loop {
        let negative = if cur.eat('-') {
            true
        } else if cur.eat('+') || first {
            false
        } else {
            return Ok(out);
        };
        if first && !negative && cur.peek() == Some('0') {
            let save = cur.pos;
            cur.pos += 1;
            if !matches!(cur.peek(), Some(c) if c.is_ascii_digit() || c == '/' || c == '*' || c == 'x') {
                return Ok(out);
            }
            cur.pos = save;
        }
        first = false;
        let (b, c) = term(cur)?;
        out.add_term(b, if negative { -c } else { c });
        match cur.peek() {
            Some('+') | Some('-') => {}
            _ => return Ok(out),
        }
    }
}

/// Parses an element literal.
pub fn parse_element(src: &str) -> Result<Element, Error> {
    let mut cur = Cursor::new(src);
    if cur.at_end() {
        return Err(cur.error("empty element literal"));
    }
    let e = element(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(e)
}

/// One summand of a derivation literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerAtom {
    Ad(Element),
    Dmu(Vec<Rat>),
    Named(Named),
}

/// A parsed derivation literal, not yet tied to an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerExpr {
    pub terms: Vec<(Rat, DerAtom)>,
}

impl DerExpr {
    /// Assembles the derivation, checking each summand against `spec`.
    pub fn build(&self, spec: &AlgebraSpec, mode: Undefined) -> Result<Derivation, Error> {
        let mut out = Derivation::zero();
        for (c, atom) in &self.terms {
            let d = match atom {
                DerAtom::Ad(u) => {
                    spec.check_element(u)?;
                    Derivation::ad(u.clone())
                }
                DerAtom::Dmu(values) => Derivation::dmu(spec, GroupHom::new(values.clone()))?,
                DerAtom::Named(which) => Derivation::named(spec, *which, mode)?,
            };
            out = out.add(&d.scale(c));
        }
        Ok(out)
    }
}

fn der_atom(cur: &mut Cursor<'_>) -> Result<DerAtom, Error> {
    if cur.eat_word("ad") {
        cur.expect('(')?;
        let e = element(cur)?;
        cur.expect(')')?;
        return Ok(DerAtom::Ad(e));
    }
    if cur.eat_word("dmu") {
        cur.expect('(')?;
        let mut values = vec![cur.rat()?];
        while cur.eat(',') {
            values.push(cur.rat()?);
        }
        cur.expect(')')?;
        return Ok(DerAtom::Dmu(values));
    }
    let names = [
        ("d1bar", Named::D1Bar),
        ("d1", Named::D1),
        ("d2", Named::D2),
        ("dt1", Named::Dt1),
        ("dt2", Named::Dt2),
    ];
    for (word, which) in names {
        if cur.eat_word(word) {
            return Ok(DerAtom::Named(which));
        }
    }
    Err(cur.error("expected ad(..), dmu(..), d1, d1bar, d2, dt1 or dt2"))
}

/// Parses a derivation literal such as `ad(x[0,0;1,0]) + 2*dt2 - dmu(1,0)`.
pub fn parse_derivation(src: &str) -> Result<DerExpr, Error> {
    let mut cur = Cursor::new(src);
    let mut terms = Vec::new();
    let mut first = true;
    while !cur.at_end() {
        let sign = if cur.eat('-') {
            -Rat::one()
        } else if cur.eat('+') || first {
            Rat::one()
        } else {
            return Err(cur.error("expected '+' or '-'"));
        };
        first = false;
        let coeff = if cur.starts_rat() {
            let c = cur.rat()?;
            cur.expect('*')?;
            c
        } else {
            Rat::one()
        };
        terms.push((&sign * &coeff, der_atom(&mut cur)?));
    }
    if terms.is_empty() {
        return Err(cur.error("empty derivation literal"));
    }
    Ok(DerExpr { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::JSpec;
    use crate::lattice::Lattice;
    use crate::rat::rat;

    #[test]
    fn element_examples() {
        let e = parse_element("3/2 x[1,-1/2;2,0] - x[0,1;0,0]").unwrap();
        let want = Element::from_terms([
            (BasisIdx::x(Vec2::new(1, rat(-1, 2)), 2, 0), rat(3, 2)),
            (BasisIdx::x(Vec2::new(0, 1), 0, 0), -Rat::one()),
        ]);
        assert_eq!(e, want);
        assert_eq!(e.to_string(), "-x[0,1;0,0] + 3/2 x[1,-1/2;2,0]");
        assert!(parse_element("0").unwrap().is_zero());
        assert!(parse_element(" 0 ").unwrap().is_zero());
        assert_eq!(parse_element("2*x[0,0;1,0]").unwrap(), parse_element("2 x[0,0;1,0]").unwrap());
        assert_eq!(parse_element("-x[1,1;0,0] + x[1,1;0,0]").unwrap(), Element::zero());
        assert_eq!(parse_element("0 x[1,1;0,0]").unwrap(), Element::zero());
        assert_eq!(parse_element("10 x[1,1;0,0]").unwrap().to_string(), "10 x[1,1;0,0]");
    }

    #[test]
    fn element_errors() {
        for bad in ["", "x[1,1;0]", "x[1,1;-1,0]", "y[0,0;0,0]", "x[1,1;0,0] x[0,0;0,0]", "1/0 x[0,0;0,0]", "x[1,1;0,0] +"] {
            assert!(matches!(parse_element(bad), Err(Error::Parse(_))), "{bad:?}");
        }
    }

    #[test]
    fn round_trip() {
        for s in ["x[1,1;2,0] + 2 x[1,1;1,0]", "-3/2 x[-1,0;0,0] + x[0,0;1,1]", "0"] {
            assert_eq!(parse_element(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn derivation_examples() {
        let spec = AlgebraSpec::new(Lattice::standard(), JSpec::NAT_NAT).unwrap();
        let d = parse_derivation("ad(x[0,0;1,0]) + 2*dt2 - dmu(1,0)").unwrap();
        assert_eq!(d.terms.len(), 3);
        let built = d.build(&spec, Undefined::Reject).unwrap();
        assert_eq!(built.f4, Rat::from_int(2));
        assert_eq!(built.mu, Some(GroupHom::new(vec![-Rat::one(), Rat::zero()])));
        assert!(parse_derivation("d1bar").unwrap().terms[0].1 == DerAtom::Named(Named::D1Bar));
        assert!(matches!(
            parse_derivation("d2").unwrap().build(&spec, Undefined::Reject),
            Err(Error::UndefinedInThisAlgebra { .. })
        ));
        assert!(parse_derivation("d2").unwrap().build(&spec, Undefined::Zero).unwrap().is_zero());
        assert!(parse_derivation("d3").is_err());
        assert!(parse_derivation("").is_err());
        assert!(parse_derivation("ad(x[0,0;0,0]").is_err());
    }
}
