//! Parser for lattice expressions such as `U^2+<-2>^2`, `U+U(3)`,
//! `A2(-1)`, `(-6)+A1^3` or `[[4,-2],[-2,4]]+(6)`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::IntMatrix;

/// Build a lattice from a named expression. The resulting lattice carries
/// the original text as its name.
pub fn parse(text: &str) -> Result<Lattice> {
    let normalized: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '−' => '-',
            '⊕' => '+',
            '⟨' => '<',
            '⟩' => '>',
            _ => c,
        })
        .collect();
    let mut p = Parser { s: normalized.as_bytes(), pos: 0 };
    let l = p.expr()?;
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(l.with_name(text.trim()))
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Lattice> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            let t = self.term()?;
            acc = acc.direct_sum(&t);
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let t = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        t.parse::<BigInt>().map_err(|_| self.err("expected integer"))
    }

    fn small(&mut self) -> Result<usize> {
        let n = self.integer()?;
        usize::try_from(n).map_err(|_| self.err("expected a small nonnegative integer"))
    }

    /// Is the text at the cursor `(<integer>)`?
    fn at_parenthesized_integer(&self) -> bool {
        let mut i = self.pos;
        if self.s.get(i) != Some(&b'(') {
            return false;
        }
        i += 1;
        if matches!(self.s.get(i), Some(b'-') | Some(b'+')) {
            i += 1;
        }
        let digits = i;
        while self.s.get(i).is_some_and(|c| c.is_ascii_digit()) {
            i += 1;
        }
        i > digits && self.s.get(i) == Some(&b')')
    }

    fn term(&mut self) -> Result<Lattice> {
        let mut l = self.atom()?;
        loop {
            if self.at_parenthesized_integer() {
                self.expect(b'(')?;
                let n = self.integer()?;
                self.expect(b')')?;
                l = l.rescale(&n);
            } else if self.eat(b'^') {
                let k = self.small()?;
                if k == 0 {
                    return Err(self.err("zero exponent"));
                }
                l = l.power(k);
            } else {
                return Ok(l);
            }
        }
    }

    fn atom(&mut self) -> Result<Lattice> {
        match self.peek() {
            Some(b'U') => {
                self.pos += 1;
                Ok(Lattice::u())
            }
            Some(b'<') => {
                self.pos += 1;
                let k = self.integer()?;
                self.expect(b'>')?;
                rank_one(k)
            }
            Some(b'(') if self.at_parenthesized_integer() => {
                self.pos += 1;
                let k = self.integer()?;
                self.expect(b')')?;
                rank_one(k)
            }
            Some(b'(') => {
                self.pos += 1;
                let l = self.expr()?;
                self.expect(b')')?;
                Ok(l)
            }
            Some(b'[') => self.matrix(),
            Some(b'A') | Some(b'D') => {
                let kind = self.s[self.pos];
                self.pos += 1;
                self.eat(b'_');
                let n = self.small()?;
                match kind {
                    b'A' if n >= 1 => Ok(Lattice::a(n)),
                    b'D' if n >= 3 => Ok(Lattice::d(n)),
                    _ => Err(self.err("unsupported root lattice rank")),
                }
            }
            Some(b'E') => {
                self.pos += 1;
                self.eat(b'_');
                match self.small()? {
                    8 => Ok(Lattice::e8()),
                    _ => Err(self.err("only E8 is supported")),
                }
            }
            Some(b'H') => {
                self.pos += 1;
                self.eat(b'_');
                match self.small()? {
                    5 => Ok(Lattice::h5()),
                    _ => Err(self.err("only H5 is supported")),
                }
            }
            Some(b'K') => {
                self.pos += 1;
                self.eat(b'_');
                match self.small()? {
                    7 => Ok(Lattice::k7()),
                    _ => Err(self.err("only K7 is supported")),
                }
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(Lattice::zero())
            }
            _ => Err(self.err("expected a lattice")),
        }
    }

    fn matrix(&mut self) -> Result<Lattice> {
        self.expect(b'[')?;
        let mut rows = Vec::new();
        loop {
            self.expect(b'[')?;
            let mut row = vec![self.integer()?];
            while self.eat(b',') {
                row.push(self.integer()?);
            }
            self.expect(b']')?;
            rows.push(row);
            if !self.eat(b',') {
                break;
            }
        }
        self.expect(b']')?;
        Lattice::new(IntMatrix::from_rows(rows)?)
    }
}

fn rank_one(k: BigInt) -> Result<Lattice> {
    Lattice::new(IntMatrix::from_rows(vec![vec![k]])?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_names() {
        let l = parse("U^2+<-2>^2").unwrap();
        assert_eq!(l.rank(), 6);
        assert_eq!(l.signature().unwrap(), (2, 4));
        let l = parse("U+U(3)").unwrap();
        assert_eq!(l.det(), BigInt::from(9));
        let l = parse("A2(-1)").unwrap();
        assert_eq!(l.gram(), &IntMatrix::from_i64(&[vec![-2, 1], vec![1, -2]]));
        let l = parse("(-6)+A1^3").unwrap();
        assert_eq!(l.rank(), 4);
        assert_eq!(l.det(), BigInt::from(-48));
        let l = parse("[[4,-2,6],[-2,4,0],[6,0,14]]").unwrap();
        assert_eq!(l.det(), BigInt::from(24));
        let l = parse("U⊕⟨−6⟩").unwrap();
        assert_eq!(l.signature().unwrap(), (1, 2));
        let l = parse("U^2+K7(-1)").unwrap();
        assert_eq!(l.det(), BigInt::from(7));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("U+").is_err());
        assert!(parse("<3>").is_err());
        assert!(parse("Q").is_err());
    }
}
