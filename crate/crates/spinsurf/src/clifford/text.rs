//! Exact textual round trip for multivectors.
//!
//! The grammar is
//!
//! ```text
//! mv     := "sig(" p "," q [ ";" signs ] ")" "{" [entry ("," entry)*] "}"
//! signs  := ("+" | "-") ("," ("+" | "-"))*          one sign per generator
//! entry  := '"' digits '"' ":" float                digits ascending, "" = scalar
//! ```
//!
//! Without an explicit sign list the canonical order (timelike first) is
//! implied. Coefficients print with Rust's shortest-round-trip `f64`
//! formatting and parse with `str::parse::<f64>`, so `parse(format(m)) == m`
//! holds bit-for-bit for every finite multivector.

use super::{blade_grade, Multivector, Signature};
use crate::error::{Error, Result};

impl Multivector {
    /// Renders the exact text form, e.g. `sig(1,2){ "": 1, "12": -0.5 }`.
    pub fn format_text(&self) -> String {
        let sig = self.sig;
        let mut s = String::new();
        if sig.is_canonical() {
            s.push_str(&format!("sig({},{})", sig.p(), sig.q()));
        } else {
            let pat: Vec<&str> =
                (0..sig.dim()).map(|i| if sig.eps(i) < 0.0 { "-" } else { "+" }).collect();
            s.push_str(&format!("sig({},{};{})", sig.p(), sig.q(), pat.join(",")));
        }
        s.push('{');
        let mut masks: Vec<usize> = (0..sig.blade_count()).filter(|&m| self.coeff(m) != 0.0).collect();
        masks.sort_by_key(|&m| (blade_grade(m), m));
        let mut first = true;
        for m in masks {
            s.push_str(if first { " " } else { ", " });
            first = false;
            s.push('"');
            for i in 0..sig.dim() {
                if m & (1 << i) != 0 {
                    s.push(char::from_digit(i as u32, 10).unwrap());
                }
            }
            s.push_str("\": ");
            s.push_str(&format!("{}", self.coeff(m)));
        }
        s.push_str(if first { "}" } else { " }" });
        s
    }

    /// Parses the text form produced by [`Multivector::format_text`].
    pub fn parse_text(input: &str) -> Result<Self> {
        let mut p = Parser { s: input.as_bytes(), pos: 0 };
        let m = p.multivector()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::invalid(format!(
                "trailing characters after multivector at byte {}",
                p.pos
            )));
        }
        Ok(m)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        self.skip_ws();
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(Error::invalid(format!("expected `{lit}` at byte {} of multivector text", self.pos)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::invalid(format!("expected integer at byte {start}")));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| Error::invalid(format!("bad integer: {e}")))
    }

    fn float(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() {
            let b = self.s[self.pos];
            if b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        let v: f64 =
            txt.parse().map_err(|e| Error::invalid(format!("bad coefficient `{txt}`: {e}")))?;
        if !v.is_finite() {
            return Err(Error::invalid(format!("non-finite coefficient `{txt}`")));
        }
        Ok(v)
    }

    fn multivector(&mut self) -> Result<Multivector> {
        self.expect("sig(")?;
        let p = self.integer()?;
        self.expect(",")?;
        let q = self.integer()?;
        let sig = match self.peek() {
            Some(b';') => {
                self.expect(";")?;
                let mut signs = Vec::new();
                loop {
                    match self.peek() {
                        Some(b'+') => {
                            self.expect("+")?;
                            signs.push(1i8);
                        }
                        Some(b'-') => {
                            self.expect("-")?;
                            signs.push(-1i8);
                        }
                        _ => return Err(Error::invalid("expected sign pattern after `;`")),
                    }
                    if self.peek() == Some(b',') {
                        self.expect(",")?;
                    } else {
                        break;
                    }
                }
                let sig = Signature::from_signs(&signs)?;
                if sig.p() != p || sig.q() != q {
                    return Err(Error::invalid(format!(
                        "sign pattern has (p,q)=({},{}) but prefix says ({p},{q})",
                        sig.p(),
                        sig.q()
                    )));
                }
                sig
            }
            _ => Signature::canonical(p, q)?,
        };
        self.expect(")")?;
        self.expect("{")?;
        let mut m = Multivector::zero(sig);
        let mut seen = [false; super::MAX_BLADES];
        if self.peek() != Some(b'}') {
            loop {
                let (mask, value) = self.entry(sig)?;
                if seen[mask] {
                    return Err(Error::invalid(format!("duplicate blade key in multivector text")));
                }
                seen[mask] = true;
                *m.coeff_mut(mask) = value;
                if self.peek() == Some(b',') {
                    self.expect(",")?;
                } else {
                    break;
                }
            }
        }
        self.expect("}")?;
        Ok(m)
    }

    fn entry(&mut self, sig: Signature) -> Result<(usize, f64)> {
        self.expect("\"")?;
        let mut mask = 0usize;
        let mut last: i32 = -1;
        loop {
            match self.s.get(self.pos).copied() {
                Some(b'"') => {
                    self.pos += 1;
                    break;
                }
                Some(d @ b'0'..=b'9') => {
                    self.pos += 1;
                    let idx = (d - b'0') as i32;
                    if idx as usize >= sig.dim() {
                        return Err(Error::invalid(format!(
                            "blade index {idx} out of range for dimension {}",
                            sig.dim()
                        )));
                    }
                    if idx <= last {
                        return Err(Error::invalid("blade key indices must be strictly ascending"));
                    }
                    last = idx;
                    mask |= 1 << idx;
                }
                _ => return Err(Error::invalid("unterminated blade key")),
            }
        }
        self.expect(":")?;
        let v = self.float()?;
        Ok((mask, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_and_explicit_prefixes_round_trip() {
        let can = Signature::cl12();
        let m = Multivector::one(can) * 0.1
            + Multivector::basis_blade(can, 0b011) * (1.0 / 3.0)
            + Multivector::basis_blade(can, 0b111) * -2.5e-17;
        let txt = m.format_text();
        assert_eq!(Multivector::parse_text(&txt).unwrap(), m);

        let lie = Signature::lie_order();
        let m = Multivector::vector(lie, &[f64::MIN_POSITIVE, -0.25, 3.0, 0.0]);
        let txt = m.format_text();
        assert!(txt.starts_with("sig(1,2;+,+,-){"));
        assert_eq!(Multivector::parse_text(&txt).unwrap(), m);
    }

    #[test]
    fn zero_renders_as_empty_braces() {
        let z = Multivector::zero(Signature::cl22());
        assert_eq!(z.format_text(), "sig(2,2){}");
        assert_eq!(Multivector::parse_text("sig(2,2){}").unwrap(), z);
        assert_eq!(Multivector::parse_text("sig(2,2){ }").unwrap(), z);
    }

    #[test]
    fn entries_sort_by_grade_then_blade() {
        let sig = Signature::cl12();
        let m = Multivector::basis_blade(sig, 0b110) * 2.0
            + Multivector::basis_vector(sig, 0) * 1.0
            + Multivector::one(sig) * 3.0;
        assert_eq!(m.format_text(), "sig(1,2){ \"\": 3, \"0\": 1, \"12\": 2 }");
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        for bad in [
            "sig(1,2){ \"5\": 1 }",       // index out of range
            "sig(1,2){ \"21\": 1 }",      // not ascending
            "sig(1,2){ \"0\": 1, \"0\": 2 }", // duplicate key
            "sig(9,9){}",                 // dimension too large
            "sig(1,2;+,+){}",             // pattern/prefix mismatch
            "sig(1,2){ \"0\": nope }",    // bad float
            "sig(1,2){} trailing",        // trailing garbage
        ] {
            assert!(Multivector::parse_text(bad).is_err(), "should reject {bad:?}");
        }
    }
}
