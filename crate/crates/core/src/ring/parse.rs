//! Ring descriptors and element literals.
//!
//! ```text
//! ring    := Z | Zmod[n] | Fp[p] | Zmu[A|B|C,p=<prime>,m=<nat>]
//!          | Poly(ring; v1,...,vk) | Quot(ring; literal)
//! literal := sum of products of integers, mu, mu_m, eta, eta_m, rho, i and
//!            declared variables, with + - * ^ and parentheses
//! ```

use super::{Case, Elt, Ring, RingDescriptor};
use crate::error::{Error, Result};
use crate::Int;

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s: s.as_bytes(), pos: 0 }
    }
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }
    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.s[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }
    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {tok:?}")))
        }
    }
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in {:?}", self.pos, String::from_utf8_lossy(self.s)))
    }
    fn number(&mut self) -> Result<Int> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("bad number"))
    }
    fn small(&mut self) -> Result<u64> {
        let n = self.number()?;
        u64::try_from(&n).map_err(|_| self.err("number too large"))
    }
    fn ident(&mut self) -> Result<String> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            if self.pos == start && self.s[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an identifier"));
        }
        Ok(String::from_utf8(self.s[start..self.pos].to_vec()).unwrap())
    }
    fn done(&mut self) -> bool {
        self.ws();
        self.pos == self.s.len()
    }
}

/// Parse a ring descriptor (syntax only; see `Ring::new` for validation).
pub fn ring_parse(text: &str) -> Result<RingDescriptor> {
    let mut c = Cursor::new(text);
    let d = parse_ring(&mut c)?;
    if !c.done() {
        return Err(c.err("trailing input"));
    }
    Ring::new(&d)?;
    Ok(d)
}

fn parse_ring(c: &mut Cursor) -> Result<RingDescriptor> {
    if c.eat("Zmod[") {
        let n = c.number()?;
        c.expect("]")?;
        return Ok(RingDescriptor::IntegersMod(n));
    }
    if c.eat("Zmu[") {
        let case: Case = c.ident()?.parse()?;
        c.expect(",")?;
        c.expect("p")?;
        c.expect("=")?;
        let p = c.small()?;
        c.expect(",")?;
        c.expect("m")?;
        c.expect("=")?;
        let m = u32::try_from(c.small()?).map_err(|_| c.err("level too large"))?;
        c.expect("]")?;
        return Ok(RingDescriptor::Cyclotomic { case, p, m });
    }
    if c.eat("Fp[") {
        let p = c.small()?;
        c.expect("]")?;
        return Ok(RingDescriptor::PrimeField(p));
    }
    if c.eat("Poly(") {
        let base = parse_ring(c)?;
        c.expect(";")?;
        let mut vars = vec![c.ident()?];
        while c.eat(",") {
            vars.push(c.ident()?);
        }
        c.expect(")")?;
        return Ok(RingDescriptor::PolyRing { base: Box::new(base), vars });
    }
    if c.eat("Quot(") {
        let base = parse_ring(c)?;
        c.expect(";")?;
        c.ws();
        let start = c.pos;
        let mut depth = 0i32;
        while c.pos < c.s.len() {
            match c.s[c.pos] {
                b'(' => depth += 1,
                b')' if depth == 0 => break,
                b')' => depth -= 1,
                _ => {}
            }
            c.pos += 1;
        }
        let lit = String::from_utf8(c.s[start..c.pos].to_vec()).unwrap().trim().to_string();
        c.expect(")")?;
        if lit.is_empty() {
            return Err(c.err("empty modulus"));
        }
        return Ok(RingDescriptor::Quotient { base: Box::new(base), modulus: lit });
    }
    if c.eat("Z") {
        return Ok(RingDescriptor::Integers);
    }
    Err(c.err("expected a ring"))
}

impl Ring {
    /// Parse an element literal in this ring.
    pub fn parse_elt(&self, text: &str) -> Result<Elt> {
        let mut c = Cursor::new(text);
        let e = self.p_sum(&mut c)?;
        if !c.done() {
            return Err(c.err("trailing input"));
        }
        Ok(e)
    }

    fn p_sum(&self, c: &mut Cursor) -> Result<Elt> {
        let mut acc = self.p_product(c)?;
        loop {
            if c.eat("+") {
                acc = self.add(&acc, &self.p_product(c)?);
            } else if c.peek() == Some(b'-') {
                c.eat("-");
                acc = self.sub(&acc, &self.p_product(c)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn p_product(&self, c: &mut Cursor) -> Result<Elt> {
        let mut acc = self.p_unary(c)?;
        while c.eat("*") {
            acc = self.mul(&acc, &self.p_unary(c)?);
        }
        Ok(acc)
    }

    fn p_unary(&self, c: &mut Cursor) -> Result<Elt> {
        if c.peek() == Some(b'-') {
            c.eat("-");
            return Ok(self.neg(&self.p_unary(c)?));
        }
        if c.peek() == Some(b'+') {
            c.eat("+");
            return self.p_unary(c);
        }
        let base = self.p_atom(c)?;
        if c.eat("^") {
            let e = c.small()?;
            return Ok(self.pow(&base, e));
        }
        Ok(base)
    }

    fn p_atom(&self, c: &mut Cursor) -> Result<Elt> {
        match c.peek() {
            Some(b'(') => {
                c.eat("(");
                let e = self.p_sum(c)?;
                c.expect(")")?;
                Ok(e)
            }
            Some(ch) if ch.is_ascii_digit() => Ok(self.from_int(&c.number()?)),
            Some(_) => {
                let name = c.ident()?;
                self.symbol(&name).map_err(|e| match e {
                    Error::Parse(m) => c.err(&m),
                    other => other,
                })
            }
            None => Err(c.err("unexpected end of literal")),
        }
    }

    fn symbol(&self, name: &str) -> Result<Elt> {
        if let Some(v) = self.var_by_name(name) {
            return Ok(v);
        }
        let info = self.cyc_info();
        let p = self.default_p();
        match name {
            "mu" => self.mu(),
            "mu_m" | "zeta" => self.mu_m(),
            "eta" if info.is_some() => self.eta(),
            "eta_m" => self.eta_m(),
            "i" if matches!(info, Some(i) if i.case == Case::B) => self.mu(),
            "rho" | "eta" => {
                let p = p.ok_or_else(|| Error::NotCyclotomic(format!("{name} is undefined in {self}")))?;
                if name == "rho" { self.rho_for(p) } else { self.eta_for(p) }
            }
            _ => Err(Error::Parse(format!("unknown symbol {name:?}"))),
        }
    }
}
