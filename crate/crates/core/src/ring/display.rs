use super::{Case, Elt, Ring, RingDescriptor};
use crate::Int;
use num_traits::{One, Signed, Zero};
use std::fmt;

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::IntegersMod(n) => write!(f, "Zmod[{n}]"),
            RingDescriptor::PrimeField(p) => write!(f, "Fp[{p}]"),
            RingDescriptor::Cyclotomic { case, p, m } => write!(f, "Zmu[{case},p={p},m={m}]"),
            RingDescriptor::PolyRing { base, vars } => write!(f, "Poly({base}; {})", vars.join(",")),
            RingDescriptor::Quotient { base, modulus } => write!(f, "Quot({base}; {modulus})"),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.desc)
    }
}

/// Signed pieces "c*s" joined with + and -, with the sign of the first piece kept.
fn join_signed(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (neg, s)) in parts.into_iter().enumerate() {
        match (k, neg) {
            (0, true) => { out.push('-'); out.push_str(&s) }
            (0, false) => out.push_str(&s),
            (_, true) => { out.push_str(" - "); out.push_str(&s) }
            (_, false) => { out.push_str(" + "); out.push_str(&s) }
        }
    }
    out
}

fn scaled(c: &Int, body: &str) -> (bool, String) {
    let a = c.abs();
    let s = if body.is_empty() {
        a.to_string()
    } else if a.is_one() {
        body.to_string()
    } else {
        format!("{a}*{body}")
    };
    (c.is_negative(), s)
}

impl Ring {
    /// Name of the power-basis generator in literals.
    pub fn zeta_symbol(&self) -> Option<&'static str> {
        let info = self.cyc_info()?;
        match (info.case, info.m) {
            (Case::C, _) => None,
            (Case::A, 0) => Some("rho"),
            (Case::B, 0) => Some("i"),
            _ => Some("mu_m"),
        }
    }

    fn const_parts(&self, c: &[Int]) -> Vec<(bool, String)> {
        let sym = self.zeta_symbol().unwrap_or("zeta");
        c.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| {
                let body = match k {
                    0 => String::new(),
                    1 => sym.to_string(),
                    _ => format!("{sym}^{k}"),
                };
                scaled(x, &body)
            })
            .collect()
    }

    /// Render a constant coordinate vector as a literal.
    pub fn fmt_const(&self, c: &[Int]) -> String {
        join_signed(self.const_parts(c))
    }

    /// Render an element as a literal accepted by the element parser.
    pub fn fmt_elt(&self, x: &Elt) -> String {
        let mut parts = Vec::new();
        for (m, c) in x.terms.iter().rev() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { self.0.vars[j].clone() } else { format!("{}^{e}", self.0.vars[j]) })
                .collect();
            let mono = mono.join("*");
            let cp = self.const_parts(c);
            if cp.len() == 1 {
                let (neg, s) = cp.into_iter().next().unwrap();
                let s = match (s.as_str(), mono.is_empty()) {
                    (_, true) => s,
                    ("1", false) => mono,
                    _ => format!("{s}*{mono}"),
                };
                parts.push((neg, s));
            } else {
                let inner = join_signed(cp);
                parts.push((false, if mono.is_empty() { inner } else { format!("({inner})*{mono}") }));
            }
        }
        join_signed(parts)
    }
}
