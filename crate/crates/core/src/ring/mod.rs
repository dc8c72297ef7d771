//! Coefficient rings of the form C[x_1..x_k]/(moduli) with C = Z[zeta]/L.
//!
//! * zeta has order 1 (Z), 2 (case C), p^(m+1) (case A) or 2^(m+2) (case B);
//!   constants live in the power basis of length d = phi(order).
//! * L is a full-rank ideal lattice of Z[zeta] in Hermite form, or zero.
//! * Each variable is free or carries one monic modulus x^e = tail. Tails
//!   only involve the variable itself and variables moduled earlier, so
//!   reducing from the outermost modulus inwards terminates and the bounded
//!   variables span a subring B with the whole ring equal to B[free vars].
//!
//! Elements are kept canonical at all times, so structural equality is ring
//! equality.

pub mod cyclo;
mod display;
mod finite;
mod parse;

pub use finite::ResidueField;
pub use parse::ring_parse;

use crate::error::{Error, Result};
use crate::linalg::zlattice::Hnf;
use crate::Int;
use cyclo::Cyclo;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    A,
    B,
    C,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Case> {
        match s.trim() {
            "A" | "a" => Ok(Case::A),
            "B" | "b" => Ok(Case::B),
            "C" | "c" => Ok(Case::C),
            _ => Err(Error::Parse(format!("unknown case {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingDescriptor {
    Integers,
    IntegersMod(Int),
    PrimeField(u64),
    Cyclotomic { case: Case, p: u64, m: u32 },
    PolyRing { base: Box<RingDescriptor>, vars: Vec<String> },
    Quotient { base: Box<RingDescriptor>, modulus: String },
}

impl RingDescriptor {
    fn depth(&self) -> usize {
        match self {
            RingDescriptor::PolyRing { base, .. } | RingDescriptor::Quotient { base, .. } => 1 + base.depth(),
            _ => 0,
        }
    }
}

/// Exponent vector; ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        let a: u64 = self.0.iter().map(|&e| e as u64).sum();
        let b: u64 = o.0.iter().map(|&e| e as u64).sum();
        a.cmp(&b).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Mono {
    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
    fn add(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

/// A canonical element: sparse map from monomials to constant coordinate
/// vectors, with no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Elt {
    pub(crate) terms: BTreeMap<Mono, Vec<Int>>,
}

impl Elt {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Vec<Int>)> {
        self.terms.iter()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycInfo {
    pub case: Case,
    pub p: u64,
    pub m: u32,
}

impl CycInfo {
    /// Ramification index e of the level-m prime over the level-0 prime:
    /// eta = unit * eta_m^e.
    pub fn level_index(&self) -> u64 {
        match self.case {
            Case::A => self.p.pow(self.m),
            Case::B => 1 << self.m,
            Case::C => 1,
        }
    }
}

#[derive(Clone, Debug)]
struct VarModulus {
    degree: u32,
    tail: Elt,
}

pub(crate) struct RingData {
    desc: RingDescriptor,
    cyclo: Cyclo,
    cyc: Option<CycInfo>,
    /// Hermite rows: row i has its positive pivot at column i.
    lattice: Option<Vec<Vec<Int>>>,
    lattice_diag_only: bool,
    vars: Vec<String>,
    moduli: Vec<Option<VarModulus>>,
    mod_order: Vec<usize>,
    pinned: Vec<bool>,
    block: OnceLock<finite::Block>,
    residues: OnceLock<Result<Vec<ResidueField>>>,
}

/// A shared, immutable ring.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.desc)
    }
}

impl PartialEq for Ring {
    fn eq(&self, o: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.desc == o.0.desc
    }
}

pub const RESERVED: &[&str] = &["mu", "mu_m", "eta", "eta_m", "rho", "i", "zeta"];
const MAX_DEPTH: usize = 12;

fn lattice_hnf(gens: &[Vec<Int>], d: usize) -> Vec<Vec<Int>> {
    Hnf::new(&[], gens, None, d).rows
}

impl Ring {
    pub fn parse(text: &str) -> Result<Ring> {
        Ring::new(&ring_parse(text)?)
    }

    pub fn new(desc: &RingDescriptor) -> Result<Ring> {
        if desc.depth() > MAX_DEPTH {
            return Err(Error::Tower(format!("nesting deeper than {MAX_DEPTH}")));
        }
        let base = |cyclo: Cyclo, cyc, lattice: Option<Vec<Vec<Int>>>| RingData {
            desc: desc.clone(),
            lattice_diag_only: lattice.as_ref().map_or(false, |l| diag_only(l)),
            cyclo,
            cyc,
            lattice,
            vars: vec![],
            moduli: vec![],
            mod_order: vec![],
            pinned: vec![],
            block: OnceLock::new(),
            residues: OnceLock::new(),
        };
        let data = match desc {
            RingDescriptor::Integers => base(Cyclo::new(1), None, None),
            RingDescriptor::IntegersMod(n) => {
                if n < &Int::from(2) {
                    return Err(Error::Tower(format!("Zmod[{n}] needs n >= 2")));
                }
                base(Cyclo::new(1), None, Some(vec![vec![n.clone()]]))
            }
            RingDescriptor::PrimeField(p) => {
                if !cyclo::is_prime(*p) {
                    return Err(Error::Tower(format!("Fp[{p}]: {p} is not prime")));
                }
                base(Cyclo::new(1), None, Some(vec![vec![Int::from(*p)]]))
            }
            &RingDescriptor::Cyclotomic { case, p, m } => {
                if !cyclo::is_prime(p) {
                    return Err(Error::Tower(format!("p = {p} is not prime")));
                }
                let order = match case {
                    Case::A if p > 2 => p.checked_pow(m + 1).filter(|&n| n <= 1 << 12),
                    Case::B if p == 2 => 2u64.checked_pow(m + 2).filter(|&n| n <= 1 << 12),
                    Case::C if p == 2 => Some(2),
                    _ => return Err(Error::Tower(format!("case {case} does not allow p = {p}"))),
                }
                .ok_or_else(|| Error::Tower("cyclotomic level too large".into()))?;
                base(Cyclo::new(order), Some(CycInfo { case, p, m }), None)
            }
            RingDescriptor::PolyRing { base: b, vars } => {
                let inner = Ring::new(b)?;
                if vars.is_empty() {
                    return Err(Error::Tower("Poly needs at least one variable".into()));
                }
                let mut d = inner.0.clone_data(desc.clone());
                for v in vars {
                    if RESERVED.contains(&v.as_str()) {
                        return Err(Error::Tower(format!("variable name {v:?} is reserved")));
                    }
                    if d.vars.contains(v) {
                        return Err(Error::Tower(format!("duplicate variable {v:?}")));
                    }
                    d.vars.push(v.clone());
                    d.moduli.push(None);
                    d.pinned.push(false);
                }
                let k = d.vars.len();
                for m in d.moduli.iter_mut().flatten() {
                    pad_elt(&mut m.tail, k);
                }
                d
            }
            RingDescriptor::Quotient { base: b, modulus } => {
                let inner = Ring::new(b)?;
                let f = inner.parse_elt(modulus)?;
                inner.quotient_data(&f, desc.clone())?
            }
        };
        Ok(Ring(Arc::new(data)))
    }

    fn quotient_data(&self, f: &Elt, desc: RingDescriptor) -> Result<RingData> {
        if f.is_zero() {
            return Err(Error::Tower("quotient modulus must be nonzero".into()));
        }
        let d = self.0.cyclo.rank;
        let mut data = self.0.clone_data(desc);
        if let Some(c) = self.as_constant(f) {
            let mut gens: Vec<Vec<Int>> = (0..d as u64)
                .map(|i| self.0.cyclo.mul(&c, &self.0.cyclo.zeta_pow(i)))
                .collect();
            if let Some(l) = &self.0.lattice {
                gens.extend(l.iter().cloned());
            }
            let h = lattice_hnf(&gens, d);
            if h.len() < d {
                return Err(Error::Tower("constant modulus must have full-rank ideal".into()));
            }
            if h.iter().enumerate().all(|(i, r)| r[i].is_one()) {
                return Err(Error::Tower("quotient modulus is a unit".into()));
            }
            data.lattice_diag_only = diag_only(&h);
            data.lattice = Some(h);
            return Ok(data);
        }
        for j in 0..data.vars.len() {
            if data.moduli[j].is_some() || data.pinned[j] {
                continue;
            }
            let e = f.terms.keys().map(|m| m.0[j]).max().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let lead: Vec<(&Mono, &Vec<Int>)> = f.terms.iter().filter(|(m, _)| m.0[j] == e).collect();
            if lead.len() != 1 || !lead[0].0 .0.iter().enumerate().all(|(k, &x)| k == j || x == 0) {
                continue;
            }
            let lc = self.constant(lead[0].1.clone());
            let Some(inv) = self.inverse(&lc) else { continue };
            // Every other variable in f must be free-and-unmoduled or moduled.
            let mut t = f.clone();
            t.terms.remove(lead[0].0);
            let tail = self.neg(&self.mul(&t, &inv));
            // Tails may involve only x_j itself and variables moduled earlier,
            // so the bounded variables span a subring.
            if (0..data.vars.len()).any(|k| k != j && data.moduli[k].is_none() && tail.terms.keys().any(|m| m.0[k] > 0)) {
                continue;
            }
            data.pinned[j] = true;
            data.moduli[j] = Some(VarModulus { degree: e, tail });
            data.mod_order.push(j);
            return Ok(data);
        }
        Err(Error::Tower("modulus is neither constant nor monic with unit leading coefficient in a fresh variable".into()))
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.desc
    }

    pub fn cyclo(&self) -> &Cyclo {
        &self.0.cyclo
    }

    pub fn cyc_info(&self) -> Option<CycInfo> {
        self.0.cyc
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.0.vars
    }

    pub fn free_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&j| self.0.moduli[j].is_none()).collect()
    }

    pub fn var_degree_bound(&self, j: usize) -> Option<u32> {
        self.0.moduli[j].as_ref().map(|m| m.degree)
    }

    pub fn lattice(&self) -> Option<&Vec<Vec<Int>>> {
        self.0.lattice.as_ref()
    }

    /// True when the constants are finite and every variable is bounded.
    pub fn is_finite(&self) -> bool {
        self.0.lattice.is_some() && self.free_vars().is_empty()
    }

    /// True when the ring is a finitely generated Z-module.
    pub fn is_z_finite(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Characteristic of the ring (0 for characteristic zero).
    pub fn characteristic(&self) -> Int {
        let Some(l) = &self.0.lattice else { return Int::zero() };
        let d = self.0.cyclo.rank;
        let rev: Vec<Vec<Int>> = l.iter().map(|r| r.iter().rev().cloned().collect()).collect();
        let h = lattice_hnf(&rev, d);
        h[d - 1][d - 1].clone()
    }

    /// Number of elements of a finite ring.
    pub fn size(&self) -> Option<Int> {
        if !self.is_finite() {
            return None;
        }
        let l = self.0.lattice.as_ref()?;
        let c: Int = (0..l.len()).fold(Int::one(), |a, i| a * &l[i][i]);
        let monos: u32 = self.0.moduli.iter().map(|m| m.as_ref().unwrap().degree).product();
        Some(num_traits::pow(c, monos as usize))
    }

    // ---- construction of elements --------------------------------------

    fn mono_one(&self) -> Mono {
        Mono(vec![0; self.nvars()])
    }

    pub fn zero(&self) -> Elt {
        Elt::default()
    }

    pub fn one(&self) -> Elt {
        self.from_int(&Int::one())
    }

    pub fn from_i64(&self, n: i64) -> Elt {
        self.from_int(&Int::from(n))
    }

    pub fn from_int(&self, n: &Int) -> Elt {
        let mut c = self.0.cyclo.zero();
        c[0] = n.clone();
        self.constant(c)
    }

    /// Constant from power-basis coordinates of any length.
    pub fn constant(&self, coords: Vec<Int>) -> Elt {
        let c = self.0.cyclo.reduce(coords);
        let mut t = BTreeMap::new();
        t.insert(self.mono_one(), c);
        self.canon(t)
    }

    pub fn zeta(&self) -> Elt {
        self.constant(self.0.cyclo.zeta_pow(1))
    }

    pub fn zeta_pow(&self, e: u64) -> Elt {
        self.constant(self.0.cyclo.zeta_pow(e))
    }

    pub fn var(&self, j: usize) -> Elt {
        let mut m = self.mono_one();
        m.0[j] = 1;
        let mut t = BTreeMap::new();
        t.insert(m, self.0.cyclo.one());
        self.canon(t)
    }

    pub fn var_by_name(&self, name: &str) -> Option<Elt> {
        self.0.vars.iter().position(|v| v == name).map(|j| self.var(j))
    }

    /// Monomial with coefficient 1.
    pub fn monomial(&self, exps: &[u32]) -> Elt {
        let mut t = BTreeMap::new();
        t.insert(Mono(exps.to_vec()), self.0.cyclo.one());
        self.canon(t)
    }

    /// Reinterpret an element of a ring whose variables are a prefix of ours.
    pub fn coerce(&self, x: &Elt) -> Elt {
        let k = self.nvars();
        let mut t = BTreeMap::new();
        for (m, c) in &x.terms {
            let mut m = m.clone();
            assert!(m.0.len() <= k, "cannot coerce element with more variables");
            m.0.resize(k, 0);
            let mut c = c.clone();
            c.resize(self.0.cyclo.rank, Int::zero());
            add_into(&mut t, m, c);
        }
        self.canon(t)
    }

    /// The unique root of unity mu at level 0 (rho in case A and C, i in case B).
    pub fn mu(&self) -> Result<Elt> {
        let info = self.cyc_info().ok_or_else(|| Error::NotCyclotomic(self.to_string()))?;
        Ok(match info.case {
            Case::C => self.from_i64(-1),
            _ => self.zeta_pow(info.level_index()),
        })
    }

    /// mu_m, the generating root of unity at the ring's own level.
    pub fn mu_m(&self) -> Result<Elt> {
        let info = self.cyc_info().ok_or_else(|| Error::NotCyclotomic(self.to_string()))?;
        Ok(match info.case {
            Case::C => self.from_i64(-1),
            _ => self.zeta(),
        })
    }

    /// eta = mu - 1 (or -2 in case C); `level` selects eta_m = mu_m - 1.
    pub fn eta_level(&self, level: bool) -> Result<Elt> {
        let u = if level { self.mu_m()? } else { self.mu()? };
        Ok(self.sub(&u, &self.one()))
    }

    pub fn eta(&self) -> Result<Elt> {
        self.eta_level(false)
    }

    pub fn eta_m(&self) -> Result<Elt> {
        self.eta_level(true)
    }

    /// A primitive p-th root of unity acting as rho for degree-p theory:
    /// -1 when p = 2, a p-th power of zeta when p divides the order of zeta,
    /// and 1 when p = 0 in the ring.
    pub fn rho_for(&self, p: u64) -> Result<Elt> {
        if p == 2 {
            return Ok(self.from_i64(-1));
        }
        let n = self.0.cyclo.order;
        if n % p == 0 {
            return Ok(self.zeta_pow(n / p));
        }
        if (self.characteristic() % Int::from(p)).is_zero() && self.is_zero(&self.from_i64(p as i64)) {
            return Ok(self.one());
        }
        Err(Error::NotCyclotomic(format!("{self} has no primitive {p}-th root of unity")))
    }

    pub fn eta_for(&self, p: u64) -> Result<Elt> {
        Ok(self.sub(&self.rho_for(p)?, &self.one()))
    }

    /// Default p for rho-dependent constructions: the cyclotomic prime, or
    /// the characteristic when that is prime.
    pub fn default_p(&self) -> Option<u64> {
        if let Some(i) = self.cyc_info() {
            return Some(i.p);
        }
        let c = u64::try_from(&self.characteristic()).ok()?;
        let q = (2..=c).find(|q| c % q == 0)?;
        is_prime_power_of(c, q).then_some(q)
    }

    // ---- arithmetic ----------------------------------------------------

    fn reduce_const(&self, v: &mut Vec<Int>) {
        if let Some(l) = &self.0.lattice {
            if self.0.lattice_diag_only {
                for (i, x) in v.iter_mut().enumerate() {
                    if x.is_negative() || *x >= l[i][i] {
                        *x = x.mod_floor(&l[i][i]);
                    }
                }
            } else {
                for i in 0..l.len() {
                    let q = v[i].div_floor(&l[i][i]);
                    if !q.is_zero() {
                        for (x, y) in v.iter_mut().zip(&l[i]) {
                            *x -= &q * y;
                        }
                    }
                }
            }
        }
    }

    fn canon(&self, mut t: BTreeMap<Mono, Vec<Int>>) -> Elt {
        for &j in self.0.mod_order.iter().rev() {
            let m = self.0.moduli[j].as_ref().unwrap();
            if t.keys().all(|k| k.0[j] < m.degree) {
                continue;
            }
            let mut work: Vec<(Mono, Vec<Int>)> = Vec::new();
            let mut keep = BTreeMap::new();
            for (k, c) in std::mem::take(&mut t) {
                if k.0[j] >= m.degree {
                    work.push((k, c));
                } else {
                    keep.insert(k, c);
                }
            }
            t = keep;
            while let Some((mut k, c)) = work.pop() {
                k.0[j] -= m.degree;
                for (tm, tc) in &m.tail.terms {
                    let nm = k.add(tm);
                    let nc = self.0.cyclo.mul(&c, tc);
                    if nm.0[j] >= m.degree {
                        work.push((nm, nc));
                    } else {
                        add_into(&mut t, nm, nc);
                    }
                }
            }
        }
        t.retain(|_, c| {
            self.reduce_const(c);
            !Cyclo::is_zero(c)
        });
        Elt { terms: t }
    }

    pub fn add(&self, a: &Elt, b: &Elt) -> Elt {
        let mut t = a.terms.clone();
        for (m, c) in &b.terms {
            add_into(&mut t, m.clone(), c.clone());
        }
        t.retain(|_, c| {
            self.reduce_const(c);
            !Cyclo::is_zero(c)
        });
        Elt { terms: t }
    }

    pub fn neg(&self, a: &Elt) -> Elt {
        let t = a.terms.iter().map(|(m, c)| (m.clone(), c.iter().map(|x| -x).collect())).collect();
        self.canon(t)
    }

    pub fn sub(&self, a: &Elt, b: &Elt) -> Elt {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        if a.is_zero() || b.is_zero() {
            return Elt::default();
        }
        let mut t = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                add_into(&mut t, ma.add(mb), self.0.cyclo.mul(ca, cb));
            }
        }
        self.canon(t)
    }

    pub fn scale(&self, a: &Elt, n: &Int) -> Elt {
        let t = a.terms.iter().map(|(m, c)| (m.clone(), c.iter().map(|x| x * n).collect())).collect();
        self.canon(t)
    }

    pub fn pow(&self, a: &Elt, mut e: u64) -> Elt {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a Elt>) -> Elt {
        let mut t = BTreeMap::new();
        for x in xs {
            for (m, c) in &x.terms {
                add_into(&mut t, m.clone(), c.clone());
            }
        }
        self.canon(t)
    }

    pub fn is_zero(&self, a: &Elt) -> bool {
        a.is_zero()
    }

    pub fn is_one(&self, a: &Elt) -> bool {
        *a == self.one()
    }

    /// Coordinates of a constant element, or None if variables occur.
    pub fn as_constant(&self, a: &Elt) -> Option<Vec<Int>> {
        match a.terms.len() {
            0 => Some(self.0.cyclo.zero()),
            1 => {
                let (m, c) = a.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Integer value of an element lying in Z (constant with only the 1-coordinate).
    pub fn as_integer(&self, a: &Elt) -> Option<Int> {
        let c = self.as_constant(a)?;
        c[1..].iter().all(|x| x.is_zero()).then(|| c[0].clone())
    }

    /// Apply zeta -> zeta^k to all coefficients.
    pub fn galois_constants(&self, a: &Elt, k: u64) -> Elt {
        let t = a.terms.iter().map(|(m, c)| (m.clone(), self.0.cyclo.galois(c, k))).collect();
        self.canon(t)
    }

    /// Coefficient of a monomial in the given variables (others fixed at the
    /// exponents in `mono`), returned as a constant element.
    pub fn coeff(&self, a: &Elt, mono: &[u32]) -> Elt {
        match a.terms.get(&Mono(mono.to_vec())) {
            Some(c) => self.constant(c.clone()),
            None => self.zero(),
        }
    }

    /// Collect an element as a polynomial in variable j over the other variables.
    pub fn coefficients_in(&self, a: &Elt, j: usize) -> Vec<Elt> {
        let mut out: Vec<BTreeMap<Mono, Vec<Int>>> = Vec::new();
        for (m, c) in &a.terms {
            let e = m.0[j] as usize;
            if out.len() <= e {
                out.resize(e + 1, BTreeMap::new());
            }
            let mut m = m.clone();
            m.0[j] = 0;
            out[e].insert(m, c.clone());
        }
        out.into_iter().map(|terms| Elt { terms }).collect()
    }

    /// Substitute elements of `target` for the variables and `zeta_image` for
    /// zeta. The caller is responsible for well-definedness.
    pub fn map_to(&self, target: &Ring, zeta_image: &Elt, var_images: &[Elt], x: &Elt) -> Elt {
        let zpows: Vec<Elt> = (0..self.0.cyclo.rank as u64).map(|i| target.pow(zeta_image, i)).collect();
        let mut acc = target.zero();
        for (m, c) in &x.terms {
            let mut coef = target.zero();
            for (i, ci) in c.iter().enumerate() {
                if !ci.is_zero() {
                    coef = target.add(&coef, &target.scale(&zpows[i], ci));
                }
            }
            let mut term = coef;
            for (j, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = target.mul(&term, &target.pow(&var_images[j], e as u64));
                }
            }
            acc = target.add(&acc, &term);
        }
        acc
    }

    /// Total degree in the free variables.
    pub fn free_degree(&self, a: &Elt) -> u32 {
        let free = self.free_vars();
        a.terms.keys().map(|m| free.iter().map(|&j| m.0[j]).sum()).max().unwrap_or(0)
    }
}

impl RingData {
    fn clone_data(&self, desc: RingDescriptor) -> RingData {
        RingData {
            desc,
            cyclo: self.cyclo.clone(),
            cyc: self.cyc,
            lattice: self.lattice.clone(),
            lattice_diag_only: self.lattice_diag_only,
            vars: self.vars.clone(),
            moduli: self.moduli.clone(),
            mod_order: self.mod_order.clone(),
            pinned: self.pinned.clone(),
            block: OnceLock::new(),
            residues: OnceLock::new(),
        }
    }
}

fn is_prime_power_of(mut c: u64, q: u64) -> bool {
    while c % q == 0 {
        c /= q;
    }
    c == 1
}

fn diag_only(l: &[Vec<Int>]) -> bool {
    l.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
}

fn pad_elt(e: &mut Elt, k: usize) {
    let t = std::mem::take(&mut e.terms);
    e.terms = t.into_iter().map(|(mut m, c)| { m.0.resize(k, 0); (m, c) }).collect();
}

fn add_into(t: &mut BTreeMap<Mono, Vec<Int>>, m: Mono, c: Vec<Int>) {
    match t.get_mut(&m) {
        Some(v) => {
            for (x, y) in v.iter_mut().zip(c) {
                *x += y;
            }
        }
        None => {
            t.insert(m, c);
        }
    }
}

#[cfg(test)]
mod tests;
