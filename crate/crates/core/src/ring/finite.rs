//! Flattening of the bounded part B to Z^n / Lambda, residue fields of finite
//! B, unit tests, inverses and eta-adic valuations.

use super::{cyclo::Cyclo, Elt, Mono, Ring};
use crate::error::{Error, Result};
use crate::linalg::elim;
use crate::linalg::fq::{Fq, FqAlg};
use crate::linalg::zlattice::{self, Hnf};
use crate::Int;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Coordinates of B = C[bounded vars]/(moduli) as blocks of d integers per
/// bounded monomial.
#[derive(Clone, Debug)]
pub(crate) struct Block {
    bounded: Vec<usize>,
    degs: Vec<u32>,
    monos: usize,
    n: usize,
}

/// A residue field k = B / m together with the linear residue map.
#[derive(Clone, Debug)]
pub struct ResidueField {
    pub fq: Fq,
    /// digits[i] = residue of the i-th flattened basis vector.
    digits: Vec<Vec<u32>>,
}

impl ResidueField {
    pub fn q(&self) -> u32 {
        self.fq.q
    }
}

const ENUM_CAP: u64 = 1 << 20;

impl Ring {
    pub(crate) fn block(&self) -> &Block {
        self.0.block.get_or_init(|| {
            let bounded: Vec<usize> = self.0.mod_order.clone();
            let degs: Vec<u32> = bounded.iter().map(|&j| self.0.moduli[j].as_ref().unwrap().degree).collect();
            let monos = degs.iter().map(|&e| e as usize).product::<usize>();
            Block { n: monos * self.0.cyclo.rank, bounded, degs, monos }
        })
    }

    /// Z-rank of the flattened bounded part.
    pub fn flat_dim(&self) -> usize {
        self.block().n
    }

    fn mono_index(&self, m: &Mono) -> Option<usize> {
        let b = self.block();
        for j in self.free_vars() {
            if m.0[j] != 0 {
                return None;
            }
        }
        let mut idx = 0;
        for (k, &j) in b.bounded.iter().enumerate().rev() {
            idx = idx * b.degs[k] as usize + m.0[j] as usize;
        }
        Some(idx)
    }

    fn index_mono(&self, mut idx: usize) -> Mono {
        let b = self.block();
        let mut m = vec![0; self.nvars()];
        for (k, &j) in b.bounded.iter().enumerate() {
            m[j] = (idx % b.degs[k] as usize) as u32;
            idx /= b.degs[k] as usize;
        }
        Mono(m)
    }

    /// Coordinates of an element of B. Panics if a free variable occurs.
    pub fn flatten(&self, x: &Elt) -> Vec<Int> {
        let d = self.0.cyclo.rank;
        let mut v = vec![Int::zero(); self.flat_dim()];
        for (m, c) in &x.terms {
            let idx = self.mono_index(m).expect("flatten: element involves a free variable");
            v[idx * d..(idx + 1) * d].clone_from_slice(c);
        }
        v
    }

    pub fn unflatten(&self, v: &[Int]) -> Elt {
        let d = self.0.cyclo.rank;
        let mut t = BTreeMap::new();
        for idx in 0..self.block().monos {
            let c = &v[idx * d..(idx + 1) * d];
            if !Cyclo::is_zero(c) {
                t.insert(self.index_mono(idx), c.to_vec());
            }
        }
        self.canon(t)
    }

    /// Rows spanning Lambda (empty when the constants are Z[zeta]).
    pub fn flat_lattice(&self) -> Vec<Vec<Int>> {
        let d = self.0.cyclo.rank;
        let n = self.flat_dim();
        let Some(l) = &self.0.lattice else { return vec![] };
        let mut rows = Vec::new();
        for idx in 0..self.block().monos {
            for r in l {
                let mut row = vec![Int::zero(); n];
                row[idx * d..(idx + 1) * d].clone_from_slice(r);
                rows.push(row);
            }
        }
        rows
    }

    /// Images of the flattened unit vectors.
    pub fn flat_basis(&self) -> Vec<Elt> {
        let n = self.flat_dim();
        (0..n)
            .map(|i| {
                let mut v = vec![Int::zero(); n];
                v[i] = Int::one();
                self.unflatten(&v)
            })
            .collect()
    }

    /// Box sizes of canonical coordinates of a finite B.
    fn flat_box(&self) -> Option<Vec<Int>> {
        let l = self.0.lattice.as_ref()?;
        let d = self.0.cyclo.rank;
        Some((0..self.flat_dim()).map(|i| l[i % d][i % d].clone()).collect())
    }

    /// Number of elements of B when finite.
    pub fn block_size(&self) -> Option<Int> {
        Some(self.flat_box()?.iter().product())
    }

    /// All elements of a finite ring, in a fixed order.
    pub fn elements(&self) -> Result<Vec<Elt>> {
        let bx = self.flat_box().filter(|_| self.is_finite()).ok_or_else(|| Error::UnsupportedBase(format!("{self} is infinite")))?;
        let total = bx.iter().product::<Int>().to_u64().filter(|&t| t <= ENUM_CAP).ok_or_else(|| {
            Error::UnsupportedBase(format!("{self} is too large to enumerate"))
        })?;
        let bx: Vec<u64> = bx.iter().map(|x| x.to_u64().unwrap()).collect();
        Ok((0..total)
            .map(|mut k| {
                let v: Vec<Int> = bx.iter().map(|&b| { let c = k % b; k /= b; Int::from(c) }).collect();
                self.unflatten(&v)
            })
            .collect())
    }

    /// Multiplication by x on flattened B, as an integer matrix whose
    /// column j is the image of basis vector j.
    pub fn mult_matrix_z(&self, x: &Elt) -> Vec<Vec<Int>> {
        let cols: Vec<Vec<Int>> = self.flat_basis().iter().map(|b| self.flatten(&self.mul(x, b))).collect();
        elim::transpose(&cols)
    }

    fn hnf_mod(&self, extra: &[Vec<Int>], tracked: &[Vec<Int>]) -> Hnf {
        let mut untracked = self.flat_lattice();
        untracked.extend(extra.iter().cloned());
        let c = self.characteristic();
        Hnf::new(tracked, &untracked, (!c.is_zero()).then_some(&c), self.flat_dim())
    }

    /// Residue fields of B (finite constants only).
    pub fn residues(&self) -> Result<&[ResidueField]> {
        self.0
            .residues
            .get_or_init(|| self.compute_residues())
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(|e| e.clone())
    }

    fn compute_residues(&self) -> Result<Vec<ResidueField>> {
        let ch = self.characteristic();
        if ch.is_zero() {
            return Err(Error::UnsupportedBase(format!("{self} has characteristic zero")));
        }
        let ch = ch.to_u64().ok_or_else(|| Error::UnsupportedBase("characteristic too large".into()))?;
        let n = self.flat_dim();
        let mut out = Vec::new();
        let mut c = ch;
        let mut ell = 2;
        while c > 1 {
            if c % ell != 0 {
                ell += 1;
                continue;
            }
            while c % ell == 0 {
                c /= ell;
            }
            if ell > u16::MAX as u64 {
                return Err(Error::UnsupportedBase(format!("prime {ell} too large for residue tables")));
            }
            let l = ell as u32;
            let li = Int::from(ell);
            let scaled: Vec<Vec<Int>> = (0..n).map(|i| { let mut r = vec![Int::zero(); n]; r[i] = li.clone(); r }).collect();
            let h = self.hnf_mod(&scaled, &[]);
            let free: Vec<usize> = h.pivots.iter().enumerate().filter(|(k, &p)| h.rows[*k][p] == li).map(|(_, &p)| p).collect();
            let fl = Fq::prime(l);
            let bar = |v: &[Int]| -> Vec<u16> {
                let (r, _) = h.reduce(v);
                free.iter().map(|&i| r[i].mod_floor(&li).to_u16().unwrap()).collect()
            };
            let dim = free.len();
            let basis: Vec<Elt> = free.iter().map(|&i| {
                let mut v = vec![Int::zero(); n];
                v[i] = Int::one();
                self.unflatten(&v)
            }).collect();
            let mut table = vec![0u16; dim * dim * dim];
            for a in 0..dim {
                for b in a..dim {
                    let pr = bar(&self.flatten(&self.mul(&basis[a], &basis[b])));
                    table[(a * dim + b) * dim..(a * dim + b + 1) * dim].copy_from_slice(&pr);
                    table[(b * dim + a) * dim..(b * dim + a + 1) * dim].copy_from_slice(&pr);
                }
            }
            let alg = FqAlg { fq: fl.clone(), dim, one: bar(&self.flatten(&self.one())), table };
            let nil = alg.nilradical();
            let (q, keep, nil_rref) = alg.quotient(&nil);
            let to_q = |v: &[u16]| -> Vec<u16> {
                let r = elim::reduce_by(&fl, &nil_rref, v);
                keep.iter().map(|&c| r[c]).collect()
            };
            for comp in q.components()? {
                let e = comp.idempotent;
                let span: Vec<Vec<u16>> = (0..q.dim).map(|i| {
                    let mut b = vec![0u16; q.dim];
                    b[i] = 1;
                    q.mul(&e, &b)
                }).collect();
                let kb = elim::rref(&fl, span, q.dim);
                let coords = |v: &[u16]| -> Vec<u32> { kb.pivots.iter().map(|&p| v[p] as u32).collect() };
                let from_coords = |c: &[u32]| -> Vec<u16> {
                    let mut v = vec![0u16; q.dim];
                    for (k, &ck) in c.iter().enumerate() {
                        for (x, &y) in v.iter_mut().zip(&kb.rows[k]) {
                            *x = ((*x as u32 + ck * y as u32) % l) as u16;
                        }
                    }
                    v
                };
                let f = Fq::from_mul(l, comp.degree as u32, &coords(&e), |a, b| coords(&q.mul(&from_coords(a), &from_coords(b))))?;
                let digits = (0..n).map(|i| {
                    let mut v = vec![Int::zero(); n];
                    v[i] = Int::one();
                    coords(&q.mul(&e, &to_q(&bar(&v))))
                }).collect();
                out.push(ResidueField { fq: f, digits });
            }
        }
        Ok(out)
    }

    /// Residue of an element of B in the k-th residue field.
    pub fn residue(&self, x: &Elt, k: usize) -> Result<u16> {
        let rf = &self.residues()?[k];
        let v = self.flatten(x);
        Ok(residue_code(rf, &v))
    }

    pub fn is_local(&self) -> Result<bool> {
        Ok(self.residues()?.len() == 1)
    }

    fn split_free(&self, x: &Elt) -> (Elt, Vec<Elt>) {
        let free = self.free_vars();
        let mut groups: BTreeMap<Vec<u32>, BTreeMap<Mono, Vec<Int>>> = BTreeMap::new();
        for (m, c) in &x.terms {
            let key: Vec<u32> = free.iter().map(|&j| m.0[j]).collect();
            let mut mb = m.clone();
            for &j in &free {
                mb.0[j] = 0;
            }
            groups.entry(key).or_default().insert(mb, c.clone());
        }
        let zero = vec![0; free.len()];
        let c0 = groups.remove(&zero).map(|terms| Elt { terms }).unwrap_or_default();
        (c0, groups.into_values().map(|terms| Elt { terms }).collect())
    }

    fn block_is_nilpotent(&self, x: &Elt) -> bool {
        // Nilpotency index is at most the length (finite) or Q-rank (free) of B.
        let bound = match self.block_size() {
            Some(s) => s.bits() as u64 + 1,
            None => self.flat_dim() as u64 + 1,
        };
        let mut cur = x.clone();
        let mut e = 1u64;
        while e < bound {
            if cur.is_zero() {
                return true;
            }
            cur = self.mul(&cur, &cur);
            e *= 2;
        }
        cur.is_zero()
    }

    fn block_is_unit(&self, x: &Elt) -> Result<bool> {
        if x.is_zero() {
            return Ok(self.flat_dim() == 0);
        }
        if self.0.lattice.is_some() {
            let v = self.flatten(x);
            return Ok(self.residues()?.iter().all(|rf| residue_code(rf, &v) != 0));
        }
        if self.block().bounded.is_empty() {
            let c = self.as_constant(x).unwrap();
            return Ok(self.0.cyclo.norm(&c).abs().is_one());
        }
        Ok(zlattice::det(&self.mult_matrix_z(x)).abs().is_one())
    }

    pub fn is_unit(&self, x: &Elt) -> Result<bool> {
        let (c0, rest) = self.split_free(x);
        if !self.block_is_unit(&c0)? {
            return Ok(false);
        }
        Ok(rest.iter().all(|r| self.block_is_nilpotent(r)))
    }

    fn block_inverse(&self, x: &Elt) -> Option<Elt> {
        if !self.block_is_unit(x).ok()? {
            return None;
        }
        if self.0.lattice.is_none() && self.block().bounded.is_empty() {
            let c = self.as_constant(x).unwrap();
            let adj = self.0.cyclo.adj(&c);
            let n = self.0.cyclo.norm(&c);
            return Some(self.constant(adj.into_iter().map(|a| a * &n).collect()));
        }
        if let Ok(res) = self.residues() {
            if res.len() == 1 {
                // Local: x^(q-1) = 1 - n with n nilpotent.
                let y0 = self.pow(x, res[0].q() as u64 - 2);
                let nil = self.sub(&self.one(), &self.mul(x, &y0));
                let mut series = self.one();
                let mut pw = nil.clone();
                while !pw.is_zero() {
                    series = self.add(&series, &pw);
                    pw = self.mul(&pw, &nil);
                }
                return Some(self.mul(&y0, &series));
            }
        }
        let cols: Vec<Vec<Int>> = self.flat_basis().iter().map(|b| self.flatten(&self.mul(x, b))).collect();
        let h = self.hnf_mod(&[], &cols);
        let y = h.solve(&self.flatten(&self.one()))?;
        Some(self.unflatten(&y))
    }

    /// Two-sided inverse, or None for non-units.
    pub fn inverse(&self, x: &Elt) -> Option<Elt> {
        let (c0, rest) = self.split_free(x);
        let inv0 = self.block_inverse(&c0)?;
        if rest.is_empty() {
            return Some(inv0);
        }
        if !self.is_unit(x).ok()? {
            return None;
        }
        // x = c0 (1 + n) with n nilpotent.
        let n = self.mul(&inv0, &self.sub(x, &c0));
        let neg = self.neg(&n);
        let mut series = self.one();
        let mut pw = neg.clone();
        let mut guard = 0;
        while !pw.is_zero() {
            series = self.add(&series, &pw);
            pw = self.mul(&pw, &neg);
            guard += 1;
            if guard > 4096 {
                return None;
            }
        }
        Some(self.mul(&inv0, &series))
    }

    /// eta-adic valuation by repeated exact division (None for zero).
    /// Applied coefficientwise with the minimum over coefficients.
    pub fn eta_valuation(&self, x: &Elt) -> Result<Option<u32>> {
        let eta = self.eta()?;
        self.require_characteristic_zero()?;
        let e = self.as_constant(&eta).unwrap();
        let mut best: Option<u32> = None;
        for c in x.terms.values() {
            let mut cur = c.clone();
            let mut v = 0;
            while let Some(q) = self.0.cyclo.div_exact(&cur, &e) {
                cur = q;
                v += 1;
                if v > 64 {
                    return Err(Error::Internal("eta valuation exceeds 64 iterations".into()));
                }
            }
            best = Some(best.map_or(v, |b| b.min(v)));
        }
        Ok(best)
    }

    /// Valuation at eta_m (the ring's own level), via synthetic division.
    pub fn eta_m_valuation(&self, x: &Elt) -> Result<Option<u32>> {
        self.eta()?;
        self.require_characteristic_zero()?;
        if self.0.cyclo.order == 2 {
            // case C: eta = -2
            return Ok(x.terms.values().map(|c| c[0].trailing_zeros().unwrap_or(0) as u32).min());
        }
        Ok(x.terms.values().map(|c| self.0.cyclo.zeta_valuation(c, 64 * 64).unwrap()).min())
    }

    /// eta-valuation computed as floor(v_m / e); agrees with `eta_valuation`.
    pub fn eta_valuation_fast(&self, x: &Elt) -> Result<Option<u32>> {
        let e = self.cyc_info().unwrap().level_index() as u32;
        Ok(self.eta_m_valuation(x)?.map(|v| v / e))
    }

    fn require_characteristic_zero(&self) -> Result<()> {
        if self.0.lattice.is_some() {
            return Err(Error::UnsupportedBase(format!("valuation needs characteristic zero constants, got {self}")));
        }
        Ok(())
    }

    /// Exact quotient of constants x / y in Z[zeta], if it exists.
    pub fn div_exact(&self, x: &Elt, y: &Elt) -> Option<Elt> {
        self.require_characteristic_zero().ok()?;
        let yc = self.as_constant(y)?;
        let mut t = BTreeMap::new();
        for (m, c) in &x.terms {
            t.insert(m.clone(), self.0.cyclo.div_exact(c, &yc)?);
        }
        Some(self.canon(t))
    }

    /// Absolute norm of a constant of Z[zeta] (product over all conjugates).
    pub fn cyclo_norm(&self, x: &Elt) -> Option<Int> {
        let c = self.as_constant(x)?;
        Some(self.0.cyclo.norm(&c))
    }
}

fn residue_code(rf: &ResidueField, v: &[Int]) -> u16 {
    let ell = rf.fq.ell;
    let li = Int::from(ell);
    let mut acc = vec![0u32; rf.fq.deg as usize];
    for (x, d) in v.iter().zip(&rf.digits) {
        let c = x.mod_floor(&li).to_u32().unwrap();
        if c != 0 {
            for (a, &b) in acc.iter_mut().zip(d) {
                *a = (*a + c * b) % ell;
            }
        }
    }
    rf.fq.from_digits(&acc)
}
