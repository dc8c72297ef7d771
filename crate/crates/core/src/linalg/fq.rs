//! Small finite fields F_q (q <= 4096) as log/exp tables, and commutative
//! finite-dimensional algebras over them given by structure constants.

use super::elim::{self, Scalars};
use crate::error::{Error, Result};

pub const MAX_Q: u32 = 4096;

/// F_q with elements coded in base ell by their coordinates in a fixed
/// F_ell-basis; code 0 is zero.
#[derive(Clone, Debug)]
pub struct Fq {
    pub ell: u32,
    pub deg: u32,
    pub q: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl Fq {
    /// Build from a multiplication oracle on coordinate vectors of length `deg`.
    pub fn from_mul(ell: u32, deg: u32, one: &[u32], mul: impl Fn(&[u32], &[u32]) -> Vec<u32>) -> Result<Fq> {
        let q = ell.checked_pow(deg).filter(|&q| q <= MAX_Q).ok_or_else(|| {
            Error::UnsupportedBase(format!("residue field {ell}^{deg} exceeds {MAX_Q}"))
        })?;
        let decode = |c: u32| -> Vec<u32> {
            let mut c = c;
            (0..deg).map(|_| { let d = c % ell; c /= ell; d }).collect()
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &d| acc * ell + d) };
        let one_code = encode(one);
        for g in 1..q {
            let gv = decode(g);
            let mut exp = vec![0u16; (q - 1) as usize];
            let mut cur = one.to_vec();
            let mut ok = true;
            for (k, slot) in exp.iter_mut().enumerate() {
                let c = encode(&cur);
                if k > 0 && c == one_code {
                    ok = false;
                    break;
                }
                *slot = c as u16;
                cur = mul(&cur, &gv);
            }
            if ok && encode(&cur) == one_code {
                let mut log = vec![0u16; q as usize];
                for (k, &c) in exp.iter().enumerate() {
                    log[c as usize] = k as u16;
                }
                return Ok(Fq { ell, deg, q, exp, log });
            }
        }
        Err(Error::Internal("no primitive element: algebra is not a field".into()))
    }

    pub fn prime(ell: u32) -> Fq {
        Fq::from_mul(ell, 1, &[1], |a, b| vec![a[0] * b[0] % ell]).expect("prime field")
    }

    pub fn one(&self) -> u16 {
        self.exp[0]
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        if self.deg == 1 {
            return ((a as u32 + b as u32) % self.ell) as u16;
        }
        let (mut a, mut b) = (a as u32, b as u32);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.deg {
            out += ((a % self.ell + b % self.ell) % self.ell) * place;
            a /= self.ell;
            b /= self.ell;
            place *= self.ell;
        }
        out as u16
    }

    pub fn neg(&self, a: u16) -> u16 {
        let mut a = a as u32;
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.deg {
            out += ((self.ell - a % self.ell) % self.ell) * place;
            a /= self.ell;
            place *= self.ell;
        }
        out as u16
    }

    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u32 + self.log[b as usize] as u32) % (self.q - 1);
        self.exp[e as usize]
    }

    pub fn inv(&self, a: u16) -> Option<u16> {
        (a != 0).then(|| self.exp[((self.q - 1 - self.log[a as usize] as u32) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if e == 0 {
            return self.one();
        }
        if a == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[l as usize]
    }

    pub fn from_int(&self, n: i64) -> u16 {
        let r = n.rem_euclid(self.ell as i64) as u32;
        let mut acc = 0u16;
        for _ in 0..r {
            acc = self.add(acc, self.one());
        }
        acc
    }

    /// Coordinates of a code in the F_ell basis.
    pub fn digits(&self, c: u16) -> Vec<u32> {
        let mut c = c as u32;
        (0..self.deg).map(|_| { let d = c % self.ell; c /= self.ell; d }).collect()
    }

    pub fn from_digits(&self, v: &[u32]) -> u16 {
        v.iter().rev().fold(0u32, |acc, &d| acc * self.ell + d % self.ell) as u16
    }
}

impl Scalars for Fq {
    type E = u16;
    fn zero(&self) -> u16 { 0 }
    fn one(&self) -> u16 { Fq::one(self) }
    fn add(&self, a: &u16, b: &u16) -> u16 { Fq::add(self, *a, *b) }
    fn sub(&self, a: &u16, b: &u16) -> u16 { Fq::sub(self, *a, *b) }
    fn mul(&self, a: &u16, b: &u16) -> u16 { Fq::mul(self, *a, *b) }
    fn neg(&self, a: &u16) -> u16 { Fq::neg(self, *a) }
    fn is_zero(&self, a: &u16) -> bool { *a == 0 }
    fn unit_inverse(&self, a: &u16) -> Option<u16> { self.inv(*a) }
}

/// A commutative algebra over F_q with structure constants
/// table[(i*dim + j)*dim + k] = coefficient of e_k in e_i e_j.
#[derive(Clone, Debug)]
pub struct FqAlg {
    pub fq: Fq,
    pub dim: usize,
    pub table: Vec<u16>,
    pub one: Vec<u16>,
}

/// One component e*A of the reduced quotient of an algebra.
#[derive(Clone, Debug)]
pub struct Component {
    /// Idempotent, in coordinates of the reduced quotient.
    pub idempotent: Vec<u16>,
    /// Degree of the component field over F_q.
    pub degree: usize,
}

impl FqAlg {
    pub fn mul(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        let f = &self.fq;
        let n = self.dim;
        let mut out = vec![0u16; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = f.mul(x, y);
                let row = &self.table[(i * n + j) * n..(i * n + j + 1) * n];
                for (k, &c) in row.iter().enumerate() {
                    if c != 0 {
                        out[k] = f.add(out[k], f.mul(xy, c));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[u16], mut e: u64) -> Vec<u16> {
        let mut base = a.to_vec();
        let mut acc = self.one.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn basis_vec(&self, i: usize) -> Vec<u16> {
        let mut v = vec![0u16; self.dim];
        v[i] = self.fq.one();
        v
    }

    /// Matrix (rows = output coordinates) of x -> x^(q^j).
    fn frobenius_matrix(&self, j: u32) -> Vec<Vec<u16>> {
        let q = self.fq.q as u64;
        let cols: Vec<Vec<u16>> = (0..self.dim)
            .map(|i| {
                let mut v = self.basis_vec(i);
                for _ in 0..j {
                    v = self.pow(&v, q);
                }
                v
            })
            .collect();
        (0..self.dim).map(|r| (0..self.dim).map(|c| cols[c][r]).collect()).collect()
    }

    /// Nilradical basis (as kernel of a high Frobenius power).
    pub fn nilradical(&self) -> Vec<Vec<u16>> {
        let mut j = 0;
        let mut qj: u64 = 1;
        while qj < self.dim as u64 {
            qj *= self.fq.q as u64;
            j += 1;
        }
        let m = self.frobenius_matrix(j.max(1));
        elim::kernel(&self.fq, &m, self.dim).expect("field kernel")
    }

    /// Quotient by a subspace that is an ideal: returns the quotient algebra
    /// and the projection on coordinates.
    pub fn quotient(&self, ideal: &[Vec<u16>]) -> (FqAlg, Vec<usize>, elim::Rref<u16>) {
        let f = &self.fq;
        let r = elim::rref(f, ideal.to_vec(), self.dim);
        let keep: Vec<usize> = (0..self.dim).filter(|c| !r.pivots.contains(c)).collect();
        let project = |v: &[u16]| -> Vec<u16> {
            let v = elim::reduce_by(f, &r, v);
            keep.iter().map(|&c| v[c]).collect()
        };
        let d = keep.len();
        let mut table = vec![0u16; d * d * d];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                let p = project(&self.mul(&self.basis_vec(i), &self.basis_vec(j)));
                table[(a * d + b) * d..(a * d + b + 1) * d].copy_from_slice(&p);
            }
        }
        let one = project(&self.one);
        (FqAlg { fq: f.clone(), dim: d, table, one }, keep, r)
    }

    /// Fixed space of Frobenius x -> x^q.
    pub fn frobenius_fixed(&self) -> Vec<Vec<u16>> {
        let f = &self.fq;
        let mut m = self.frobenius_matrix(1);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = f.sub(row[i], f.one());
        }
        elim::kernel(f, &m, self.dim).expect("field kernel")
    }

    /// Components of a reduced algebra: primitive idempotents with the
    /// degrees of the component fields.
    pub fn components(&self) -> Result<Vec<Component>> {
        let f = &self.fq;
        let fixed = self.frobenius_fixed();
        let c = fixed.len();
        let total = (f.q as u64).checked_pow(c as u32).filter(|&t| t <= 1 << 16).ok_or_else(|| {
            Error::UnsupportedBase(format!("{c} components over F_{} is beyond enumeration", f.q))
        })?;
        // The fixed subalgebra is F_q^c; its idempotents are the 0/1 vectors.
        let mut idem: Vec<Vec<u16>> = Vec::new();
        let prime_digits = |mut k: u64| -> Vec<u16> {
            (0..c).map(|_| { let d = (k % f.q as u64) as u16; k /= f.q as u64; d }).collect()
        };
        for k in 1..total {
            let coeffs = prime_digits(k);
            let mut v = vec![0u16; self.dim];
            for (b, &cf) in fixed.iter().zip(&coeffs) {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.add(*x, f.mul(cf, y));
                }
            }
            if self.mul(&v, &v) == v {
                idem.push(v);
            }
        }
        let is_prim = |e: &Vec<u16>| {
            idem.iter().all(|g| g == e || self.mul(g, e) != *g)
        };
        let prims: Vec<Vec<u16>> = idem.iter().filter(|e| is_prim(e)).cloned().collect();
        if prims.len() != c {
            return Err(Error::Internal(format!("found {} primitive idempotents, expected {c}", prims.len())));
        }
        Ok(prims
            .into_iter()
            .map(|e| {
                let span: Vec<Vec<u16>> = (0..self.dim).map(|i| self.mul(&e, &self.basis_vec(i))).collect();
                let degree = elim::rank(f, span, self.dim);
                Component { idempotent: e, degree }
            })
            .collect())
    }
}
