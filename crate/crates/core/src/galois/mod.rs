//! Free commutative algebras with a cyclic group action, given by structure
//! constants, and the operations on cyclic Galois extensions.
//!
//! Coordinates are column vectors over the base ring. `table[i*n + j]` holds
//! the coordinates of e_i e_j, and column j of `sigma` is sigma(e_j). The
//! group is cyclic, generated by the designated `sigma`, of order `rank`.

pub mod cor;
pub mod iso;
pub mod normal;
pub mod ops;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::ring::{Elt, Ring};
use serde::Serialize;

pub use cor::{corestrict, Descent};
pub use iso::{find_normal_basis, is_split, isomorphism};
pub use normal::{find_normal_generator, group_ring_level, GroupRingLevel, NormalGenerator};
pub use ops::{fixed_ring, idempotent_family, induce, inverse, power, product, split_extension, tensor, FixedRing, IdempotentFamily};

/// Rank above which structural self-checks are sampled rather than exhaustive.
const FULL_CHECK_RANK: usize = 16;

/// Default cap on extension ranks; CYCLOTOME_MAX_RANK overrides it.
pub const DEFAULT_MAX_RANK: usize = 16;
/// Default cap on tensor intermediates.
pub const DEFAULT_MAX_TENSOR: usize = 256;

pub fn max_rank() -> usize {
    std::env::var("CYCLOTOME_MAX_RANK").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_MAX_RANK)
}

pub fn max_tensor() -> usize {
    max_rank().max(DEFAULT_MAX_TENSOR)
}

#[derive(Clone, Debug)]
pub struct GaloisAlgebra {
    pub base: Ring,
    pub rank: usize,
    pub table: Vec<Vec<Elt>>,
    pub one: Vec<Elt>,
    pub sigma: Mat,
}

/// Outcome of the twisted-group-ring test.
#[derive(Clone, Debug, Serialize)]
pub struct GaloisCertificate {
    pub rank: usize,
    pub galois: bool,
    /// Determinant of Delta(S/R, G) -> End_R(S), when small enough to print.
    pub det: Option<String>,
    /// Ranks modulo each residue field (finite bases).
    pub residue_ranks: Option<Vec<usize>>,
}

impl GaloisAlgebra {
    /// Checks that sigma is a ring automorphism and the table is a
    /// commutative associative unital multiplication.
    pub fn new(base: Ring, table: Vec<Vec<Elt>>, one: Vec<Elt>, sigma: Mat) -> Result<GaloisAlgebra> {
        let rank = one.len();
        if table.len() != rank * rank || sigma.len() != rank {
            return Err(Error::Internal("structure constant shape".into()));
        }
        let s = GaloisAlgebra { base, rank, table, one, sigma };
        s.check_structure()?;
        Ok(s)
    }

    fn check_structure(&self) -> Result<()> {
        let n = self.rank;
        let e: Vec<Vec<Elt>> = (0..n).map(|i| self.basis(i)).collect();
        for i in 0..n {
            if self.mul(&self.one, &e[i]) != e[i] {
                return Err(Error::CertFailed(format!("1 is not an identity on e_{i}")));
            }
        }
        let image: Vec<Vec<Elt>> = (0..n).map(|i| self.apply(&self.sigma, &e[i])).collect();
        if self.apply(&self.sigma, &self.one) != self.one {
            return Err(Error::CertFailed("sigma(1) != 1".into()));
        }
        for i in 0..n {
            for j in i..n {
                let ij = self.mul(&e[i], &e[j]);
                if ij != self.mul(&e[j], &e[i]) {
                    return Err(Error::CertFailed("multiplication is not commutative".into()));
                }
                if self.apply(&self.sigma, &ij) != self.mul(&image[i], &image[j]) {
                    return Err(Error::CertFailed(format!("sigma is not multiplicative on e_{i} e_{j}")));
                }
            }
        }
        if n <= FULL_CHECK_RANK {
            for i in 0..n {
                for j in 0..n {
                    let ij = self.mul(&e[i], &e[j]);
                    for k in j..n {
                        if self.mul(&ij, &e[k]) != self.mul(&e[i], &self.mul(&e[j], &e[k])) {
                            return Err(Error::CertFailed(format!("associativity fails on e_{i} e_{j} e_{k}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// S = base[x]/(x^n - sum tail_k x^k) with sigma(x) given in the power basis.
    pub fn from_monic(base: &Ring, tail: &[Elt], sigma_x: &[Elt]) -> Result<GaloisAlgebra> {
        let n = tail.len();
        let z = base.zero();
        // Powers x^0 .. x^(2n-2) in the power basis.
        let mut pows: Vec<Vec<Elt>> = Vec::with_capacity(2 * n);
        for k in 0..n {
            let mut v = vec![z.clone(); n];
            v[k] = base.one();
            pows.push(v);
        }
        for _ in n..2 * n.max(1) - 1 {
            let prev = pows.last().unwrap().clone();
            let mut next = vec![z.clone(); n];
            for k in 1..n {
                next[k] = prev[k - 1].clone();
            }
            let top = &prev[n - 1];
            for k in 0..n {
                next[k] = base.add(&next[k], &base.mul(top, &tail[k]));
            }
            pows.push(next);
        }
        let table: Vec<Vec<Elt>> = (0..n * n).map(|ij| pows[ij / n + ij % n].clone()).collect();
        let one = pows[0].clone();
        let mut s = GaloisAlgebra { base: base.clone(), rank: n, table, one: one.clone(), sigma: linalg::identity(base, n) };
        let mut cols = vec![one];
        for k in 1..n {
            let prev = cols[k - 1].clone();
            cols.push(s.mul(&prev, sigma_x));
        }
        s.sigma = linalg::from_columns(&cols);
        s.check_structure()?;
        Ok(s)
    }

    pub fn zero(&self) -> Vec<Elt> {
        vec![self.base.zero(); self.rank]
    }

    pub fn basis(&self, i: usize) -> Vec<Elt> {
        let mut v = self.zero();
        v[i] = self.base.one();
        v
    }

    pub fn scalar(&self, c: &Elt) -> Vec<Elt> {
        self.one.iter().map(|x| self.base.mul(x, c)).collect()
    }

    pub fn add(&self, x: &[Elt], y: &[Elt]) -> Vec<Elt> {
        x.iter().zip(y).map(|(a, b)| self.base.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[Elt], y: &[Elt]) -> Vec<Elt> {
        x.iter().zip(y).map(|(a, b)| self.base.sub(a, b)).collect()
    }

    pub fn scale(&self, c: &Elt, x: &[Elt]) -> Vec<Elt> {
        x.iter().map(|a| self.base.mul(c, a)).collect()
    }

    pub fn mul(&self, x: &[Elt], y: &[Elt]) -> Vec<Elt> {
        let r = &self.base;
        let n = self.rank;
        let mut out = self.zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = r.mul(a, b);
                for (k, c) in self.table[i * n + j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = r.add(&out[k], &r.mul(&ab, c));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[Elt], mut e: u64) -> Vec<Elt> {
        let mut acc = self.one.clone();
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn apply(&self, m: &Mat, x: &[Elt]) -> Vec<Elt> {
        linalg::mat_vec(&self.base, m, x)
    }

    pub fn sigma_pow(&self, k: usize) -> Mat {
        linalg::mat_pow(&self.base, &self.sigma, (k % self.rank.max(1)) as u64)
    }

    pub fn act(&self, k: usize, x: &[Elt]) -> Vec<Elt> {
        self.apply(&self.sigma_pow(k), x)
    }

    /// Same algebra with generator sigma^k.
    pub fn with_generator_power(&self, k: usize) -> GaloisAlgebra {
        GaloisAlgebra { sigma: self.sigma_pow(k), ..self.clone() }
    }

    /// Multiplication by x; column j is x e_j.
    pub fn lmul(&self, x: &[Elt]) -> Mat {
        let cols: Vec<Vec<Elt>> = (0..self.rank).map(|j| self.mul(x, &self.basis(j))).collect();
        linalg::from_columns(&cols)
    }

    pub fn trace(&self, x: &[Elt]) -> Vec<Elt> {
        let mut acc = self.zero();
        let mut cur = x.to_vec();
        for _ in 0..self.rank {
            acc = self.add(&acc, &cur);
            cur = self.apply(&self.sigma, &cur);
        }
        acc
    }

    /// Product of all sigma-conjugates of x.
    pub fn norm(&self, x: &[Elt]) -> Vec<Elt> {
        let mut acc = self.one.clone();
        let mut cur = x.to_vec();
        for _ in 0..self.rank {
            acc = self.mul(&acc, &cur);
            cur = self.apply(&self.sigma, &cur);
        }
        acc
    }

    /// The base element c with x = c * 1, if x lies in R * 1.
    pub fn as_scalar(&self, x: &[Elt]) -> Option<Elt> {
        let k = self.one.iter().position(|c| self.base.is_one(c))?;
        let c = x[k].clone();
        (self.scalar(&c) == x).then_some(c)
    }

    pub fn is_unit(&self, x: &[Elt]) -> Result<bool> {
        linalg::det_is_unit(&self.base, &self.lmul(x))
    }

    /// The order of sigma equals the rank and no proper power is the identity.
    pub fn sigma_order_ok(&self) -> bool {
        let id = linalg::identity(&self.base, self.rank);
        let n = self.rank;
        self.sigma_pow(n) == id && (1..n).filter(|d| n % d == 0).all(|d| self.sigma_pow(d) != id)
    }

    /// Columns of Delta(S/R, G) -> End_R(S): column (k, i) is L_{e_i} sigma^k, flattened.
    pub fn galois_matrix(&self) -> Mat {
        let n = self.rank;
        let mut cols = Vec::with_capacity(n * n);
        for k in 0..n {
            let sk = self.sigma_pow(k);
            for i in 0..n {
                let m = linalg::mat_mul(&self.base, &self.lmul(&self.basis(i)), &sk);
                cols.push(m.into_iter().flatten().collect::<Vec<Elt>>());
            }
        }
        linalg::from_columns(&cols)
    }

    pub fn galois_certificate(&self) -> Result<GaloisCertificate> {
        let n = self.rank;
        if n > max_rank() {
            return Err(Error::RankOverflow { rank: n, cap: max_rank() });
        }
        let m = self.galois_matrix();
        let mut galois = self.sigma_order_ok() && linalg::det_is_unit(&self.base, &m)?;
        let det = (n <= 4).then(|| self.base.fmt_elt(&linalg::det(&self.base, &m)));
        let residue_ranks = if self.base.is_finite() { Some(linalg::residue_ranks(&self.base, &m, n * n)?) } else { None };
        if n == 1 {
            galois = true;
        }
        Ok(GaloisCertificate { rank: n, galois, det, residue_ranks })
    }

    /// Certify Galois, failing with NotGalois and the determinant otherwise.
    pub fn verify_galois(&self) -> Result<GaloisCertificate> {
        let c = self.galois_certificate()?;
        if !c.galois {
            let det = c.det.clone().unwrap_or_else(|| match &c.residue_ranks {
                Some(r) => format!("non-unit (residue ranks {r:?} of {})", self.rank * self.rank),
                None => "non-unit".into(),
            });
            return Err(Error::NotGalois { det });
        }
        Ok(c)
    }

    /// Express the algebra in the basis given by the columns of p (unit determinant).
    pub fn rebase(&self, p: &Mat) -> Result<GaloisAlgebra> {
        let r = &self.base;
        let pinv = linalg::inverse(r, p)?;
        let cols: Vec<Vec<Elt>> = (0..self.rank).map(|j| p.iter().map(|row| row[j].clone()).collect()).collect();
        let n = self.rank;
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(linalg::mat_vec(r, &pinv, &self.mul(&cols[i], &cols[j])));
            }
        }
        let one = linalg::mat_vec(r, &pinv, &self.one);
        let sigma = linalg::mat_mul(r, &pinv, &linalg::mat_mul(r, &self.sigma, p));
        GaloisAlgebra::new(r.clone(), table, one, sigma)
    }

    /// Apply a ring map to every structure constant.
    pub fn base_change(&self, target: &Ring, f: impl Fn(&Elt) -> Elt) -> Result<GaloisAlgebra> {
        let table = self.table.iter().map(|v| v.iter().map(&f).collect()).collect();
        let one = self.one.iter().map(&f).collect();
        let sigma = linalg::mat_map(&self.sigma, &f);
        GaloisAlgebra::new(target.clone(), table, one, sigma)
    }

    /// All elements (finite base only).
    pub fn elements(&self) -> Result<Vec<Vec<Elt>>> {
        let els = self.base.elements()?;
        let total = (els.len() as u64).checked_pow(self.rank as u32).filter(|&t| t <= 1 << 20).ok_or_else(|| {
            Error::UnsupportedBase(format!("rank {} over {} is too large to enumerate", self.rank, self.base))
        })?;
        Ok((0..total)
            .map(|mut k| {
                (0..self.rank)
                    .map(|_| {
                        let c = els[(k % els.len() as u64) as usize].clone();
                        k /= els.len() as u64;
                        c
                    })
                    .collect()
            })
            .collect())
    }

    pub fn fmt_vec(&self, x: &[Elt]) -> String {
        let parts: Vec<String> = x.iter().map(|c| self.base.fmt_elt(c)).collect();
        format!("({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests;
