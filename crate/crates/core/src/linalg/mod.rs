//! Linear algebra over the supported coefficient rings.
//!
//! Matrices are row-major `Vec<Vec<Elt>>` acting on column vectors. Which
//! procedure is used depends on the ring:
//! * finite rings: residue fields decide ranks and determinant units; finite
//!   local rings additionally get kernels through unit-pivot elimination;
//! * rings that are finitely generated over Z: Hermite normal form on the
//!   restriction of scalars decides solvability and spans;
//! * polynomial rings: division-free determinants followed by a unit test.

pub mod elim;
pub mod fq;
pub mod zlattice;

use crate::error::{Error, Result};
use crate::ring::{Elt, Ring};
use crate::Int;
use elim::Scalars;
use num_traits::{One, Signed, Zero};
use zlattice::Hnf;

pub type Mat = Vec<Vec<Elt>>;

/// Unit-pivot scalars backed by a ring.
pub struct RingScalars<'a>(pub &'a Ring);

impl Scalars for RingScalars<'_> {
    type E = Elt;
    fn zero(&self) -> Elt { self.0.zero() }
    fn one(&self) -> Elt { self.0.one() }
    fn add(&self, a: &Elt, b: &Elt) -> Elt { self.0.add(a, b) }
    fn sub(&self, a: &Elt, b: &Elt) -> Elt { self.0.sub(a, b) }
    fn mul(&self, a: &Elt, b: &Elt) -> Elt { self.0.mul(a, b) }
    fn neg(&self, a: &Elt) -> Elt { self.0.neg(a) }
    fn is_zero(&self, a: &Elt) -> bool { a.is_zero() }
    fn unit_inverse(&self, a: &Elt) -> Option<Elt> {
        if a.is_zero() {
            return None;
        }
        if self.0.is_one(a) {
            return Some(a.clone());
        }
        self.0.inverse(a)
    }
}

pub fn identity(r: &Ring, n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect()).collect()
}

pub fn zeros(r: &Ring, rows: usize, cols: usize) -> Mat {
    vec![vec![r.zero(); cols]; rows]
}

pub fn mat_mul(r: &Ring, a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |x| x.len());
    let mut out = zeros(r, n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] = r.add(&out[i][j], &r.mul(&a[i][l], &b[l][j]));
                }
            }
        }
    }
    out
}

pub fn mat_vec(r: &Ring, a: &Mat, v: &[Elt]) -> Vec<Elt> {
    a.iter()
        .map(|row| {
            let mut acc = r.zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc = r.add(&acc, &r.mul(x, y));
                }
            }
            acc
        })
        .collect()
}

pub fn mat_pow(r: &Ring, a: &Mat, mut e: u64) -> Mat {
    let mut acc = identity(r, a.len());
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(r, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(r, &base, &base);
        }
    }
    acc
}

pub fn mat_sub(r: &Ring, a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| r.sub(u, v)).collect()).collect()
}

pub fn mat_map(a: &Mat, f: impl Fn(&Elt) -> Elt) -> Mat {
    a.iter().map(|row| row.iter().map(&f).collect()).collect()
}

/// Columns as a matrix.
pub fn from_columns(cols: &[Vec<Elt>]) -> Mat {
    elim::transpose(cols)
}

pub fn kron(r: &Ring, a: &Mat, b: &Mat) -> Mat {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(r, n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..m {
                for l in 0..m {
                    if !b[k][l].is_zero() {
                        out[i * m + k][j * m + l] = r.mul(&a[i][j], &b[k][l]);
                    }
                }
            }
        }
    }
    out
}

/// Division-free determinant (Berkowitz).
pub fn det(r: &Ring, a: &Mat) -> Elt {
    let n = a.len();
    if n == 0 {
        return r.one();
    }
    let mut c = vec![r.one(), r.neg(&a[0][0])];
    for k in 1..n {
        // Leading (k+1)x(k+1) block: M = a[..k][..k], row R = a[k][..k], column S = a[..k][k].
        let mut t = vec![r.one(), r.neg(&a[k][k])];
        let mut ms: Vec<Elt> = (0..k).map(|i| a[i][k].clone()).collect();
        for _ in 0..k {
            let rs = (0..k).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&a[k][j], &ms[j])));
            t.push(r.neg(&rs));
            ms = (0..k).map(|i| (0..k).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&a[i][j], &ms[j])))).collect();
        }
        let mut nc = vec![r.zero(); k + 2];
        for (i, slot) in nc.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *slot = r.add(slot, &r.mul(&t[i - j], cj));
                }
            }
        }
        c = nc;
    }
    if n % 2 == 1 {
        r.neg(&c[n])
    } else {
        c[n].clone()
    }
}

fn residue_matrix(r: &Ring, a: &Mat, k: usize) -> Result<Vec<Vec<u16>>> {
    a.iter().map(|row| row.iter().map(|x| r.residue(x, k)).collect()).collect()
}

fn entries_are_bounded(r: &Ring, a: &Mat) -> bool {
    let free = r.free_vars();
    a.iter().flatten().all(|x| x.terms().all(|(m, _)| free.iter().all(|&j| m.0[j] == 0)))
}

/// Integer matrix of a B-linear map after restriction of scalars to Z.
fn restrict_to_z(r: &Ring, a: &Mat) -> Vec<Vec<Int>> {
    let n = r.flat_dim();
    let rows = a.len();
    let cols = a.first().map_or(0, |x| x.len());
    let mut out = vec![vec![Int::zero(); cols * n]; rows * n];
    for i in 0..rows {
        for j in 0..cols {
            if a[i][j].is_zero() {
                continue;
            }
            let m = r.mult_matrix_z(&a[i][j]);
            for (u, mrow) in m.iter().enumerate() {
                for (v, x) in mrow.iter().enumerate() {
                    out[i * n + u][j * n + v] = x.clone();
                }
            }
        }
    }
    out
}

/// Whether det(a) is a unit, without forming the determinant when avoidable.
pub fn det_is_unit(r: &Ring, a: &Mat) -> Result<bool> {
    if a.is_empty() {
        return Ok(true);
    }
    if entries_are_bounded(r, a) {
        if r.lattice().is_some() {
            for k in 0..r.residues()?.len() {
                let fq = &r.residues()?[k].fq;
                let m = residue_matrix(r, a, k)?;
                if elim::rank(fq, m, a.len()) < a.len() {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        return Ok(zlattice::det(&restrict_to_z(r, a)).abs().is_one());
    }
    r.is_unit(&det(r, a))
}

/// Rank of a over each residue field.
pub fn residue_ranks(r: &Ring, a: &Mat, ncols: usize) -> Result<Vec<usize>> {
    (0..r.residues()?.len())
        .map(|k| Ok(elim::rank(&r.residues()?[k].fq, residue_matrix(r, a, k)?, ncols)))
        .collect()
}

/// Free basis of the kernel of a (rows x ncols), over finite local rings,
/// fields and Z.
pub fn kernel(r: &Ring, a: &Mat, ncols: usize) -> Result<Vec<Vec<Elt>>> {
    if r.is_finite() {
        if !r.is_local()? {
            return Err(Error::UnsupportedBase(format!("kernels need a local base, {r} is not local")));
        }
        return elim::kernel(&RingScalars(r), a, ncols)
            .ok_or_else(|| Error::SolveFailed("kernel is not a free direct summand".into()));
    }
    if r.is_z_finite() && r.lattice().is_none() && r.flat_dim() == 1 {
        let gens: Vec<Vec<Int>> = (0..ncols)
            .map(|j| a.iter().map(|row| r.as_integer(&row[j]).unwrap()).collect())
            .collect();
        let h = Hnf::new(&gens, &[], None, a.len());
        let rel = Hnf::new(&[], &h.relations, None, ncols);
        return Ok(rel.rows.iter().map(|row| row.iter().map(|x| r.from_int(x)).collect()).collect());
    }
    Err(Error::UnsupportedBase(format!("no kernel procedure over {r}")))
}

/// Z-lattice machinery for a B-linear system with columns `cols` (each of
/// length `rows`), untracked relation lattice included.
pub struct Solver<'a> {
    r: &'a Ring,
    hnf: Hnf,
    cols: usize,
}

impl<'a> Solver<'a> {
    pub fn new(r: &'a Ring, a: &Mat) -> Result<Solver<'a>> {
        if !r.is_z_finite() || !entries_are_bounded(r, a) {
            return Err(Error::UnsupportedBase(format!("linear solve needs a ring finite over Z, got {r}")));
        }
        let n = r.flat_dim();
        let rows = a.len();
        let cols = a.first().map_or(0, |x| x.len());
        let basis = r.flat_basis();
        let mut gens = Vec::with_capacity(cols * n);
        for j in 0..cols {
            for b in &basis {
                let mut g = Vec::with_capacity(rows * n);
                for row in a {
                    g.extend(r.flatten(&r.mul(&row[j], b)));
                }
                gens.push(g);
            }
        }
        let lat = r.flat_lattice();
        let mut untracked = Vec::new();
        for i in 0..rows {
            for l in &lat {
                let mut v = vec![Int::zero(); rows * n];
                v[i * n..(i + 1) * n].clone_from_slice(l);
                untracked.push(v);
            }
        }
        let c = r.characteristic();
        let hnf = Hnf::new(&gens, &untracked, (!c.is_zero()).then_some(&c), rows * n);
        Ok(Solver { r, hnf, cols })
    }

    fn flat(&self, v: &[Elt]) -> Vec<Int> {
        v.iter().flat_map(|x| self.r.flatten(x)).collect()
    }

    pub fn solve(&self, b: &[Elt]) -> Option<Vec<Elt>> {
        let y = self.hnf.solve(&self.flat(b))?;
        let n = self.r.flat_dim();
        Some((0..self.cols).map(|j| self.r.unflatten(&y[j * n..(j + 1) * n])).collect())
    }
}

/// Some x with a x = b, or None if there is none. Complete over rings that
/// are finitely generated over Z.
pub fn solve(r: &Ring, a: &Mat, b: &[Elt]) -> Result<Option<Vec<Elt>>> {
    Ok(Solver::new(r, a)?.solve(b))
}

/// Whether the B-span of the given vectors is all of B^dim.
pub fn spans_everything(r: &Ring, vectors: &[Vec<Elt>], dim: usize) -> Result<bool> {
    if vectors.is_empty() {
        return Ok(dim == 0);
    }
    let a = from_columns(vectors);
    if r.is_finite() {
        return Ok(residue_ranks(r, &a, vectors.len())?.iter().all(|&k| k == dim));
    }
    let rs = Solver::new(r, &a)?;
    let n = r.flat_dim();
    Ok(rs.hnf.rank() == dim * n && rs.hnf.index().map_or(false, |i| i.is_one()))
}

/// Whether target lies in the B-span of the vectors.
pub fn in_span(r: &Ring, vectors: &[Vec<Elt>], target: &[Elt]) -> Result<bool> {
    if vectors.is_empty() {
        return Ok(target.iter().all(|x| x.is_zero()));
    }
    Ok(solve(r, &from_columns(vectors), target)?.is_some())
}

/// Inverse of a matrix with unit determinant.
pub fn inverse(r: &Ring, a: &Mat) -> Result<Mat> {
    let n = a.len();
    if r.is_finite() && r.is_local()? {
        return elim::inverse(&RingScalars(r), a).ok_or_else(|| Error::NotInvertible("matrix".into()));
    }
    let rs = Solver::new(r, a)?;
    let id = identity(r, n);
    let cols: Result<Vec<Vec<Elt>>> = (0..n)
        .map(|j| {
            let e: Vec<Elt> = id.iter().map(|row| row[j].clone()).collect();
            rs.solve(&e).ok_or_else(|| Error::NotInvertible("matrix".into()))
        })
        .collect();
    Ok(from_columns(&cols?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn berkowitz_matches_bareiss() {
        let z = Ring::parse("Z").unwrap();
        let vals = [[2, -1, 3, 0], [1, 4, 0, 2], [0, 5, -2, 1], [3, 0, 1, 1]];
        let a: Mat = vals.iter().map(|r| r.iter().map(|&x| z.from_i64(x)).collect()).collect();
        let ints: Vec<Vec<Int>> = vals.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        assert_eq!(z.as_integer(&det(&z, &a)).unwrap(), zlattice::det(&ints));
    }

    #[test]
    fn kernel_over_local_ring() {
        let r = Ring::parse("Zmod[9]").unwrap();
        let a: Mat = vec![vec![r.from_i64(1), r.from_i64(2), r.from_i64(3)]];
        let k = kernel(&r, &a, 3).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&r, &a, v)[0].is_zero());
        }
        let bad: Mat = vec![vec![r.from_i64(3), r.from_i64(0)]];
        assert!(kernel(&r, &bad, 2).is_err());
    }

    #[test]
    fn solve_and_span_nonlocal() {
        let r = Ring::parse("Zmod[6]").unwrap();
        let v = vec![vec![r.from_i64(2)], vec![r.from_i64(3)]];
        assert!(spans_everything(&r, &v, 1).unwrap());
        assert!(!spans_everything(&r, &v[..1], 1).unwrap());
        assert!(in_span(&r, &v[..1], &[r.from_i64(4)]).unwrap());
        assert!(!in_span(&r, &v[..1], &[r.from_i64(3)]).unwrap());
    }

    #[test]
    fn det_unit_dispatch() {
        let f = Ring::parse("Poly(Zmod[4]; a)").unwrap();
        let a: Mat = vec![vec![f.parse_elt("1 + 2*a").unwrap(), f.parse_elt("a").unwrap()], vec![f.zero(), f.one()]];
        assert!(det_is_unit(&f, &a).unwrap());
        let z = Ring::parse("Zmu[A,p=3,m=0]").unwrap();
        let b: Mat = vec![vec![z.parse_elt("rho").unwrap(), z.zero()], vec![z.one(), z.parse_elt("eta").unwrap()]];
        assert!(!det_is_unit(&z, &b).unwrap());
        let inv = inverse(&z, &vec![vec![z.parse_elt("rho").unwrap(), z.one()], vec![z.zero(), z.one()]]).unwrap();
        assert_eq!(inv[0][0], z.parse_elt("rho^2").unwrap());
    }
}
