//! Degree-p normal generators and the filtration R[G](i) of the group ring.

use super::iso::{find_normal_basis, is_normal_basis, orbit_matrix};
use super::ops::Subspace;
use super::GaloisAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, zlattice, Mat};
use crate::ring::{Elt, Ring};
use crate::Int;
use num_traits::Zero;
use serde::Serialize;

/// alpha with sigma(alpha) = rho alpha + 1 and u = 1 + eta alpha a unit.
#[derive(Clone, Debug)]
pub struct NormalGenerator {
    pub alpha: Vec<Elt>,
    pub u: Vec<Elt>,
    /// u^p, which lies in R.
    pub u_pow_p: Elt,
    /// A generator of S as an R[G]-module, certifying S = R[G].
    pub module_generator: Vec<Elt>,
    /// 1, alpha, ..., alpha^(p-1) is an R-basis of S.
    pub powers_span: bool,
    /// S_rho = R u (checked where kernels are computable).
    pub s_rho_is_ru: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalSearch {
    pub candidates: usize,
    pub complete: bool,
}

/// Search the affine space {alpha : (sigma - rho) alpha = 1} for alpha with
/// 1 + eta alpha a unit. Complete over finite bases; elsewhere the particular
/// solution and the optional hint are tried.
pub fn find_normal_generator(s: &GaloisAlgebra, p: u64, hint: Option<&[Elt]>) -> Result<(Option<NormalGenerator>, NormalSearch)> {
    let r = &s.base;
    if s.rank as u64 != p {
        return Err(Error::OutOfRange(format!("degree {} is not {p}", s.rank)));
    }
    let rho = r.rho_for(p)?;
    let eta = r.eta_for(p)?;
    let n = s.rank;
    let a = linalg::mat_sub(r, &s.sigma, &linalg::mat_map(&linalg::identity(r, n), |x| r.mul(x, &rho)));
    let mut cands: Vec<Vec<Elt>> = hint.map(|h| vec![h.to_vec()]).unwrap_or_default();
    let complete;
    if r.is_finite() {
        let particular = linalg::solve(r, &a, &s.one)?;
        let Some(x0) = particular else {
            return Ok((None, NormalSearch { candidates: 0, complete: true }));
        };
        let kernel: Vec<Vec<Elt>> = if r.is_local()? {
            Subspace::kernel(r, &a, n)?.basis
        } else {
            vec![]
        };
        if r.is_local()? {
            let els = r.elements()?;
            let k = kernel.len();
            let total = (els.len() as u64).checked_pow(k as u32).filter(|&t| t <= 1 << 20).ok_or_else(|| {
                Error::UnsupportedBase("solution space too large to enumerate".into())
            })?;
            for mut idx in 0..total {
                let mut x = x0.clone();
                for b in &kernel {
                    let c = &els[(idx % els.len() as u64) as usize];
                    idx /= els.len() as u64;
                    x = s.add(&x, &s.scale(c, b));
                }
                cands.push(x);
            }
        } else {
            for x in s.elements()? {
                if s.apply(&a, &x) == s.one {
                    cands.push(x);
                }
            }
        }
        complete = true;
    } else {
        if let Some(x0) = linalg::solve(r, &a, &s.one)? {
            cands.push(x0);
        }
        complete = false;
    }
    let tried = cands.len();
    for alpha in cands {
        if s.apply(&a, &alpha) != s.one {
            continue;
        }
        let u = s.add(&s.one, &s.scale(&eta, &alpha));
        if !s.is_unit(&u)? {
            continue;
        }
        return Ok((Some(certify(s, p, alpha, u, &rho)?), NormalSearch { candidates: tried, complete }));
    }
    Ok((None, NormalSearch { candidates: tried, complete }))
}

fn certify(s: &GaloisAlgebra, p: u64, alpha: Vec<Elt>, u: Vec<Elt>, rho: &Elt) -> Result<NormalGenerator> {
    let r = &s.base;
    let n = s.rank;
    if s.apply(&s.sigma, &u) != s.scale(rho, &u) {
        return Err(Error::CertFailed("sigma(u) != rho u".into()));
    }
    let up = s.pow(&u, p);
    let u_pow_p = s.as_scalar(&up).ok_or_else(|| Error::CertFailed("u^p is not in R".into()))?;
    let powers: Vec<Vec<Elt>> = (0..n).map(|k| s.pow(&alpha, k as u64)).collect();
    let powers_span = linalg::det_is_unit(r, &linalg::from_columns(&powers))?;
    let top = s.pow(&alpha, (n - 1) as u64);
    let module_generator = if is_normal_basis(s, &top)? {
        top
    } else {
        find_normal_basis(s)?.ok_or_else(|| Error::CertFailed("no R[G]-generator found".into()))?
    };
    let s_rho_is_ru = if r.is_finite() && r.is_local()? {
        let a = linalg::mat_sub(r, &s.sigma, &linalg::mat_map(&linalg::identity(r, n), |x| r.mul(x, rho)));
        let k = Subspace::kernel(r, &a, n)?;
        Some(k.dim() == 1 && k.coords(r, &u).is_ok() && {
            // u spans: the coordinate of u on the kernel basis is a unit.
            let c = k.coords(r, &u)?;
            r.is_unit(&c[0])?
        })
    } else {
        None
    };
    Ok(NormalGenerator { alpha, u, u_pow_p, module_generator, powers_span, s_rho_is_ru })
}

/// R[G] = R[T]/(T^p - 1) with the pieces of its pullback filtration.
#[derive(Clone, Debug)]
pub struct GroupRingLevel {
    pub base: Ring,
    pub p: u64,
    pub i: u64,
    /// f_i = prod_{j=i+1}^{p-1} (T - rho^j), coefficients ascending.
    pub f: Vec<Elt>,
    /// g_i = prod_{j=0}^{i} (T - rho^j).
    pub g: Vec<Elt>,
    /// Basis of f_i(sigma) R[G] (as vectors in the basis 1, T, ..., T^(p-1)).
    pub image: Vec<Vec<Elt>>,
    /// Rank of the image over R.
    pub rank: usize,
    /// f_i R[G] equals the annihilator of g_i (checked as Z-lattices).
    pub exact: bool,
    /// The square R[G](i) -> R[G](i-1), R[G](i) -> R^(i), R[G](i-1) -> R/eta^i, R^(i) -> R/eta^i commutes.
    pub square_commutes: Option<bool>,
    /// R[G](i) -> R[G](i-1) x R^(i) is injective.
    pub pullback_injective: Option<bool>,
}

fn poly_mul(r: &Ring, a: &[Elt], b: &[Elt]) -> Vec<Elt> {
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    out
}

fn linear_product(r: &Ring, rho: &Elt, exps: impl Iterator<Item = u64>) -> Vec<Elt> {
    exps.fold(vec![r.one()], |acc, j| poly_mul(r, &acc, &[r.neg(&r.pow(rho, j)), r.one()]))
}

/// Multiplication by a polynomial on R[T]/(T^p - 1); column k = poly * T^k.
fn cyclic_mult(r: &Ring, f: &[Elt], p: usize) -> Mat {
    let mut cols = Vec::with_capacity(p);
    for k in 0..p {
        let mut v = vec![r.zero(); p];
        for (i, c) in f.iter().enumerate() {
            let idx = (i + k) % p;
            v[idx] = r.add(&v[idx], c);
        }
        cols.push(v);
    }
    linalg::from_columns(&cols)
}

/// Integer lattice spanned by the columns of a B-matrix after restriction of scalars.
fn z_columns(r: &Ring, m: &Mat) -> Vec<Vec<Int>> {
    let basis = r.flat_basis();
    let rows = m.len();
    let cols = m.first().map_or(0, |x| x.len());
    let mut out = Vec::new();
    for j in 0..cols {
        for b in &basis {
            out.push((0..rows).flat_map(|i| r.flatten(&r.mul(&m[i][j], b))).collect());
        }
    }
    out
}

pub fn group_ring_level(base: &Ring, p: u64, i: u64) -> Result<GroupRingLevel> {
    if i >= p {
        return Err(Error::OutOfRange(format!("level {i} must be below {p}")));
    }
    let r = base;
    let rho = r.rho_for(p)?;
    let pu = p as usize;
    let f = linear_product(r, &rho, i + 1..p);
    let g = linear_product(r, &rho, 0..=i);
    let fm = cyclic_mult(r, &f, pu);
    let gm = cyclic_mult(r, &g, pu);
    let image_cols: Vec<Vec<Elt>> = (0..pu).map(|k| fm.iter().map(|row| row[k].clone()).collect()).collect();
    let mut out = GroupRingLevel {
        base: r.clone(),
        p,
        i,
        f,
        g,
        image: vec![],
        rank: 0,
        exact: false,
        square_commutes: None,
        pullback_injective: None,
    };
    if !r.is_z_finite() || r.lattice().is_some() {
        // Over finite or polynomial bases report the generators only.
        out.image = image_cols;
        out.rank = (i + 1) as usize;
        return Ok(out);
    }
    let d = r.flat_dim();
    let img = zlattice::Hnf::new(&z_columns(r, &fm), &[], None, pu * d);
    // Annihilator of g: integer kernel of multiplication by g.
    let gz = z_columns(r, &gm);
    let rel = zlattice::Hnf::new(&gz, &[], None, pu * d);
    let basis_z: Vec<Vec<Int>> = (0..pu * d)
        .map(|k| {
            let mut v = vec![Int::zero(); pu * d];
            v[k] = Int::from(1);
            v
        })
        .collect();
    let ann: Vec<Vec<Int>> = rel
        .relations
        .iter()
        .map(|c| (0..pu * d).map(|t| c.iter().zip(&basis_z).map(|(a, b)| a * &b[t]).sum()).collect())
        .collect();
    let ann_h = zlattice::Hnf::new(&ann, &[], None, pu * d);
    let contains_all = |a: &zlattice::Hnf, b: &zlattice::Hnf| b.rows.iter().all(|v| a.contains(v));
    out.exact = contains_all(&img, &ann_h) && contains_all(&ann_h, &img);
    out.rank = img.rank() / d;
    out.image = img
        .rows
        .iter()
        .map(|v| (0..pu).map(|k| r.unflatten(&v[k * d..(k + 1) * d])).collect())
        .collect();
    if i >= 1 {
        let (commutes, injective) = pullback_square(r, p, i, &rho)?;
        out.square_commutes = Some(commutes);
        out.pullback_injective = Some(injective);
    }
    Ok(out)
}

/// Check the square on R[G]/(g_i): A projects to R[G]/(g_(i-1)), B evaluates at
/// rho^i, and both routes to R/eta^i agree.
fn pullback_square(r: &Ring, p: u64, i: u64, rho: &Elt) -> Result<(bool, bool)> {
    let eta = r.eta_for(p)?;
    let quot = Ring::parse(&format!("Quot({}; ({})^{})", r, r.fmt_elt(&eta), i))?;
    let zimg = quot.parse_elt(&r.fmt_elt(&r.zeta()))?;
    let to_q = |x: &Elt| r.map_to(&quot, &zimg, &[], x);
    let ri = r.pow(rho, i);
    let dim = (i + 1) as usize;
    // Elements of R[G](i) = R[T]/(g_i) in the basis 1..T^i; A reduces mod g_(i-1).
    let g_prev = linear_product(r, rho, 0..i);
    let reduce = |v: &[Elt]| -> Vec<Elt> {
        let mut v = v.to_vec();
        for top in (g_prev.len() - 1..v.len()).rev() {
            let c = v[top].clone();
            if c.is_zero() {
                continue;
            }
            for (k, gk) in g_prev.iter().enumerate() {
                let idx = top + 1 - g_prev.len() + k;
                v[idx] = r.sub(&v[idx], &r.mul(&c, gk));
            }
        }
        v.truncate(g_prev.len() - 1);
        v
    };
    let eval = |v: &[Elt], at: &Elt| v.iter().enumerate().fold(r.zero(), |acc, (k, c)| r.add(&acc, &r.mul(c, &r.pow(at, k as u64))));
    let mut commutes = true;
    let mut rows_ab: Vec<Vec<Elt>> = Vec::new();
    for k in 0..dim {
        let mut v = vec![r.zero(); dim];
        v[k] = r.one();
        let a = reduce(&v);
        let b = eval(&v, &ri);
        commutes &= to_q(&eval(&a, &ri)) == to_q(&b);
        let mut col = a;
        col.push(b);
        rows_ab.push(col);
    }
    let z = z_columns(r, &linalg::from_columns(&rows_ab));
    let h = zlattice::Hnf::new(&z, &[], None, dim * r.flat_dim());
    let injective = h.rank() == z.len();
    Ok((commutes, injective))
}

/// The induced R[G]-isomorphism R[G] -> S, t -> t w, as a matrix.
pub fn module_isomorphism(s: &GaloisAlgebra, w: &[Elt]) -> Mat {
    orbit_matrix(s, w)
}
