//! Decisions over finite bases: normal bases, splitness and equivariant
//! isomorphism, all by exhaustive search with cheap filters first.

use super::GaloisAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::ring::Elt;

fn require_finite(s: &GaloisAlgebra) -> Result<()> {
    if !s.base.is_finite() {
        return Err(Error::UnsupportedBase(format!("{} is infinite; only witnesses are reported there", s.base)));
    }
    Ok(())
}

/// Matrix whose columns are sigma^k(x), k = 0..n-1.
pub fn orbit_matrix(s: &GaloisAlgebra, x: &[Elt]) -> Mat {
    let mut cols = Vec::with_capacity(s.rank);
    let mut cur = x.to_vec();
    for _ in 0..s.rank {
        cols.push(cur.clone());
        cur = s.apply(&s.sigma, &cur);
    }
    linalg::from_columns(&cols)
}

pub fn is_normal_basis(s: &GaloisAlgebra, x: &[Elt]) -> Result<bool> {
    linalg::det_is_unit(&s.base, &orbit_matrix(s, x))
}

/// Some w whose conjugates form a basis, i.e. S = R[G] w. Complete over finite bases.
pub fn find_normal_basis(s: &GaloisAlgebra) -> Result<Option<Vec<Elt>>> {
    for cand in (0..s.rank).map(|i| s.basis(i)).chain(std::iter::once(s.one.clone())) {
        if is_normal_basis(s, &cand)? {
            return Ok(Some(cand));
        }
    }
    require_finite(s)?;
    for x in s.elements()? {
        if is_normal_basis(s, &x)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Coordinates of y in the basis {sigma^k w}.
fn normal_coords(s: &GaloisAlgebra, inv: &Mat, y: &[Elt]) -> Vec<Elt> {
    linalg::mat_vec(&s.base, inv, y)
}

/// An equivariant algebra isomorphism S -> T as a matrix (column j = image
/// of e_j), or None. Complete over finite local bases.
pub fn isomorphism(s: &GaloisAlgebra, t: &GaloisAlgebra) -> Result<Option<Mat>> {
    if s.base != t.base || s.rank != t.rank {
        return Ok(None);
    }
    require_finite(s)?;
    let r = &s.base;
    let n = s.rank;
    let Some(w) = find_normal_basis(s)? else {
        return Err(Error::CertFailed("source has no normal basis".into()));
    };
    let ow = orbit_matrix(s, &w);
    let inv = linalg::inverse(r, &ow)?;
    // 1 = sum d_k sigma^k(w) and w sigma^j(w) = sum c_jk sigma^k(w).
    let d = normal_coords(s, &inv, &s.one);
    let c: Vec<Vec<Elt>> = (0..n).map(|j| normal_coords(s, &inv, &s.mul(&w, &s.act(j, &w)))).collect();
    let tpows: Vec<Mat> = (0..n).map(|k| t.sigma_pow(k)).collect();
    let dmat = tpows.iter().zip(&d).fold(linalg::zeros(r, n, n), |acc, (p, dk)| {
        let scaled = linalg::mat_map(p, |x| r.mul(x, dk));
        acc.iter().zip(&scaled).map(|(a, b)| a.iter().zip(b).map(|(x, y)| r.add(x, y)).collect()).collect()
    });
    let combine = |coef: &[Elt], orbit: &[Vec<Elt>]| -> Vec<Elt> {
        let mut acc = t.zero();
        for (ck, o) in coef.iter().zip(orbit) {
            if !ck.is_zero() {
                acc = t.add(&acc, &t.scale(ck, o));
            }
        }
        acc
    };
    for y in t.elements()? {
        if t.apply(&dmat, &y) != t.one {
            continue;
        }
        let orbit: Vec<Vec<Elt>> = tpows.iter().map(|p| t.apply(p, &y)).collect();
        if !(0..n).all(|j| t.mul(&y, &orbit[j]) == combine(&c[j], &orbit)) {
            continue;
        }
        let oy = linalg::from_columns(&orbit);
        if !linalg::det_is_unit(r, &oy)? {
            continue;
        }
        let f = linalg::mat_mul(r, &oy, &inv);
        debug_assert!(check_isomorphism(s, t, &f));
        return Ok(Some(f));
    }
    Ok(None)
}

/// Whether f is an equivariant unital algebra map S -> T.
pub fn check_isomorphism(s: &GaloisAlgebra, t: &GaloisAlgebra, f: &Mat) -> bool {
    let r = &s.base;
    if t.apply(f, &s.one) != t.one {
        return false;
    }
    let fs = linalg::mat_mul(r, f, &s.sigma);
    let tf = linalg::mat_mul(r, &t.sigma, f);
    if fs != tf {
        return false;
    }
    let img: Vec<Vec<Elt>> = (0..s.rank).map(|i| t.apply(f, &s.basis(i))).collect();
    (0..s.rank).all(|i| (i..s.rank).all(|j| t.apply(f, &s.mul(&s.basis(i), &s.basis(j))) == t.mul(&img[i], &img[j])))
}

/// An algebra map phi: S -> R (as a row of values on the basis) whose
/// conjugates phi o sigma^k separate S, or None when S is not split.
pub fn is_split(s: &GaloisAlgebra) -> Result<Option<Vec<Elt>>> {
    require_finite(s)?;
    let r = &s.base;
    let n = s.rank;
    let els = r.elements()?;
    let total = (els.len() as u64).checked_pow(n as u32).filter(|&t| t <= 1 << 22).ok_or_else(|| {
        Error::UnsupportedBase(format!("homomorphism search over {} of rank {n} is too large", r))
    })?;
    let dot = |phi: &[Elt], v: &[Elt]| phi.iter().zip(v).fold(r.zero(), |acc, (a, b)| r.add(&acc, &r.mul(a, b)));
    let pows: Vec<Mat> = (0..n).map(|k| s.sigma_pow(k)).collect();
    for mut k in 0..total {
        let phi: Vec<Elt> = (0..n)
            .map(|_| {
                let c = els[(k % els.len() as u64) as usize].clone();
                k /= els.len() as u64;
                c
            })
            .collect();
        if !r.is_one(&dot(&phi, &s.one)) {
            continue;
        }
        let mult = (0..n).all(|i| (i..n).all(|j| dot(&phi, &s.table[i * n + j]) == r.mul(&phi[i], &phi[j])));
        if !mult {
            continue;
        }
        // Row k of the separating matrix is phi o sigma^k.
        let rows: Mat = pows.iter().map(|p| (0..n).map(|j| dot(&phi, &p.iter().map(|row| row[j].clone()).collect::<Vec<_>>())).collect()).collect();
        if linalg::det_is_unit(r, &rows)? {
            return Ok(Some(phi));
        }
    }
    Ok(None)
}
