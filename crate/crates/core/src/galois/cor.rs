//! Corestriction of cyclic extensions along a finite free D/R with an
//! automorphism gamma of order c and D^gamma = R.
//!
//! All linear algebra happens over R. D is viewed through its flat basis
//! b_0..b_(d-1), which must be an R-basis (the constant lattice of D is
//! char(R) Z^d). W = T (x) gamma(T) (x) ... (x) gamma^(c-1)(T) carries the
//! factorwise actions sigma_i and the semilinear shift Gamma; the result is
//! the fixed ring of N = <sigma_0 sigma_i^-1> and Gamma.

use super::ops::{fixed_ring, tensor, Subspace};
use super::{max_tensor, GaloisAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::ring::{Elt, Ring};
use crate::Int;
use num_integer::Integer;
use num_traits::Zero;

/// D over R with the automorphism gamma(zeta) = zeta_image, gamma(var_j) = var_images[j].
#[derive(Clone, Debug)]
pub struct Descent {
    pub r: Ring,
    pub d: Ring,
    pub zeta_image: Elt,
    pub var_images: Vec<Elt>,
    order: usize,
    basis: Vec<Elt>,
}

#[derive(Clone, Debug)]
pub struct Corestriction {
    pub alg: GaloisAlgebra,
    /// Rank of W over D.
    pub w_rank: usize,
    /// R-rank of W^N (d |G| when W^N is D-free of rank |G|).
    pub t2_rank: usize,
    /// The natural map S (x)_R D -> W^N is bijective.
    pub descends: bool,
    /// W^N as an extension of D generated by sigma_0, when it has rank |G| over D.
    pub t2: Option<GaloisAlgebra>,
}

impl Descent {
    pub fn new(r: &Ring, d: &Ring, zeta_image: Elt, var_images: Vec<Elt>) -> Result<Descent> {
        if r.nvars() != 0 || r.as_integer(&r.one()).is_none() || r.flat_dim() != 1 || !r.is_finite() {
            return Err(Error::UnsupportedBase(format!("{r} must be Z/n")));
        }
        let ch = r.characteristic();
        if !d.is_finite() || d.characteristic() != ch {
            return Err(Error::UnsupportedBase(format!("{d} is not a finite {r}-algebra")));
        }
        let free = d.lattice().is_some_and(|l| {
            l.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| if i == j { *x == ch } else { x.is_zero() }))
        });
        if !free {
            return Err(Error::UnsupportedBase(format!("{d} is not free over {r} on its flat basis")));
        }
        let mut desc = Descent { r: r.clone(), d: d.clone(), zeta_image, var_images, order: 0, basis: d.flat_basis() };
        let b = desc.basis.clone();
        if desc.gamma(&d.one()) != d.one() {
            return Err(Error::CertFailed("gamma(1) != 1".into()));
        }
        for x in &b {
            for y in &b {
                if desc.gamma(&d.mul(x, y)) != d.mul(&desc.gamma(x), &desc.gamma(y)) {
                    return Err(Error::CertFailed("gamma is not multiplicative".into()));
                }
            }
        }
        let mut k = 1;
        let mut cur: Vec<Elt> = b.iter().map(|x| desc.gamma(x)).collect();
        while cur != b {
            k += 1;
            if k > 64 {
                return Err(Error::CertFailed("gamma has no finite order below 64".into()));
            }
            cur = cur.iter().map(|x| desc.gamma(x)).collect();
        }
        desc.order = k;
        let fixed = Subspace::kernel(r, &linalg::mat_sub(r, &desc.d_as_algebra().sigma, &linalg::identity(r, b.len())), b.len())?;
        if fixed.dim() != 1 {
            return Err(Error::CertFailed(format!("fixed ring of gamma has rank {}, not 1", fixed.dim())));
        }
        Ok(desc)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn gamma(&self, x: &Elt) -> Elt {
        self.d.map_to(&self.d, &self.zeta_image, &self.var_images, x)
    }

    pub fn gamma_pow(&self, x: &Elt, k: usize) -> Elt {
        (0..k % self.order.max(1)).fold(x.clone(), |acc, _| self.gamma(&acc))
    }

    /// Coordinates of x in the flat basis, as elements of R.
    pub fn to_r(&self, x: &Elt) -> Vec<Elt> {
        let ch = self.r.characteristic();
        self.d.flatten(x).iter().map(|c| self.r.from_int(&c.mod_floor(&ch))).collect()
    }

    pub fn from_r(&self, v: &[Elt]) -> Elt {
        let coords: Vec<Int> = v.iter().map(|c| self.r.as_integer(c).expect("R element is an integer")).collect();
        self.d.unflatten(&coords)
    }

    pub fn lift(&self, x: &Elt) -> Elt {
        self.d.from_int(&self.r.as_integer(x).expect("R element is an integer"))
    }

    /// D as an R-algebra acted on by gamma.
    pub fn d_as_algebra(&self) -> GaloisAlgebra {
        let n = self.dim();
        let table = (0..n * n).map(|ij| self.to_r(&self.d.mul(&self.basis[ij / n], &self.basis[ij % n]))).collect();
        let one = self.to_r(&self.d.one());
        let cols: Vec<Vec<Elt>> = self.basis.iter().map(|b| self.to_r(&self.gamma(b))).collect();
        GaloisAlgebra { base: self.r.clone(), rank: n, table, one, sigma: linalg::from_columns(&cols) }
    }

    /// T' (x)_R D.
    pub fn extend(&self, t: &GaloisAlgebra) -> Result<GaloisAlgebra> {
        if t.base != self.r {
            return Err(Error::UnsupportedBase(format!("{} is not {}", t.base, self.r)));
        }
        t.base_change(&self.d, |x| self.lift(x))
    }

    /// gamma^k(T): structure constants and action twisted by gamma^k.
    pub fn twist(&self, t: &GaloisAlgebra, k: usize) -> GaloisAlgebra {
        let f = |x: &Elt| self.gamma_pow(x, k);
        GaloisAlgebra {
            base: t.base.clone(),
            rank: t.rank,
            table: t.table.iter().map(|v| v.iter().map(f).collect()).collect(),
            one: t.one.iter().map(f).collect(),
            sigma: linalg::mat_map(&t.sigma, f),
        }
    }

    /// A D-vector in R-coordinates: index j*d + k holds the b_k-coordinate of entry j.
    pub fn restrict_vec(&self, v: &[Elt]) -> Vec<Elt> {
        v.iter().flat_map(|x| self.to_r(x)).collect()
    }

    pub fn extend_vec(&self, v: &[Elt]) -> Vec<Elt> {
        v.chunks(self.dim()).map(|c| self.from_r(c)).collect()
    }

    /// A D-linear map in R-coordinates.
    pub fn restrict_matrix(&self, m: &Mat) -> Mat {
        let d = self.dim();
        let n = m.len();
        let mut out = linalg::zeros(&self.r, n * d, n * d);
        for j in 0..n {
            for (k, b) in self.basis.iter().enumerate() {
                for i in 0..n {
                    let c = self.to_r(&self.d.mul(&m[i][j], b));
                    for (l, x) in c.into_iter().enumerate() {
                        out[i * d + l][j * d + k] = x;
                    }
                }
            }
        }
        out
    }

    /// Restriction of scalars of a D-algebra (unchecked; the source is checked).
    pub fn restrict(&self, w: &GaloisAlgebra) -> GaloisAlgebra {
        let d = self.dim();
        let n = w.rank;
        let big = n * d;
        let mut table = Vec::with_capacity(big * big);
        for a in 0..big {
            for b in 0..big {
                let c = self.d.mul(&self.basis[a % d], &self.basis[b % d]);
                let v = w.scale(&c, &w.table[(a / d) * n + b / d]);
                table.push(self.restrict_vec(&v));
            }
        }
        GaloisAlgebra {
            base: self.r.clone(),
            rank: big,
            table,
            one: self.restrict_vec(&w.one),
            sigma: self.restrict_matrix(&w.sigma),
        }
    }
}

/// Cor_{D/R}(T/D) with the image of sigma on the first factor as generator.
pub fn corestrict(desc: &Descent, t: &GaloisAlgebra) -> Result<Corestriction> {
    if t.base != desc.d {
        return Err(Error::UnsupportedBase(format!("{} is not {}", t.base, desc.d)));
    }
    let c = desc.order();
    let n = t.rank;
    let d = desc.dim();
    let w_rank = n.checked_pow(c as u32).filter(|&x| x * d <= max_tensor()).ok_or(Error::RankOverflow {
        rank: n.saturating_pow(c as u32).saturating_mul(d),
        cap: max_tensor(),
    })?;
    let dr = &desc.d;
    let factors: Vec<GaloisAlgebra> = (0..c).map(|k| desc.twist(t, k)).collect();
    let mut w = factors[0].clone();
    for f in &factors[1..] {
        w = tensor(&w, f)?;
    }
    // sigma_i acts on tensor slot i (slot 0 is the most significant digit).
    let slot = |i: usize, m: &Mat| -> Mat {
        let left = linalg::identity(dr, n.pow(i as u32));
        let right = linalg::identity(dr, n.pow((c - 1 - i) as u32));
        linalg::kron(dr, &linalg::kron(dr, &left, m), &right)
    };
    let sig: Vec<Mat> = (0..c).map(|i| slot(i, &factors[i].sigma)).collect();
    let sig_inv: Vec<Mat> = (0..c).map(|i| slot(i, &factors[i].sigma_pow(n - 1))).collect();
    let mut ngens: Vec<Mat> = (1..c).map(|i| desc.restrict_matrix(&linalg::mat_mul(dr, &sig[0], &sig_inv[i]))).collect();
    let s0 = desc.restrict_matrix(&sig[0]);
    let wr = GaloisAlgebra { sigma: s0.clone(), ..desc.restrict(&w) };
    let gamma = shift_matrix(desc, n, c);
    let t2_sub = Subspace::kernel(&desc.r, &stack(&desc.r, &ngens), wr.rank)?;
    ngens.push(gamma);
    let s = fixed_ring(&wr, &ngens, &s0)?;
    let t2_rank = t2_sub.dim();
    // S (x) D -> W^N: the vectors b_k s_j in coordinates of W^N.
    let mut descends = t2_rank == d * s.alg.rank;
    if descends {
        let mut cols = Vec::with_capacity(t2_rank);
        for sj in &s.embedding {
            let dv = desc.extend_vec(sj);
            for b in desc.d.flat_basis() {
                let scaled = desc.restrict_vec(&w.scale(&b, &dv));
                cols.push(t2_sub.coords(&desc.r, &scaled)?);
            }
        }
        descends = linalg::det_is_unit(&desc.r, &linalg::from_columns(&cols))?;
    }
    let t2 = if descends { Some(d_fixed(desc, &w, &sig, n, c)?) } else { None };
    Ok(Corestriction { alg: s.alg, w_rank, t2_rank, descends, t2 })
}

fn stack(r: &Ring, gens: &[Mat]) -> Mat {
    let mut out = Vec::new();
    for g in gens {
        let k = g.len();
        out.extend(linalg::mat_sub(r, g, &linalg::identity(r, k)));
    }
    out
}

/// Gamma in R-coordinates: b_k e_(j_0..j_(c-1)) -> gamma(b_k) e_(j_(c-1), j_0, ..., j_(c-2)).
fn shift_matrix(desc: &Descent, n: usize, c: usize) -> Mat {
    let d = desc.dim();
    let total = n.pow(c as u32);
    let mut m = linalg::zeros(&desc.r, total * d, total * d);
    let gb: Vec<Vec<Elt>> = desc.d.flat_basis().iter().map(|b| desc.to_r(&desc.gamma(b))).collect();
    let top = n.pow((c - 1) as u32);
    for j in 0..total {
        // Digits are most significant first; rotate right by one slot.
        let image = (j % n) * top + j / n;
        for (k, col) in gb.iter().enumerate() {
            for (l, x) in col.iter().enumerate() {
                m[image * d + l][j * d + k] = x.clone();
            }
        }
    }
    m
}

/// W^N as a D-algebra; N acts D-linearly, so its kernel is taken over D.
fn d_fixed(desc: &Descent, w: &GaloisAlgebra, sig: &[Mat], n: usize, c: usize) -> Result<GaloisAlgebra> {
    let dr = &desc.d;
    if !dr.is_local()? {
        return Err(Error::UnsupportedBase(format!("{dr} is not local")));
    }
    let gens: Vec<Mat> = (1..c).map(|i| linalg::mat_mul(dr, &sig[0], &linalg::mat_pow(dr, &sig[i], (n - 1) as u64))).collect();
    Ok(fixed_ring(w, &gens, &sig[0])?.alg)
}
