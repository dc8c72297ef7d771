//! Group operations on cyclic extensions: split and induced extensions,
//! tensor products, fixed rings, product, inverse and powers.

use super::{max_tensor, GaloisAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::ring::{Elt, Ring};

/// A free submodule with a coordinate map.
pub(crate) struct Subspace {
    pub basis: Vec<Vec<Elt>>,
    /// Over local rings a kernel basis has 1 at its own free column and 0 at
    /// the other free columns, so coordinates are read off there.
    free_cols: Option<Vec<usize>>,
}

impl Subspace {
    /// Kernel of a (rows x ncols).
    pub fn kernel(r: &Ring, a: &Mat, ncols: usize) -> Result<Subspace> {
        if a.is_empty() {
            let basis = (0..ncols).map(|i| (0..ncols).map(|j| if i == j { r.one() } else { r.zero() }).collect()).collect();
            return Ok(Subspace { basis, free_cols: Some((0..ncols).collect()) });
        }
        let basis = linalg::kernel(r, a, ncols)?;
        let isolating = |k: usize| {
            (0..ncols).find(|&c| r.is_one(&basis[k][c]) && basis.iter().enumerate().all(|(l, b)| l == k || b[c].is_zero()))
        };
        let free_cols = (0..basis.len()).map(isolating).collect::<Option<Vec<usize>>>();
        Ok(Subspace { basis, free_cols })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, r: &Ring, v: &[Elt]) -> Result<Vec<Elt>> {
        let c = match &self.free_cols {
            Some(f) => f.iter().map(|&i| v[i].clone()).collect(),
            None => linalg::solve(r, &linalg::from_columns(&self.basis), v)?
                .ok_or_else(|| Error::SolveFailed("vector outside the subspace".into()))?,
        };
        let mut back = vec![r.zero(); v.len()];
        for (ck, b) in c.iter().zip(&self.basis) {
            for (x, y) in back.iter_mut().zip(b) {
                *x = r.add(x, &r.mul(ck, y));
            }
        }
        if back != v {
            return Err(Error::SolveFailed("vector outside the subspace".into()));
        }
        Ok(c)
    }
}

/// R^n with the cyclic shift sigma(e_j) = e_(j-1), the identity element.
pub fn split_extension(base: &Ring, n: usize) -> Result<GaloisAlgebra> {
    let z = base.zero();
    let mut table = vec![vec![z.clone(); n]; n * n];
    for i in 0..n {
        table[i * n + i][i] = base.one();
    }
    let one = vec![base.one(); n];
    let mut sigma = linalg::zeros(base, n, n);
    for j in 0..n {
        sigma[(j + n - 1) % n][j] = base.one();
    }
    GaloisAlgebra::new(base.clone(), table, one, sigma)
}

fn same_base(s: &GaloisAlgebra, t: &GaloisAlgebra) -> Result<()> {
    if s.base != t.base {
        return Err(Error::UnsupportedBase(format!("bases differ: {} and {}", s.base, t.base)));
    }
    Ok(())
}

/// S (x) T with basis e_i (x) f_j at index i*m + j, acted on by sigma (x) 1.
pub fn tensor(s: &GaloisAlgebra, t: &GaloisAlgebra) -> Result<GaloisAlgebra> {
    same_base(s, t)?;
    let r = &s.base;
    let (n, m) = (s.rank, t.rank);
    if n * m > max_tensor() {
        return Err(Error::RankOverflow { rank: n * m, cap: max_tensor() });
    }
    let mut table = Vec::with_capacity(n * n * m * m);
    for i in 0..n {
        for j in 0..m {
            for k in 0..n {
                for l in 0..m {
                    let a = &s.table[i * n + k];
                    let b = &t.table[j * m + l];
                    let mut v = vec![r.zero(); n * m];
                    for (u, x) in a.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (w, y) in b.iter().enumerate() {
                            if !y.is_zero() {
                                v[u * m + w] = r.mul(x, y);
                            }
                        }
                    }
                    table.push(v);
                }
            }
        }
    }
    let mut one = vec![r.zero(); n * m];
    for (u, x) in s.one.iter().enumerate() {
        for (w, y) in t.one.iter().enumerate() {
            one[u * m + w] = r.mul(x, y);
        }
    }
    let sigma = linalg::kron(r, &s.sigma, &linalg::identity(r, m));
    Ok(GaloisAlgebra { base: r.clone(), rank: n * m, table, one, sigma })
}

/// A fixed ring with its embedding (basis columns in the ambient coordinates).
#[derive(Clone, Debug)]
pub struct FixedRing {
    pub alg: GaloisAlgebra,
    pub embedding: Vec<Vec<Elt>>,
}

/// Simultaneous fixed points of the automorphisms `gens`, with the action
/// induced by `induced` (which must normalise the group they generate).
pub fn fixed_ring(t: &GaloisAlgebra, gens: &[Mat], induced: &Mat) -> Result<FixedRing> {
    let r = &t.base;
    let n = t.rank;
    let mut stacked: Mat = Vec::new();
    for g in gens {
        stacked.extend(linalg::mat_sub(r, g, &linalg::identity(r, n)));
    }
    let sub = Subspace::kernel(r, &stacked, n)?;
    let k = sub.dim();
    let mut table = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            table.push(sub.coords(r, &t.mul(&sub.basis[i], &sub.basis[j])).map_err(|_| {
                Error::CertFailed("fixed module is not closed under multiplication".into())
            })?);
        }
    }
    let one = sub.coords(r, &t.one)?;
    let cols: Result<Vec<Vec<Elt>>> = sub.basis.iter().map(|b| sub.coords(r, &t.apply(induced, b))).collect();
    let sigma = linalg::from_columns(&cols?);
    let alg = GaloisAlgebra::new(r.clone(), table, one, sigma)?;
    Ok(FixedRing { alg, embedding: sub.basis })
}

/// (S (x) T)^N for N = <(sigma^(n/m), tau^(-1))>, generated by the image of sigma.
pub fn product(s: &GaloisAlgebra, t: &GaloisAlgebra) -> Result<GaloisAlgebra> {
    same_base(s, t)?;
    let (n, m) = (s.rank, t.rank);
    if m == 0 || n % m != 0 {
        return Err(Error::OutOfRange(format!("degree {m} does not divide {n}")));
    }
    let r = &s.base;
    let w = tensor(s, t)?;
    let ngen = linalg::kron(r, &s.sigma_pow(n / m), &t.sigma_pow(m - 1));
    Ok(fixed_ring(&w, &[ngen], &w.sigma)?.alg)
}

/// The same algebra generated by sigma^(-1).
pub fn inverse(s: &GaloisAlgebra) -> GaloisAlgebra {
    s.with_generator_power(s.rank.max(1) - 1)
}

/// The k-th power in the group of cyclic extensions of degree |S|.
pub fn power(s: &GaloisAlgebra, k: usize) -> Result<GaloisAlgebra> {
    if k == 0 {
        return split_extension(&s.base, s.rank);
    }
    let mut acc = s.clone();
    for _ in 1..k {
        acc = product(&acc, s)?;
    }
    Ok(acc)
}

/// Ind from H = <sigma^c> (acting on T' through its generator) to G of
/// order c |H|. Coordinates (j, i) at index j*h + i hold f(sigma^j) in the
/// basis of T'; sigma shifts the components and applies tau at the wrap.
pub fn induce(t: &GaloisAlgebra, c: usize) -> Result<GaloisAlgebra> {
    let r = &t.base;
    let h = t.rank;
    let n = c * h;
    if n > super::max_rank() {
        return Err(Error::RankOverflow { rank: n, cap: super::max_rank() });
    }
    let z = r.zero();
    let mut table = vec![vec![z.clone(); n]; n * n];
    for j in 0..c {
        for a in 0..h {
            for b in 0..h {
                let v = &t.table[a * h + b];
                let row = &mut table[(j * h + a) * n + j * h + b];
                row[j * h..(j + 1) * h].clone_from_slice(v);
            }
        }
    }
    let mut one = vec![z.clone(); n];
    for j in 0..c {
        one[j * h..(j + 1) * h].clone_from_slice(&t.one);
    }
    let mut sigma = linalg::zeros(r, n, n);
    for j in 0..c {
        for i in 0..h {
            if j >= 1 {
                sigma[(j - 1) * h + i][j * h + i] = r.one();
            } else {
                for k in 0..h {
                    sigma[(c - 1) * h + k][i] = t.sigma[k][i].clone();
                }
            }
        }
    }
    GaloisAlgebra::new(r.clone(), table, one, sigma)
}

/// Separability idempotents e_g of S (x) S, g = sigma^k at index k.
#[derive(Clone, Debug)]
pub struct IdempotentFamily {
    pub host: GaloisAlgebra,
    pub idempotents: Vec<Vec<Elt>>,
}

/// Solve psi(e_g) = delta_g for psi(s (x) t) = (s h(t))_h.
pub fn idempotent_family(s: &GaloisAlgebra) -> Result<IdempotentFamily> {
    let r = &s.base;
    let n = s.rank;
    let host = tensor(s, s)?;
    let pows: Vec<Mat> = (0..n).map(|h| s.sigma_pow(h)).collect();
    let mut cols = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut col = Vec::with_capacity(n * n);
            for p in &pows {
                col.extend(s.mul(&s.basis(i), &s.apply(p, &s.basis(j))));
            }
            cols.push(col);
        }
    }
    let psi = linalg::from_columns(&cols);
    let solver = linalg::Solver::new(r, &psi)?;
    let mut idempotents = Vec::with_capacity(n);
    for g in 0..n {
        let mut target = vec![r.zero(); n * n];
        target[g * n..(g + 1) * n].clone_from_slice(&s.one);
        idempotents.push(solver.solve(&target).ok_or_else(|| Error::SolveFailed(format!("no e_{g}: not Galois")))?);
    }
    let fam = IdempotentFamily { host, idempotents };
    fam.check(s)?;
    Ok(fam)
}

impl IdempotentFamily {
    fn check(&self, s: &GaloisAlgebra) -> Result<()> {
        let h = &self.host;
        let n = s.rank;
        let total = self.idempotents.iter().fold(h.zero(), |acc, e| h.add(&acc, e));
        if total != h.one {
            return Err(Error::CertFailed("idempotents do not sum to 1".into()));
        }
        for (g, e) in self.idempotents.iter().enumerate() {
            for (k, f) in self.idempotents.iter().enumerate() {
                let ef = h.mul(e, f);
                let want = if g == k { e.clone() } else { h.zero() };
                if ef != want {
                    return Err(Error::CertFailed(format!("e_{g} e_{k} is wrong")));
                }
            }
            let sg = s.sigma_pow(g);
            for i in 0..n {
                let b = s.basis(i);
                let left = tensor_pure(h, s, &s.apply(&sg, &b), &s.one);
                let right = tensor_pure(h, s, &s.one, &b);
                if !h.mul(&h.sub(&left, &right), e).iter().all(|x| x.is_zero()) {
                    return Err(Error::CertFailed(format!("(g(s) (x) 1 - 1 (x) s) e_{g} != 0")));
                }
            }
        }
        Ok(())
    }
}

fn tensor_pure(h: &GaloisAlgebra, s: &GaloisAlgebra, x: &[Elt], y: &[Elt]) -> Vec<Elt> {
    let n = s.rank;
    let mut v = h.zero();
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            v[i * n + j] = h.base.mul(a, b);
        }
    }
    v
}
