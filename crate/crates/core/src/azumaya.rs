//! Rank n^2 algebras given by structure constants: the symbols (a,b) and
//! (a,b)_rho of degree p, and the special sort Delta(S/R, a, alpha, b).
//!
//! Every algebra carries its distinguished x, y and an embedded commutative
//! subalgebra S = R[alpha] with x s = sigma(s) x and s y = y sigma(s).

use crate::error::{Error, Result};
use crate::galois::GaloisAlgebra;
use crate::kummer::defining_polynomial;
use crate::linalg::{self, Mat, Solver};
use crate::ring::{Elt, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

/// Rank above which associativity is sampled instead of checked on all triples.
const FULL_ASSOC_RANK: usize = 16;
const ASSOC_SAMPLES: usize = 4000;
/// Largest rank for which the enveloping map A (x) A^op -> End(A) is formed;
/// shares the CYCLOTOME_MAX_RANK override with the extension cap.
pub fn envelope_cap() -> usize {
    crate::galois::max_rank()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    /// (a,b) in characteristic p: xy - yx = 1.
    Ab,
    /// (a,b)_rho: xy - rho yx = 1.
    AbRho,
    SpecialSort,
    /// (S/R, sigma, a) with y = x^(n-1).
    Cyclic,
}

#[derive(Clone, Debug)]
pub struct SCAlgebra {
    pub base: Ring,
    pub kind: Kind,
    /// Degree; the rank is n^2.
    pub n: usize,
    pub rank: usize,
    /// table[i*rank + j] = coordinates of e_i e_j.
    pub table: Vec<Vec<Elt>>,
    pub one: Vec<Elt>,
    pub x: Vec<Elt>,
    pub y: Vec<Elt>,
    pub a: Elt,
    pub b: Elt,
    pub s: GaloisAlgebra,
    /// Images of the basis of S.
    pub s_embed: Vec<Vec<Elt>>,
    /// alpha = xy in S-coordinates.
    pub alpha: Vec<Elt>,
    pub labels: Vec<String>,
}

impl SCAlgebra {
    pub fn zero(&self) -> Vec<Elt> {
        vec![self.base.zero(); self.rank]
    }

    pub fn basis(&self, i: usize) -> Vec<Elt> {
        let mut v = self.zero();
        v[i] = self.base.one();
        v
    }

    pub fn scalar(&self, c: &Elt) -> Vec<Elt> {
        self.scale(c, &self.one)
    }

    pub fn add(&self, u: &[Elt], v: &[Elt]) -> Vec<Elt> {
        u.iter().zip(v).map(|(p, q)| self.base.add(p, q)).collect()
    }

    pub fn sub(&self, u: &[Elt], v: &[Elt]) -> Vec<Elt> {
        u.iter().zip(v).map(|(p, q)| self.base.sub(p, q)).collect()
    }

    pub fn scale(&self, c: &Elt, u: &[Elt]) -> Vec<Elt> {
        u.iter().map(|p| self.base.mul(c, p)).collect()
    }

    pub fn mul(&self, u: &[Elt], v: &[Elt]) -> Vec<Elt> {
        let r = &self.base;
        let n = self.rank;
        let mut acc = self.zero();
        for (i, ui) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let c = r.mul(ui, vj);
                if c.is_zero() {
                    continue;
                }
                for (k, t) in self.table[i * n + j].iter().enumerate().filter(|(_, t)| !t.is_zero()) {
                    acc[k] = r.add(&acc[k], &r.mul(&c, t));
                }
            }
        }
        acc
    }

    pub fn pow(&self, u: &[Elt], e: u64) -> Vec<Elt> {
        (0..e).fold(self.one.clone(), |acc, _| self.mul(&acc, u))
    }

    pub fn product(&self, factors: &[&[Elt]]) -> Vec<Elt> {
        factors.iter().fold(self.one.clone(), |acc, f| self.mul(&acc, f))
    }

    /// Image of an element of S.
    pub fn embed(&self, s: &[Elt]) -> Vec<Elt> {
        s.iter().zip(&self.s_embed).fold(self.zero(), |acc, (c, e)| self.add(&acc, &self.scale(c, e)))
    }

    /// S-coordinates of z, or None when z is not in S.
    pub fn to_s(&self, z: &[Elt]) -> Result<Option<Vec<Elt>>> {
        linalg::solve(&self.base, &linalg::from_columns(&self.s_embed), z)
    }

    /// Column j = u e_j.
    pub fn lmul(&self, u: &[Elt]) -> Mat {
        linalg::from_columns(&(0..self.rank).map(|j| self.mul(u, &self.basis(j))).collect::<Vec<_>>())
    }

    /// Column j = e_j u.
    pub fn rmul(&self, u: &[Elt]) -> Mat {
        linalg::from_columns(&(0..self.rank).map(|j| self.mul(&self.basis(j), u)).collect::<Vec<_>>())
    }

    pub fn fmt_vec(&self, u: &[Elt]) -> String {
        let terms: Vec<String> = u
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| if self.base.is_one(c) { l.clone() } else { format!("({})*{l}", self.base.fmt_elt(c)) })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Unit and associativity on all basis triples, or on a fixed-seed sample
    /// once the rank exceeds FULL_ASSOC_RANK.
    pub fn check_associative(&self) -> Result<()> {
        let n = self.rank;
        let e: Vec<Vec<Elt>> = (0..n).map(|i| self.basis(i)).collect();
        for (i, ei) in e.iter().enumerate() {
            if self.mul(&self.one, ei) != *ei || self.mul(ei, &self.one) != *ei {
                return Err(Error::CertFailed(format!("1 is not an identity on {}", self.labels[i])));
            }
        }
        let check = |i: usize, j: usize, k: usize| -> Result<()> {
            if self.mul(&self.mul(&e[i], &e[j]), &e[k]) != self.mul(&e[i], &self.mul(&e[j], &e[k])) {
                return Err(Error::CertFailed(format!(
                    "associativity fails on {} {} {}",
                    self.labels[i], self.labels[j], self.labels[k]
                )));
            }
            Ok(())
        };
        if n <= FULL_ASSOC_RANK {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        check(i, j, k)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..ASSOC_SAMPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// x s = sigma(s) x and s y = y sigma(s) on the basis of S, plus
    /// x^n = a, y^n = b and xy = alpha.
    fn check_relations(&self) -> Result<()> {
        let s = &self.s;
        for k in 0..s.rank {
            let e = &self.s_embed[k];
            let se = self.embed(&s.apply(&s.sigma, &s.basis(k)));
            if self.mul(&self.x, e) != self.mul(&se, &self.x) {
                return Err(Error::CertFailed(format!("x s != sigma(s) x on basis element {k} of S")));
            }
            if self.mul(e, &self.y) != self.mul(&self.y, &se) {
                return Err(Error::CertFailed(format!("s y != y sigma(s) on basis element {k} of S")));
            }
        }
        let n = self.n as u64;
        if self.pow(&self.x, n) != self.scalar(&self.a) {
            return Err(Error::CertFailed("x^n != a".into()));
        }
        if self.pow(&self.y, n) != self.scalar(&self.b) {
            return Err(Error::CertFailed("y^n != b".into()));
        }
        if self.mul(&self.x, &self.y) != self.embed(&self.alpha) {
            return Err(Error::CertFailed("xy != alpha".into()));
        }
        Ok(())
    }

    /// Reduce every structure constant through f into another base.
    pub fn base_change(&self, target: &Ring, f: impl Fn(&Elt) -> Elt) -> Result<SCAlgebra> {
        let map = |v: &Vec<Elt>| v.iter().map(&f).collect::<Vec<Elt>>();
        Ok(SCAlgebra {
            base: target.clone(),
            table: self.table.iter().map(map).collect(),
            one: map(&self.one),
            x: map(&self.x),
            y: map(&self.y),
            a: f(&self.a),
            b: f(&self.b),
            s: self.s.base_change(target, &f)?,
            s_embed: self.s_embed.iter().map(map).collect(),
            alpha: map(&self.alpha),
            ..self.clone()
        })
    }
}

/// Normal form of y^j x^k in the monomials x^u y^v, using yx = c (xy - 1).
fn yx_normal_forms(r: &Ring, p: usize, c: &Elt) -> HashMap<(usize, usize), HashMap<(usize, usize), Elt>> {
    let add_to = |m: &mut HashMap<(usize, usize), Elt>, key: (usize, usize), v: Elt| {
        let e = m.entry(key).or_insert_with(|| r.zero());
        *e = r.add(e, &v);
    };
    // y x^k for k < p.
    let mut y1: Vec<HashMap<(usize, usize), Elt>> = vec![HashMap::from([((0, 1), r.one())])];
    for k in 1..p {
        let mut m = HashMap::new();
        for (&(u, v), coef) in &y1[k - 1] {
            add_to(&mut m, (u + 1, v), r.mul(c, coef));
        }
        add_to(&mut m, (k - 1, 0), r.neg(c));
        y1.push(m);
    }
    let mut out = HashMap::new();
    for k in 0..p {
        let mut cur: HashMap<(usize, usize), Elt> = HashMap::from([((k, 0), r.one())]);
        out.insert((0, k), cur.clone());
        for j in 1..p {
            let mut next = HashMap::new();
            for (&(u, v), coef) in &cur {
                for (&(u2, v2), c2) in &y1[u] {
                    add_to(&mut next, (u2, v2 + v), r.mul(coef, c2));
                }
            }
            next.retain(|_, v| !v.is_zero());
            cur = next;
            out.insert((j, k), cur.clone());
        }
    }
    out
}

/// c with alpha^p + g(alpha) = c: ab for odd p, and -ab for p = 2, where
/// xy + yx = 1 forces alpha^2 - alpha = -x^2 y^2.
pub fn symbol_parameter(r: &Ring, p: u64, a: &Elt, b: &Elt) -> Elt {
    let ab = r.mul(a, b);
    if p == 2 {
        r.neg(&ab)
    } else {
        ab
    }
}

fn build_symbol(base: &Ring, p: u64, a: &Elt, b: &Elt, kind: Kind) -> Result<SCAlgebra> {
    let r = base;
    let n = p as usize;
    let rank = n * n;
    let rho = r.rho_for(p)?;
    let rho_inv = r.pow(&rho, p - 1);
    let forms = yx_normal_forms(r, n, &rho_inv);
    let idx = |i: usize, j: usize| i * n + j;
    let mut table = Vec::with_capacity(rank * rank);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = vec![r.zero(); rank];
                    for (&(u, w), c) in &forms[&(j, k)] {
                        let (mut ex, mut ey, mut coef) = (i + u, w + l, c.clone());
                        if ex >= n {
                            ex -= n;
                            coef = r.mul(&coef, a);
                        }
                        if ey >= n {
                            ey -= n;
                            coef = r.mul(&coef, b);
                        }
                        v[idx(ex, ey)] = r.add(&v[idx(ex, ey)], &coef);
                    }
                    table.push(v);
                }
            }
        }
    }
    let labels = (0..rank)
        .map(|t| {
            let (i, j) = (t / n, t % n);
            match (i, j) {
                (0, 0) => "1".to_string(),
                _ => [(i, "x"), (j, "y")]
                    .iter()
                    .filter(|(e, _)| *e > 0)
                    .map(|(e, s)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") })
                    .collect::<Vec<_>>()
                    .join("*"),
            }
        })
        .collect();
    let unit = |t: usize| {
        let mut v = vec![r.zero(); rank];
        v[t] = r.one();
        v
    };
    let f = defining_polynomial(r, p, &symbol_parameter(r, p, a, b))?;
    let tail: Vec<Elt> = f[..n].iter().map(|c| r.neg(c)).collect();
    let mut sigma_x = vec![r.zero(); n];
    sigma_x[0] = r.one();
    sigma_x[1] = r.add(&sigma_x[1], &rho);
    let s = GaloisAlgebra::from_monic(r, &tail, &sigma_x)?;
    let mut alg = SCAlgebra {
        base: r.clone(),
        kind,
        n,
        rank,
        table,
        one: unit(0),
        x: unit(idx(1, 0)),
        y: unit(idx(0, 1)),
        a: a.clone(),
        b: b.clone(),
        s_embed: Vec::new(),
        alpha: s.basis(1),
        s,
        labels,
    };
    let alpha = alg.mul(&alg.x, &alg.y);
    alg.s_embed = (0..p).map(|k| alg.pow(&alpha, k)).collect();
    alg.check_associative()?;
    alg.check_relations()?;
    // xy - rho yx = 1, and alpha satisfies Z^p + g(Z) - ab.
    let yx = alg.mul(&alg.y, &alg.x);
    if alg.sub(&alpha, &alg.scale(&rho, &yx)) != alg.one {
        return Err(Error::CertFailed("xy - rho yx != 1".into()));
    }
    let fa = f.iter().enumerate().fold(alg.zero(), |acc, (k, c)| alg.add(&acc, &alg.scale(c, &alg.pow(&alpha, k as u64))));
    if fa.iter().any(|c| !c.is_zero()) {
        return Err(Error::CertFailed("alpha does not satisfy Z^p + g(Z) - c".into()));
    }
    Ok(alg)
}

/// (a,b) over a base of characteristic p: x^p = a, y^p = b, xy - yx = 1.
/// alpha = xy satisfies alpha^p - alpha = ab.
pub fn build_ab(base: &Ring, p: u64, a: &Elt, b: &Elt) -> Result<SCAlgebra> {
    if !base.is_zero(&base.from_i64(p as i64)) {
        return Err(Error::CharMismatch(format!("(a,b) needs characteristic {p}; {base} has characteristic {}", base.characteristic())));
    }
    build_symbol(base, p, a, b, Kind::Ab)
}

/// (a,b)_rho: x^p = a, y^p = b, xy - rho yx = 1. alpha = xy satisfies
/// alpha^p + g(alpha) = c (see symbol_parameter), and the algebra is
/// Azumaya iff 1 + c eta^p is a unit.
pub fn build_ab_rho(base: &Ring, p: u64, a: &Elt, b: &Elt) -> Result<SCAlgebra> {
    build_symbol(base, p, a, b, Kind::AbRho)
}

#[derive(Clone, Debug, Serialize)]
pub struct AzumayaCertificate {
    pub kind: Kind,
    pub rank: usize,
    pub azumaya: bool,
    /// Determinant of A (x) A^op -> End_R(A), when small enough to print.
    pub det: Option<String>,
    pub residue_ranks: Option<Vec<usize>>,
    /// The predicted answer: is_unit(1 + c eta^p) for (a,b)_rho, true otherwise.
    pub predicted: bool,
    pub agrees: bool,
}

/// Columns (i, j) = flattened z -> e_i z e_j.
pub fn enveloping_matrix(alg: &SCAlgebra) -> Mat {
    let r = &alg.base;
    let n = alg.rank;
    let rights: Vec<Mat> = (0..n).map(|j| alg.rmul(&alg.basis(j))).collect();
    let mut cols = Vec::with_capacity(n * n);
    for i in 0..n {
        let l = alg.lmul(&alg.basis(i));
        for rj in &rights {
            cols.push(linalg::mat_mul(r, &l, rj).into_iter().flatten().collect::<Vec<Elt>>());
        }
    }
    linalg::from_columns(&cols)
}

/// The cyclic algebra (S/R, sigma, a) = sum S x^i with x s = sigma(s) x and
/// x^n = a, presented as an almost cyclic algebra with y = x^(n-1), so
/// alpha = a and b = a^(n-1). For a non-unit a it is the standard
/// non-Azumaya algebra whose S is still Galois.
pub fn build_cyclic(s: &GaloisAlgebra, a: &Elt) -> Result<SCAlgebra> {
    let r = &s.base;
    let n = s.rank;
    if n < 2 {
        return Err(Error::OutOfRange("cyclic algebras need degree at least 2".into()));
    }
    let rank = n * n;
    let idx = |i: usize, k: usize| i * n + k;
    let mut table = Vec::with_capacity(rank * rank);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut c = s.mul(&s.basis(k), &s.act(i, &s.basis(l)));
                    let mut e = i + j;
                    if e >= n {
                        e -= n;
                        c = s.scale(a, &c);
                    }
                    let mut v = vec![r.zero(); rank];
                    for (m, cm) in c.into_iter().enumerate() {
                        v[idx(e, m)] = cm;
                    }
                    table.push(v);
                }
            }
        }
    }
    let embed_at = |i: usize, v: &[Elt]| {
        let mut out = vec![r.zero(); rank];
        for (m, c) in v.iter().enumerate() {
            out[idx(i, m)] = c.clone();
        }
        out
    };
    let labels = (0..rank)
        .map(|t| match t / n {
            0 => format!("e{}", t % n),
            1 => format!("e{}*x", t % n),
            i => format!("e{}*x^{i}", t % n),
        })
        .collect();
    let x = embed_at(1, &s.one);
    let y = embed_at(n - 1, &s.one);
    let alg = SCAlgebra {
        base: r.clone(),
        kind: Kind::Cyclic,
        n,
        rank,
        table,
        one: embed_at(0, &s.one),
        x,
        y,
        a: a.clone(),
        b: r.pow(a, n as u64 - 1),
        s_embed: (0..n).map(|k| embed_at(0, &s.basis(k))).collect(),
        alpha: s.scalar(a),
        s: s.clone(),
        labels,
    };
    alg.check_associative()?;
    alg.check_relations()?;
    Ok(alg)
}

pub fn predicted_azumaya(alg: &SCAlgebra) -> Result<bool> {
    let r = &alg.base;
    match alg.kind {
        Kind::AbRho => {
            let p = alg.n as u64;
            let c = symbol_parameter(r, p, &alg.a, &alg.b);
            let crit = r.add(&r.one(), &r.mul(&c, &r.pow(&r.eta_for(p)?, p)));
            r.is_unit(&crit)
        }
        Kind::Cyclic => r.is_unit(&alg.a),
        _ => Ok(true),
    }
}

pub fn is_azumaya(alg: &SCAlgebra) -> Result<AzumayaCertificate> {
    let r = &alg.base;
    if !r.is_finite() && !r.free_vars().is_empty() {
        return Err(Error::UnsupportedBase(format!("{r} has free variables; reduce to a finite quotient first")));
    }
    let cap = envelope_cap();
    if alg.rank > cap {
        return Err(Error::RankOverflow { rank: alg.rank, cap });
    }
    let m = enveloping_matrix(alg);
    let azumaya = linalg::det_is_unit(r, &m)?;
    let det = (alg.rank <= 4 && !r.is_finite()).then(|| r.fmt_elt(&linalg::det(r, &m)));
    let residue_ranks = if r.is_finite() { Some(linalg::residue_ranks(r, &m, alg.rank * alg.rank)?) } else { None };
    let predicted = predicted_azumaya(alg)?;
    Ok(AzumayaCertificate { kind: alg.kind, rank: alg.rank, azumaya, det, residue_ranks, predicted, agrees: predicted == azumaya })
}

/// is_azumaya, failing with NotAzumaya and the witness otherwise.
pub fn verify_azumaya(alg: &SCAlgebra) -> Result<AzumayaCertificate> {
    let c = is_azumaya(alg)?;
    if !c.azumaya {
        let w = c.det.clone().unwrap_or_else(|| format!("residue ranks {:?} of {}", c.residue_ranks, alg.rank * alg.rank));
        return Err(Error::NotAzumaya(w));
    }
    Ok(c)
}

/// Common kernel of z -> gz - zg over the generators.
fn commutant(alg: &SCAlgebra, gens: &[Vec<Elt>]) -> Result<Vec<Vec<Elt>>> {
    let r = &alg.base;
    let mut rows: Mat = Vec::new();
    for g in gens {
        rows.extend(linalg::mat_sub(r, &alg.lmul(g), &alg.rmul(g)));
    }
    linalg::kernel(r, &rows, alg.rank)
}

/// A basis of the center; generated by x, y and S.
pub fn center(alg: &SCAlgebra) -> Result<Vec<Vec<Elt>>> {
    let mut gens = vec![alg.x.clone(), alg.y.clone()];
    gens.extend(alg.s_embed.iter().cloned());
    commutant(alg, &gens)
}

/// A basis of the centralizer of S.
pub fn centralizer_of_s(alg: &SCAlgebra) -> Result<Vec<Vec<Elt>>> {
    commutant(alg, &alg.s_embed)
}

/// adj(alpha) = prod_{i=1}^{n-1} sigma^i(alpha), so alpha adj(alpha) = N(alpha).
pub fn adj(s: &GaloisAlgebra, alpha: &[Elt]) -> Vec<Elt> {
    (1..s.rank).fold(s.one.clone(), |acc, i| s.mul(&acc, &s.act(i, alpha)))
}

/// Whether the S-ideal generated by the elements is S.
fn ideal_is_s(s: &GaloisAlgebra, gens: &[Vec<Elt>]) -> Result<bool> {
    let vecs: Vec<Vec<Elt>> = gens.iter().flat_map(|g| (0..s.rank).map(move |k| s.mul(&s.basis(k), g))).collect();
    linalg::spans_everything(&s.base, &vecs, s.rank)
}

#[derive(Clone, Debug, Serialize)]
pub struct Suitability {
    pub norm: String,
    /// a divides N(alpha) in R.
    pub divides: bool,
    /// N(alpha)/a, when a is not zero and divides it.
    pub b: Option<String>,
    /// Sa + S alpha + S adj(alpha) = S.
    pub generates: bool,
    pub suitable: bool,
}

/// a | N(alpha) and Sa + S alpha + S adj(alpha) = S. Also returns N(alpha)/a.
pub fn suitability(s: &GaloisAlgebra, a: &Elt, alpha: &[Elt]) -> Result<(Suitability, Option<Elt>)> {
    let r = &s.base;
    let nrm = s.as_scalar(&s.norm(alpha)).ok_or_else(|| Error::Internal("norm is not a scalar".into()))?;
    let (divides, b) = if a.is_zero() {
        (nrm.is_zero(), None)
    } else {
        let q = linalg::solve(r, &vec![vec![a.clone()]], &[nrm.clone()])?.map(|v| v[0].clone());
        (q.is_some(), q)
    };
    let generates = ideal_is_s(s, &[s.scalar(a), alpha.to_vec(), adj(s, alpha)])?;
    let rep = Suitability {
        norm: r.fmt_elt(&nrm),
        divides,
        b: b.as_ref().map(|x| r.fmt_elt(x)),
        generates,
        suitable: divides && generates,
    };
    Ok((rep, b))
}

/// A suitable alpha for a by exhaustive search over a finite S.
pub fn find_suitable_alpha(s: &GaloisAlgebra, a: &Elt) -> Result<Option<Vec<Elt>>> {
    for alpha in s.elements()? {
        if suitability(s, a, &alpha)?.0.suitable {
            return Ok(Some(alpha));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct JSigmaReport {
    /// J_sigma = Sx + Sy^(n-1) and J_sigma^-1 = Sx^(n-1) + Sy are twisted bimodules.
    pub bimodules: bool,
    /// J_sigma J_sigma^-1 = S.
    pub product_is_s: bool,
    /// J_sigma^n = S.
    pub power_is_s: bool,
    /// y^(n-1) x^(n-1) = adj(alpha).
    pub adj_identity: bool,
    /// Sa + S alpha + S adj(alpha) = S.
    pub l_is_s: bool,
    /// J_sigma = Sx, reported when a is a unit.
    pub principal: Option<bool>,
    /// product_is_s agrees with l_is_s.
    pub agrees: bool,
}

pub fn j_sigma_calculus(alg: &SCAlgebra) -> Result<JSigmaReport> {
    let r = &alg.base;
    let s = &alg.s;
    let n = alg.n as u64;
    let yn1 = alg.pow(&alg.y, n - 1);
    let xn1 = alg.pow(&alg.x, n - 1);
    let jsig = [alg.x.clone(), yn1.clone()];
    let jinv = [xn1.clone(), alg.y.clone()];
    let sig_inv = s.sigma_pow(s.rank - 1);
    let mut bimodules = true;
    for k in 0..s.rank {
        let e = &alg.s_embed[k];
        let fwd = alg.embed(&s.apply(&s.sigma, &s.basis(k)));
        let back = alg.embed(&s.apply(&sig_inv, &s.basis(k)));
        bimodules &= jsig.iter().all(|z| alg.mul(z, e) == alg.mul(&fwd, z));
        bimodules &= jinv.iter().all(|z| alg.mul(z, e) == alg.mul(&back, z));
    }
    let in_s = |z: &[Elt]| -> Result<Vec<Elt>> {
        alg.to_s(z)?.ok_or_else(|| Error::CertFailed(format!("{} is not in S", alg.fmt_vec(z))))
    };
    let prods: Vec<Vec<Elt>> = jsig.iter().flat_map(|g| jinv.iter().map(move |h| alg.mul(g, h))).map(|z| in_s(&z)).collect::<Result<_>>()?;
    let product_is_s = ideal_is_s(s, &prods)?;
    let mut words = vec![alg.one.clone()];
    for _ in 0..n {
        words = words.iter().flat_map(|w| jsig.iter().map(move |g| alg.mul(w, g))).collect();
    }
    let words: Vec<Vec<Elt>> = words.iter().map(|z| in_s(z)).collect::<Result<_>>()?;
    let power_is_s = ideal_is_s(s, &words)?;
    let adj_alpha = adj(s, &alg.alpha);
    let adj_identity = alg.mul(&yn1, &xn1) == alg.embed(&adj_alpha);
    let l_is_s = ideal_is_s(s, &[s.scalar(&alg.a), alg.alpha.clone(), adj_alpha])?;
    let principal = if r.is_unit(&alg.a)? {
        let sx: Vec<Vec<Elt>> = alg.s_embed.iter().map(|e| alg.mul(e, &alg.x)).collect();
        Some(linalg::in_span(r, &sx, &yn1)?)
    } else {
        None
    };
    Ok(JSigmaReport { bimodules, product_is_s, power_is_s, adj_identity, l_is_s, principal, agrees: product_is_s == l_is_s })
}

/// j_sigma_calculus, failing with ProductNotS when J_sigma J_sigma^-1 != S.
pub fn require_j_sigma(alg: &SCAlgebra) -> Result<JSigmaReport> {
    let rep = j_sigma_calculus(alg)?;
    if !rep.product_is_s {
        return Err(Error::ProductNotS(format!("J_sigma J_sigma^-1 over {} with a = {}", alg.base, alg.base.fmt_elt(&alg.a))));
    }
    Ok(rep)
}

/// s x^deg + t y^(n-deg); t is unused in degree 0.
#[derive(Clone, Debug)]
struct Form {
    deg: usize,
    s: Vec<Elt>,
    t: Vec<Elt>,
}

#[derive(Clone, Copy)]
enum Mono {
    X(usize),
    Y(usize),
}

/// Data for Delta(S/R, a, alpha, b). A_i is presented through
/// z -> (z y^i, z x^(n-i)) in S + S, which is injective on A_i.
struct SpecialSort<'a> {
    s: &'a GaloisAlgebra,
    n: usize,
    a: Elt,
    b: Elt,
    sig: Vec<Mat>,
    /// q[i] = x^i y^i = sigma^(i-1)(alpha) ... alpha.
    q: Vec<Vec<Elt>>,
    /// p[m] = y^m x^m = sigma^-1(alpha) ... sigma^-m(alpha).
    p: Vec<Vec<Elt>>,
}

impl SpecialSort<'_> {
    fn act(&self, k: i64, v: &[Elt]) -> Vec<Elt> {
        self.s.apply(&self.sig[k.rem_euclid(self.n as i64) as usize], v)
    }

    fn mono_mul(&self, c: &[Elt], m1: Mono, d: &[Elt], m2: Mono) -> (Vec<Elt>, Mono) {
        let s = self.s;
        let n = self.n;
        let mono = |k: usize, y: bool| if y && k > 0 { Mono::Y(k) } else { Mono::X(k) };
        match (m1, m2) {
            (Mono::X(i), Mono::X(j)) => {
                let coef = s.mul(c, &self.act(i as i64, d));
                if i + j >= n {
                    (s.scale(&self.a, &coef), mono(i + j - n, false))
                } else {
                    (coef, mono(i + j, false))
                }
            }
            (Mono::X(i), Mono::Y(l)) => {
                let coef = s.mul(c, &self.act(i as i64, d));
                if l >= i {
                    (s.mul(&coef, &self.q[i]), mono(l - i, true))
                } else {
                    (s.mul(&coef, &self.act((i - l) as i64, &self.q[l])), mono(i - l, false))
                }
            }
            (Mono::Y(m), Mono::X(j)) => {
                let coef = s.mul(c, &self.act(-(m as i64), d));
                if m >= j {
                    (s.mul(&coef, &self.act(-((m - j) as i64), &self.p[j])), mono(m - j, true))
                } else {
                    (s.mul(&coef, &self.p[m]), mono(j - m, false))
                }
            }
            (Mono::Y(m), Mono::Y(l)) => {
                let coef = s.mul(c, &self.act(-(m as i64), d));
                if m + l >= n {
                    (s.scale(&self.b, &coef), mono(m + l - n, true))
                } else {
                    (coef, mono(m + l, true))
                }
            }
        }
    }

    fn terms(&self, f: &Form) -> Vec<(Vec<Elt>, Mono)> {
        let mut t = vec![(f.s.clone(), Mono::X(f.deg))];
        if f.deg > 0 {
            t.push((f.t.clone(), Mono::Y(self.n - f.deg)));
        }
        t
    }

    fn mul(&self, u: &Form, v: &Form) -> Form {
        let s = self.s;
        let deg = (u.deg + v.deg) % self.n;
        let mut out = Form { deg, s: s.zero(), t: s.zero() };
        for (c, m1) in self.terms(u) {
            for (d, m2) in self.terms(v) {
                match self.mono_mul(&c, m1, &d, m2) {
                    (coef, Mono::X(k)) => {
                        debug_assert_eq!(k, deg);
                        out.s = s.add(&out.s, &coef);
                    }
                    (coef, Mono::Y(k)) => {
                        debug_assert_eq!(self.n - k, deg);
                        out.t = s.add(&out.t, &coef);
                    }
                }
            }
        }
        out
    }

    /// (z y^i, z x^(n-i)) for z of degree i > 0.
    fn image(&self, f: &Form) -> Vec<Elt> {
        let s = self.s;
        let i = f.deg;
        let mut v = s.add(&s.mul(&f.s, &self.q[i]), &s.scale(&self.b, &f.t));
        v.extend(s.add(&s.scale(&self.a, &f.s), &s.mul(&f.t, &self.p[self.n - i])));
        v
    }
}

/// Delta(S/R, a, alpha, b) = sum_i A_i with A_0 = S and
/// A_i = (S x^i + S y^(n-i)) modulo the kernel of z -> (z y^i, z x^(n-i)).
/// Rules: x s = sigma(s) x, s y = y sigma(s), x^n = a, y^n = b, xy = alpha,
/// yx = sigma^-1(alpha). b defaults to N(alpha)/a. Each A_i must be R-free of
/// rank n; the base must be finite local.
pub fn build_special_sort(s: &GaloisAlgebra, a: &Elt, alpha: &[Elt], b: Option<&Elt>) -> Result<SCAlgebra> {
    let r = &s.base;
    let n = s.rank;
    if n < 2 {
        return Err(Error::OutOfRange("special sort needs degree at least 2".into()));
    }
    if !(r.is_finite() && r.is_local()?) {
        return Err(Error::UnsupportedBase(format!("special sort is built over finite local bases; {r} is not")));
    }
    let (suit, quotient) = suitability(s, a, alpha)?;
    let nrm = s.as_scalar(&s.norm(alpha)).ok_or_else(|| Error::Internal("norm is not a scalar".into()))?;
    let b = match (b, quotient) {
        (Some(b), _) if r.mul(a, b) == nrm => b.clone(),
        (Some(b), _) => return Err(Error::NotSuitable(format!("ab = {} but N(alpha) = {}", r.fmt_elt(&r.mul(a, b)), suit.norm))),
        (None, Some(q)) => q,
        (None, None) => return Err(Error::NotSuitable(format!("no b with ab = N(alpha) = {} was found or supplied", suit.norm))),
    };
    if !suit.generates {
        return Err(Error::NotSuitable("Sa + S alpha + S adj(alpha) != S".into()));
    }
    let sig: Vec<Mat> = (0..n).map(|k| s.sigma_pow(k)).collect();
    let mut q = vec![s.one.clone()];
    let mut p = vec![s.one.clone()];
    for i in 1..=n {
        q.push(s.mul(&s.apply(&sig[1], &q[i - 1]), alpha));
        p.push(s.apply(&sig[n - 1], &s.mul(&p[i - 1], alpha)));
    }
    let ss = SpecialSort { s, n, a: a.clone(), b: b.clone(), sig, q, p };

    let mut reps: Vec<Form> = (0..n).map(|k| Form { deg: 0, s: s.basis(k), t: s.zero() }).collect();
    let mut labels: Vec<String> = (0..n).map(|k| format!("s{k}")).collect();
    let mut solvers = Vec::new();
    for i in 1..n {
        let cands: Vec<(Form, String)> = (0..n)
            .map(|k| (Form { deg: i, s: s.basis(k), t: s.zero() }, format!("s{k}*x^{i}")))
            .chain((0..n).map(|k| (Form { deg: i, s: s.zero(), t: s.basis(k) }, format!("s{k}*y^{}", n - i))))
            .collect();
        let imgs: Vec<Vec<Elt>> = cands.iter().map(|(f, _)| ss.image(f)).collect();
        let mut chosen: Vec<usize> = Vec::new();
        for c in 0..cands.len() {
            let mut trial: Vec<Vec<Elt>> = chosen.iter().map(|&k| imgs[k].clone()).collect();
            trial.push(imgs[c].clone());
            if linalg::residue_ranks(r, &linalg::from_columns(&trial), trial.len())?[0] == trial.len() {
                chosen.push(c);
            }
        }
        let chosen_imgs: Vec<Vec<Elt>> = chosen.iter().map(|&k| imgs[k].clone()).collect();
        let spans = imgs.iter().all(|v| linalg::in_span(r, &chosen_imgs, v).unwrap_or(false));
        if chosen.len() != n || !spans {
            return Err(Error::CertFailed(format!("A_{i} is not free of rank {n} (found {} generators)", chosen.len())));
        }
        for &k in &chosen {
            reps.push(cands[k].0.clone());
            labels.push(cands[k].1.clone());
        }
        solvers.push(linalg::from_columns(&chosen_imgs));
    }
    let solvers: Vec<Solver> = solvers.iter().map(|m| Solver::new(r, m)).collect::<Result<_>>()?;
    let rank = n * n;
    let coords = |f: &Form| -> Result<Vec<Elt>> {
        let mut v = vec![r.zero(); rank];
        let block: Vec<Elt> = if f.deg == 0 {
            f.s.clone()
        } else {
            solvers[f.deg - 1].solve(&ss.image(f)).ok_or_else(|| Error::Internal(format!("element outside A_{}", f.deg)))?
        };
        v[f.deg * n..(f.deg + 1) * n].clone_from_slice(&block);
        Ok(v)
    };
    let mut table = Vec::with_capacity(rank * rank);
    for u in &reps {
        for v in &reps {
            table.push(coords(&ss.mul(u, v))?);
        }
    }
    // Multiplication is well defined: relations times anything vanish.
    for i in 1..n {
        let gens: Vec<Form> = (0..2 * n)
            .map(|k| if k < n { Form { deg: i, s: s.basis(k), t: s.zero() } } else { Form { deg: i, s: s.zero(), t: s.basis(k - n) } })
            .collect();
        let m = linalg::from_columns(&gens.iter().map(|f| ss.image(f)).collect::<Vec<_>>());
        for rel in linalg::kernel(r, &m, 2 * n)? {
            let f = Form { deg: i, s: rel[..n].to_vec(), t: rel[n..].to_vec() };
            for v in &reps {
                for prod in [ss.mul(&f, v), ss.mul(v, &f)] {
                    if coords(&prod)?.iter().any(|c| !c.is_zero()) {
                        return Err(Error::CertFailed(format!("multiplication is not well defined on A_{i}")));
                    }
                }
            }
        }
    }
    let x = coords(&Form { deg: 1 % n, s: s.one.clone(), t: s.zero() })?;
    let y = coords(&Form { deg: n - 1, s: s.zero(), t: s.one.clone() })?;
    let alg = SCAlgebra {
        base: r.clone(),
        kind: Kind::SpecialSort,
        n,
        rank,
        table,
        one: coords(&Form { deg: 0, s: s.one.clone(), t: s.zero() })?,
        x,
        y,
        a: a.clone(),
        b,
        s: s.clone(),
        s_embed: (0..n).map(|k| coords(&reps[k])).collect::<Result<_>>()?,
        alpha: alpha.to_vec(),
        labels,
    };
    alg.check_associative()?;
    alg.check_relations()?;
    if alg.mul(&alg.y, &alg.x) != alg.embed(&ss.p[1]) {
        return Err(Error::CertFailed("yx != sigma^-1(alpha)".into()));
    }
    Ok(alg)
}

/// x^p = a, y^p = b and xy - rho yx = 1 hold and the monomials x^i y^j span,
/// so the symbol maps onto alg; equal ranks make that an isomorphism.
pub fn presents_symbol(alg: &SCAlgebra, p: u64) -> Result<bool> {
    let r = &alg.base;
    let rho = r.rho_for(p)?;
    let xy = alg.mul(&alg.x, &alg.y);
    let yx = alg.mul(&alg.y, &alg.x);
    let rel = alg.pow(&alg.x, p) == alg.scalar(&alg.a)
        && alg.pow(&alg.y, p) == alg.scalar(&alg.b)
        && alg.sub(&xy, &alg.scale(&rho, &yx)) == alg.one;
    if !rel || alg.rank != (p * p) as usize {
        return Ok(false);
    }
    let mons: Vec<Vec<Elt>> =
        (0..p).flat_map(|i| (0..p).map(move |j| (i, j))).map(|(i, j)| alg.mul(&alg.pow(&alg.x, i), &alg.pow(&alg.y, j))).collect();
    linalg::spans_everything(r, &mons, alg.rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::split_extension;

    fn ring(s: &str) -> Ring {
        Ring::parse(s).unwrap()
    }

    #[test]
    fn zero_zero_over_f2_is_azumaya() {
        let r = ring("Fp[2]");
        let alg = build_ab(&r, 2, &r.zero(), &r.zero()).unwrap();
        let c = is_azumaya(&alg).unwrap();
        assert!(c.azumaya && c.agrees);
        assert_eq!(center(&alg).unwrap().len(), 1);
        assert_eq!(centralizer_of_s(&alg).unwrap().len(), 2);
    }

    #[test]
    fn ab_needs_characteristic_p() {
        let r = ring("Fp[3]");
        assert!(matches!(build_ab(&r, 2, &r.zero(), &r.zero()), Err(Error::CharMismatch(_))));
    }

    #[test]
    fn symbolic_alpha_equations() {
        let r = ring("Poly(Fp[3]; a, b)");
        let (a, b) = (r.var(0), r.var(1));
        build_ab(&r, 3, &a, &b).unwrap();
        let z = ring("Poly(Zmu[A,p=3,m=0]; a, b)");
        let alg = build_ab_rho(&z, 3, &z.var(0), &z.var(1)).unwrap();
        // Mod eta the table is that of (a,b) over F_3[a,b].
        let f3 = ring("Poly(Fp[3]; a, b)");
        let imgs = [f3.var(0), f3.var(1)];
        let red = alg.base_change(&f3, |c| z.map_to(&f3, &f3.one(), &imgs, c)).unwrap();
        let ab = build_ab(&f3, 3, &imgs[0], &imgs[1]).unwrap();
        assert_eq!(red.table, ab.table);
    }

    #[test]
    fn p2_uses_rho_minus_one() {
        let z = ring("Poly(Zmu[C,p=2,m=0]; a, b)");
        let alg = build_ab_rho(&z, 2, &z.var(0), &z.var(1)).unwrap();
        let s = alg.add(&alg.mul(&alg.x, &alg.y), &alg.mul(&alg.y, &alg.x));
        assert_eq!(s, alg.one);
    }

    #[test]
    fn azumaya_criterion_over_z_rho_quotients() {
        let r = ring("Quot(Zmu[A,p=3,m=0]; 54)");
        let one = r.one();
        let alg = build_ab_rho(&r, 3, &one, &one).unwrap();
        let c = is_azumaya(&alg).unwrap();
        assert!(c.agrees);
        let rho = r.parse_elt("rho").unwrap();
        // 1 + ab eta^3 for a = b = 1 is 1 + eta^3; check both outcomes occur.
        let mut seen = [false, false];
        for (a, b) in [(one.clone(), one.clone()), (rho.clone(), r.from_i64(2)), (r.zero(), one.clone())] {
            let c = is_azumaya(&build_ab_rho(&r, 3, &a, &b).unwrap()).unwrap();
            assert!(c.agrees);
            seen[c.azumaya as usize] = true;
        }
        assert!(seen[1]);
    }

    #[test]
    fn j_sigma_for_symbols() {
        let r = ring("Quot(Quot(Poly(Fp[3]; a, b); a^3); b^3)");
        let alg = build_ab(&r, 3, &r.var(0), &r.var(1)).unwrap();
        let rep = require_j_sigma(&alg).unwrap();
        assert!(rep.bimodules && rep.power_is_s && rep.adj_identity && rep.agrees);
        let u = ring("Fp[3]");
        let rep = j_sigma_calculus(&build_ab(&u, 3, &u.one(), &u.from_i64(2)).unwrap()).unwrap();
        assert_eq!(rep.principal, Some(true));
    }

    #[test]
    fn adj_in_split_f3() {
        let r = ring("Fp[3]");
        let s = split_extension(&r, 3).unwrap();
        let alpha: Vec<Elt> = [0, 1, 2].iter().map(|&k| r.from_i64(k)).collect();
        let want: Vec<Elt> = [2, 0, 0].iter().map(|&k| r.from_i64(k)).collect();
        assert_eq!(adj(&s, &alpha), want);
        assert_eq!(s.mul(&alpha, &adj(&s, &alpha)), s.norm(&alpha));
    }

    #[test]
    fn special_sort_zero_zero() {
        let r = ring("Fp[2]");
        let s = split_extension(&r, 2).unwrap();
        let alpha = vec![r.zero(), r.one()];
        let alg = build_special_sort(&s, &r.zero(), &alpha, Some(&r.zero())).unwrap();
        assert!(verify_azumaya(&alg).unwrap().azumaya);
        assert!(require_j_sigma(&alg).unwrap().power_is_s);
        let bad = vec![r.zero(), r.zero()];
        assert!(matches!(build_special_sort(&s, &r.zero(), &bad, Some(&r.zero())), Err(Error::NotSuitable(_))));
    }

    #[test]
    fn special_sort_reconstructs_symbol() {
        let r = ring("Quot(Quot(Poly(Fp[3]; a, b); a^3); b^3)");
        let ab = build_ab(&r, 3, &r.var(0), &r.var(1)).unwrap();
        let alg = build_special_sort(&ab.s, &ab.a, &ab.alpha, Some(&ab.b)).unwrap();
        assert!(presents_symbol(&alg, 3).unwrap());
        assert!(require_j_sigma(&alg).unwrap().product_is_s);
    }

    #[test]
    fn special_sort_degree_four() {
        let r = ring("Quot(Poly(Fp[2]; a); a^2)");
        let s = split_extension(&r, 4).unwrap();
        let a = r.var(0);
        let alpha = find_suitable_alpha(&s, &a).unwrap().unwrap();
        let alg = build_special_sort(&s, &a, &alpha, None).unwrap();
        assert_eq!(alg.rank, 16);
        assert!(require_j_sigma(&alg).unwrap().power_is_s);
        assert!(verify_azumaya(&alg).unwrap().azumaya);
    }
}
