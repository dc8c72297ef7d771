//! Integer lattices: row Hermite normal form with transformation tracking,
//! membership, solving, relation lattices and Bareiss determinants.

use crate::Int;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Echelon form of the row lattice spanned by tracked and untracked generators.
/// Pivot columns strictly increase; pivots are positive and entries above a
/// pivot lie in [0, pivot).
#[derive(Clone, Debug)]
pub struct Hnf {
    pub ncols: usize,
    pub rows: Vec<Vec<Int>>,
    pub pivots: Vec<usize>,
    /// Combination of the tracked generators producing each echelon row.
    pub transforms: Vec<Vec<Int>>,
    /// Generators of the relation lattice among tracked generators (modulo
    /// the untracked part).
    pub relations: Vec<Vec<Int>>,
}

fn axpy(dst: &mut [Int], q: &Int, src: &[Int]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

fn reduce_mod(v: &mut [Int], m: Option<&Int>) {
    if let Some(m) = m {
        for x in v.iter_mut() {
            if x.is_negative() || &*x >= m {
                *x = x.mod_floor(m);
            }
        }
    }
}

impl Hnf {
    /// `modulus` adds c*e_i for every column, bounding entry growth.
    pub fn new(tracked: &[Vec<Int>], untracked: &[Vec<Int>], modulus: Option<&Int>, ncols: usize) -> Hnf {
        let g = tracked.len();
        let mut rows: Vec<(Vec<Int>, Vec<Int>)> = Vec::new();
        for (k, r) in tracked.iter().enumerate() {
            let mut t = vec![Int::zero(); g];
            t[k] = Int::one();
            let mut r = r.clone();
            reduce_mod(&mut r, modulus);
            rows.push((r, t));
        }
        for r in untracked {
            let mut r = r.clone();
            reduce_mod(&mut r, modulus);
            rows.push((r, vec![Int::zero(); g]));
        }
        if let Some(c) = modulus {
            for i in 0..ncols {
                let mut r = vec![Int::zero(); ncols];
                r[i] = c.clone();
                rows.push((r, vec![Int::zero(); g]));
            }
        }
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..ncols {
            loop {
                let mut best: Option<usize> = None;
                for i in top..rows.len() {
                    if !rows[i].0[col].is_zero() {
                        match best {
                            Some(b) if rows[b].0[col].abs() <= rows[i].0[col].abs() => {}
                            _ => best = Some(i),
                        }
                    }
                }
                let Some(b) = best else { break };
                rows.swap(top, b);
                let (head, tail) = rows.split_at_mut(top + 1);
                let piv = &head[top];
                let mut done = true;
                for r in tail.iter_mut() {
                    if r.0[col].is_zero() {
                        continue;
                    }
                    let q = r.0[col].div_floor(&piv.0[col]);
                    axpy(&mut r.0, &q, &piv.0);
                    axpy(&mut r.1, &q, &piv.1);
                    reduce_mod(&mut r.0, modulus);
                    reduce_mod(&mut r.1, modulus);
                    if !r.0[col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if top < rows.len() && !rows[top].0[col].is_zero() {
                if rows[top].0[col].is_negative() {
                    for x in rows[top].0.iter_mut() {
                        *x = -&*x;
                    }
                    for x in rows[top].1.iter_mut() {
                        *x = -&*x;
                    }
                }
                let (head, tail) = rows.split_at_mut(top);
                let piv = &tail[0];
                for r in head.iter_mut() {
                    let q = r.0[col].div_floor(&piv.0[col]);
                    if !q.is_zero() {
                        axpy(&mut r.0, &q, &piv.0);
                        axpy(&mut r.1, &q, &piv.1);
                        reduce_mod(&mut r.1, modulus);
                    }
                }
                pivots.push(col);
                top += 1;
            }
        }
        let mut relations: Vec<Vec<Int>> = rows[top..]
            .iter()
            .map(|r| r.1.clone())
            .filter(|t| t.iter().any(|x| !x.is_zero()))
            .collect();
        if let Some(c) = modulus {
            for k in 0..g {
                let mut t = vec![Int::zero(); g];
                t[k] = c.clone();
                relations.push(t);
            }
        }
        let (rows, transforms): (Vec<_>, Vec<_>) = rows.into_iter().take(top).unzip();
        Hnf { ncols, rows, pivots, transforms, relations }
    }

    /// Canonical remainder of v modulo the lattice, with the tracked
    /// combination that was subtracted.
    pub fn reduce(&self, v: &[Int]) -> (Vec<Int>, Vec<Int>) {
        let g = self.transforms.first().map_or(0, |t| t.len());
        let mut v = v.to_vec();
        let mut y = vec![Int::zero(); g];
        for (k, &p) in self.pivots.iter().enumerate() {
            let q = v[p].div_floor(&self.rows[k][p]);
            if !q.is_zero() {
                axpy(&mut v, &q, &self.rows[k]);
                for (a, b) in y.iter_mut().zip(&self.transforms[k]) {
                    *a += &q * b;
                }
            }
        }
        (v, y)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.reduce(v).0.iter().all(|x| x.is_zero())
    }

    /// Coefficients y on the tracked generators with sum y_k g_k = v modulo
    /// the untracked part.
    pub fn solve(&self, v: &[Int]) -> Option<Vec<Int>> {
        let (r, y) = self.reduce(v);
        r.iter().all(|x| x.is_zero()).then_some(y)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Product of the pivots; the index of the lattice when it has full rank.
    pub fn index(&self) -> Option<Int> {
        (self.rank() == self.ncols).then(|| {
            self.pivots.iter().enumerate().fold(Int::one(), |acc, (k, &p)| acc * &self.rows[k][p])
        })
    }
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return Int::zero() };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = Int::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn hnf_solve_and_relations() {
        let gens = vec![iv(&[2, 4]), iv(&[3, 6]), iv(&[0, 5])];
        let h = Hnf::new(&gens, &[], None, 2);
        assert_eq!(h.rank(), 2);
        assert_eq!(h.index(), Some(Int::from(5)));
        let y = h.solve(&iv(&[1, 2])).unwrap();
        let mut acc = iv(&[0, 0]);
        for (k, g) in gens.iter().enumerate() {
            for c in 0..2 {
                acc[c] += &y[k] * &g[c];
            }
        }
        assert_eq!(acc, iv(&[1, 2]));
        assert!(h.solve(&iv(&[1, 0])).is_none());
        assert_eq!(h.relations.len(), 1);
        let r = &h.relations[0];
        let s: Vec<Int> = (0..2).map(|c| (0..3).map(|k| &r[k] * &gens[k][c]).sum()).collect();
        assert_eq!(s, iv(&[0, 0]));
    }

    #[test]
    fn modular_hnf() {
        let c = Int::from(9);
        let h = Hnf::new(&[iv(&[3, 0]), iv(&[1, 1])], &[], Some(&c), 2);
        assert_eq!(h.index(), Some(Int::from(3)));
        assert!(h.contains(&iv(&[4, 1])));
        assert!(!h.contains(&iv(&[1, 0])));
    }

    #[test]
    fn bareiss() {
        let m = vec![iv(&[2, 0, 1]), iv(&[1, 3, 2]), iv(&[1, 1, 2])];
        assert_eq!(det(&m), Int::from(6));
        assert_eq!(det(&[iv(&[0, 1]), iv(&[1, 0])]), Int::from(-1));
    }
}
