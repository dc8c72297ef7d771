//! Z[zeta] for zeta a root of unity of prime-power order (or order 1),
//! in the power basis 1, zeta, ..., zeta^(d-1) with d = phi(order).

use crate::Int;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclo {
    /// Order N of zeta; 1 or a prime power.
    pub order: u64,
    /// The prime dividing N (1 when N = 1).
    pub ell: u64,
    /// phi(N).
    pub rank: usize,
    /// ell^(k-1) where N = ell^k.
    step: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Cyclo {
    /// Panics unless `order` is 1 or a prime power.
    pub fn new(order: u64) -> Cyclo {
        if order == 1 {
            return Cyclo { order, ell: 1, rank: 1, step: 1 };
        }
        let mut ell = 2;
        while order % ell != 0 {
            ell += 1;
        }
        let mut step = 1;
        while step * ell < order {
            step *= ell;
        }
        assert_eq!(step * ell, order, "order must be a prime power");
        Cyclo { order, ell, rank: ((ell - 1) * step) as usize, step }
    }

    pub fn zero(&self) -> Vec<Int> {
        vec![Int::zero(); self.rank]
    }

    pub fn one(&self) -> Vec<Int> {
        let mut v = self.zero();
        v[0] = Int::one();
        v
    }

    /// Reduce a coefficient vector of any length modulo Phi_N.
    pub fn reduce(&self, mut v: Vec<Int>) -> Vec<Int> {
        let d = self.rank;
        if self.order == 1 {
            let s = v.into_iter().fold(Int::zero(), |a, b| a + b);
            return vec![s];
        }
        let step = self.step as usize;
        let mut e = v.len();
        while e > d {
            e -= 1;
            let c = std::mem::take(&mut v[e]);
            if c.is_zero() {
                continue;
            }
            // x^d = -sum_{j<ell-1} x^(j*step)
            let base = e - d;
            for j in 0..(self.ell as usize - 1) {
                v[base + j * step] -= &c;
            }
        }
        v.truncate(d);
        v.resize(d, Int::zero());
        v
    }

    pub fn mul(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        let d = self.rank;
        if d == 1 {
            return vec![&a[0] * &b[0]];
        }
        let mut out = vec![Int::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        self.reduce(out)
    }

    pub fn zeta_pow(&self, e: u64) -> Vec<Int> {
        let e = (e % self.order) as usize;
        let mut v = vec![Int::zero(); e + 1];
        v[e] = Int::one();
        self.reduce(v)
    }

    /// The automorphism zeta -> zeta^k (k prime to N).
    pub fn galois(&self, a: &[Int], k: u64) -> Vec<Int> {
        if self.order <= 2 {
            return a.to_vec();
        }
        let n = self.order as usize;
        let mut v = vec![Int::zero(); n];
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                v[(i as u64 * k % self.order) as usize] += c;
            }
        }
        self.reduce(v)
    }

    pub fn unit_exponents(&self) -> Vec<u64> {
        (1..self.order.max(2)).filter(|k| self.order == 1 || k % self.ell != 0).collect()
    }

    /// Product of all conjugates other than the identity.
    pub fn adj(&self, a: &[Int]) -> Vec<Int> {
        let mut acc = self.one();
        for k in self.unit_exponents() {
            if k != 1 {
                acc = self.mul(&acc, &self.galois(a, k));
            }
        }
        acc
    }

    /// Absolute norm from Q(zeta) to Q.
    pub fn norm(&self, a: &[Int]) -> Int {
        let p = self.mul(a, &self.adj(a));
        debug_assert!(p[1..].iter().all(|c| c.is_zero()));
        p[0].clone()
    }

    /// Exact quotient a / b, or None when b does not divide a.
    pub fn div_exact(&self, a: &[Int], b: &[Int]) -> Option<Vec<Int>> {
        let adj = self.adj(b);
        let n = self.mul(b, &adj)[0].clone();
        if n.is_zero() {
            return None;
        }
        let num = self.mul(a, &adj);
        let mut out = Vec::with_capacity(self.rank);
        for c in num {
            let (q, r) = c.div_rem(&n);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }

    /// Exact division by zeta - 1 via synthetic division (N >= 2).
    pub fn div_zeta_minus_one(&self, a: &[Int]) -> Option<Vec<Int>> {
        let d = self.rank;
        let ell = Int::from(self.ell);
        let s: Int = a.iter().sum();
        let (c, r) = s.div_rem(&ell);
        if !r.is_zero() {
            return None;
        }
        // y = a - c * Phi_N has y(1) = 0 and degree <= d.
        let mut y: Vec<Int> = a.to_vec();
        y.push(Int::zero());
        for j in 0..self.ell as usize {
            y[j * self.step as usize] -= &c;
        }
        let mut q = vec![Int::zero(); d];
        q[d - 1] = y[d].clone();
        for j in (1..d).rev() {
            q[j - 1] = &y[j] + &q[j];
        }
        debug_assert!((&y[0] + &q[0]).is_zero());
        Some(q)
    }

    /// Valuation at the prime above ell generated by zeta - 1; None for 0.
    pub fn zeta_valuation(&self, a: &[Int], cap: u32) -> Option<u32> {
        if a.iter().all(|c| c.is_zero()) {
            return None;
        }
        let mut v = 0;
        let mut cur = a.to_vec();
        while let Some(q) = self.div_zeta_minus_one(&cur) {
            cur = q;
            v += 1;
            assert!(v <= cap, "valuation exceeds iteration cap");
        }
        Some(v)
    }

    pub fn is_zero(a: &[Int]) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    pub fn max_abs(a: &[Int]) -> Int {
        a.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(Cyclo::new(3).rank, 2);
        assert_eq!(Cyclo::new(8).rank, 4);
        assert_eq!(Cyclo::new(27).rank, 18);
        assert_eq!(Cyclo::new(16).rank, 8);
        assert_eq!(Cyclo::new(2).rank, 1);
    }

    #[test]
    fn norm_of_eta() {
        let c = Cyclo::new(3);
        assert_eq!(c.norm(&v(&[-1, 1])), Int::from(3));
        let c = Cyclo::new(4);
        assert_eq!(c.norm(&v(&[-1, 1])), Int::from(2));
        assert_eq!(Cyclo::new(9).norm(&v(&[-1, 1, 0, 0, 0, 0])), Int::from(3));
    }

    #[test]
    fn synthetic_division_matches_exact_division() {
        let c = Cyclo::new(9);
        let x = v(&[3, 0, -6, 3, 9, 0]);
        let eta = v(&[-1, 1, 0, 0, 0, 0]);
        assert_eq!(c.div_zeta_minus_one(&x), c.div_exact(&x, &eta));
        assert_eq!(c.zeta_valuation(&v(&[3, 0, 0, 0, 0, 0]), 64), Some(6));
    }
}
