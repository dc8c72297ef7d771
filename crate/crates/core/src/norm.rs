//! The tau-twisted trace and norm calculus on Z[mu_m] and its polynomial
//! extensions.
//!
//! At level m the generating root mu_m has order p^(m+1) (case A) or
//! 2^(m+2) (case B); tau(mu_m) = mu_m^r with r = p + 1 (A) or 5 (B), and tau
//! has order t = p^m (A) or 2^m (B), fixing exactly the level-0 constants.

use crate::error::{Error, Result};
use crate::ring::{Case, Elt, Ring};
use crate::Int;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Maximum total degree in free variables accepted by norm computations.
pub const MAX_POLY_DEGREE: u32 = 64;

#[derive(Clone, Debug)]
pub struct TauAction {
    pub ring: Ring,
    pub case: Case,
    pub p: u64,
    pub m: u32,
    pub r: u64,
    /// Order of tau; stored, never re-derived elsewhere.
    pub t: u64,
}

impl TauAction {
    pub fn new(ring: &Ring) -> Result<TauAction> {
        let info = ring.cyc_info().ok_or_else(|| Error::NotCyclotomic(ring.to_string()))?;
        if info.m == 0 || info.case == Case::C {
            return Err(Error::LevelZero);
        }
        let (r, t) = match info.case {
            Case::A => (info.p + 1, info.p.pow(info.m)),
            _ => (5, 1u64 << info.m),
        };
        let tau = TauAction { ring: ring.clone(), case: info.case, p: info.p, m: info.m, r, t };
        debug_assert_eq!(tau.apply(&ring.zeta(), t), ring.zeta());
        Ok(tau)
    }

    /// Ramification index e with eta = unit * eta_m^e (equal to t).
    pub fn order(&self) -> u64 {
        self.ring.cyclo().order
    }

    fn r_pow(&self, k: u64) -> u64 {
        let n = self.order();
        (0..k % self.t).fold(1u64, |acc, _| acc * self.r % n)
    }

    /// tau^k, acting on constants only.
    pub fn apply(&self, x: &Elt, k: u64) -> Elt {
        self.ring.galois_constants(x, self.r_pow(k))
    }

    pub fn conjugates(&self, x: &Elt) -> Vec<Elt> {
        (0..self.t).map(|k| self.apply(x, k)).collect()
    }

    pub fn trace(&self, x: &Elt) -> Elt {
        let c = self.conjugates(x);
        self.ring.sum(c.iter())
    }

    pub fn norm(&self, x: &Elt) -> Elt {
        self.conjugates(x).iter().fold(self.ring.one(), |acc, y| self.ring.mul(&acc, y))
    }

    /// Whether x lies in the level-0 constants (is tau-fixed).
    pub fn is_level_zero(&self, x: &Elt) -> bool {
        self.apply(x, 1) == *x
    }

    /// Coefficientwise eta-valuation (level 0), None for zero.
    pub fn v(&self, x: &Elt) -> Option<u32> {
        self.ring.eta_valuation_fast(x).expect("cyclotomic ring")
    }

    /// Coefficientwise eta_m-valuation.
    pub fn v_m(&self, x: &Elt) -> Option<u32> {
        self.ring.eta_m_valuation(x).expect("cyclotomic ring")
    }

    /// Whether x = y modulo eta^k, coefficientwise.
    pub fn congruent(&self, x: &Elt, y: &Elt, k: u32) -> bool {
        self.v(&self.ring.sub(x, y)).map_or(true, |v| v >= k)
    }

    pub fn guard_degree(&self, x: &Elt) -> Result<()> {
        let d = self.ring.free_degree(x) as u64 * self.t;
        if d > MAX_POLY_DEGREE as u64 {
            return Err(Error::OutOfRange(format!("norm of total degree {d} exceeds {MAX_POLY_DEGREE}")));
        }
        Ok(())
    }
}

pub fn tau_apply(x: &Elt, ring: &Ring, k: u64) -> Result<Elt> {
    Ok(TauAction::new(ring)?.apply(x, k))
}

pub fn trace_tau(x: &Elt, ring: &Ring) -> Result<Elt> {
    let tau = TauAction::new(ring)?;
    let tr = tau.trace(x);
    debug_assert!(tau.is_level_zero(&tr));
    Ok(tr)
}

pub fn norm_tau(x: &Elt, ring: &Ring) -> Result<Elt> {
    let tau = TauAction::new(ring)?;
    tau.guard_degree(x)?;
    let n = tau.norm(x);
    debug_assert!(tau.is_level_zero(&n));
    Ok(n)
}

/// s_1..s_n and traces of powers of x.
#[derive(Clone, Debug)]
pub struct SymFunTable {
    pub x: Elt,
    /// s[k-1] = s_k(x).
    pub s: Vec<Elt>,
    /// traces[k-1] = tr_tau(x^k).
    pub traces: Vec<Elt>,
    /// Whether k s_k = sum_{i=1..k} (-1)^(i-1) s_(k-i) tr(x^i) held for every k.
    pub newton_ok: bool,
}

/// s_k as the degree-k coefficient of prod_i (1 + T tau^i(x)), checked
/// against Newton's identities (multiplied through by k, so always exact).
pub fn newton_sk(tau: &TauAction, x: &Elt, up_to: usize) -> SymFunTable {
    let r = &tau.ring;
    let mut poly = vec![r.one()];
    for c in tau.conjugates(x) {
        let mut next = vec![r.zero(); poly.len() + 1];
        for (k, a) in poly.iter().enumerate() {
            next[k] = r.add(&next[k], a);
            next[k + 1] = r.add(&next[k + 1], &r.mul(a, &c));
        }
        poly = next;
    }
    let s: Vec<Elt> = (1..=up_to).map(|k| poly.get(k).cloned().unwrap_or_default()).collect();
    let mut traces = Vec::with_capacity(up_to);
    let mut pw = r.one();
    for _ in 0..up_to {
        pw = r.mul(&pw, x);
        traces.push(tau.trace(&pw));
    }
    let s_at = |k: usize| if k == 0 { r.one() } else { s[k - 1].clone() };
    let newton_ok = (1..=up_to).all(|k| {
        let mut rhs = r.zero();
        for i in 1..=k {
            let term = r.mul(&s_at(k - i), &traces[i - 1]);
            rhs = if i % 2 == 1 { r.add(&rhs, &term) } else { r.sub(&rhs, &term) };
        }
        r.scale(&s_at(k), &Int::from(k)) == rhs
    });
    SymFunTable { x: x.clone(), s, traces, newton_ok }
}

/// floor(r a / p^(m-s)) + (m - s) c for k = a p^s, c = p - 1 (A) or 2 (B).
pub fn predicted_sk_valuation(k: u64, r: u64, p: u64, m: u32, case: Case) -> Result<u64> {
    let t = p.pow(m);
    if k == 0 || k >= t {
        return Err(Error::OutOfRange(format!("k = {k} must satisfy 1 <= k < {t}")));
    }
    let (mut a, mut s) = (k, 0u32);
    while a % p == 0 {
        a /= p;
        s += 1;
    }
    let c = if case == Case::B { 2 } else { p - 1 };
    Ok(r * a / p.pow(m - s) + (m - s) as u64 * c)
}

/// One congruence claim evaluated in a norm report.
#[derive(Clone, Debug, Serialize)]
pub struct ItemCheck {
    pub item: String,
    pub claim: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct NormReport {
    pub value: Elt,
    /// v(N - 1); None when N = 1.
    pub s: Option<u32>,
    /// (N - 1)/eta^s reduced modulo eta, as a literal over F_p.
    pub residue: String,
    pub items: Vec<ItemCheck>,
}

/// (N - 1)/eta^s, coefficientwise exact.
fn leading_quotient(tau: &TauAction, n: &Elt, s: u32) -> Elt {
    let r = &tau.ring;
    let eta = r.eta().unwrap();
    let d = r.sub(n, &r.one());
    r.div_exact(&d, &r.pow(&eta, s as u64)).expect("exact division by eta^s")
}

/// Residue of a level-0 element modulo eta, coefficientwise, rendered with F_p coefficients.
fn residue_mod_eta(tau: &TauAction, x: &Elt) -> String {
    let r = &tau.ring;
    let p = Int::from(tau.p);
    let mut acc = r.zero();
    for (m, c) in x.terms() {
        let s: Int = c.iter().sum::<Int>().mod_floor(&p);
        if !s.is_zero() {
            acc = r.add(&acc, &r.mul(&r.from_int(&s), &r.monomial(&m.0)));
        }
    }
    r.fmt_elt(&acc)
}

/// Exact N_tau(1 + b eta_m^r) with the expected congruences evaluated.
/// `b0` is the level-0 part of b with v_m(b - b0) > 0; when omitted it is the
/// integer b(1) mod p (b must then be constant).
pub fn norm_one_plus(tau: &TauAction, b: &Elt, b0: Option<&Elt>, r: u32) -> Result<NormReport> {
    let ring = &tau.ring;
    let eta_m = ring.eta_m()?;
    let eta = ring.eta()?;
    let x = ring.add(&ring.one(), &ring.mul(b, &ring.pow(&eta_m, r as u64)));
    tau.guard_degree(&x)?;
    let n = tau.norm(&x);
    let d = ring.sub(&n, &ring.one());
    let s = tau.v(&d);
    let residue = match s {
        Some(s) => residue_mod_eta(tau, &leading_quotient(tau, &n, s)),
        None => "0".into(),
    };
    let b0 = match b0 {
        Some(e) => e.clone(),
        None => {
            let c = ring.as_constant(b).ok_or_else(|| Error::Undecidable("b0 required for symbolic b".into()))?;
            let v: Int = c.iter().sum::<Int>().mod_floor(&Int::from(tau.p));
            ring.from_int(&v)
        }
    };
    let p = tau.p;
    let pm = p.pow(tau.m);
    let pm1 = p.pow(tau.m - 1);
    let pr = r as u64;
    let etapow = |k: u64| ring.pow(&eta, k);
    let one = ring.one();
    let plus = |c: &Elt, k: u64| ring.add(&one, &ring.mul(c, &etapow(k)));
    let mut items = Vec::new();
    let mut push = |item: &str, claim: String, holds: bool| items.push(ItemCheck { item: item.into(), claim, holds });
    let b_unit_m = tau.v_m(b) == Some(0);
    if pr == p {
        if p > 2 {
            push("1", format!("N = 1 mod eta^{p}"), tau.congruent(&n, &one, p as u32));
        } else {
            let pred = plus(&ring.pow(&b0, pm), 2);
            push("1", format!("N = 1 + b0^{pm} eta^2 mod eta^3"), tau.congruent(&n, &pred, 3));
        }
    }
    if pr + 1 == p || (p == 2 && pr == 1) {
        if p > 2 {
            let c = ring.sub(&ring.pow(&b0, pm), &ring.pow(&b0, pm1));
            push("2", format!("N = 1 + (b0^{pm} - b0^{pm1}) eta^{} mod eta^{p}", p - 1), tau.congruent(&n, &plus(&c, p - 1), p as u32));
        } else {
            push("2", format!("N = 1 + b0^{pm} eta mod eta^2"), tau.congruent(&n, &plus(&ring.pow(&b0, pm), 1), 2));
        }
    }
    if pr + 1 < p && b_unit_m {
        let lit = plus(&ring.pow(&b0, pr), pr);
        push("3", format!("N = 1 + b0^{r} eta^{r} mod eta^{}", r + 1), tau.congruent(&n, &lit, r + 1));
        let cor = plus(&ring.pow(&b0, pm), pr);
        push("3*", format!("N = 1 + b0^{pm} eta^{r} mod eta^{}", r + 1), tau.congruent(&n, &cor, r + 1));
    }
    if b_unit_m {
        if let Some(s) = s {
            if s as u64 <= p - 1 {
                push("4", format!("s = {s} <= {} forces s = r = {r}", p - 1), s == r);
            }
        }
    }
    if p > 2 && pr == p + 1 && tau.is_level_zero(b) && tau.v(b) == Some(0) {
        let lead = ring.mul(&ring.pow(b, pm1), &etapow(p));
        let lit = ring.sub(&one, &lead);
        push("5", format!("N = 1 - b^{pm1} eta^{p} mod eta^{}", p + 1), tau.congruent(&n, &lit, p as u32 + 1));
        let cor = ring.add(&one, &lead);
        push("5*", format!("N = 1 + b^{pm1} eta^{p} mod eta^{}", p + 1), tau.congruent(&n, &cor, p as u32 + 1));
    }
    Ok(NormReport { value: n, s, residue, items })
}

/// Decide z in M where N_tau(1 + b eta_m^r) = 1 + z eta^s with eta not
/// dividing z. M is generated by elements x_j - c_j (variable minus an
/// integer constant), which covers ideals generated by variables.
pub fn norm_ideal_membership_check(tau: &TauAction, b: &Elt, r: u32, generators: &[Elt]) -> Result<bool> {
    let ring = &tau.ring;
    let mut point: Vec<Option<Elt>> = vec![None; ring.nvars()];
    for g in generators {
        let lin: Vec<usize> = (0..ring.nvars()).filter(|&j| g.terms().any(|(m, _)| m.0[j] > 0)).collect();
        let shape_ok = lin.len() == 1
            && g.terms().all(|(m, c)| {
                (m.is_one() && c[1..].iter().all(|x| x.is_zero()))
                    || (m.0[lin[0]] == 1 && m.0.iter().sum::<u32>() == 1 && c[0].is_one() && c[1..].iter().all(|x| x.is_zero()))
            });
        if !shape_ok {
            return Err(Error::MembershipUndecidable(format!("generator {} is not of the form x - c", ring.fmt_elt(g))));
        }
        let j = lin[0];
        let c = ring.neg(&ring.sub(g, &ring.var(j)));
        point[j] = Some(c);
    }
    let eta_m = ring.eta_m()?;
    let x = ring.add(&ring.one(), &ring.mul(b, &ring.pow(&eta_m, r as u64)));
    tau.guard_degree(&x)?;
    let n = tau.norm(&x);
    let Some(s) = tau.v(&ring.sub(&n, &ring.one())) else { return Ok(true) };
    let z = leading_quotient(tau, &n, s);
    let images: Vec<Elt> = (0..ring.nvars()).map(|j| point[j].clone().unwrap_or_else(|| ring.var(j))).collect();
    let at = ring.map_to(ring, &ring.zeta(), &images, &z);
    Ok(at.is_zero())
}

/// M_tau(z) in the free abelian group on z, tau z, ..., tau^(t-1) z.
#[derive(Clone, Debug, Serialize)]
pub struct MTauFormal {
    pub p: u64,
    pub r: u64,
    pub t: u64,
    /// Exponent of tau^i z, namely r^(t-1-i).
    pub exponents: Vec<String>,
    /// tau(M) z^(r^t - 1) = M^r coordinatewise.
    pub relation_holds: bool,
    /// r^t - 1 = k q with q the order of mu_m.
    pub k: String,
    /// With M = N_tau(z) w^p, the expression N^((r-1)/p) w^r z^(-k q/p) tau(w)^(-1) is trivial.
    pub invert_identity_holds: bool,
}

pub fn m_tau_formal(tau: &TauAction) -> MTauFormal {
    let t = tau.t as usize;
    let r = Int::from(tau.r);
    let p = Int::from(tau.p);
    let q = Int::from(tau.order());
    let mexp: Vec<Int> = (0..t).map(|i| num_traits::pow(r.clone(), t - 1 - i)).collect();
    let shift = |v: &[Int]| -> Vec<Int> { (0..t).map(|i| v[(i + t - 1) % t].clone()).collect() };
    let rt1 = num_traits::pow(r.clone(), t) - 1;
    let mut lhs = shift(&mexp);
    lhs[0] += &rt1;
    let rhs: Vec<Int> = mexp.iter().map(|e| e * &r).collect();
    let (k, rem) = rt1.div_rem(&q);
    let w: Vec<Int> = mexp.iter().map(|e| (e - 1) / &p).collect();
    let tw = shift(&w);
    let n_exp = (&r - 1u32) / &p;
    let mut id: Vec<Int> = (0..t).map(|i| &n_exp + &r * &w[i] - &tw[i]).collect();
    id[0] -= &k * (&q / &p);
    MTauFormal {
        p: tau.p,
        r: tau.r,
        t: tau.t,
        exponents: mexp.iter().map(|e| e.to_string()).collect(),
        relation_holds: lhs == rhs,
        k: k.to_string(),
        invert_identity_holds: rem.is_zero() && mexp.iter().all(|e| ((e - 1u32) % &p).is_zero()) && id.iter().all(|x| x.is_zero()),
    }
}

/// Cap on the exponent budget for M_tau of a unit of infinite order.
const MTAU_EXP_CAP: u64 = 1 << 12;

/// Numeric M_tau(z) with the relation tau(M) z^(r^t - 1) = M^r checked.
pub fn m_tau(tau: &TauAction, z: &Elt) -> Result<(Elt, bool)> {
    let ring = &tau.ring;
    if !ring.is_unit(z)? {
        return Err(Error::NotUnit(ring.fmt_elt(z)));
    }
    let n = tau.order();
    // Roots of unity: reduce exponents modulo the order of zeta.
    let root = (0..2 * n).find(|&j| ring.zeta_pow(j) == *z || ring.neg(&ring.zeta_pow(j)) == *z);
    let t = tau.t;
    let e = |i: u64| -> Int { num_traits::pow(Int::from(tau.r), (t - 1 - i) as usize) };
    let order = if root.is_some() { Some(2 * n) } else { None };
    let reduce = |x: Int| -> u64 {
        match order {
            Some(o) => (x % Int::from(o)).to_u64().unwrap(),
            None => x.to_u64().unwrap_or(u64::MAX),
        }
    };
    let budget: u64 = (0..t).map(|i| reduce(e(i))).sum();
    if order.is_none() && budget > MTAU_EXP_CAP {
        return Err(Error::OutOfRange(format!("M_tau needs exponents summing to {budget}")));
    }
    let mut m = ring.one();
    for i in 0..t {
        m = ring.mul(&m, &ring.pow(&tau.apply(z, i), reduce(e(i))));
    }
    let rt1 = reduce(num_traits::pow(Int::from(tau.r), t as usize) - 1);
    let lhs = ring.mul(&tau.apply(&m, 1), &ring.pow(z, rt1));
    let rhs = ring.pow(&m, tau.r);
    Ok((m, lhs == rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau(s: &str) -> TauAction {
        TauAction::new(&Ring::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn level_zero_rejected() {
        assert!(matches!(TauAction::new(&Ring::parse("Zmu[A,p=3,m=0]").unwrap()), Err(Error::LevelZero)));
    }

    #[test]
    fn tau_examples() {
        let t = tau("Zmu[A,p=3,m=1]");
        let z = t.ring.zeta();
        assert_eq!(t.apply(&z, 1), t.ring.zeta_pow(4));
        assert_eq!(t.apply(&z, t.t), z);
        let b = tau("Zmu[B,p=2,m=1]");
        let eta1 = b.ring.eta_m().unwrap();
        let got = b.ring.add(&b.apply(&eta1, 1), &b.ring.one());
        assert_eq!(got, b.ring.neg(&b.ring.zeta()));
    }

    #[test]
    fn trace_and_norm_of_eta_m() {
        let t = tau("Zmu[A,p=3,m=1]");
        let r = &t.ring;
        assert_eq!(t.norm(&r.eta_m().unwrap()), r.eta().unwrap());
        assert_eq!(t.trace(&r.one()), r.from_i64(3));
        assert_eq!(t.v(&t.trace(&r.eta_m().unwrap())), Some(2));
        let b = tau("Zmu[B,p=2,m=1]");
        assert_eq!(b.norm(&b.ring.eta_m().unwrap()), b.ring.neg(&b.ring.eta().unwrap()));
    }

    #[test]
    fn predicted_examples() {
        assert_eq!(predicted_sk_valuation(3, 4, 3, 2, Case::A).unwrap(), 3);
        assert_eq!(predicted_sk_valuation(1, 1, 3, 1, Case::A).unwrap(), 2);
        assert_eq!(predicted_sk_valuation(2, 3, 2, 2, Case::B).unwrap(), 3);
        assert!(predicted_sk_valuation(9, 1, 3, 2, Case::A).is_err());
    }

    #[test]
    fn m_tau_formal_example() {
        let f = m_tau_formal(&tau("Zmu[A,p=3,m=1]"));
        assert_eq!(f.exponents, vec!["16", "4", "1"]);
        assert!(f.relation_holds && f.invert_identity_holds);
        assert_eq!(f.k, "7");
    }

    #[test]
    fn m_tau_numeric() {
        let t = tau("Zmu[A,p=3,m=1]");
        let (m, ok) = m_tau(&t, &t.ring.one()).unwrap();
        assert!(ok && t.ring.is_one(&m));
        let (m, ok) = m_tau(&t, &t.ring.zeta()).unwrap();
        assert!(ok);
        // 16 + 4*4 + 16 = 48 = 3 mod 9.
        assert_eq!(m, t.ring.zeta_pow(3));
        assert!(matches!(m_tau(&t, &t.ring.from_i64(3)), Err(Error::NotUnit(_))));
    }
}
