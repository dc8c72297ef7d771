use cyclotome::norm::{self, TauAction};
use cyclotome::{azumaya, galois, kummer, Elt, Int, Ring};
use proptest::prelude::*;
use std::sync::OnceLock;

fn ring(s: &str) -> Ring {
    Ring::parse(s).unwrap()
}

fn elt(r: &Ring, coords: &[i64]) -> Elt {
    let d = r.flat_dim();
    let v: Vec<Int> = (0..d).map(|i| Int::from(coords[i % coords.len()])).collect();
    r.unflatten(&v)
}

fn local() -> &'static Ring {
    static R: OnceLock<Ring> = OnceLock::new();
    R.get_or_init(|| ring("Quot(Zmu[A,p=3,m=0]; eta^6)"))
}

fn z_mu1() -> &'static TauAction {
    static T: OnceLock<TauAction> = OnceLock::new();
    T.get_or_init(|| TauAction::new(&ring("Zmu[A,p=3,m=1]")).unwrap())
}

fn coords(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_in_local_quotient(a in coords(2), b in coords(2), c in coords(2)) {
        let r = local();
        let (x, y, z) = (elt(r, &a), elt(r, &b), elt(r, &c));
        prop_assert_eq!(r.mul(&x, &y), r.mul(&y, &x));
        prop_assert_eq!(r.mul(&r.mul(&x, &y), &z), r.mul(&x, &r.mul(&y, &z)));
        prop_assert_eq!(r.mul(&x, &r.add(&y, &z)), r.add(&r.mul(&x, &y), &r.mul(&x, &z)));
        prop_assert!(r.add(&x, &r.neg(&x)).is_zero());
    }

    #[test]
    fn units_have_inverses(a in coords(2)) {
        let r = local();
        let x = elt(r, &a);
        match r.inverse(&x) {
            Some(y) => prop_assert!(r.is_one(&r.mul(&x, &y))),
            None => prop_assert!(!r.is_unit(&x).unwrap()),
        }
    }

    #[test]
    fn eta_valuation_is_a_valuation(a in coords(6), b in coords(6)) {
        let r = &z_mu1().ring;
        let (x, y) = (elt(r, &a), elt(r, &b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let v = |e: &Elt| r.eta_m_valuation(e).unwrap();
        prop_assert_eq!(v(&r.mul(&x, &y)).unwrap(), v(&x).unwrap() + v(&y).unwrap());
        let s = r.add(&x, &y);
        if let Some(vs) = v(&s) {
            prop_assert!(vs >= v(&x).unwrap().min(v(&y).unwrap()));
        }
    }

    #[test]
    fn norm_is_multiplicative_and_newton_agrees(a in coords(6), b in coords(6)) {
        let tau = z_mu1();
        let r = &tau.ring;
        let (x, y) = (elt(r, &a), elt(r, &b));
        prop_assert_eq!(tau.norm(&r.mul(&x, &y)), r.mul(&tau.norm(&x), &tau.norm(&y)));
        let tab = norm::newton_sk(tau, &x, tau.t as usize);
        prop_assert!(tab.newton_ok);
        prop_assert_eq!(&tab.s[tau.t as usize - 1], &tau.norm(&x));
        prop_assert_eq!(&tab.s[0], &tau.trace(&x));
    }

    #[test]
    fn oplus_is_a_commutative_monoid(a in coords(2), b in coords(2), c in coords(2)) {
        let r = local();
        let (x, y, z) = (elt(r, &a), elt(r, &b), elt(r, &c));
        let op = |u: &Elt, v: &Elt| kummer::oplus(r, 3, u, v).unwrap();
        prop_assert_eq!(op(&op(&x, &y), &z), op(&x, &op(&y, &z)));
        prop_assert_eq!(op(&x, &y), op(&y, &x));
        prop_assert_eq!(op(&x, &r.zero()), x.clone());
        // (1 + x eta)(1 + y eta) = 1 + (x (+) y) eta.
        let eta = r.eta().unwrap();
        let one_plus = |u: &Elt| r.add(&r.one(), &r.mul(u, &eta));
        prop_assert_eq!(r.mul(&one_plus(&x), &one_plus(&y)), one_plus(&op(&x, &y)));
        // ominus undoes oplus: y (+) (x (-) y) = x.
        prop_assert_eq!(op(&y, &kummer::ominus(r, 3, &x, &y).unwrap()), x);
    }

    #[test]
    fn theta_satisfies_its_polynomial(a in 0i64..9) {
        let r = ring("Quot(Zmu[A,p=3,m=0]; 9)");
        let x = r.from_i64(a);
        let ext = kummer::build_degree_p(&r, 3, &x).unwrap();
        let s = &ext.alg;
        let f = kummer::defining_polynomial(&r, 3, &x).unwrap();
        let v = f.iter().enumerate().fold(s.zero(), |acc, (k, c)| s.add(&acc, &s.scale(c, &s.pow(&ext.theta, k as u64))));
        prop_assert!(v.iter().all(|c| c.is_zero()));
        // sigma(theta) = rho theta + 1.
        let rho = r.rho_for(3).unwrap();
        prop_assert_eq!(s.apply(&s.sigma, &ext.theta), s.add(&s.scale(&rho, &ext.theta), &s.one));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rho_symbols_follow_the_unit_criterion(a in 0i64..48, b in 0i64..48) {
        let r = ring("Zmod[48]");
        let alg = azumaya::build_ab_rho(&r, 2, &r.from_i64(a), &r.from_i64(b)).unwrap();
        let cert = azumaya::is_azumaya(&alg).unwrap();
        prop_assert!(cert.agrees, "a = {a}, b = {b}");
    }

    #[test]
    fn ab_symbols_over_f3_quotient_are_azumaya(a in 0i64..3, b in 0i64..3, c in 0i64..3) {
        let r = ring("Quot(Poly(Fp[3]; t); t^2)");
        let t = r.var(0);
        let x = r.add(&r.from_i64(a), &r.mul(&r.from_i64(c), &t));
        let alg = azumaya::build_ab(&r, 3, &x, &r.from_i64(b)).unwrap();
        prop_assert!(azumaya::is_azumaya(&alg).unwrap().azumaya);
        let j = azumaya::j_sigma_calculus(&alg).unwrap();
        prop_assert!(j.product_is_s && j.power_is_s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn degree_p_extensions_form_a_group(a in 0i64..9, b in 0i64..9) {
        let r = ring("Quot(Zmu[A,p=3,m=0]; 9)");
        let (x, y) = (r.from_i64(a), r.from_i64(b));
        let s = kummer::build_degree_p(&r, 3, &x).unwrap();
        let t = kummer::build_degree_p(&r, 3, &y).unwrap();
        prop_assert!(s.alg.verify_galois().unwrap().galois);
        let st = galois::product(&s.alg, &t.alg).unwrap();
        let want = kummer::build_degree_p(&r, 3, &kummer::oplus_p(&r, 3, &x, &y).unwrap()).unwrap();
        // Kummer units multiply: (1 + a eta^p)(1 + b eta^p) = 1 + (a (+)_p b) eta^p.
        prop_assert!(galois::isomorphism(&st, &want.alg).unwrap().is_some());
        prop_assert!(galois::is_split(&galois::product(&s.alg, &galois::inverse(&s.alg)).unwrap()).unwrap().is_some());
    }
}
