use super::*;

fn r(s: &str) -> Ring {
    Ring::parse(s).unwrap()
}

#[test]
fn descriptor_ranks() {
    assert_eq!(r("Zmu[A,p=3,m=0]").cyclo().rank, 2);
    assert_eq!(r("Zmu[B,p=2,m=1]").cyclo().rank, 4);
    assert_eq!(r("Zmu[C,p=2,m=5]").cyclo().rank, 1);
    let pr = r("Poly(Zmu[A,p=3,m=0]; a,b)");
    assert_eq!(pr.var_names(), &["a".to_string(), "b".to_string()]);
}

#[test]
fn descriptor_errors() {
    assert!(matches!(ring_parse("Zmu[A,p=2,m=0]"), Err(Error::Tower(_))));
    assert!(matches!(ring_parse("Zmu[B,p=3,m=0]"), Err(Error::Tower(_))));
    assert!(matches!(ring_parse("Zmu[A,p=3,m=0"), Err(Error::Parse(_))));
    assert!(matches!(ring_parse("Quot(Z; 1)"), Err(Error::Tower(_))));
    assert!(matches!(ring_parse("Quot(Z; 0)"), Err(Error::Tower(_))));
    assert!(matches!(ring_parse("Poly(Z; a,a)"), Err(Error::Tower(_))));
    assert!(matches!(ring_parse("Quot(Poly(Z; a,b); a*b - 1)"), Err(Error::Tower(_))));
    assert!(matches!(ring_parse("Fp[4]"), Err(Error::Tower(_))));
}

#[test]
fn descriptor_roundtrip() {
    for s in ["Z", "Zmod[8]", "Fp[3]", "Zmu[A,p=5,m=1]", "Poly(Fp[3]; a,b)", "Quot(Poly(Fp[2]; t); t^2 + t + 1)"] {
        assert_eq!(ring_parse(s).unwrap().to_string(), s);
    }
}

#[test]
fn eta_values() {
    let c = r("Zmu[C,p=2,m=0]");
    assert_eq!(c.eta().unwrap(), c.from_i64(-2));
    let a = r("Zmu[A,p=3,m=0]");
    assert_eq!(a.as_constant(&a.eta().unwrap()).unwrap(), vec![Int::from(-1), Int::from(1)]);
    let b = r("Zmu[B,p=2,m=0]");
    assert_eq!(b.fmt_elt(&b.eta().unwrap()), "-1 + i");
    assert!(matches!(r("Z").eta(), Err(Error::NotCyclotomic(_))));
}

#[test]
fn valuations() {
    let a = r("Zmu[A,p=3,m=0]");
    assert_eq!(a.eta_valuation(&a.from_i64(3)).unwrap(), Some(2));
    let b = r("Zmu[B,p=2,m=0]");
    assert_eq!(b.eta_valuation(&b.from_i64(2)).unwrap(), Some(2));
    assert_eq!(b.eta_valuation(&b.zero()).unwrap(), None);
    let a1 = r("Zmu[A,p=3,m=1]");
    let x = a1.parse_elt("3*eta_m + 9").unwrap();
    assert_eq!(a1.eta_valuation(&x).unwrap(), a1.eta_valuation_fast(&x).unwrap());
}

#[test]
fn unit_tests() {
    let a = r("Zmu[A,p=3,m=0]");
    assert!(a.is_unit(&a.parse_elt("rho").unwrap()).unwrap());
    assert!(!a.is_unit(&a.from_i64(3)).unwrap());
    let z8 = r("Poly(Zmod[8]; a,b)");
    let x = z8.parse_elt("1 + 4*a*b").unwrap();
    assert!(z8.is_unit(&x).unwrap());
    let y = z8.inverse(&x).unwrap();
    assert!(z8.is_one(&z8.mul(&x, &y)));
    assert!(!z8.is_unit(&z8.parse_elt("1 + a").unwrap()).unwrap());
    assert!(!z8.is_unit(&z8.parse_elt("2 + 4*a").unwrap()).unwrap());
}

#[test]
fn norms() {
    let a = r("Zmu[A,p=3,m=0]");
    assert_eq!(a.cyclo_norm(&a.eta().unwrap()), Some(Int::from(3)));
    assert_eq!(a.cyclo_norm(&a.one()), Some(Int::from(1)));
    let a5 = r("Zmu[A,p=5,m=0]");
    assert_eq!(a5.cyclo_norm(&a5.eta().unwrap()), Some(Int::from(5)));
    let b = r("Zmu[B,p=2,m=0]");
    assert_eq!(b.cyclo_norm(&b.eta().unwrap()), Some(Int::from(2)));
}

#[test]
fn field_f4() {
    let f4 = r("Quot(Poly(Fp[2]; t); t^2 + t + 1)");
    assert_eq!(f4.size(), Some(Int::from(4)));
    let res = f4.residues().unwrap();
    assert_eq!(res.len(), 1);
    assert_eq!(res[0].q(), 4);
    let t = f4.var(0);
    assert_eq!(f4.pow(&t, 3), f4.one());
    let inv = f4.inverse(&t).unwrap();
    assert_eq!(f4.mul(&inv, &t), f4.one());
}

#[test]
fn nonlocal_residues() {
    // Z[rho]/54 = Z[rho]/eta^6 x F_4.
    let rr = r("Quot(Zmu[A,p=3,m=0]; 54)");
    let res = rr.residues().unwrap();
    let mut qs: Vec<u32> = res.iter().map(|f| f.q()).collect();
    qs.sort();
    assert_eq!(qs, vec![3, 4]);
    assert!(!rr.is_unit(&rr.from_i64(2)).unwrap());
    assert!(!rr.is_unit(&rr.eta().unwrap()).unwrap());
    assert!(rr.is_unit(&rr.from_i64(5)).unwrap());
    let z6 = r("Zmod[6]");
    assert_eq!(z6.residues().unwrap().len(), 2);
    let five = z6.from_i64(5);
    assert_eq!(z6.inverse(&five), Some(five.clone()));
}

#[test]
fn truncated_polynomials() {
    let t = r("Quot(Quot(Poly(Fp[3]; a,b); a^3); b^3)");
    assert_eq!(t.size(), Some(Int::from(3u64.pow(9))));
    let x = t.parse_elt("a*b").unwrap();
    assert!(t.pow(&x, 3).is_zero());
    assert!(t.is_unit(&t.parse_elt("2 + a*b + b").unwrap()).unwrap());
    assert!(t.is_local().unwrap());
}

#[test]
fn display_roundtrip() {
    let pr = r("Poly(Zmu[A,p=3,m=0]; a,b)");
    let x = pr.parse_elt("(1 + 3*eta*a)^2 - rho*b + 7").unwrap();
    let s = pr.fmt_elt(&x);
    assert_eq!(pr.parse_elt(&s).unwrap(), x);
}
