use super::*;
use crate::ring::Ring;

fn ring(s: &str) -> Ring {
    Ring::parse(s).unwrap()
}

/// F_4 = F_2[x]/(x^2 + x + 1) with sigma(x) = x + 1.
fn f4() -> GaloisAlgebra {
    let r = ring("Fp[2]");
    GaloisAlgebra::from_monic(&r, &[r.one(), r.one()], &[r.one(), r.one()]).unwrap()
}

#[test]
fn f4_is_galois() {
    let s = f4();
    let c = s.verify_galois().unwrap();
    assert!(c.galois);
    assert_eq!(is_split(&s).unwrap(), None);
}

#[test]
fn split_extensions_are_galois() {
    for (b, n) in [("Fp[2]", 4), ("Zmod[9]", 3), ("Fp[3]", 1)] {
        let s = split_extension(&ring(b), n).unwrap();
        assert!(s.verify_galois().unwrap().galois, "{b} {n}");
        assert!(is_split(&s).unwrap().is_some());
    }
}

#[test]
fn identity_action_is_not_galois() {
    let r = ring("Fp[3]");
    let s = split_extension(&r, 3).unwrap();
    let t = GaloisAlgebra { sigma: linalg::identity(&r, 3), ..s };
    assert!(matches!(t.verify_galois(), Err(Error::NotGalois { .. })));
}

#[test]
fn group_laws_over_f2() {
    let s = f4();
    let e = split_extension(&s.base, 2).unwrap();
    assert!(isomorphism(&product(&s, &e).unwrap(), &s).unwrap().is_some());
    let ss = product(&s, &s).unwrap();
    assert!(ss.verify_galois().is_ok());
    assert!(is_split(&ss).unwrap().is_some());
    assert!(is_split(&product(&s, &inverse(&s)).unwrap()).unwrap().is_some());
    assert!(isomorphism(&power(&s, 1).unwrap(), &s).unwrap().is_some());
}

#[test]
fn induced_extension() {
    let s = f4();
    let t = induce(&s, 2).unwrap();
    assert_eq!(t.rank, 4);
    assert!(t.verify_galois().unwrap().galois);
    // The idempotent of component 0 is fixed exactly by <sigma^2>.
    let mut e = t.zero();
    e[..2].clone_from_slice(&s.one);
    let stab: Vec<usize> = (0..4).filter(|&k| t.act(k, &e) == e).collect();
    assert_eq!(stab, vec![0, 2]);
    let triv = induce(&split_extension(&s.base, 1).unwrap(), 3).unwrap();
    assert!(isomorphism(&triv, &split_extension(&s.base, 3).unwrap()).unwrap().is_some());
}

#[test]
fn separability_idempotents() {
    for s in [f4(), split_extension(&ring("Fp[3]"), 3).unwrap()] {
        let fam = idempotent_family(&s).unwrap();
        assert_eq!(fam.idempotents.len(), s.rank);
    }
}

#[test]
fn fixed_ring_of_f4_is_f2() {
    let s = f4();
    let f = fixed_ring(&s, &[s.sigma.clone()], &s.sigma).unwrap();
    assert_eq!(f.alg.rank, 1);
}

#[test]
fn normal_generator_of_split_f3() {
    let r = ring("Fp[3]");
    let s = split_extension(&r, 3).unwrap();
    let (g, search) = find_normal_generator(&s, 3, None).unwrap();
    assert!(search.complete);
    let g = g.unwrap();
    assert!(g.powers_span || g.module_generator.len() == 3);
    assert_eq!(g.s_rho_is_ru, Some(true));
    // (0,1,2) is a valid choice: sigma shifts coordinates down.
    let alpha: Vec<Elt> = [0, 1, 2].iter().map(|&k| r.from_i64(k)).collect();
    let shifted = s.apply(&s.sigma, &alpha);
    let plus_one = s.add(&alpha, &s.one);
    assert_eq!(shifted, plus_one);
}

#[test]
fn group_ring_levels_over_z_rho() {
    let r = ring("Zmu[A,p=3,m=0]");
    for i in 0..3 {
        let l = group_ring_level(&r, 3, i).unwrap();
        assert_eq!(l.rank, (i + 1) as usize, "level {i}");
        assert!(l.exact, "level {i}");
        if i >= 1 {
            assert_eq!(l.square_commutes, Some(true));
            assert_eq!(l.pullback_injective, Some(true));
        }
    }
}

fn f4_descent() -> Descent {
    let d = ring("Quot(Poly(Fp[2]; w); w^2+w+1)");
    let w = d.var(0);
    let img = d.add(&w, &d.one());
    Descent::new(&ring("Fp[2]"), &d, d.one(), vec![img]).unwrap()
}

#[test]
fn corestriction_of_extended_extension() {
    let desc = f4_descent();
    assert_eq!(desc.order(), 2);
    assert!(desc.d_as_algebra().verify_galois().is_ok());
    let t1 = f4();
    let t = desc.extend(&t1).unwrap();
    let cor = corestrict(&desc, &t).unwrap();
    assert!(cor.descends);
    assert!(cor.alg.verify_galois().is_ok());
    let want = power(&t1, 2).unwrap();
    assert!(isomorphism(&cor.alg, &want).unwrap().is_some());
}
