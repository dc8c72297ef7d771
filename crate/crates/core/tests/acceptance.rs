//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Sub-claims that are false as literally stated print their own FAIL line
//! with the measured value. They do not fail the test, because the corrected
//! statement is checked alongside them. Every other line must pass.

use cyclotome::azumaya;
use cyclotome::checks::{self, Params, Status};
use cyclotome::galois;
use cyclotome::kummer;
use cyclotome::norm::{self, TauAction};
use cyclotome::{Case, Elt, Int, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::time::{Duration, Instant};

fn ring(s: &str) -> Ring {
    Ring::parse(s).unwrap()
}

/// Written to the raw stderr handle so the lines survive test capture.
fn emit(line: String) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

struct Board {
    required_failures: Vec<String>,
}

impl Board {
    fn line(&mut self, id: &str, pass: bool, detail: &str) {
        emit(format!("criterion {id:<5} {} {detail}", if pass { "PASS" } else { "FAIL" }));
        if !pass {
            self.required_failures.push(format!("{id}: {detail}"));
        }
    }

    /// A literal sub-claim known to be false; printed, never required.
    fn literal(&mut self, id: &str, holds: bool, detail: &str) {
        emit(format!("criterion {id:<5} {} {detail}", if holds { "PASS" } else { "FAIL" }));
    }

    fn timed(&mut self, id: &str, limit: Duration, start: Instant, pass: bool, detail: &str) {
        let el = start.elapsed();
        let ok = el <= limit;
        self.line(id, pass && ok, &format!("{detail} ({:.2} s, limit {} s)", el.as_secs_f64(), limit.as_secs()));
    }
}

fn entry(name: &str, params: &Params) -> checks::CheckReport {
    checks::run(name, params).unwrap()
}

fn entry_ok(name: &str, params: &Params) -> bool {
    let r = entry(name, params);
    if r.status != Status::Pass {
        emit(format!("    {name}: {:?} actual={} witness={}", r.status, r.actual, r.witness));
    }
    r.status == Status::Pass
}

fn c1(b: &mut Board) {
    let t = Instant::now();
    let ok = entry_ok("g", &Params::default());
    b.timed("1", Duration::from_secs(1), t, ok, "g-identity exact and g = -Z mod eta for p in {2,3,5,7}");
}

fn c2(b: &mut Board) {
    let mut ok = true;
    for p in [3u64, 5] {
        let r = ring(&format!("Zmu[A,p={p},m=0]"));
        let eta = r.eta().unwrap();
        ok &= r.cyclo_norm(&eta) == Some(Int::from(p));
        let u = r.div_exact(&r.pow(&eta, p - 1), &r.from_i64(p as i64)).unwrap();
        ok &= r.div_exact(&r.add(&u, &r.one()), &eta).is_some();
    }
    let rb = ring("Zmu[B,p=2,m=0]");
    let eta = rb.eta().unwrap();
    ok &= rb.pow(&eta, 2) == rb.scale(&rb.zeta(), &Int::from(-2));
    b.line("2", ok, "N(eta) = p in case A for p = 3, 5; eta^(p-1) = u p with u = -1 mod eta; eta^2 = -2i in case B");
    let nb = rb.cyclo_norm(&eta).unwrap();
    b.literal("2-lit", nb == Int::from(-2), &format!("N(eta) = -2 in case B as stated; measured N(i - 1) = {nb} = (i - 1)(-i - 1)"));
}

fn c3(b: &mut Board) {
    let t = Instant::now();
    let mut ok = true;
    for (p, m, case) in [(3u64, 1u32, Case::A), (3, 2, Case::A), (2, 1, Case::B), (2, 2, Case::B)] {
        let tau = TauAction::new(&ring(&format!("Zmu[{case:?},p={p},m={m}]"))).unwrap();
        let r = &tau.ring;
        let mu = r.mu_m().unwrap();
        let q = p.pow(m);
        assert_eq!(tau.t, q);
        ok &= (1..q).all(|k| tau.trace(&r.pow(&mu, k)).is_zero());
        let eta = r.eta().unwrap();
        let want = if case == Case::B { r.neg(&eta) } else { eta };
        ok &= tau.norm(&r.eta_m().unwrap()) == want;
    }
    ok &= entry_ok("etaandp", &Params::default());
    b.timed("3", Duration::from_secs(10), t, ok, "tr(mu_m^k) = 0 and N(eta_m) = eta (A) / -eta (B) at (3,1), (3,2), (2,1), (2,2)");
}

fn c4(b: &mut Board) {
    let t = Instant::now();
    let r = entry("formula", &Params::default());
    b.timed("4", Duration::from_secs(60), t, r.status == Status::Pass, &format!("valuation formula, exhaustive k < p^m, r <= 7, p = 3 and case B at m = 2: {}", r.actual));
}

fn c5(b: &mut Board) {
    let t = Instant::now();
    let d = Params::default();
    let mut ok = ["normcomputations.1", "normcomputations.2", "normcomputations.3", "normcomputations.4", "normcomputations.5"]
        .iter()
        .all(|n| entry_ok(n, &d));
    // Numeric sweeps for case B at m = 1, 2 and integer b0 for p = 3.
    for m in [1u32, 2] {
        let tau = TauAction::new(&ring(&format!("Zmu[B,p=2,m={m}]"))).unwrap();
        for c in -3i64..=3 {
            let bb = tau.ring.from_i64(c);
            for r in 1..=2 {
                let rep = norm::norm_one_plus(&tau, &bb, None, r).unwrap();
                ok &= rep.items.iter().all(|i| i.holds);
            }
        }
    }
    let tau3 = TauAction::new(&ring("Zmu[A,p=3,m=1]")).unwrap();
    let mut numeric3 = true;
    for c in [1i64, 2, 4, 5, -1, -2] {
        let rep = norm::norm_one_plus(&tau3, &tau3.ring.from_i64(c), None, 1).unwrap();
        numeric3 &= rep.items.iter().filter(|i| i.item == "3").all(|i| i.holds);
    }
    ok &= numeric3;
    b.timed("5", Duration::from_secs(60), t, ok, "items 1, 2, 4 as stated, 3 and 5 in corrected form, symbolic b at p = 3, m = 1 and case B m = 1, 2; item 4 on 50 units");
    let lit3 = entry("normcomputations.3", &d).witness;
    let held3 = lit3["literal"]["holds"].as_object().map_or(false, |m| m.values().all(|v| v == true));
    b.literal("5-lit3", held3, &format!("item 3 literal 1 + b0^r eta^r as a polynomial identity in b0: {}; holds for every integer b0 tested: {numeric3}", lit3["literal"]["holds"]));
    let rep = norm::norm_one_plus(&tau3, &tau3.ring.one(), None, 4).unwrap();
    let lit5 = rep.items.iter().find(|i| i.item == "5").map(|i| i.holds).unwrap();
    b.literal("5-lit5", lit5, &format!("item 5 literal sign 1 - b eta^p; N(1 + eta_1^4) = {} = 1 + eta^3 (..) mod eta^4", tau3.ring.fmt_elt(&rep.value)));
}

fn c6(b: &mut Board) {
    let t = Instant::now();
    let p = Params { samples: Some(20), seed: 6, ..Params::default() };
    let ok = ["identity", "inverse", "product", "torsion"].iter().all(|n| entry_ok(n, &p));
    b.timed("6", Duration::from_secs(120), t, ok, "product identity, inverse, S^p split, power reduction on rank 4; 20 samples over F_2, F_3, F_4");
}

fn c7(b: &mut Board) {
    let t = Instant::now();
    let mut count = 0;
    let mut ok = true;
    for (desc, p) in [("Fp[2]", 2u64), ("Fp[3]", 3), ("Quot(Poly(Fp[2]; w); w^2+w+1)", 2), ("Quot(Zmu[A,p=3,m=0]; 9)", 3), ("Quot(Zmu[C,p=2,m=0]; 8)", 2)] {
        let base = ring(desc);
        for a in base.elements().unwrap() {
            let Ok(ext) = kummer::build_degree_p(&base, p, &a) else { continue };
            count += 1;
            let s = &ext.alg;
            let (g, _) = galois::find_normal_generator(s, p, Some(&ext.theta)).unwrap();
            let Some(g) = g else {
                ok = false;
                continue;
            };
            ok &= galois::find_normal_basis(s).unwrap().is_some();
            ok &= s.is_unit(&g.u).unwrap();
            ok &= s.pow(&g.u, p) == s.scalar(&g.u_pow_p);
            ok &= g.s_rho_is_ru == Some(true);
        }
    }
    b.timed("7", Duration::from_secs(120), t, ok && count > 0, &format!("normal generator, S = R[G], u unit spanning S_rho with u^p in R, on all {count} extensions over five finite bases"));
}

fn alpha_identity(alg: &azumaya::SCAlgebra, r: &Ring, p: u64, c: &Elt, ab: bool) -> bool {
    let alpha = alg.mul(&alg.x, &alg.y);
    let lhs = if ab {
        alg.sub(&alg.pow(&alpha, p), &alpha)
    } else {
        let f = kummer::defining_polynomial(r, p, &r.zero()).unwrap();
        f.iter().enumerate().fold(alg.zero(), |acc, (k, ck)| alg.add(&acc, &alg.scale(ck, &alg.pow(&alpha, k as u64))))
    };
    lhs == alg.scalar(c)
}

/// Returns the Azumaya (a,b)_rho instances for criterion 9.
fn c8(b: &mut Board) -> Vec<azumaya::SCAlgebra> {
    let t = Instant::now();
    let mut ok = true;
    let mut lit_p2 = true;
    for p in [2u64, 3] {
        let r = ring(&format!("Poly(Fp[{p}]; a, b)"));
        let alg = azumaya::build_ab(&r, p, &r.var(0), &r.var(1)).unwrap();
        ok &= alpha_identity(&alg, &r, p, &r.mul(&r.var(0), &r.var(1)), true);
        let case = if p == 2 { "C" } else { "A" };
        let z = ring(&format!("Poly(Zmu[{case},p={p},m=0]; a, b)"));
        let alg = azumaya::build_ab_rho(&z, p, &z.var(0), &z.var(1)).unwrap();
        let ab = z.mul(&z.var(0), &z.var(1));
        let holds = alpha_identity(&alg, &z, p, &ab, false);
        if p == 2 {
            lit_p2 = holds;
            ok &= alpha_identity(&alg, &z, p, &z.neg(&ab), false);
        } else {
            ok &= holds;
        }
    }
    // Exhaustive (a,b) over F_2 and F_3.
    for p in [2u64, 3] {
        let f = ring(&format!("Fp[{p}]"));
        for x in 0..p as i64 {
            for y in 0..p as i64 {
                let alg = azumaya::build_ab(&f, p, &f.from_i64(x), &f.from_i64(y)).unwrap();
                ok &= azumaya::is_azumaya(&alg).unwrap().azumaya;
            }
        }
    }
    // 100 samples over Z[rho]/eta^(2p), plus both directions over the non-local bases.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut instances = Vec::new();
    let mut seen = [false, false];
    for (desc, p, n) in [("Quot(Zmu[A,p=3,m=0]; eta^6)", 3u64, 50), ("Quot(Zmu[C,p=2,m=0]; eta^4)", 2, 50), ("Quot(Zmu[A,p=3,m=0]; 54)", 3, 10), ("Zmod[48]", 2, 10)] {
        let r = ring(desc);
        let els = r.elements().unwrap();
        for _ in 0..n {
            let a = els[rng.gen_range(0..els.len())].clone();
            let bb = els[rng.gen_range(0..els.len())].clone();
            let alg = azumaya::build_ab_rho(&r, p, &a, &bb).unwrap();
            let cert = azumaya::is_azumaya(&alg).unwrap();
            ok &= cert.agrees;
            seen[cert.azumaya as usize] = true;
            if cert.azumaya {
                instances.push(alg);
            }
        }
    }
    ok &= seen[0] && seen[1];
    ok &= entry_ok("braueronto", &Params::default());
    b.timed("8", Duration::from_secs(180), t, ok, "alpha^p - alpha = ab; alpha^p + g(alpha) = ab (p = 3) and = -ab (p = 2); exhaustive F_2^2, F_3^2; 100 samples over Z[rho]/eta^(2p) plus 20 non-local, both directions; reduction mod eta");
    b.literal("8-lit", lit_p2, "alpha^2 + g(alpha) = ab for p = 2 as stated (the relations force -ab)");
    instances
}

fn c9(b: &mut Board, instances: &[azumaya::SCAlgebra]) {
    let t = Instant::now();
    let mut ok = true;
    for alg in instances {
        let j = azumaya::j_sigma_calculus(alg).unwrap();
        ok &= j.product_is_s && j.power_is_s;
    }
    // Exhaustive (a,b) over F_2 and F_3.
    ok &= entry_ok("differential", &Params::default());
    ok &= entry_ok("azumaya", &Params { samples: Some(8), ..Params::default() });
    b.timed("9", Duration::from_secs(180), t, ok, &format!("J_sigma J_sigma^-1 = S and J_sigma^p = S on {} Azumaya instances; equivalence in both directions on engineered failures", instances.len()));
}

fn c10(b: &mut Board) {
    let t = Instant::now();
    let ok = entry_ok("rescor", &Params { samples: Some(6), ..Params::default() }) && entry_ok("goodmodp", &Params::default()) && entry_ok("galoistower", &Params::default());
    b.timed("10", Duration::from_secs(120), t, ok, "Cor(T' (x) D) = T'^|C| with Galois output; mod-p comparison on Z[rho]/9 over Z/9");
}

fn c11(b: &mut Board) {
    let mut ok = true;
    for (p, m, case) in [(3u64, 1u32, Case::A), (3, 2, Case::A), (2, 2, Case::B)] {
        let tau = TauAction::new(&ring(&format!("Zmu[{case:?},p={p},m={m}]"))).unwrap();
        let f = norm::m_tau_formal(&tau);
        ok &= f.relation_holds;
        if (p, m) == (3, 1) {
            ok &= f.exponents == ["16", "4", "1"];
        }
    }
    ok &= entry_ok("invert", &Params::default());
    b.line("11", ok, "tau(M) z^(r^t - 1) = M^r on exponent vectors at (3,1), (3,2), (2,2)");
}

#[test]
fn acceptance() {
    let mut b = Board { required_failures: Vec::new() };
    c1(&mut b);
    c2(&mut b);
    c3(&mut b);
    c4(&mut b);
    c5(&mut b);
    c6(&mut b);
    c7(&mut b);
    let inst = c8(&mut b);
    c9(&mut b, &inst);
    c10(&mut b);
    c11(&mut b);
    assert!(b.required_failures.is_empty(), "failed: {:#?}", b.required_failures);
}
