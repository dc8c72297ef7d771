//! Versioned JSON artifacts. Elements are encoded as a list of terms, each an
//! exponent vector over the ring's free variables plus the constant's
//! coordinates in the power basis of zeta. Tensors are row-major.

use crate::azumaya::SCAlgebra;
use crate::galois::GaloisAlgebra;
use crate::kummer::{CyclicDegP, GPoly};
use crate::ring::{Elt, Ring};
use serde_json::{json, Value};

pub const SCHEMA: &str = "cyclotome/1";

pub fn elt(r: &Ring, x: &Elt) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .map(|(m, c)| json!({ "exp": m.0, "coeff": c.iter().map(|k| k.to_string()).collect::<Vec<_>>() }))
        .collect();
    json!({ "text": r.fmt_elt(x), "terms": terms })
}

fn vec(r: &Ring, v: &[Elt]) -> Value {
    Value::Array(v.iter().map(|x| elt(r, x)).collect())
}

fn rows(r: &Ring, m: &[Vec<Elt>]) -> Value {
    Value::Array(m.iter().map(|row| vec(r, row)).collect())
}

pub fn galois(s: &GaloisAlgebra) -> Value {
    json!({
        "schema": SCHEMA,
        "kind": "galois_algebra",
        "base": s.base.to_string(),
        "rank": s.rank,
        "table": rows(&s.base, &s.table),
        "one": vec(&s.base, &s.one),
        "sigma": rows(&s.base, &s.sigma),
    })
}

pub fn g_poly(g: &GPoly) -> crate::Result<Value> {
    Ok(json!({
        "schema": SCHEMA,
        "kind": "g_polynomial",
        "p": g.p,
        "ring": g.ring.to_string(),
        "g": g.render("Z")?,
        "coefficients": vec(&g.ring, &g.coeffs),
    }))
}

pub fn degree_p(e: &CyclicDegP) -> Value {
    let mut v = galois(&e.alg);
    v["kind"] = json!("degree_p_extension");
    v["p"] = json!(e.p);
    v["a"] = elt(&e.base, &e.a);
    v["theta"] = vec(&e.base, &e.theta);
    v["certificate"] = serde_json::to_value(&e.certificate).unwrap_or(Value::Null);
    v
}

pub fn symbol(alg: &SCAlgebra) -> Value {
    let r = &alg.base;
    json!({
        "schema": SCHEMA,
        "kind": "structure_constant_algebra",
        "family": alg.kind,
        "base": r.to_string(),
        "n": alg.n,
        "rank": alg.rank,
        "labels": alg.labels,
        "table": rows(r, &alg.table),
        "one": vec(r, &alg.one),
        "x": vec(r, &alg.x),
        "y": vec(r, &alg.y),
        "a": elt(r, &alg.a),
        "b": elt(r, &alg.b),
        "alpha": vec(r, &alg.alpha),
        "s": galois(&alg.s),
    })
}
