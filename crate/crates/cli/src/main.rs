use clap::{Args, Parser, Subcommand};
use cyclotome::azumaya::{self, SCAlgebra};
use cyclotome::checks::{self, Params, Status};
use cyclotome::galois::{self, GaloisAlgebra};
use cyclotome::{export, kummer, norm, Case, Error, Ring};
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cyclotome", version, about = "Exact cyclotomic norms, cyclic Galois extensions and symbol algebras")]
struct Cli {
    /// Write the JSON artifact or report here ("-" for stdout).
    #[arg(long, global = true)]
    json: Option<String>,
    /// Sampling seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print g(Z) with (1 + Z eta)^p = 1 + (g(Z) + Z^p) eta^p.
    ComputeG {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "A")]
        case: String,
    },
    /// Build S = R[Z]/(Z^p + g(Z) - a) with sigma(Z) = rho Z + 1.
    BuildExtension(ExtArgs),
    /// Build (a,b) or, with --rho, (a,b)_rho.
    BuildSymbol {
        #[command(flatten)]
        s: SymArgs,
    },
    /// Operations on cyclic extensions.
    Galois {
        #[command(subcommand)]
        verb: GaloisVerb,
    },
    /// Symbol algebra verbs.
    Symbol {
        #[command(subcommand)]
        verb: SymbolVerb,
    },
    /// Measured and predicted valuations of s_k(eta_m^r).
    NormTable {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        case: Option<String>,
        /// Largest r.
        #[arg(long, default_value_t = 7)]
        r: u64,
    },
    /// Run a registered check, or all of them.
    Verify(VerifyArgs),
    /// List registered checks.
    List,
}

#[derive(Args, Clone)]
struct ExtArgs {
    /// Base ring descriptor.
    #[arg(long, alias = "base")]
    ring: String,
    #[arg(long)]
    a: String,
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Args, Clone)]
struct SymArgs {
    #[arg(long, alias = "base")]
    ring: String,
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    p: Option<u64>,
    /// Build (a,b)_rho instead of (a,b).
    #[arg(long)]
    rho: bool,
}

#[derive(Subcommand)]
enum GaloisVerb {
    /// Certify S_a.
    Verify(ExtArgs),
    /// S_a * S_b, compared with S_(a (+) b).
    Product {
        #[command(flatten)]
        e: ExtArgs,
        #[arg(long)]
        b: String,
    },
    /// S_a^n.
    Power {
        #[command(flatten)]
        e: ExtArgs,
        #[arg(long)]
        n: usize,
    },
    /// Ind of S_a from <sigma^n> up to a cyclic group of order n p.
    Induce {
        #[command(flatten)]
        e: ExtArgs,
        #[arg(long)]
        n: usize,
    },
    /// Cor over F_4/F_2 of S_a (x) F_4, with S_a over F_2.
    Corestrict {
        #[arg(long, default_value = "1")]
        a: String,
    },
}

#[derive(Subcommand)]
enum SymbolVerb {
    BuildAb(SymArgs),
    BuildAbRho(SymArgs),
    VerifyAzumaya(SymArgs),
    JSigma(SymArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Registry name, e.g. etaandp or normcomputations.2.
    lemma: Option<String>,
    #[arg(long, conflicts_with = "lemma")]
    all: bool,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    case: Option<String>,
    #[arg(long, alias = "base")]
    ring: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
}

fn parse_case(s: &str) -> Result<Case, Error> {
    match s {
        "A" | "a" => Ok(Case::A),
        "B" | "b" => Ok(Case::B),
        "C" | "c" => Ok(Case::C),
        _ => Err(Error::Parse(format!("case must be A, B or C, got {s}"))),
    }
}

fn p_for(r: &Ring, p: Option<u64>) -> Result<u64, Error> {
    p.or_else(|| r.default_p()).ok_or_else(|| Error::Parse(format!("--p is required over {r}")))
}

fn extension(e: &ExtArgs) -> Result<kummer::CyclicDegP, Error> {
    let r = Ring::parse(&e.ring)?;
    let p = p_for(&r, e.p)?;
    kummer::build_degree_p(&r, p, &r.parse_elt(&e.a)?)
}

fn symbol(s: &SymArgs, rho: bool) -> Result<SCAlgebra, Error> {
    let r = Ring::parse(&s.ring)?;
    let p = p_for(&r, s.p)?;
    let (a, b) = (r.parse_elt(&s.a)?, r.parse_elt(&s.b)?);
    if rho {
        azumaya::build_ab_rho(&r, p, &a, &b)
    } else {
        azumaya::build_ab(&r, p, &a, &b)
    }
}

fn summary(s: &GaloisAlgebra) -> Result<Value, Error> {
    let cert = s.galois_certificate()?;
    Ok(json!({ "rank": s.rank, "galois": cert.galois, "split": galois::is_split(s)?.is_some(), "det": cert.det }))
}

/// Output of one command: a human summary plus the JSON artifact.
struct Out {
    text: String,
    json: Value,
    ok: bool,
}

fn out(text: String, json: Value) -> Out {
    Out { text, json, ok: true }
}

fn galois_verb(verb: &GaloisVerb) -> Result<Out, Error> {
    Ok(match verb {
        GaloisVerb::Verify(e) => {
            let ext = extension(e)?;
            let cert = ext.alg.verify_galois()?;
            out(format!("Galois of rank {} over {} (det {})", cert.rank, ext.base, cert.det.as_deref().unwrap_or("n/a")), export::degree_p(&ext))
        }
        GaloisVerb::Product { e, b } => {
            let s = extension(e)?;
            let t = extension(&ExtArgs { a: b.clone(), ..e.clone() })?;
            let st = galois::product(&s.alg, &t.alg)?;
            let r = &s.base;
            let want = kummer::build_degree_p(r, s.p, &kummer::oplus(r, s.p, &s.a, &t.a)?)?;
            let iso = galois::isomorphism(&st, &want.alg)?.is_some();
            let mut j = export::galois(&st);
            j["summary"] = summary(&st)?;
            j["isomorphic_to_oplus"] = json!(iso);
            Out { text: format!("S_a * S_b: {}; isomorphic to S_(a (+) b): {iso}", summary(&st)?), json: j, ok: iso }
        }
        GaloisVerb::Power { e, n } => {
            let s = extension(e)?;
            let t = galois::power(&s.alg, *n)?;
            let mut j = export::galois(&t);
            j["summary"] = summary(&t)?;
            out(format!("S^{n}: {}", summary(&t)?), j)
        }
        GaloisVerb::Induce { e, n } => {
            let s = extension(e)?;
            let t = galois::induce(&s.alg, *n)?;
            let mut j = export::galois(&t);
            j["summary"] = summary(&t)?;
            out(format!("Ind: {}", summary(&t)?), j)
        }
        GaloisVerb::Corestrict { a } => {
            let f2 = Ring::parse("Fp[2]")?;
            let d = Ring::parse("Quot(Poly(Fp[2]; w); w^2+w+1)")?;
            let w = d.var(0);
            let desc = galois::cor::Descent::new(&f2, &d, d.one(), vec![d.add(&w, &d.one())])?;
            let t1 = kummer::build_degree_p(&f2, 2, &f2.parse_elt(a)?)?;
            let c = galois::corestrict(&desc, &desc.extend(&t1.alg)?)?;
            let cert = c.alg.verify_galois()?;
            let iso = galois::isomorphism(&c.alg, &galois::power(&t1.alg, 2)?)?.is_some();
            let mut j = export::galois(&c.alg);
            j["descends"] = json!(c.descends);
            j["isomorphic_to_power"] = json!(iso);
            Out { text: format!("Cor rank {}, Galois {}, descends {}, = T'^2: {iso}", cert.rank, cert.galois, c.descends), json: j, ok: iso && cert.galois }
        }
    })
}

fn symbol_verb(verb: &SymbolVerb) -> Result<Out, Error> {
    Ok(match verb {
        SymbolVerb::BuildAb(s) | SymbolVerb::BuildAbRho(s) => {
            let alg = symbol(s, matches!(verb, SymbolVerb::BuildAbRho(_)) || s.rho)?;
            out(format!("{:?} algebra of rank {} over {}", alg.kind, alg.rank, alg.base), export::symbol(&alg))
        }
        SymbolVerb::VerifyAzumaya(s) => {
            let alg = symbol(s, s.rho)?;
            let cert = azumaya::is_azumaya(&alg)?;
            let ok = cert.azumaya && cert.agrees;
            Out { text: format!("Azumaya: {} (predicted {})", cert.azumaya, cert.predicted), json: serde_json::to_value(&cert).unwrap(), ok }
        }
        SymbolVerb::JSigma(s) => {
            let alg = symbol(s, s.rho)?;
            let rep = azumaya::j_sigma_calculus(&alg)?;
            let ok = rep.product_is_s && rep.power_is_s;
            Out { text: format!("J_sigma J_sigma^-1 = S: {}; J_sigma^n = S: {}", rep.product_is_s, rep.power_is_s), json: serde_json::to_value(&rep).unwrap(), ok }
        }
    })
}

fn norm_table(p: u64, m: u32, case: Option<&str>, rmax: u64) -> Result<Out, Error> {
    let case = match case {
        Some(c) => parse_case(c)?,
        None if p == 2 => Case::B,
        None => Case::A,
    };
    let tau = norm::TauAction::new(&Ring::parse(&format!("Zmu[{case:?},p={p},m={m}]"))?)?;
    let eta_m = tau.ring.eta_m()?;
    let mut text = format!("v(s_k(eta_m^r)) measured/predicted, case {case:?}, p = {p}, m = {m}\n   r |");
    for k in 1..tau.t {
        text += &format!(" k={k:<5}");
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for r in 1..=rmax {
        text += &format!("\n{r:>4} |");
        let tab = norm::newton_sk(&tau, &tau.ring.pow(&eta_m, r), tau.t as usize - 1);
        for k in 1..tau.t {
            let got = tau.v(&tab.s[k as usize - 1]);
            let want = norm::predicted_sk_valuation(k, r, p, m, case)?;
            ok &= got == Some(want as u32);
            let g = got.map_or("inf".into(), |v| v.to_string());
            text += &format!(" {:<7}", format!("{g}/{want}"));
            rows.push(json!({ "r": r, "k": k, "measured": got, "predicted": want }));
        }
    }
    Ok(Out { text, json: json!({ "schema": export::SCHEMA, "kind": "norm_table", "p": p, "m": m, "case": case, "rows": rows }), ok })
}

fn verify(v: &VerifyArgs, seed: u64) -> Result<Out, Error> {
    let params = Params {
        p: v.p,
        m: v.m,
        case: v.case.as_deref().map(parse_case).transpose()?,
        ring: v.ring.clone(),
        n: v.n,
        a: v.a.clone(),
        b: v.b.clone(),
        samples: v.samples,
        seed,
    };
    let reports = match (&v.lemma, v.all) {
        (_, true) => checks::run_all(&params),
        (Some(l), false) => vec![checks::run(l, &params)?],
        (None, false) => return Err(Error::Parse("give a lemma name or --all".into())),
    };
    let text = reports
        .iter()
        .map(|r| {
            let st = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skipped",
            };
            let extra = if r.status == Status::Pass { String::new() } else { format!("  {}", r.witness) };
            format!("{:<20} {st:<8} {:>6} ms{extra}", r.lemma, r.runtime_ms)
        })
        .collect::<Vec<_>>()
        .join("\n");
    let ok = checks::all_passed(&reports);
    Ok(Out { text, json: serde_json::to_value(&reports).unwrap(), ok })
}

fn dispatch(cli: &Cli) -> Result<Out, Error> {
    match &cli.cmd {
        Cmd::ComputeG { p, case } => {
            let g = kummer::compute_g(*p, parse_case(case)?)?;
            Ok(out(format!("g(Z) = {}", g.render("Z")?), export::g_poly(&g)?))
        }
        Cmd::BuildExtension(e) => {
            let ext = extension(e)?;
            Ok(out(format!("S = {}[Z]/(Z^{} + g(Z) - ({})), rank {}, Galois {}", ext.base, ext.p, ext.base.fmt_elt(&ext.a), ext.alg.rank, ext.certificate.galois), export::degree_p(&ext)))
        }
        Cmd::BuildSymbol { s } => symbol_verb(&if s.rho { SymbolVerb::BuildAbRho(s.clone()) } else { SymbolVerb::BuildAb(s.clone()) }),
        Cmd::Galois { verb } => galois_verb(verb),
        Cmd::Symbol { verb } => symbol_verb(verb),
        Cmd::NormTable { p, m, case, r } => norm_table(*p, *m, case.as_deref(), *r),
        Cmd::Verify(v) => verify(v, cli.seed),
        Cmd::List => {
            let text = checks::registry().iter().map(|e| format!("{:<20} {}", e.name, e.summary)).collect::<Vec<_>>().join("\n");
            Ok(out(text, json!(checks::names())))
        }
    }
}

/// Print to stdout, tolerating a closed pipe.
fn say(s: &str) {
    let _ = writeln!(std::io::stdout(), "{s}");
}

fn emit_json(path: &str, v: &Value) -> std::io::Result<()> {
    let s = serde_json::to_string_pretty(v).expect("serializable");
    if path == "-" {
        say(&s);
        Ok(())
    } else {
        std::fs::write(path, s + "\n")
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(o) => {
            match cli.json.as_deref() {
                Some("-") => emit_json("-", &o.json).unwrap(),
                Some(path) => {
                    if let Err(e) = emit_json(path, &o.json) {
                        eprintln!("error: cannot write {path}: {e}");
                        return ExitCode::from(2);
                    }
                    say(&o.text);
                }
                None => say(&o.text),
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
