use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclotome")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compute_g_renders_known_values() {
    let o = run(&["compute-g", "--p", "2", "--case", "C"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "g(Z) = -Z");
    let o = run(&["compute-g", "--p", "3", "--case", "A"]);
    assert_eq!(stdout(&o).trim(), "g(Z) = -rho^2*Z - rho^2*eta*Z^2");
}

#[test]
fn bad_prime_is_a_usage_error() {
    let o = run(&["compute-g", "--p", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_single_lemmas() {
    assert!(run(&["verify", "normcomputations.2", "--p", "3", "--m", "1"]).status.success());
    assert!(run(&["verify", "torsion", "--base", "Fp[3]", "--n", "3"]).status.success());
    let o = run(&["verify", "unknown"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("etaandp"));
}

#[test]
fn verify_all_passes_and_reports_json() {
    let o = run(&["verify", "--all", "--json", "-"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert!(reports.len() >= 40);
    for r in reports {
        for key in ["lemma", "parameters", "predicted", "actual", "pass", "status", "witness", "runtime_ms"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn build_extension_writes_table_and_sigma() {
    let o = run(&["build-extension", "--ring", "Fp[2]", "--a", "1", "--json", "-"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "cyclotome/1");
    assert_eq!(v["rank"], 2);
    assert_eq!(v["table"].as_array().unwrap().len(), 4);
    assert_eq!(v["sigma"].as_array().unwrap().len(), 2);
    assert_eq!(v["certificate"]["galois"], true);
}

#[test]
fn non_separable_parameter_is_refused() {
    // Mod 2, eta^3 = 1, so 1 + eta^3 is not a unit in Z[rho]/54.
    let o = run(&["build-extension", "--ring", "Quot(Zmu[A,p=3,m=0]; 54)", "--p", "3", "--a", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(run(&["build-extension", "--ring", "Quot(Zmu[A,p=3,m=0]; 54)", "--p", "3", "--a", "0"]).status.success());
}

#[test]
fn symbolic_rho_symbol_for_p2() {
    let o = run(&["build-symbol", "--ring", "Poly(Zmu[C,p=2,m=0]; a, b)", "--a", "a", "--b", "b", "--rho", "--json", "-"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rank"], 4);
    assert_eq!(v["family"], "AbRho");
}

#[test]
fn azumaya_exit_codes_track_the_unit_criterion() {
    let yes = run(&["symbol", "verify-azumaya", "--ring", "Quot(Zmu[A,p=3,m=0]; eta^6)", "--a", "1", "--b", "2", "--rho"]);
    assert!(yes.status.success(), "{}", stdout(&yes));
    assert!(stdout(&yes).contains("Azumaya: true"));
    // 1 - 4*46^2 = 33 mod 48 is not a unit.
    let no = run(&["symbol", "verify-azumaya", "--ring", "Zmod[48]", "--p", "2", "--a", "46", "--b", "46", "--rho"]);
    assert!(stdout(&no).contains("Azumaya: false"));
    let j = run(&["symbol", "j-sigma", "--ring", "Fp[3]", "--a", "1", "--b", "0"]);
    assert!(j.status.success());
}

#[test]
fn galois_verbs() {
    let o = run(&["galois", "product", "--ring", "Fp[3]", "--a", "1", "--b", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("isomorphic to S_(a (+) b): true"));
    assert!(run(&["galois", "power", "--ring", "Fp[3]", "--a", "1", "--n", "3"]).status.success());
    assert!(run(&["galois", "induce", "--ring", "Fp[2]", "--a", "1", "--n", "2"]).status.success());
    assert!(run(&["galois", "corestrict"]).status.success());
    assert!(run(&["galois", "verify", "--ring", "Fp[2]", "--a", "1"]).status.success());
}

#[test]
fn norm_table_matches_predictions() {
    let o = run(&["norm-table", "--p", "3", "--m", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("4/4"));
}
