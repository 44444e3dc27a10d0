use std::path::PathBuf;
use std::process::{Command, Output};

fn vfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vfrac")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let o = vfrac(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap().trim_end().to_string()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&all)).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const X0: &str = "10100:11000:1,2,3";

#[test]
fn v_examples() {
    let sq = stdout(&["v", "mul", X0, X0]);
    assert_eq!(sq, "1010100:1110000:1,2,3,4");
    assert_eq!(stdout(&["v", "slope", X0, "0"]), "-1");
    assert_eq!(stdout(&["v", "slope", X0]), "10100|-1,0,1");
    assert_eq!(stdout(&["v", "apply", X0, "1/2"]), "1/2^2");
    assert_eq!(stdout(&["v", "classify", "100:100:2,1"]), "T\\F");
    assert_eq!(stdout(&["v", "classify", X0]), "F");
    let inv = stdout(&["v", "inv", X0]);
    assert_eq!(stdout(&["v", "mul", &inv, X0]), "0:0:1");
    // printed elements parse back to themselves
    assert_eq!(stdout(&["v", "parse", &sq]), sq);
    assert_eq!(stdout(&["v", "parse", "1100100:1100100:3,4,1,2"]), "100:100:2,1");
}

#[test]
fn json_keys() {
    let v = json(&["v", "parse", "10100:10100:2,3,1"]);
    assert_eq!(v["class"], "T\\F");
    assert_eq!(v["leaves"], 3);
    assert_eq!(json(&["v", "slope", X0, "0"])["slope"], -1);
    assert_eq!(json(&["cocycle", "gamma", X0, "1/2"])["gamma"], -2);
    assert_eq!(json(&["cocycle", "mu", X0, "1/2"])["mu"], -1);
    let p = json(&["cocycle", "pv", "11000:10100:1,2,3"]);
    assert_eq!(p["p"]["0"], 1);
    assert_eq!(p["p"]["1/2^1"], -1);
    assert_eq!(json(&["cocycle", "fv", X0])["fv"], serde_json::json!(["0", "1/2^1"]));
    let l = json(&["limg", "--group", "@Z6", "--map", "@pow:2"]);
    assert_eq!((l["order"].clone(), l["n0"].clone()), (3.into(), 1.into()));
    assert_eq!(l["auto"], serde_json::json!([0, 2, 1]));
}

#[test]
fn isocheck_exit_codes() {
    let yes = vfrac(&["isocheck", "--g1", "@S3", "--a1", "@ad:(12)", "--g2", "@S3", "--a2", "@id", "--witness"]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&yes.stdout).contains("h: (12)"));
    let no = vfrac(&["isocheck", "--g1", "@Z3", "--a1", "@id", "--g2", "@Z3", "--a2", "@inv"]);
    assert_eq!(no.status.code(), Some(1));
    let via_limit = vfrac(&["isocheck", "--g1", "@Z6", "--a1", "@pow:2", "--g2", "@Z3", "--a2", "@inv"]);
    assert_eq!(via_limit.status.code(), Some(0));
    let bad = vfrac(&["isocheck", "--g1", "@Z5", "--a1", "map 0 2 4 1", "--g2", "@Z3", "--a2", "@inv"]);
    assert_eq!(bad.status.code(), Some(2));
    let missing = vfrac(&["isocheck", "--g1", "/nonexistent", "--a1", "@id", "--g2", "@Z3", "--a2", "@inv"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn group_and_map_files() {
    let g = scratch("z3.txt", "order 3\n0 1 2\n1 2 0\n2 0 1\nnames e a b\n");
    let a = scratch("z3_inv.txt", "map e b a\n");
    let g = g.to_str().unwrap();
    let a = a.to_str().unwrap();
    assert_eq!(stdout(&["group", "check", g]), "ok: order 3, abelian");
    assert_eq!(stdout(&["group", "center", g]), "e a b");
    let o = vfrac(&["isocheck", "--g1", g, "--a1", a, "--g2", "@Z3", "--a2", "@inv"]);
    assert_eq!(o.status.code(), Some(0));
    let broken = scratch("broken.txt", "order 2\n0 1\n1 1\n");
    assert_eq!(vfrac(&["group", "check", broken.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(vfrac(&["v", "mul", X0]).status.code(), Some(2));
    assert_eq!(vfrac(&["v", "parse", "10100:11000:1,1,3"]).status.code(), Some(2));
    assert_eq!(vfrac(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(vfrac(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(vfrac(&["aut", "apply", "--group", "@S3", "--zeta", "(12)", "* 0:0:1"]).status.code(), Some(2));
}

#[test]
fn fraction_group_commands_round_trip() {
    let g = stdout(&["g", "mul", "--group", "@Z4", "--alpha", "@inv", "0=1 * 100:100:2,1", "1/2^1=3 * 0:0:1"]);
    assert_eq!(g, "* 100:100:2,1");
    let a = "0=1;3/2^2=2 * 10100:11000:1,2,3";
    let inv = stdout(&["g", "inv", "--group", "@Z4", "--alpha", "@inv", a]);
    assert_eq!(stdout(&["g", "mul", "--group", "@Z4", "--alpha", "@inv", a, &inv]), "* 0:0:1");
    assert_eq!(stdout(&["g", "act", "--group", "@Z4", "--alpha", "@inv", X0, "1/2^1=1"]), "1/2^2=1");
    let k = stdout(&["theta", "to", "--group", "@S3", "--alpha", "@ad:(12)", "10100|(12),(123),e"]);
    let rep = stdout(&["theta", "from", "--group", "@S3", "--alpha", "@ad:(12)", &k]);
    assert_eq!(stdout(&["theta", "to", "--group", "@S3", "--alpha", "@ad:(12)", &rep]), k);
}

#[test]
fn automorphism_and_decomposition_commands() {
    let e = stdout(&["aut", "apply", "--group", "@Z4", "--zeta", "1", "* 11000:10100:1,2,3"]);
    assert_eq!(e, "0=1;1/2^1=3 * 11000:10100:1,2,3");
    let kernel = stdout(&["aut", "apply", "--group", "@S3", "--f", "const:(123)", "--beta", "@ad:(132)", "0=(12) * 100:100:2,1"]);
    assert_eq!(kernel, "0=(12) * 100:100:2,1");
    let d = json(&["cocycle", "decompose", "--group", "@Z4", "--zeta", "1", "--f", "1/2^1=2", "--at", "0,1/2"]);
    assert_eq!(d["zeta"], "1");
    assert_eq!(d["f"]["1/2^1"], "2");
    let p = json(&["cocycle", "decompose", "--group", "@Z4", "--zeta", "3", "--family", "p"]);
    assert_eq!(p["zeta"], "3");
}

#[test]
fn verify_is_deterministic() {
    let a = vfrac(&["--format", "json", "verify", "--suite", "all", "--seed", "7", "--trials", "40"]);
    let b = vfrac(&["--format", "json", "verify", "--suite", "all", "--seed", "7", "--trials", "40"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["passed"], true);
    assert_eq!(r["trials"], 40);
}
