use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tron(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tron"))
        .args(args)
        .env_remove("TRON_NODE_BUDGET")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write_gen(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let out = tron(&[&["gen"], args, &["--out", path.to_str().unwrap()]].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_owned()
}

#[test]
fn gen_visage_and_validation() {
    let out = tron(&["gen", "visage", "--l", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let g = json_of(&out);
    assert_eq!(g["n"], 18);
    assert!(g["labels"]["box"].is_number());

    let bad = tron(&["gen", "visage", "--l", "3"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("l must be even"));
}

#[test]
fn gen_dot() {
    let out = tron(&["gen", "double-tree", "--d", "2", "--h", "2", "--dot"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph tron {"));
    assert!(text.contains("upper_root"));
}

#[test]
fn solve_small_graphs() {
    let dir = TempDir::new().unwrap();
    let k3 = write_gen(dir.path(), "k3.json", &["complete", "--n", "3"]);
    let r = json_of(&tron(&["solve", &k3]));
    assert_eq!(r["classification"], "AliceWins");
    assert_eq!((r["alpha"].as_u64(), r["beta"].as_u64()), (Some(2), Some(1)));

    let p2 = write_gen(dir.path(), "p2.json", &["path", "--n", "2"]);
    let r = json_of(&tron(&["solve", &p2]));
    assert_eq!(r["classification"], "Tie");

    let c4 = write_gen(dir.path(), "c4.json", &["cycle", "--n", "4"]);
    let r = json_of(&tron(&["solve", &c4, "--given", "0", "2", "--objective", "classification"]));
    assert_eq!(r["classification"], "Tie");
    let r = json_of(&tron(&["solve", &c4, "--linear-space"]));
    assert!(r["max_stack_depth"].as_u64().unwrap() <= 2 * 4 + 3);
}

#[test]
fn solve_against_policy() {
    let dir = TempDir::new().unwrap();
    let v = write_gen(dir.path(), "visage2.json", &["visage", "--l", "2"]);
    let out = tron(&["solve", &v, "--vs-policy", "visage-bob", "--objective", "classification"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["classification"], "BobWins");
    assert_eq!(r["policy"], "visage-bob");

    let unknown = tron(&["solve", &v, "--vs-policy", "nobody"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_has_its_own_exit_code() {
    let dir = TempDir::new().unwrap();
    let v = write_gen(dir.path(), "visage2.json", &["visage", "--l", "2"]);
    let out = tron(&["solve", &v, "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["budget_exhausted"], true);

    // the environment supplies the default
    let out = Command::new(env!("CARGO_BIN_EXE_tron"))
        .args(["solve", &v])
        .env("TRON_NODE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    let out = tron(&["verify", "trees", "--max-n", "7", "--budget", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["status"], "exhausted");
}

#[test]
fn whitelist_and_handicap() {
    let dir = TempDir::new().unwrap();
    let c = write_gen(dir.path(), "c8.json", &["cycle", "--n", "8"]);
    let r = json_of(&tron(&["solve", &c, "--handicap", "2"]));
    assert!(r["beta"].as_u64().unwrap() >= 8 - 4);
    let r = json_of(&tron(&["solve", &c, "--whitelist", "1,2"]));
    let pv = r["principal_variation"].as_array().unwrap();
    assert!(["1", "2"].contains(&pv[1].as_str().unwrap()));
    let out = tron(&["solve", &c, "--whitelist", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_formula_and_graph() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("f.qdimacs");
    fs::write(&f, "c tiny\np cnf 2 1\ne 1 0\na 2 0\n1 -2 2 0\n").unwrap();
    let r = json_of(&tron(&["reduce", "g-phi", f.to_str().unwrap()]));
    assert_eq!(r["stage"], "G_phi");
    assert_eq!(r["graph"]["directed"], true);
    assert!(r["alice_start"].is_number() && r["bob_start"].is_number());

    let r = json_of(&tron(&["reduce", "g-phi-prime", f.to_str().unwrap()]));
    assert_eq!(r["graph"]["directed"], false);

    let bad = dir.path().join("bad.qdimacs");
    fs::write(&bad, "p cnf 2 1\ne 1 0\na 2 0\n1 -2 x 0\n").unwrap();
    let out = tron(&["reduce", "g-phi", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    let p2 = write_gen(dir.path(), "p2.json", &["path", "--n", "2"]);
    let r = json_of(&tron(&["reduce", "f", "--graph", &p2, "--v1", "0", "--v2", "1"]));
    assert_eq!(r["stage"], "F");
    assert!(r["landmarks"]["box.t1"].is_number());

    // reduction output is accepted by solve as a graph file
    let h = dir.path().join("h.json");
    let out = tron(&["reduce", "h-prime", "--graph", &p2, "--v1", "0", "--v2", "1", "--out", h.to_str().unwrap()]);
    assert!(out.status.success());
    let out = tron(&["solve", h.to_str().unwrap(), "--objective", "classification", "--budget", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_suites_pass() {
    let dir = TempDir::new().unwrap();
    let dump = dir.path().join("cex.json");
    for args in [
        vec!["trees", "--max-n", "7"],
        vec!["lemmas", "--max-n", "5"],
        vec!["double-tree", "--max-d", "2", "--max-h", "3"],
        vec!["connectivity", "--max-n", "5"],
        vec!["qbf-equivalence", "--n", "2", "--k", "2", "--count", "5", "--seed", "7"],
        vec!["h-properties", "--max-n", "2"],
    ] {
        let out = tron(&[&["verify"], args.as_slice(), &["--dump", dump.to_str().unwrap()]].concat());
        let r = json_of(&out);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {r}");
        assert_eq!(r["status"], "pass");
        assert!(r["checked"].as_u64().unwrap() > 0);
        assert!(r["counterexample_file"].is_null());
    }
    assert!(!dump.exists());
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "qbf-equivalence", "--n", "2", "--k", "1", "--count", "4", "--seed", "3"];
    assert_eq!(tron(&args).stdout, tron(&args).stdout);
}
