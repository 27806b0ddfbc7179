use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn mapvir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapvir")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).expect("JSON report")
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files { dir: tempfile::tempdir().unwrap() }
    }

    fn put(&self, name: &str, body: &str) -> String {
        let p: PathBuf = self.dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    }
}

#[test]
fn bracket_of_opposite_modes() {
    let o = mapvir(&["bracket", "d[2]*1", "d[-2]*1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "-4*d[0] + 1/2*c");
}

#[test]
fn verma_dims_over_rationals() {
    let o = mapvir(&["verma", "--dims", "-n", "5"]);
    assert_eq!(stdout(&o).trim(), "1 1 2 3 5 7");
}

#[test]
fn reducible_nilpotent_example() {
    let f = Files::new();
    let a = f.put("a.json", r#"{"kind":"product_local","factors":[{"point":"0","order":2}]}"#);
    let phi = f.put("phi.json", r#"{"d0": {"1": "3", "t": "0"}, "c": {"1": "1/2", "t": "0"}}"#);
    let v = json_out(&mapvir(&["check", "--reducible", "-A", &a, "-phi", &phi]));
    assert_eq!(v["status"], "reducible_certified");
    assert_eq!(v["witness"], "(t)");
    assert_eq!(v["metadata"]["basis_order"], "ascending degree");
}

#[test]
fn quasifinite_with_exact_ideal() {
    let f = Files::new();
    let a = f.put("a.json", r#"{"kind":"polynomial","window":[0,8]}"#);
    let phi = f.put(
        "phi.json",
        r#"{"d0_seq":["3","6","12","24","48","96","192","384","768"],"exact_ideal":"t-2"}"#,
    );
    let v = json_out(&mapvir(&["check", "--quasifinite", "-A", &a, "--phi", &phi]));
    assert_eq!(v["status"], "quasifinite_certified");
    assert_eq!(v["witness"], "(t - 2)");
}

#[test]
fn split_and_classify_two_points() {
    let f = Files::new();
    let a = f.put("a.json", r#"{"kind":"product_local","factors":[{"point":"0","order":1},{"point":"1","order":1}]}"#);
    let phi = f.put("phi.json", r#"{"d0": {"1": "5", "t": "2"}, "c": {"1": "1"}}"#);
    let v = json_out(&mapvir(&["split", "-A", &a, "--phi", &phi]));
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0]["phi"]["d0"]["1"], "3");
    assert_eq!(comps[1]["phi"]["d0"]["1"], "2");

    let v = json_out(&mapvir(&["classify", "-A", &a, "--phi", &phi, "--explain"]));
    assert_eq!(v["verdict"], "hw_tensor_of_generalized_evals");
    assert_eq!(v["components"][1]["point"], "1");
    assert!(v["components"][0]["idempotent"].is_string());
    let v = json_out(&mapvir(&["classify", "-A", &a, "--phi", &phi]));
    assert!(v.get("witness").is_none());
}

#[test]
fn module_tables_and_annihilators() {
    let f = Files::new();
    let a = f.put("a.json", r#"{"kind":"polynomial","window":[0,4]}"#);
    let m = f.put(
        "m.json",
        r#"{"variant":"tensor","factors":[
            {"variant":"int_series_eval","a":"1/2","b":"1/3","point":"0","window":[-10,10]},
            {"variant":"int_series_eval","a":"1/5","b":"2/7","point":"1","window":[-10,10]}]}"#,
    );
    let v = json_out(&mapvir(&["module", "-A", &a, "-M", &m, "--weights", "-1,1"]));
    let entries = v["weights"]["entries"].as_array().unwrap();
    assert_eq!(entries[1]["multiplicity"]["value"], 21);
    assert_eq!(entries[1]["multiplicity"]["exact"], false);

    let v = json_out(&mapvir(&["module", "-A", &a, "-M", &m, "--ann"]));
    assert_eq!(v["annihilator"], "(t^2 - t)");
    assert_eq!(v["support"], serde_json::json!(["0", "1"]));

    let o = mapvir(&["module", "-A", &a, "-M", &m, "--weights", "-1,1", "--format", "tsv"]);
    let text = stdout(&o);
    assert!(text.starts_with("offset"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn exit_codes() {
    let f = Files::new();
    let bad = f.put("bad.json", r#"{"kind":"product_local","factors":[{"point":"x","order":1}]}"#);
    let o = mapvir(&["verma", "--dims", "-A", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("algebra.factors[0].point"));

    // d[3] exceeds the mode bound set through the environment
    let o = Command::new(env!("CARGO_BIN_EXE_mapvir"))
        .args(["bracket", "d[2]", "d[1]"])
        .env("MAPVIR_MODE_MAX", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(mapvir(&["bracket", "d[2]*c", "d[1]"]).status.code(), Some(1));
    assert_eq!(mapvir(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn reports_are_reproducible() {
    let a = mapvir(&["selftest", "--seed", "11", "--suite", "jacobi", "--suite", "straightening"]);
    let b = mapvir(&["selftest", "--seed", "11", "--suite", "jacobi", "--suite", "straightening"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["passed"], true);
}

#[test]
fn emitted_rationals_parse_back() {
    let f = Files::new();
    let a = f.put("a.json", r#"{"kind":"product_local","factors":[{"point":"1/3","order":1},{"point":"-2","order":2}]}"#);
    let phi = f.put("phi.json", r#"{"d0": {"1": "7/5", "t": "-2/9", "t^2": "4"}, "c": {"t": "1/7"}}"#);
    let v = json_out(&mapvir(&["split", "-A", &a, "--phi", &phi]));
    for comp in v["components"].as_array().unwrap() {
        for key in ["d0", "c"] {
            for (_, x) in comp["phi"][key].as_object().unwrap() {
                let s = x.as_str().unwrap();
                let back = mapvir::scalar::parse(s).unwrap();
                assert_eq!(mapvir::scalar::format(&back), s);
            }
        }
    }
}

#[test]
fn pbw_basis_and_straightening() {
    let v = json_out(&mapvir(&["pbw", "--basis", "-n", "3"]));
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);
    let v = json_out(&mapvir(&["pbw", "--straighten", "d[-1]", "d[-2]"]));
    assert_eq!(v["height"], 2);
}
