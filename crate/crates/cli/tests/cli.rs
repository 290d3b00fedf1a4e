use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use g2tw_cli::claims::{implemented_ids, Manifest, KNOWN_FAILURES};
use g2tw_core::equivariant::cross_product_tensor;
use g2tw_core::octonion::Octonions;
use jsonschema::JSONSchema;
use serde_json::{json, Value};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn g2tw(args: &[&str], envs: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_g2tw"));
    cmd.args(args).env_remove("G2TW_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf8 stderr"),
    }
}

fn ok_json(args: &[&str]) -> Value {
    let r = g2tw(args, &[]);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    serde_json::from_str(&r.stdout).expect("stdout is JSON")
}

fn resources() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("resources")
}

fn schema(name: &str) -> JSONSchema {
    let dir = resources().join("schemas");
    let mut opts = JSONSchema::options();
    for entry in fs::read_dir(&dir).expect("schema dir") {
        let path = entry.expect("entry").path();
        let doc: Value = serde_json::from_str(&fs::read_to_string(&path).expect("read schema")).expect("schema JSON");
        let id = doc["$id"].as_str().expect("$id").to_string();
        opts.with_document(id, doc);
    }
    let main: Value = serde_json::from_str(&fs::read_to_string(dir.join(name)).expect("read schema")).expect("schema JSON");
    opts.compile(&main).expect("schema compiles")
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{e} at {}", e.instance_path)).collect(),
    };
    panic!("{name}: {msgs:?}");
}

fn c(re: &str, im: &str) -> Value {
    json!({ "re": re, "im": im })
}

/// Vector with `1` at 1-based index `a` and `im_b·i` at `b`.
fn pair_vec(a: usize, b: usize, im_b: &str) -> Value {
    let v: Vec<Value> = (1..=7)
        .map(|k| if k == a { c("1", "0") } else if k == b { c("0", im_b) } else { c("0", "0") })
        .collect();
    Value::Array(v)
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    fs::write(&p, v.to_string()).expect("write fixture");
    p.to_str().expect("utf8 path").to_string()
}

#[test]
fn classify_anti_self_dual_plane() {
    let dir = tempfile::tempdir().unwrap();
    let plane = json!({ "basis": [pair_vec(1, 2, "1"), pair_vec(7, 5, "1")] });
    assert_valid("subspace.schema.json", &plane);
    let f = write(dir.path(), "p.json", &plane);
    let out = ok_json(&["octonion", "classify", "--in", &f]);
    assert_eq!(out, json!({ "class": "AntiSelfDual" }));
    assert_valid("classification.schema.json", &out);

    let sd = json!({ "basis": [pair_vec(1, 2, "1"), pair_vec(7, 5, "-1")] });
    let f = write(dir.path(), "sd.json", &sd);
    assert_eq!(ok_json(&["octonion", "classify", "--in", &f]), json!({ "class": "SelfDual" }));
}

#[test]
fn classify_three_spaces_of_both_types() {
    let dir = tempfile::tempdir().unwrap();
    let assoc = json!({ "basis": [pair_vec(1, 2, "1"), pair_vec(3, 6, "1"), pair_vec(5, 7, "-1")] });
    let f = write(dir.path(), "a.json", &assoc);
    let out = ok_json(&["octonion", "classify", "--in", &f]);
    assert_eq!(out["class"], "IsotropicAssociative");
    assert_valid("classification.schema.json", &out);

    let eig = json!({ "basis": [pair_vec(1, 3, "-1"), pair_vec(2, 6, "-1"), pair_vec(4, 5, "-1")] });
    let f = write(dir.path(), "e.json", &eig);
    let out = ok_json(&["octonion", "classify", "--in", &f]);
    assert_eq!(out["class"], "EigenspaceType");
    assert_valid("classification.schema.json", &out);
}

#[test]
fn samples_classify_as_their_kind() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["1", "2", "5"] {
        for (kind, class) in [("asd", "AntiSelfDual"), ("sd", "SelfDual"), ("assoc3", "IsotropicAssociative")] {
            let s = ok_json(&["octonion", "sample", "--kind", kind, "--seed", seed]);
            assert_valid("subspace.schema.json", &s);
            let f = write(dir.path(), &format!("{kind}{seed}.json"), &s);
            let out = ok_json(&["octonion", "classify", "--in", &f]);
            assert_eq!(out["class"], class, "{kind} seed {seed}");
        }
    }
    let line = ok_json(&["octonion", "sample", "--kind", "line", "--seed", "3"]);
    assert_eq!(line["basis"].as_array().unwrap().len(), 1);
}

#[test]
fn trichotomy_examples() {
    let dir = tempfile::tempdir().unwrap();
    let hyper: Vec<Value> = (1..=6).map(|k| pair_vec(k, 0, "0")).collect();
    let v = write(dir.path(), "v.json", &json!({ "basis": hyper }));
    for (b, case) in [(7, "SDIntersection"), (2, "ASDIntersection")] {
        let l = write(dir.path(), &format!("l{b}.json"), &json!({ "basis": [pair_vec(1, b, "1")] }));
        let out = ok_json(&["octonion", "trichotomy", "--line", &l, "--hyperplane", &v]);
        assert_eq!(out["case"], case);
        assert_valid("trichotomy.schema.json", &out);
    }
}

#[test]
fn rep_examples() {
    assert_eq!(ok_json(&["rep", "dim", "1", "1"]), json!(64));
    let t = ok_json(&["rep", "tensor", "1", "0", "1", "0"]);
    assert_eq!(t, json!({ "0,0": 1, "1,0": 1, "0,1": 1, "2,0": 1 }));
    assert_valid("irrep-sum.schema.json", &t);
    assert_eq!(ok_json(&["rep", "lambda2", "1", "0"]), json!({ "1,0": 1, "0,1": 1 }));
    assert_valid("scalar.schema.json", &ok_json(&["rep", "dim", "0", "2"]));
}

#[test]
fn bbw_examples() {
    let out = ok_json(&["bbw", "line", "1", "0"]);
    assert_eq!(out, json!({ "result": "Concentrated", "degree": 0, "irrep": [1, 0] }));
    assert_valid("bbw-line.schema.json", &out);
    assert_valid("bbw-line.schema.json", &ok_json(&["bbw", "line", "-1", "0"]));

    let out = ok_json(&["bbw", "bundle", "--space", "Q", "--expr", "sym2(dual(Uplus))"]);
    assert_eq!(out["branches"], json!([{ "1": { "0,1": 1 } }]));
    assert_eq!(out["singleton"], json!(true));
    assert_valid("bundle.schema.json", &out);
}

#[test]
fn ledger_reports_both_values_of_k() {
    let chain_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/resources/paper-chain.json");
    let chain: Value = serde_json::from_str(&fs::read_to_string(&chain_path).unwrap()).unwrap();
    assert_valid("chain.schema.json", &chain);
    let explicit = g2tw(&["ledger", "run", "--chain", chain_path.to_str().unwrap()], &[]);
    let default = g2tw(&["ledger", "run"], &[]);
    assert_eq!(explicit.code, 0, "{}", explicit.stderr);
    assert_eq!(explicit.stdout, default.stdout);
    let out: Value = serde_json::from_str(&explicit.stdout).unwrap();
    assert_eq!(out["variable"]["values"], json!([2, 3]));
    assert_eq!(out["euler_consistent"], json!(true));
    assert_valid("ledger-report.schema.json", &out);
}

#[test]
fn torsion_check_on_cross_product() {
    let dir = tempfile::tempdir().unwrap();
    let t = cross_product_tensor(&Octonions::standard()).to_json();
    assert_valid("tensor.schema.json", &t);
    let f = write(dir.path(), "t.json", &t);
    let out = ok_json(&["torsion", "check", "--in", &f, "--dim", "7"]);
    assert_eq!(out["verdict"], "Admissible");
    assert_valid("torsion-report.schema.json", &out);

    let bad = json!({ "dim": 7, "entries": [[0, 1, 1, "1", "0"]] });
    let f = write(dir.path(), "bad.json", &bad);
    let out = ok_json(&["torsion", "check", "--in", &f, "--dim", "7"]);
    assert_eq!(out["verdict"], "NotAdmissible");

    let float = json!({ "dim": 7, "entries": t["entries"].as_array().unwrap().iter().map(|e| {
        let x: f64 = e[3].as_str().unwrap().parse().unwrap();
        json!([e[0], e[1], e[2], x, 0.0])
    }).collect::<Vec<_>>() });
    let f = write(dir.path(), "float.json", &float);
    let out = ok_json(&["torsion", "check", "--in", &f, "--dim", "7", "--tol", "1e-9"]);
    assert_eq!(out["verdict"], "Admissible");
    assert_eq!(out["exact"], json!(false));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let asd = g2tw(&["octonion", "sample", "--kind", "asd", "--seed", "9"], &[]).stdout;
    let f = write(dir.path(), "asd.json", &serde_json::from_str::<Value>(&asd).unwrap());
    let cases: Vec<Vec<&str>> = vec![
        vec!["octonion", "sample", "--kind", "sd", "--seed", "4"],
        vec!["octonion", "sample", "--kind", "assoc3", "--seed", "4"],
        vec!["octonion", "classify", "--in", &f],
        vec!["rep", "tensor", "2", "1", "1", "1"],
        vec!["bbw", "bundle", "--expr", "tensor(dual(L),dual(L),Uplus,dual(E))"],
        vec!["ledger", "run"],
        vec!["verify-paper"],
    ];
    for args in cases {
        let a = g2tw(&args, &[]);
        let b = g2tw(&args, &[]);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn seed_env_var_sets_the_default_seed() {
    let by_flag = g2tw(&["octonion", "sample", "--kind", "asd", "--seed", "17"], &[]);
    let by_env = g2tw(&["octonion", "sample", "--kind", "asd"], &[("G2TW_SEED", "17")]);
    let default = g2tw(&["octonion", "sample", "--kind", "asd"], &[]);
    let zero = g2tw(&["octonion", "sample", "--kind", "asd", "--seed", "0"], &[]);
    assert_eq!(by_flag.stdout, by_env.stdout);
    assert_eq!(default.stdout, zero.stdout);
    assert_ne!(by_flag.stdout, zero.stdout);
}

#[test]
fn errors_are_json_on_stderr_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let line = write(dir.path(), "l.json", &json!({ "basis": [pair_vec(1, 2, "1")] }));
    let garbage = dir.path().join("g.json");
    fs::write(&garbage, "{not json").unwrap();
    let tensor = write(dir.path(), "t.json", &json!({ "dim": 7, "entries": [[1, 0, 2, "1", "0"]] }));
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["octonion", "classify", "--in", "/nonexistent/x.json"], "io"),
        (vec!["octonion", "classify", "--in", garbage.to_str().unwrap()], "input"),
        (vec!["octonion", "classify", "--in", &line], "precondition"),
        (vec!["torsion", "check", "--in", &tensor, "--dim", "7"], "input"),
        (vec!["bbw", "bundle", "--expr", "sym2(dual(Nope))"], "precondition"),
        (vec!["rep", "dim", "-1", "0"], "usage"),
        (vec!["rep", "dim", "x", "0"], "usage"),
    ];
    for (args, kind) in cases {
        let r = g2tw(&args, &[]);
        assert_eq!(r.code, 2, "{args:?}");
        assert!(r.stdout.is_empty(), "{args:?}");
        let err: Value = serde_json::from_str(r.stderr.trim()).unwrap_or_else(|_| panic!("{args:?}: {}", r.stderr));
        assert_eq!(err["error"], kind, "{args:?}: {err}");
        assert_valid("error.schema.json", &err);
    }
}

#[test]
fn manifest_ids_match_implementations_and_report() {
    let manifest = Manifest::shipped();
    let raw: Value = serde_json::from_str(&fs::read_to_string(resources().join("claims.json")).unwrap()).unwrap();
    assert_valid("claims-manifest.schema.json", &raw);
    let ids: Vec<&str> = manifest.claims.iter().map(|c| c.id.as_str()).collect();
    let unique: BTreeSet<&str> = ids.iter().copied().collect();
    assert_eq!(unique.len(), ids.len(), "duplicate claim ids");
    let implemented: BTreeSet<&str> = implemented_ids().into_iter().collect();
    assert_eq!(unique, implemented);

    let r = g2tw(&["verify-paper"], &[]);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_valid("verify-report.schema.json", &report);
    let reported: Vec<&str> = report["claims"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = reported.clone();
    sorted.sort_unstable();
    assert_eq!(reported, sorted, "records sorted by id");
    assert_eq!(reported.iter().copied().collect::<BTreeSet<_>>(), unique);
}

#[test]
fn claim_replay_fails_only_on_known_claims() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let r = g2tw(&["verify-paper", "--out", out.to_str().unwrap()], &[]);
    assert_eq!(r.code, 1);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    let written: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report, written);
    let with = |status: &str| -> BTreeSet<String> {
        report["claims"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["status"] == status)
            .map(|c| c["id"].as_str().unwrap().to_string())
            .collect()
    };
    let known: BTreeSet<String> = KNOWN_FAILURES.iter().map(|s| s.to_string()).collect();
    assert_eq!(with("FAIL"), known);
    assert_eq!(with("BRANCHED"), ["torsion-sections-line-1", "torsion-sections-line-2"].map(String::from).into());
    assert_eq!(with("FLAGGED"), ["trivial-quotient-base".to_string()].into());

    let table = g2tw(&["verify-paper", "--pretty"], &[]);
    assert_eq!(table.code, 1);
    assert!(table.stdout.lines().any(|l| l.starts_with("trivial-quotient-base") && l.contains("FLAGGED")));
}

#[test]
fn corrupted_table_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let table = json!({ "triples": [[2, 1, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]] });
    assert_valid("multiplication-table.schema.json", &table);
    let f = write(dir.path(), "bad.json", &table);
    let r = g2tw(&["verify-paper", "--table", &f], &[]);
    assert_eq!(r.code, 1);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    let fails = report["summary"]["FAIL"].as_u64().unwrap() as usize;
    assert!(fails > KNOWN_FAILURES.len(), "only {fails} failures");
    let g2 = report["claims"].as_array().unwrap().iter().find(|c| c["id"] == "g2-dimension").unwrap();
    assert_eq!(g2["status"], "FAIL");

    let standard = json!({ "triples": [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]] });
    let f = write(dir.path(), "std.json", &standard);
    assert_eq!(g2tw(&["verify-paper", "--table", &f], &[]).stdout, g2tw(&["verify-paper"], &[]).stdout);

    let malformed = write(dir.path(), "m.json", &json!({ "triples": [[1, 1, 2]] }));
    let r = g2tw(&["verify-paper", "--table", &malformed], &[]);
    assert!(r.code == 1 || r.code == 2, "{}", r.stderr);
}

#[test]
fn schemas_reject_malformed_documents() {
    let bad = [
        ("classification.schema.json", json!({ "class": "Plane" })),
        ("subspace.schema.json", json!({ "basis": [[c("1", "0")]] })),
        ("subspace.schema.json", json!({ "basis": [pair_vec(1, 2, "i")] })),
        ("tensor.schema.json", json!({ "dim": 6, "entries": [] })),
        ("error.schema.json", json!({ "error": "io" })),
        ("irrep-sum.schema.json", json!({ "1;0": 1 })),
    ];
    for (name, v) in bad {
        assert!(!schema(name).is_valid(&v), "{name} accepted {v}");
    }
}
