use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn corpus(name: &str) -> PathBuf {
    fixtures().join("corpus").join(name)
}

fn mutant(name: &str) -> PathBuf {
    fixtures().join("mutants").join(name)
}

fn etale(args: &[&dyn AsRef<std::ffi::OsStr>]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_etale"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn json(args: &[&dyn AsRef<std::ffi::OsStr>]) -> (i32, Value) {
    let mut full: Vec<&dyn AsRef<std::ffi::OsStr>> = args.to_vec();
    full.push(&"--json");
    let (code, out) = etale(&full);
    (code, serde_json::from_str(&out).expect("a single JSON document"))
}

#[test]
fn check_per_2cls_exits_zero() {
    let (code, out) = etale(&[&"check", &corpus("per_2cls.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("status: ok"));
}

#[test]
fn ideals_of_sierpinski_relation() {
    let (code, out) = etale(&[&"ideals", &corpus("rel_sierp.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("2 points"), "{out}");
    assert!(out.contains("0: [0]\n"), "{out}");
    assert!(out.contains("1: [0, 1]\n"), "{out}");
}

#[test]
fn roundtrip_f0_reports_no_findings() {
    let (code, doc) = json(&[&"roundtrip", &corpus("functor_f0.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["findings"], Value::Array(vec![]));
}

#[test]
fn violation_exits_one_and_names_the_rule() {
    let (code, doc) = json(&[&"check", &mutant("m02_per_not_symmetric.json")]);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "violation");
    assert_eq!(doc["findings"][0]["rule"], "per.symmetry");
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bogus = dir.path().join("bogus.json");
    fs::write(&bogus, r#"{"kind":"bogus"}"#).unwrap();
    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{ not json").unwrap();
    let dangling = dir.path().join("dangling.json");
    fs::write(&dangling, r#"{"kind":"functor","category":"nowhere.json","obj":[],"mor":[]}"#).unwrap();
    let missing = dir.path().join("missing.json");
    for file in [&bogus, &broken, &dangling, &missing] {
        let (code, doc) = json(&[&"check", file]);
        assert_eq!(code, 2, "{}", file.display());
        assert_eq!(doc["status"], "input-error");
        assert!(doc["error"].is_string());
    }
    assert_eq!(etale(&[&"frobnicate", &bogus]).0, 2);
    assert_eq!(etale(&[&"check"]).0, 2);
}

#[test]
fn wrong_kind_for_command_is_an_input_error() {
    assert_eq!(etale(&[&"ideals", &corpus("per_2cls.json")]).0, 2);
    assert_eq!(etale(&[&"to-etale", &corpus("rel_sierp.json")]).0, 2);
}

#[test]
fn closure_flag_repairs_transitivity() {
    let file = mutant("m01_relation_not_transitive.json");
    assert_eq!(etale(&[&"check", &file]).0, 1);
    assert_eq!(etale(&[&"check", &"--closure", &file]).0, 0);
}

#[test]
fn status_is_ok_iff_no_findings() {
    let mut files: Vec<PathBuf> = fs::read_dir(fixtures().join("mutants"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.extend(["per_2cls.json", "cset_z2_swap.json", "functor_f1.json"].map(corpus));
    for file in files {
        let (_, doc) = json(&[&"check", &file]);
        let empty = doc["findings"].as_array().is_some_and(|f| f.is_empty());
        if doc["status"] != "input-error" {
            assert_eq!(doc["status"] == "ok", empty, "{}", file.display());
        }
    }
}

#[test]
fn json_reports_are_deterministic() {
    let runs: [&[&dyn AsRef<std::ffi::OsStr>]; 4] = [
        &[&"suite", &fixtures().join("corpus"), &"--json"],
        &[&"roundtrip", &corpus("cset_arrow.json"), &"--json"],
        &[&"to-etale", &corpus("functor_f1.json"), &"--json"],
        &[&"check", &mutant("m21_action_not_compatible.json"), &"--json"],
    ];
    for args in runs {
        assert_eq!(etale(args), etale(args));
    }
}

#[test]
fn to_etale_output_rechecks_ok() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["functor_f0.json", "functor_f1.json", "functor_arrow.json", "gen_functor_07.json"] {
        let out = dir.path().join(format!("cset_{name}"));
        let (code, _) = etale(&[&"to-etale", &corpus(name), &"-o", &out]);
        assert_eq!(code, 0, "{name}");
        let (code, doc) = json(&[&"check", &out]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(doc["result"]["kind"], "cset");
        assert_eq!(etale(&[&"roundtrip", &out]).0, 0, "{name}");
    }
}

#[test]
fn to_functor_output_rechecks_ok() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["cset_z2_swap.json", "cset_arrow.json", "gen_cset_03.json"] {
        let out = dir.path().join(format!("functor_{name}"));
        assert_eq!(etale(&[&"to-functor", &corpus(name), &"-o", &out]).0, 0, "{name}");
        let (code, doc) = json(&[&"check", &out]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(doc["result"]["kind"], "functor");
    }
}

#[test]
fn compose_swap_with_itself_is_identity() {
    let (code, doc) = json(&[&"compose", &corpus("swap_2cls.json"), &corpus("swap_2cls.json")]);
    assert_eq!(code, 0);
    let graph: Vec<(usize, usize)> = serde_json::from_value(doc["result"]["graph"].clone()).unwrap();
    assert_eq!(graph, vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]);
}

#[test]
fn spatialize_and_laws_succeed_on_corpus_files() {
    assert_eq!(etale(&[&"spatialize", &corpus("witness_2cls.json")]).0, 0);
    assert_eq!(etale(&[&"spatialize", &corpus("per_2cls.json")]).0, 0);
    for name in ["rel_powerset4.json", "per_2cls.json", "cat_z3.json", "functor_f1.json"] {
        assert_eq!(etale(&[&"laws", &corpus(name)]).0, 0, "{name}");
    }
    assert_eq!(etale(&[&"laws", &"--fuel", &"2", &corpus("rel_powerset4.json")]).0, 0);
}

#[test]
fn suite_passes_on_the_corpus() {
    let (code, out) = etale(&[&"suite", &fixtures().join("corpus")]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn suite_flags_every_listed_mutant() {
    let listing: Vec<Value> =
        serde_json::from_str(&fs::read_to_string(fixtures().join("mutants.json")).unwrap()).unwrap();
    assert!(listing.len() >= 20);
    for m in listing {
        let dir = tempfile::tempdir().unwrap();
        for entry in fs::read_dir(fixtures().join("corpus")).unwrap() {
            let entry = entry.unwrap();
            fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
        }
        let (file, replaces) = (m["file"].as_str().unwrap(), m["replaces"].as_str().unwrap());
        fs::copy(mutant(file), dir.path().join(replaces)).unwrap();
        let (code, doc) = json(&[&"suite", &dir.path()]);
        assert_eq!(code, 1, "{file}");
        let rules: Vec<&str> =
            doc["findings"].as_array().unwrap().iter().map(|f| f["rule"].as_str().unwrap()).collect();
        assert!(rules.contains(&m["rule"].as_str().unwrap()), "{file}: {rules:?}");
    }
}
