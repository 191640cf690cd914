use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use pealab::cli::run;
use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn pealab(args: &[&str]) -> (i32, String) {
    let mut full = vec!["pealab"];
    full.extend_from_slice(args);
    run(full)
}

fn last_line(text: &str) -> &str {
    text.lines().last().unwrap_or("")
}

#[test]
fn check_c3_passes() {
    let (code, out) = pealab(&["check", "--pea", data("c3.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(last_line(&out), "RESULT: PASS check");
}

#[test]
fn check_broken_reports_pe4() {
    let (code, out) = pealab(&["check", "--pea", data("broken.json").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("PE4 violated at a=1"), "{out}");
    assert_eq!(last_line(&out), "RESULT: FAIL check");
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"elements\": [\"0\"], ").unwrap();
    let (code, out) = pealab(&["check", "--pea", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(last_line(&out), "RESULT: FAIL check");

    let missing = dir.path().join("nope.json");
    assert_eq!(
        pealab(&["check", "--poset", missing.to_str().unwrap()]).0,
        2
    );

    let no_table = dir.path().join("poset.json");
    fs::write(&no_table, r#"{"elements":["0","1"],"covers":[["0","1"]]}"#).unwrap();
    assert_eq!(pealab(&["check", "--pea", no_table.to_str().unwrap()]).0, 2);
    assert_eq!(
        pealab(&["check", "--poset", no_table.to_str().unwrap()]).0,
        0
    );

    // usage errors
    assert_eq!(pealab(&["check"]).0, 2);
    assert_eq!(pealab(&["frobnicate"]).0, 2);
}

#[test]
fn convert_roundtrip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n);
    let s = |p: &PathBuf| p.to_str().unwrap().to_string();
    let steps = [
        ("pdp", data("c3.json"), p("x1.json")),
        ("pea", p("x1.json"), p("a1.json")),
        ("pdp", p("a1.json"), p("x2.json")),
        ("pea", p("x2.json"), p("a2.json")),
    ];
    for (to, input, output) in &steps {
        let (code, out) = pealab(&["convert", "--to", to, &s(input), "-o", &s(output)]);
        assert_eq!(code, 0, "{out}");
    }
    assert_eq!(
        fs::read(p("x1.json")).unwrap(),
        fs::read(p("x2.json")).unwrap()
    );
    assert_eq!(
        fs::read(p("a1.json")).unwrap(),
        fs::read(p("a2.json")).unwrap()
    );
    let x1: Value = serde_json::from_slice(&fs::read(p("x1.json")).unwrap()).unwrap();
    assert_eq!(x1["slash"]["1,a"], "a");
    assert_eq!(pealab(&["check", "--pdp", &s(&p("x1.json"))]).0, 0);
}

#[test]
fn json_report_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let (code, _) = pealab(&[
        "check",
        "--pea",
        data("broken.json").to_str().unwrap(),
        "--json",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["result"], "FAIL");
    assert_eq!(v["exit_code"], 1);
    assert!(v["violations"].as_array().unwrap().contains(&json!("PE4")));
}

#[test]
fn pdp_axiom_names_in_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("x.json");
    // 1/0 = a breaks PD1
    fs::write(
        &f,
        r#"{"elements":["0","a","1"],"covers":[["0","a"],["a","1"]],
            "slash":{"0,0":"0","a,0":"a","a,a":"0","1,0":"a","1,a":"a","1,1":"0"},
            "bslash":{"0,0":"0","a,0":"a","a,a":"0","1,0":"1","1,a":"a","1,1":"0"}}"#,
    )
    .unwrap();
    let (code, out) = pealab(&["check", "--pdp", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("PD1 violated at a=1"), "{out}");
}

#[test]
fn enumerate_and_catalog_file() {
    let (code, out) = pealab(&["enumerate", "--n", "4", "--structures"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("2 bounded posets on 4 elements"));
    assert!(out.contains("structures 2 (0 noncommutative)"));

    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("catalog.json");
    assert_eq!(
        pealab(&[
            "enumerate",
            "--n",
            "5",
            "--catalog-out",
            cat.to_str().unwrap()
        ])
        .0,
        0
    );
    let v: Value = serde_json::from_str(&fs::read_to_string(&cat).unwrap()).unwrap();
    assert_eq!(v["counts"]["5"]["structures"], 8);
    assert_eq!(v["smallest_noncommutative"], 5);

    assert_eq!(pealab(&["enumerate", "--n", "0"]).0, 2);
}

#[test]
fn size_cap_from_environment() {
    let bin = env!("CARGO_BIN_EXE_pealab");
    let out = Command::new(bin)
        .args(["enumerate", "--n", "5"])
        .env("PEALAB_MAX_N", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("exceeds the configured limit 4"), "{text}");
    let out = Command::new(bin)
        .args(["enumerate", "--n", "8"])
        .env("PEALAB_MAX_N", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("318 bounded posets"));
}

#[test]
fn witness_noncomm() {
    let (code, out) = pealab(&["witness-noncomm"]);
    assert_eq!(code, 0);
    assert!(out.contains("g+f undefined"));
    assert!(out.contains("at x = 3/4: value 2 > 2x = 3/2"), "{out}");

    // a commuting pair fails
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    fs::write(&f, r#"{"breakpoints": [], "slopes": ["3/2"]}"#).unwrap();
    let (code, out) = pealab(&[
        "witness-noncomm",
        "--f",
        f.to_str().unwrap(),
        "--g",
        f.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn transfer_generate_save_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = pealab(&[
        "transfer",
        "--generate",
        "12",
        "--seed",
        "5",
        "--save",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("12/12 forks passed (seed 5)"));
    // same seed, same report
    assert_eq!(
        pealab(&["transfer", "--generate", "12", "--seed", "5"]).1,
        {
            let (_, again) = pealab(&["transfer", "--generate", "12", "--seed", "5"]);
            again
        }
    );
    let bundle = dir.path().join("fork_0003.json");
    let (code, out) = pealab(&["verify-coeq", "--fork", bundle.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = pealab(&["transfer", "--fork", bundle.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"slash\""));
}

#[test]
fn transfer_rejects_broken_fork() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        pealab(&[
            "transfer",
            "--generate",
            "1",
            "--seed",
            "0",
            "--save",
            dir.path().to_str().unwrap()
        ])
        .0,
        0
    );
    let path = dir.path().join("fork_0000.json");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    // break q∘s = id by sending the top of Q to the bottom of B
    let s_map = v["s"]["map"].as_object_mut().unwrap();
    let top = s_map.keys().next_back().unwrap().clone();
    s_map.insert(top, json!("0"));
    fs::write(&path, v.to_string()).unwrap();
    let (code, out) = pealab(&["verify-coeq", "--fork", path.to_str().unwrap()]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("invalid") || out.contains("fork"), "{out}");
}

#[test]
fn hom_iso_product_equalize_coequalize() {
    let dir = tempfile::tempdir().unwrap();
    let c3 = data("c3.json");
    let x = dir.path().join("x.json");
    assert_eq!(
        pealab(&[
            "convert",
            "--to",
            "pdp",
            c3.to_str().unwrap(),
            "-o",
            x.to_str().unwrap()
        ])
        .0,
        0
    );
    let xs = x.to_str().unwrap();

    let (code, out) = pealab(&["hom", xs, xs]);
    assert_eq!(code, 0);
    assert!(out.starts_with("3 bounded-poset morphisms"), "{out}");
    let (_, out) = pealab(&["hom", "--pdp", xs, xs]);
    assert!(out.starts_with("1 PDP morphisms"), "{out}");

    assert_eq!(pealab(&["iso", xs, c3.to_str().unwrap()]).0, 0);
    let two = dir.path().join("c2.json");
    fs::write(&two, r#"{"elements":["0","1"],"covers":[["0","1"]]}"#).unwrap();
    assert_eq!(pealab(&["iso", xs, two.to_str().unwrap()]).0, 1);

    let prod = dir.path().join("p.json");
    assert_eq!(
        pealab(&["product", xs, xs, "-o", prod.to_str().unwrap()]).0,
        0
    );
    assert_eq!(pealab(&["check", "--pdp", prod.to_str().unwrap()]).0, 0);
    let p: Value = serde_json::from_str(&fs::read_to_string(&prod).unwrap()).unwrap();
    assert_eq!(p["elements"].as_array().unwrap().len(), 9);

    // equalizer of the two projections C3 x C3 -> C3 is the diagonal
    let labels: Vec<String> = p["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let names = ["0", "a", "1"];
    let proj = |k: usize| {
        let map: serde_json::Map<String, Value> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), json!(names[if k == 0 { i / 3 } else { i % 3 }])))
            .collect();
        json!({"source": "p.json", "target": "x.json", "map": map})
    };
    let f = dir.path().join("f.json");
    let g = dir.path().join("g.json");
    fs::write(&f, proj(0).to_string()).unwrap();
    fs::write(&g, proj(1).to_string()).unwrap();
    let (code, out) = pealab(&[
        "equalize",
        "--f",
        f.to_str().unwrap(),
        "--g",
        g.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("equalizer {(0,0), (a,a), (1,1)}"), "{out}");

    let (code, out) = pealab(&[
        "coequalize",
        "--f",
        f.to_str().unwrap(),
        "--g",
        g.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("quotient has 1 elements"), "{out}");

    let (code, out) = pealab(&["check", "--morphism", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn help_exits_zero() {
    let (code, out) = pealab(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("witness-noncomm"));
}
