//! Canonical invocations compared against stored outputs in `tests/golden/`.
//! Run with `UPDATE_GOLDEN=1` to rewrite the stored files.

use std::path::{Path, PathBuf};

use quadgroup_cli::{run, Output};

const CASES: &[(&str, &[&str])] = &[
    ("genus_commutator", &["genus", "abAB", "--json"]),
    ("genus_square_commutator", &["genus", "abABabAB", "--json"]),
    ("genus_text", &["genus", "abAB", "--text"]),
    ("genus_nonzero_exponent", &["genus", "a"]),
    ("growth_commutator", &["growth", "abAB", "--pmax", "3", "--json"]),
    ("canonicalize_projective", &["canonicalize", "xyxy", "--json"]),
    ("canonicalize_torus_text", &["canonicalize", "xyXY", "--text"]),
    ("canonicalize_not_quadratic", &["canonicalize", "xyx"]),
    (
        "elementary_cyclic_images",
        &["elementary", r#"{"genus":1,"orientable":true,"images":["aa","aaa"]}"#, "--json"],
    ),
    (
        "elementary_product_target",
        &[
            "elementary",
            r#"{"genus":1,"orientable":true,"images":["0:1","0:2"]}"#,
            "--group",
            r#"{"type":"product","factors":[{"type":"cyclic","order":3},{"type":"free","rank":1}]}"#,
            "--json",
        ],
    ),
    ("klein_case_two", &["klein", r#"{"genus":2,"orientable":false,"images":["ab","BA"]}"#, "--text"]),
    ("orbit_bad_relator", &["orbit", r#"{"genus":1,"orientable":true,"images":["a","b"]}"#]),
    ("endo_search_commutator", &["endo-search", "abAB=abAB", "--budget", "2", "--json"]),
    ("verify_product_axioms", &["verify", "product-axioms", "--text"]),
    ("verify_unknown_suite", &["verify", "no-such-suite"]),
    ("unknown_flag", &["genus", "abAB", "--frobnicate"]),
    ("inapplicable_flag", &["genus", "abAB", "--pmax", "2"]),
];

fn cache_dir() -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join("quadgroup-cache")
}

fn invoke(args: &[&str]) -> Output {
    std::env::set_var("QUADGROUP_CACHE", cache_dir());
    run(std::iter::once("quadgroup").chain(args.iter().copied()))
}

/// Exit code and output with the timestamp field blanked.
fn render(out: &Output) -> String {
    let body = if out.stdout.is_empty() { &out.stderr } else { &out.stdout };
    let body: String = body
        .lines()
        .map(|l| if l.trim_start().starts_with("\"timestamp\"") { "  \"timestamp\": 0" } else { l })
        .map(|l| format!("{l}\n"))
        .collect();
    format!("exit {}\n{body}", out.code)
}

#[test]
fn outputs_match_golden_files() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in CASES {
        let got = render(&invoke(args));
        let path = dir.join(format!("{name}.txt"));
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        if got != want {
            eprintln!("--- {name}: expected\n{want}--- got\n{got}");
            mismatched.push(*name);
        }
    }
    assert!(mismatched.is_empty(), "golden mismatches: {mismatched:?}");
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["genus", "abAB"]).code, 0);
    assert_eq!(invoke(&["genus", "abAB", "--max-genus", "1", "--budget", "0"]).code, 0);
    assert_eq!(invoke(&["genus", "aa"]).code, 3);
    assert_eq!(invoke(&["genus"]).code, 2);
    assert_eq!(invoke(&["genus", "abAB", "--json", "--text"]).code, 2);
    assert_eq!(invoke(&["--help"]).code, 0);
}

#[test]
fn inconclusive_genus_exits_one() {
    // [a,b]^3 has genus 2, which a genus-1 search cannot establish.
    let out = invoke(&["genus", "abABabABabAB", "--max-genus", "1", "--budget", "1", "--json"]);
    assert_eq!(out.code, 1, "{}", out.stdout);
    assert!(out.stdout.contains("\"status\": \"inconclusive\""));
}

fn replay_round_trip(name: &str, args: &[&str]) {
    let out = invoke(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(format!("{name}.json"));
    std::fs::write(&path, &out.stdout).unwrap();
    let command = args[0];
    let again = invoke(&[command, "--replay", path.to_str().unwrap(), "--json"]);
    assert_eq!(again.code, 0, "{}", again.stderr);
    let replayed: serde_json::Value = serde_json::from_str(&again.stdout).unwrap();
    assert_eq!(replayed["result"]["replayed"], true);
    assert_eq!(replayed["result"]["reproduced"], true);
    assert!(!replayed["result"]["checks"].as_array().unwrap().is_empty());

    let mut tampered: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    tampered["schema_version"] = serde_json::json!(99);
    std::fs::write(&path, tampered.to_string()).unwrap();
    assert_ne!(invoke(&[command, "--replay", path.to_str().unwrap()]).code, 0);
}

#[test]
fn replay_reproduces_reports() {
    replay_round_trip("replay_genus", &["genus", "abABabAB", "--json"]);
    replay_round_trip("replay_canonicalize", &["canonicalize", "xyzXYZ", "--json"]);
    replay_round_trip(
        "replay_klein",
        &["klein", r#"{"genus":2,"orientable":false,"images":["ab","BA"]}"#, "--json"],
    );
}

#[test]
fn replay_rejects_a_forged_witness() {
    let out = invoke(&["genus", "abAB", "--json"]);
    let mut report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    report["result"]["witness"]["tuple"] = serde_json::json!(["a", "b"]);
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("forged.json");
    std::fs::write(&path, report.to_string()).unwrap();
    assert_eq!(invoke(&["genus", "--replay", path.to_str().unwrap()]).code, 3);
}
