//! The JSON entry points behind the browser bindings, called natively.

use quadgroup_wasm::{canonicalize_json, classify_json, genus_json};
use serde_json::Value;

fn parse(text: String) -> Value {
    serde_json::from_str(&text).unwrap()
}

#[test]
fn genus_of_a_square_commutator() {
    let v = parse(genus_json("abABabAB", 2).unwrap());
    assert_eq!(v["summary"], "genus 2");
    assert_eq!(v["witness"]["tuple"].as_array().unwrap().len(), 4);
}

#[test]
fn genus_is_capped_without_expensive_forms() {
    let v = parse(genus_json("abABabABabAB", 9).unwrap());
    assert_eq!(v["summary"], "genus 2");
}

#[test]
fn canonical_genus_two_surface() {
    let v = parse(canonicalize_json("xyXYzuZU").unwrap());
    assert_eq!(v["summary"], "orientable genus 2");
    assert_eq!(v["canonical_word"], "xyXYzuZU");
    assert_eq!(v["moves"].as_array().unwrap().len(), 0);
}

#[test]
fn product_target() {
    let hom = r#"{"genus": 1, "orientable": true, "images": ["0:1", "0:2"],
        "target": {"type": "product", "factors": [{"type": "cyclic", "order": 3}, {"type": "free", "rank": 1}]}}"#;
    let v = parse(classify_json(hom).unwrap());
    assert!(v["summary"].as_str().unwrap().starts_with("elementary"));
    assert!(classify_json("not json").is_err());
}
