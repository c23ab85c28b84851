//! Browser bindings: commutator genus, canonical forms of quadratic words,
//! and classification of surface-group homomorphisms. Every function takes
//! and returns JSON text.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use quadgroup::genus::{genus_exact, GenusStatus, WicksOptions, DEFAULT_MAX_WICKS_GENUS};
use quadgroup::group::{FreeGroup, Group};
use quadgroup::product::GroupSpec;
use quadgroup::quadratic::{canonicalize, classify_quadratic};
use quadgroup::surface::{elementary_check, klein_classify, ElementaryOutcome, KleinOutcome, SurfaceGroupSpec, SurfaceHom};
use quadgroup::words::{Alphabet, Word};

/// Orbit budget for the browser; small enough to keep the page responsive.
pub const PAGE_BUDGET: usize = 20_000;

#[wasm_bindgen]
pub fn genus(word: &str, max_genus: u32) -> Result<String, JsValue> {
    genus_json(word, max_genus).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = canonicalize)]
pub fn canonicalize_word(word: &str) -> Result<String, JsValue> {
    canonicalize_json(word).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = classifyHom)]
pub fn classify_hom(hom: &str) -> Result<String, JsValue> {
    classify_json(hom).map_err(|e| JsValue::from_str(&e))
}

pub fn genus_json(word: &str, max_genus: u32) -> Result<String, String> {
    let w = Word::parse(word).map_err(|e| e.to_string())?;
    let g_max = max_genus.clamp(1, DEFAULT_MAX_WICKS_GENUS);
    let r = genus_exact(&w, g_max, &WicksOptions::default()).map_err(|e| e.to_string())?;
    let summary = match r.status {
        GenusStatus::Exact { genus } => format!("genus {genus}"),
        GenusStatus::Bounds { lower, .. } => format!("genus at least {lower}"),
    };
    let mut v = serde_json::to_value(&r).map_err(|e| e.to_string())?;
    v["summary"] = json!(summary);
    Ok(v.to_string())
}

pub fn canonicalize_json(word: &str) -> Result<String, String> {
    let w = Word::parse_variables(word).map_err(|e| e.to_string())?;
    let q = classify_quadratic(&w, w.max_generator()).map_err(|e| e.to_string())?;
    let (form, sub) = canonicalize(&q);
    let v = |x: &Word| x.to_text(Alphabet::Variables);
    Ok(json!({
        "summary": form.to_string(),
        "canonical_word": v(&form.word()),
        "images": sub.images().iter().map(v).collect::<Vec<_>>(),
        "moves": sub.moves(),
    })
    .to_string())
}

/// `{"genus", "orientable", "target"?, "images"}`; orientable sources get an
/// elementary certificate, Klein bottles a case.
pub fn classify_json(hom: &str) -> Result<String, String> {
    let v: Value = serde_json::from_str(hom).map_err(|e| e.to_string())?;
    let target = match v.get("target") {
        Some(t) => GroupSpec::from_json(t).map_err(|e| e.to_string())?,
        None => GroupSpec::Free { rank: 2 },
    };
    match target {
        GroupSpec::Free { rank } => classify_with(&v, FreeGroup::new(rank)),
        GroupSpec::Product(p) => classify_with(&v, p),
    }
}

fn classify_with<G: Group>(v: &Value, g: G) -> Result<String, String> {
    let hom = SurfaceHom::from_json(v, g).map_err(|e| e.to_string())?;
    let g = hom.group();
    let out = if hom.spec().orientable {
        match elementary_check(&hom, PAGE_BUDGET).map_err(|e| e.to_string())? {
            ElementaryOutcome::Certificate { certificate, .. } => json!({
                "summary": format!("elementary, {} moves", certificate.moves.len()),
                "certificate": certificate.to_json(g),
            }),
            ElementaryOutcome::Exhausted { expanded, .. } => json!({
                "summary": format!("no certificate within {expanded} nodes"),
            }),
        }
    } else if *hom.spec() == SurfaceGroupSpec::non_orientable(2) {
        match klein_classify(&hom, PAGE_BUDGET).map_err(|e| e.to_string())? {
            KleinOutcome::Case { case, certificate, .. } => json!({
                "summary": format!("case {case:?}"),
                "certificate": certificate.to_json(g),
            }),
            KleinOutcome::EssentiallyInjectiveWithinBudget { expanded, .. } => json!({
                "summary": format!("no case within {expanded} nodes"),
            }),
        }
    } else {
        return Err("only orientable sources and the Klein bottle are supported here".into());
    };
    Ok(out.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_of_a_commutator() {
        let v: Value = serde_json::from_str(&genus_json("abAB", 2).unwrap()).unwrap();
        assert_eq!(v["summary"], "genus 1");
        assert!(genus_json("a", 2).is_err());
    }

    #[test]
    fn canonical_projective_plane() {
        let v: Value = serde_json::from_str(&canonicalize_json("xyxy").unwrap()).unwrap();
        assert_eq!(v["canonical_word"], "xx");
        assert!(canonicalize_json("xyx").is_err());
    }

    #[test]
    fn torus_and_klein_homs() {
        let torus = r#"{"genus": 1, "orientable": true, "images": ["aa", "aaa"]}"#;
        let v: Value = serde_json::from_str(&classify_json(torus).unwrap()).unwrap();
        assert_eq!(v["certificate"]["terminal"][0], "1");
        let klein = r#"{"genus": 2, "orientable": false, "images": ["ab", "BA"]}"#;
        let v: Value = serde_json::from_str(&classify_json(klein).unwrap()).unwrap();
        assert_eq!(v["summary"], "case II");
        assert!(classify_json(r#"{"genus": 1, "orientable": true, "images": ["a", "b"]}"#).is_err());
    }
}
