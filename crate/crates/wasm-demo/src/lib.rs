//! Browser bindings over the bundled dataset: evaluate a composite with
//! user-chosen weights and orientations, chart it, and encrypt a block.

use lis_core::chart::render_bar_chart;
use lis_core::ciphers::CipherKind;
use lis_core::composite::{builtin_composites, evaluate_composite, CompositeScoreSet};
use lis_core::dataset::load_paper_dataset;
use lis_core::io::{parse_composite_defs, serialize_composite_defs};
use lis_core::report::report_value;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn score(definition: &str, reference: &str) -> Result<CompositeScoreSet, String> {
    let defs = parse_composite_defs(definition).map_err(|e| e.to_string())?;
    let [def] = defs.as_slice() else {
        return Err(format!("expected one composite definition, got {}", defs.len()));
    };
    let mut table = load_paper_dataset(true).merged();
    if !table.contains_algorithm(reference) {
        return Err(format!("unknown reference algorithm {reference}"));
    }
    table.set_reference(reference);
    evaluate_composite(def, &table).map_err(|e| e.to_string())
}

pub fn evaluate_native(definition: &str, reference: &str) -> Result<String, String> {
    let set = score(definition, reference)?;
    let rows: Vec<_> = set
        .ranked()
        .into_iter()
        .map(|(alg, s, rank)| json!({ "algorithm": alg, "score": report_value(s), "rank": rank }))
        .collect();
    let warnings: Vec<String> = set.warnings.iter().map(|w| w.to_string()).collect();
    Ok(json!({ "id": set.composite, "reference": set.reference, "rows": rows, "warnings": warnings }).to_string())
}

pub fn chart_native(definition: &str, reference: &str) -> Result<String, String> {
    score(definition, reference).map(|s| render_bar_chart(&s))
}

fn unhex(s: &str) -> Result<Vec<u8>, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if !s.len().is_multiple_of(2) {
        return Err("hex input needs an even number of digits".into());
    }
    (0..s.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&s[i..i + 2], 16).map_err(|_| format!("bad hex digits {:?}", &s[i..i + 2])))
        .collect()
}

pub fn encrypt_native(cipher: &str, key_hex: &str, block_hex: &str, decrypt: bool) -> Result<String, String> {
    let kind: CipherKind = cipher.parse().map_err(|e: lis_core::Error| e.to_string())?;
    let c = kind.with_key(&unhex(key_hex)?).map_err(|e| e.to_string())?;
    let block = unhex(block_hex)?;
    let out = if decrypt {
        c.decrypt_block(&block)
    } else {
        c.encrypt_block(&block)
    };
    let out = out.map_err(|e| e.to_string())?;
    Ok(out.iter().map(|b| format!("{b:02x}")).collect())
}

/// Scores the bundled dataset under one composite definition (JSON) and
/// returns ranked rows as JSON.
#[wasm_bindgen]
pub fn evaluate(definition: &str, reference: &str) -> Result<String, JsValue> {
    evaluate_native(definition, reference).map_err(|e| JsValue::from_str(&e))
}

/// SVG bar chart for one composite definition.
#[wasm_bindgen]
pub fn chart(definition: &str, reference: &str) -> Result<String, JsValue> {
    chart_native(definition, reference).map_err(|e| JsValue::from_str(&e))
}

/// Encrypts (or decrypts) one hex block.
#[wasm_bindgen]
pub fn encrypt(cipher: &str, key_hex: &str, block_hex: &str, decrypt: bool) -> Result<String, JsValue> {
    encrypt_native(cipher, key_hex, block_hex, decrypt).map_err(|e| JsValue::from_str(&e))
}

/// Built-in composite definitions as a JSON array.
#[wasm_bindgen]
pub fn builtin_definitions() -> String {
    serialize_composite_defs(&builtin_composites())
}

/// Cipher names with key and block sizes in bits, as JSON.
#[wasm_bindgen]
pub fn ciphers() -> String {
    let list: Vec<_> = CipherKind::ALL
        .iter()
        .map(|k| {
            let s = k.spec();
            json!({ "name": s.name, "key_bits": s.key_bits, "block_bits": s.block_bits })
        })
        .collect();
    serde_json::Value::Array(list).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn li_json() -> String {
        let all: Value = serde_json::from_str(&builtin_definitions()).unwrap();
        all.as_array().unwrap()[0].to_string()
    }

    #[test]
    fn evaluates_builtin_lightness() {
        let out: Value = serde_json::from_str(&evaluate_native(&li_json(), "AES").unwrap()).unwrap();
        assert_eq!(out["rows"][0]["algorithm"], "3-WAY");
        assert_eq!(out["rows"].as_array().unwrap().len(), 11);
        let aes = out["rows"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["algorithm"] == "AES")
            .unwrap();
        assert_eq!(aes["score"], 1.0);
    }

    #[test]
    fn reweighting_changes_scores() {
        let def = r#"{"id":"mine","terms":[{"indicator":"th_sw","orientation":"direct","weight":3},
                                           {"indicator":"pc","orientation":"inverse"}]}"#;
        let out: Value = serde_json::from_str(&evaluate_native(def, "Skipjack").unwrap()).unwrap();
        assert_eq!(out["reference"], "Skipjack");
        assert!(evaluate_native(def, "DES").is_err());
        assert!(evaluate_native("{", "AES").is_err());
    }

    #[test]
    fn chart_renders() {
        let svg = chart_native(&li_json(), "AES").unwrap();
        assert_eq!(svg.matches("<rect").count(), 11);
    }

    #[test]
    fn encrypts_known_answer() {
        let ct = encrypt_native("xtea", "000102030405060708090a0b0c0d0e0f", "4142434445464748", false).unwrap();
        assert_eq!(ct, "497df3d072612cb5");
        let pt = encrypt_native("XTEA", "000102030405060708090a0b0c0d0e0f", &ct, true).unwrap();
        assert_eq!(pt, "4142434445464748");
        assert!(encrypt_native("xtea", "00", "4142434445464748", false).is_err());
        assert!(encrypt_native("xtea", "zz", "", false).is_err());
    }

    #[test]
    fn cipher_list() {
        let v: Value = serde_json::from_str(&ciphers()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 11);
    }
}
