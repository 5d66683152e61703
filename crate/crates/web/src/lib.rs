//! Browser bindings: each function takes text input and returns a JSON string.
//! Errors come back as `{"error": {"kind", "message"}}` rather than exceptions.

use growthlab::algnum::{classify_pisot, IntPolynomial};
use growthlab::dioph::{scan_hits, ExpSumSpec};
use growthlab::growth::growth_constant;
use growthlab::recursion::{iterate_orbit, RecursionSpec};
use growthlab::Error;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_PREC: u32 = 4096;

fn finish(r: Result<Value, Error>) -> String {
    let v = r.unwrap_or_else(|e| json!({ "error": { "kind": e.kind(), "message": e.to_string() } }));
    serde_json::to_string_pretty(&v).expect("json values always serialize")
}

fn to_value<T: serde::Serialize>(t: &T) -> Result<Value, Error> {
    serde_json::to_value(t).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Growth constant of `P = ...; x0 = ...` plus the first few orbit terms.
#[wasm_bindgen]
pub fn alpha(recursion: &str, prec: u32) -> String {
    finish((|| {
        if !(16..=MAX_PREC).contains(&prec) {
            return Err(Error::InvalidInput(format!("prec must lie in 16..={MAX_PREC}")));
        }
        let spec = RecursionSpec::parse(recursion)?;
        let orbit = iterate_orbit(&spec, 6)?;
        let g = growth_constant(&spec, prec)?;
        Ok(json!({ "input": spec, "orbit": orbit, "growth": to_value(&g)? }))
    })())
}

/// Pisot classification of an irreducible integer polynomial.
#[wasm_bindgen]
pub fn pisot(poly: &str) -> String {
    finish((|| {
        let p = IntPolynomial::parse(poly)?;
        to_value(&classify_pisot(&p)?)
    })())
}

/// Hits of `||sum q_i alpha_i^n + beta|| < theta^n` for a spec file's text.
#[wasm_bindgen]
pub fn scan(spec_text: &str) -> String {
    finish((|| {
        let f = ExpSumSpec::parse(spec_text)?;
        if f.scan.n_max > 2000 {
            return Err(Error::Unsupported("n_max above 2000 in the browser".into()));
        }
        to_value(&scan_hits(&f.spec, &f.scan)?)
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_json() {
        let v: Value = serde_json::from_str(&alpha("P = x^2 - 2; x1 = 3", 64)).unwrap();
        assert!(v["growth"]["alpha"].as_str().unwrap().starts_with("1.618"));
    }

    #[test]
    fn errors_are_json() {
        let v: Value = serde_json::from_str(&pisot("x^2 +")).unwrap();
        assert!(v["error"]["kind"].is_string());
    }

    #[test]
    fn scan_json() {
        let v: Value = serde_json::from_str(&scan("alpha.1.minpoly = x^2 - x - 1\nalpha.1.root = 1.618\nq.1 = 1\nbeta = 0\ntheta = 2/3\nn_max = 10\n")).unwrap();
        assert_eq!(v["hits"].as_array().unwrap().len(), 11);
    }
}
