//! Browser demo bindings. Every entry point takes a JSON request (the same
//! formats the command line accepts) and returns the rendered result.

use foliate_core::holonomy::{analyze_group, simulate_pseudo_orbit};
use foliate_core::{parse_group_request, parse_orbit_request, parse_request, run_pipeline, OutputFormat};
use wasm_bindgen::prelude::*;

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

/// Full analysis of a germ. An empty `format` keeps the request's own.
pub fn analyze_str(request: &str, format: &str) -> Result<String, String> {
    let req = parse_request(request.as_bytes()).map_err(|e| e.to_string())?;
    let format = if format.is_empty() {
        req.format
    } else {
        format.parse::<OutputFormat>().map_err(|e| e.to_string())?
    };
    let report = run_pipeline(&req).map_err(|e| e.to_string())?;
    Ok(report.emit(format))
}

pub fn classify_group_str(request: &str) -> Result<String, String> {
    let req = parse_group_request(request.as_bytes()).map_err(|e| e.to_string())?;
    Ok(pretty(&analyze_group(&req.generators, req.jet_order, req.word_budget)))
}

pub fn orbit_str(request: &str) -> Result<String, String> {
    let req = parse_orbit_request(request.as_bytes()).map_err(|e| e.to_string())?;
    let (gens, params) = req.into_parts();
    let out = simulate_pseudo_orbit(&gens, &params).map_err(|e| e.to_string())?;
    Ok(pretty(&out))
}

#[wasm_bindgen]
pub fn analyze(request: &str, format: &str) -> Result<String, JsValue> {
    analyze_str(request, format).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = classifyGroup)]
pub fn classify_group(request: &str) -> Result<String, JsValue> {
    classify_group_str(request).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn orbit(request: &str) -> Result<String, JsValue> {
    orbit_str(request).map_err(|e| JsValue::from_str(&e))
}
