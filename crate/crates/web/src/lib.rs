//! Browser bindings: Legendre curves, local Whittaker values and modular heights.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use modheight::arch_numerics::legendre_q_hypergeometric;
use modheight::heights::{modular_height, modular_height_via_s2};
use modheight::local_nonarch::{whittaker, Algebra, LocalValue, LocalWhittakerSpec, SPoint};
use modheight::numberfield::{parse_field, RamificationSet};

const MAX_SAMPLES: usize = 2000;

/// `Q_s(t)` sampled on a log-spaced grid of `samples` points in `(1, t_max]`,
/// one curve per entry of `s_values`.
pub fn legendre_curves_json(s_values: &[f64], t_max: f64, samples: usize) -> Result<String, String> {
    if !(t_max > 1.0) || !t_max.is_finite() {
        return Err(format!("t_max must exceed 1, got {t_max}"));
    }
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must lie in [2, {MAX_SAMPLES}], got {samples}"));
    }
    let lo = 1e-3f64.ln();
    let hi = (t_max - 1.0).ln();
    let ts: Vec<f64> = (0..samples).map(|i| 1.0 + (lo + (hi - lo) * i as f64 / (samples - 1) as f64).exp()).collect();
    let mut curves = Vec::new();
    for &s in s_values {
        let ys = ts.iter().map(|&t| legendre_q_hypergeometric(s, t)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        curves.push(json!({ "s": s, "q": ys }));
    }
    Ok(json!({ "t": ts, "curves": curves }).to_string())
}

/// Local Whittaker value; integer `s` gives an exact value.
pub fn local_whittaker_json(norm: u64, delta: u32, r: i64, s: f64, nonsplit: bool) -> Result<String, String> {
    let point = if s.fract() == 0.0 && s.abs() < 1e6 { SPoint::Exact(s as i64) } else { SPoint::Real(s) };
    let algebra = if nonsplit { Algebra::DivisionNonsplit } else { Algebra::MatrixSplit };
    let spec = LocalWhittakerSpec { norm, delta, r, u_unit: true, algebra, s: point };
    let w = whittaker(&spec).map_err(|e| e.to_string())?;
    let exact = match &w {
        LocalValue::Exact(x) => Value::String(x.exact_string()),
        LocalValue::Real(_) => Value::Null,
    };
    Ok(json!({ "exact": exact, "value": w.to_f64() }).to_string())
}

/// Both routes of the modular height, with the breakdown of the `s = -1` route.
pub fn modular_height_json(field: &str, ramified: &str) -> Result<String, String> {
    let f = parse_field(field).map_err(|e| e.to_string())?;
    let ram = RamificationSet::parse(&f, ramified).map_err(|e| e.to_string())?;
    let a = modular_height(&f, &ram, 1e-10).map_err(|e| e.to_string())?;
    let b = modular_height_via_s2(&f, &ram, 1e-10).map_err(|e| e.to_string())?;
    Ok(json!({
        "field": f.to_string(),
        "d_F": f.disc,
        "ramified": ram.places().iter().map(|p| p.label()).collect::<Vec<_>>(),
        "value": a.value,
        "value_via_s2": b.value,
        "breakdown": a.breakdown,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn legendre_curves(s_values: Vec<f64>, t_max: f64, samples: usize) -> Result<String, JsValue> {
    legendre_curves_json(&s_values, t_max, samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn local_whittaker(norm: u32, delta: u32, r: i32, s: f64, nonsplit: bool) -> Result<String, JsValue> {
    local_whittaker_json(norm as u64, delta, r as i64, s, nonsplit).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn height(field: &str, ramified: &str) -> Result<String, JsValue> {
    modular_height_json(field, ramified).map_err(|e| JsValue::from_str(&e))
}
