//! WebAssembly bindings for the browser demo. Each export returns a JSON
//! string; the `*_json` functions hold the logic and are usable natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use sumrank::counting::sphere_curve;
use sumrank::ffalg::{expand, make_field};
use sumrank::sampling::{seeded_rng, UniformErrorSampler};
use sumrank::srspace::SumRankParams;
use sumrank::workfactor::{self, WIterModel, WorkFactorParams};

/// Largest n the page accepts, to keep the sweeps interactive.
pub const MAX_N: usize = 240;

#[derive(Serialize, Debug, PartialEq)]
pub struct SpherePoint {
    pub ell: usize,
    pub log2_exact: Option<f64>,
    pub log2_bound: Option<f64>,
}

#[derive(Serialize, Debug, PartialEq)]
pub struct WorkFactorPoint {
    pub ell: usize,
    pub feasible: bool,
    pub lb: Option<f64>,
    pub ub: Option<f64>,
    pub ub_simple: Option<f64>,
    pub w_code: f64,
    pub w_errors: Option<f64>,
}

#[derive(Serialize, Debug, PartialEq)]
pub struct SampledError {
    pub entries: Vec<u64>,
    pub decomposition: Vec<usize>,
    pub weight: usize,
    /// Per block, the m x eta expansion over GF(q) as rows of digits.
    pub blocks: Vec<Vec<Vec<u64>>>,
    /// Number of vectors the draw was uniform over, in decimal.
    pub sphere_size: String,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn check_n(n: usize) -> Result<(), String> {
    if n == 0 || n > MAX_N {
        return Err(format!("n must be between 1 and {MAX_N}"));
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

pub fn sphere_curve_json(q: u64, m: usize, n: usize, t: usize) -> Result<String, String> {
    check_n(n)?;
    make_field(q, m).map_err(|e| e.to_string())?;
    let rows: Vec<SpherePoint> = sphere_curve(q, m, n, t)
        .into_iter()
        .map(|r| SpherePoint { ell: r.ell, log2_exact: finite(r.log2_exact), log2_bound: finite(r.log2_bound) })
        .collect();
    to_json(&rows)
}

pub fn workfactor_curve_json(q: u64, m: usize, n: usize, k: usize, t: usize, s: usize, model: &str) -> Result<String, String> {
    check_n(n)?;
    if k > n {
        return Err(format!("k={k} exceeds n={n}"));
    }
    let model: WIterModel = model.parse().map_err(|e: sumrank::Error| e.to_string())?;
    let base = WorkFactorParams { q, m, n, k, ell: 1, t, s, model };
    let ells = sumrank::counting::divisors(n);
    let reports = workfactor::sweep(&base, &ells, None).map_err(|e| e.to_string())?;
    let rows: Vec<WorkFactorPoint> = reports
        .iter()
        .map(|r| WorkFactorPoint {
            ell: r.params.ell,
            feasible: r.new_bounds.is_some(),
            lb: r.new_bounds.map(|b| b.lb),
            ub: r.new_bounds.map(|b| b.ub),
            ub_simple: r.new_bounds.map(|b| b.ub_simple),
            w_code: r.w_code,
            w_errors: r.w_errors,
        })
        .collect();
    to_json(&rows)
}

pub fn sample_error_json(q: u64, m: usize, n: usize, ell: usize, t: usize, seed: u64) -> Result<String, String> {
    check_n(n)?;
    let ctx = make_field(q, m).map_err(|e| e.to_string())?;
    let params = SumRankParams::new(n, ell, m).map_err(|e| e.to_string())?;
    let sampler = UniformErrorSampler::new(t, params, &ctx).map_err(|e| e.to_string())?;
    let e = sampler.sample(&mut seeded_rng(seed));
    let blocks = (0..ell)
        .map(|i| {
            let x = expand(e.block(i), &ctx);
            (0..x.rows()).map(|r| x.row(r).to_vec()).collect()
        })
        .collect();
    to_json(&SampledError {
        decomposition: e.weight_decomposition(&ctx),
        weight: e.sum_rank_weight(&ctx),
        entries: e.entries,
        blocks,
        sphere_size: sampler.sphere_size().to_string(),
    })
}

#[wasm_bindgen]
pub fn sphere_curve_js(q: u32, m: u32, n: u32, t: u32) -> Result<String, JsValue> {
    sphere_curve_json(q as u64, m as usize, n as usize, t as usize).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn workfactor_curve_js(q: u32, m: u32, n: u32, k: u32, t: u32, s: u32, model: &str) -> Result<String, JsValue> {
    workfactor_curve_json(q as u64, m as usize, n as usize, k as usize, t as usize, s as usize, model)
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sample_error_js(q: u32, m: u32, n: u32, ell: u32, t: u32, seed: u32) -> Result<String, JsValue> {
    sample_error_json(q as u64, m as usize, n as usize, ell as usize, t as usize, seed as u64).map_err(|e| JsValue::from_str(&e))
}
