//! Browser bindings for the `corravg` demo page.
//!
//! Three operations are exposed: kernel profiles over one period, an H-scan of
//! the three correlation averages, and the band-limited spectral energy used in
//! the Gallagher comparison. Heavy results come back as flat `Float64Array`s or
//! JSON strings so the page needs no glue beyond `wasm-bindgen`.

use corravg::arith::{generate, FunctionKind, SampledFunction};
use corravg::bounds::{fit_exponent, gallagher_check, Variant, DEFAULT_THRESHOLD};
use corravg::kernels::{fejer_majorant, u_hat, Frequency};
use corravg::scan::{parse_grid, scan};
use corravg::Error;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn js_err(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

fn sample(kind: &str, big_n: usize, seed: u64) -> Result<SampledFunction, Error> {
    let kind: FunctionKind = kind.parse()?;
    generate(kind, big_n, Some(seed))
}

/// Interleaved rows `[β, |û_H|, |û_H|², |û_H|⁴/H², majorant]` at `points`
/// frequencies spread over `[-1/2, 1/2)`.
pub fn kernel_profile_rows(cap_h: u32, points: u32) -> Vec<f64> {
    let h = cap_h.max(1) as u64;
    let points = points.max(2);
    let mut out = Vec::with_capacity(5 * points as usize);
    for i in 0..points {
        let beta = -0.5 + i as f64 / points as f64;
        let freq = Frequency::new(beta);
        let m = u_hat(freq, h).norm();
        let m2 = m * m;
        out.extend_from_slice(&[beta, m, m2, m2 * m2 / (h * h) as f64, fejer_majorant(freq, h)]);
    }
    out
}

#[wasm_bindgen]
pub fn kernel_profile(cap_h: u32, points: u32) -> Vec<f64> {
    kernel_profile_rows(cap_h, points)
}

/// Scan rows plus the fitted exponents of `J` and `J̃`, as JSON.
pub fn scan_json(kind: &str, big_n: usize, seed: u64, grid: &str) -> Result<String, Error> {
    let f = sample(kind, big_n, seed)?;
    let grid = parse_grid(grid)?;
    let rows = scan(&f, &grid)?;
    let fit = |pick: fn(&corravg::ScanRow) -> f64| {
        let pts: Vec<_> = rows.iter().map(|r| (r.cap_h, pick(r))).collect();
        fit_exponent(&pts, big_n).ok().map(|fit| fit.a_exp)
    };
    let doc = json!({
        "rows": rows,
        "fit_selberg": fit(|r| r.selberg),
        "fit_modified": fit(|r| r.modified),
    });
    Ok(doc.to_string())
}

#[wasm_bindgen]
pub fn scan_family(kind: &str, big_n: usize, seed: u64, grid: &str) -> Result<String, JsError> {
    scan_json(kind, big_n, seed, grid).map_err(js_err)
}

/// `|f̂(α)|²` sampled on `[-1/2, 1/2)` followed by both Gallagher reports, as JSON.
pub fn band_json(kind: &str, big_n: usize, seed: u64, h: usize, points: u32) -> Result<String, Error> {
    let f = sample(kind, big_n, seed)?;
    let points = points.max(2) as usize;
    let block = f.block();
    let start = big_n + 1;
    let spectrum: Vec<f64> = (0..points)
        .map(|i| {
            let alpha = -0.5 + i as f64 / points as f64;
            let z: corravg::kernels::Complex64 = block
                .iter()
                .enumerate()
                .map(|(j, &v)| corravg::kernels::e((start + j) as f64 * alpha) * v)
                .sum();
            z.norm_sqr()
        })
        .collect();
    let i = gallagher_check(&f, h, Variant::I, DEFAULT_THRESHOLD)?;
    let ii = gallagher_check(&f, h, Variant::II, DEFAULT_THRESHOLD)?;
    Ok(json!({ "spectrum": spectrum, "band": 1.0 / (2.0 * h as f64), "i": i, "ii": ii }).to_string())
}

#[wasm_bindgen]
pub fn band_profile(kind: &str, big_n: usize, seed: u64, h: usize, points: u32) -> Result<String, JsError> {
    band_json(kind, big_n, seed, h, points).map_err(js_err)
}
