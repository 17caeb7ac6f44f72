//! Browser bindings. Every exported function takes channel and distribution
//! text (CSV or JSON, as accepted by the CLI) and returns a JSON string.
//!
//! The `*_json` functions hold the logic and are plain Rust so they can be
//! tested natively; the `#[wasm_bindgen]` wrappers only convert errors.

use alphaleak::leakage::{expected_alpha_loss, tilt, Method};
use alphaleak::prob::io::{parse_channel, parse_distribution};
use alphaleak::{
    alpha_leakage, maximal_alpha_leakage, maxl, uniform_sibson_lower_bound, AlphaOrder, Channel, Distribution,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn channel_from(text: &str) -> Result<Channel, String> {
    parse_channel(text).map_err(|e| format!("channel: {e}"))
}

/// Blank text means the uniform distribution on `n` symbols.
fn distribution_from(text: &str, n: usize) -> Result<Distribution, String> {
    if text.trim().is_empty() {
        return Distribution::uniform(n).map_err(|e| e.to_string());
    }
    let d = parse_distribution(text).map_err(|e| format!("distribution: {e}"))?;
    if d.len() != n {
        return Err(format!("distribution has {} entries, expected {n}", d.len()));
    }
    Ok(d)
}

fn order(alpha: f64) -> Result<AlphaOrder, String> {
    AlphaOrder::new(alpha).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

#[derive(Serialize)]
struct Curve {
    alphas: Vec<f64>,
    max_alpha_leakage: Vec<f64>,
    alpha_leakage: Vec<f64>,
    uniform_lower_bound: Vec<f64>,
    converged: Vec<bool>,
    at_infinity: f64,
    maxl: f64,
    log_input_size: f64,
}

/// Maximal alpha-leakage, alpha-leakage of the prior and the uniform Sibson
/// lower bound on a log grid over `[alpha_min, alpha_max]`, all in bits.
pub fn leakage_curve_json(
    channel: &str,
    prior: &str,
    alpha_min: f64,
    alpha_max: f64,
    points: usize,
) -> Result<String, String> {
    let w = channel_from(channel)?;
    let prior = distribution_from(prior, w.in_size())?;
    if !(alpha_min >= 1.0 && alpha_max >= alpha_min && alpha_max.is_finite()) {
        return Err("need 1 <= alpha_min <= alpha_max < inf".into());
    }
    let points = points.clamp(2, 400);
    let bits = |nats: f64| nats / std::f64::consts::LN_2;
    let (lo, hi) = (alpha_min.ln(), alpha_max.ln());
    let mut curve = Curve {
        alphas: Vec::with_capacity(points),
        max_alpha_leakage: Vec::with_capacity(points),
        alpha_leakage: Vec::with_capacity(points),
        uniform_lower_bound: Vec::with_capacity(points),
        converged: Vec::with_capacity(points),
        at_infinity: bits(maximal_alpha_leakage(&prior, &w, AlphaOrder::Infinity).map_err(|e| e.to_string())?.nats),
        maxl: bits(maxl(&w, prior.support()).map_err(|e| e.to_string())?),
        log_input_size: bits((w.in_size() as f64).ln()),
    };
    let restricted = w.restrict_inputs(prior.support()).map_err(|e| e.to_string())?;
    for i in 0..points {
        let a = if i + 1 == points { alpha_max } else { (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp() };
        let alpha = order(a)?;
        let cap = maximal_alpha_leakage(&prior, &w, alpha).map_err(|e| e.to_string())?;
        let leak = alpha_leakage(&prior, &w, alpha, Method::ArimotoIdentity).map_err(|e| e.to_string())?;
        let lower = match alpha {
            AlphaOrder::One => f64::NAN,
            other => uniform_sibson_lower_bound(&restricted, other).map_err(|e| e.to_string())?,
        };
        curve.alphas.push(a);
        curve.max_alpha_leakage.push(bits(cap.nats));
        curve.alpha_leakage.push(bits(leak.nats));
        curve.uniform_lower_bound.push(if lower.is_nan() { bits(cap.nats) } else { bits(lower) });
        curve.converged.push(cap.converged);
    }
    Ok(to_json(&curve))
}

#[derive(Serialize)]
struct Capacity {
    bits: f64,
    nats: f64,
    argmax: Vec<f64>,
    converged: bool,
    iterations: usize,
    kkt_residual: f64,
}

/// Maximal alpha-leakage at one order with its maximizing input. Pass
/// `Infinity` for the maximal-leakage limit.
pub fn capacity_json(channel: &str, prior: &str, alpha: f64) -> Result<String, String> {
    let w = channel_from(channel)?;
    let prior = distribution_from(prior, w.in_size())?;
    let r = maximal_alpha_leakage(&prior, &w, order(alpha)?).map_err(|e| e.to_string())?;
    Ok(to_json(&Capacity {
        bits: r.bits(),
        nats: r.nats,
        argmax: r.argmax_input.probs().to_vec(),
        converged: r.converged,
        iterations: r.iterations,
        kkt_residual: r.kkt_residual,
    }))
}

#[derive(Serialize)]
struct Tilted {
    tilted: Vec<f64>,
    expected_loss: f64,
    source_guess_loss: f64,
}

/// Optimal soft guess for a source at order `alpha`, with its expected loss
/// next to the loss of guessing the source itself.
pub fn tilted_estimator_json(dist: &str, alpha: f64) -> Result<String, String> {
    let p = parse_distribution(dist).map_err(|e| format!("distribution: {e}"))?;
    let alpha = order(alpha)?;
    let t = tilt(&p, alpha);
    let loss = |g: &Distribution| expected_alpha_loss(&p, g, alpha).map_err(|e| e.to_string());
    Ok(to_json(&Tilted {
        tilted: t.probs().to_vec(),
        expected_loss: loss(&t)?,
        source_guess_loss: loss(&p)?,
    }))
}

#[wasm_bindgen]
pub fn leakage_curve(channel: &str, prior: &str, alpha_min: f64, alpha_max: f64, points: usize) -> Result<String, JsError> {
    leakage_curve_json(channel, prior, alpha_min, alpha_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn capacity(channel: &str, prior: &str, alpha: f64) -> Result<String, JsError> {
    capacity_json(channel, prior, alpha).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn tilted_estimator(dist: &str, alpha: f64) -> Result<String, JsError> {
    tilted_estimator_json(dist, alpha).map_err(|e| JsError::new(&e))
}
