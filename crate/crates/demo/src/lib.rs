//! WebAssembly bindings behind `www/index.html`. Every export takes and
//! returns JSON text; the `*_json` functions are the same operations without
//! the JavaScript boundary.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qcircle::completion::{transport, IntervalStream, StreamInterval, TransportMode};
use qcircle::kernel::{cov_cells, locate, Cell, CoveringVariant, Cycle, RatPoint};
use qcircle::pl::{extend, move_set, MoveSet, PLAut};

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(err)
}

fn f(x: &RatPoint) -> f64 {
    x.to_f64()
}

/// `(x, g(x))` at `n + 1` evenly spaced points of `[0, 1]`.
fn sample(g: &PLAut, n: u32) -> Vec<[f64; 2]> {
    (0..=n)
        .map(|i| {
            let x = RatPoint::new(i as i64, n as i64);
            let t = if i == n { 1.0 } else { f(&x) };
            [t, f(&g.apply(&x))]
        })
        .collect()
}

/// Extends the pairs and samples the lift on `[0, 1]` for plotting.
pub fn pl_graph_json(pairs: &str, samples: u32) -> Result<String, String> {
    let pairs: Vec<(RatPoint, RatPoint)> = parse(pairs)?;
    let g = extend(&pairs).map_err(err)?;
    let inverse = g.inverse();
    let n = samples.clamp(2, 4000);
    let moved: Vec<[f64; 2]> = match move_set(&g) {
        MoveSet::Everywhere => vec![[0.0, 1.0]],
        MoveSet::AllBut(p) => vec![[f(&p), f(&p) + 1.0]],
        MoveSet::Arcs(arcs) => arcs.iter().map(|a| [f(&a.left), f(&a.right)]).collect(),
    };
    Ok(json!({
        "pairs": g,
        "inverse": inverse,
        "graph": sample(&g, n),
        "inverse_graph": sample(&inverse, n),
        "moved": moved,
    })
    .to_string())
}

/// The covering `cov(ν)` (or `cov_*(ν)`) with the cell containing `x`.
pub fn covering_json(cycle: &str, x: &str, star: bool) -> Result<String, String> {
    let cycle: Cycle = parse(cycle)?;
    let x: RatPoint = x.trim().parse().map_err(err)?;
    let variant = if star { CoveringVariant::CovStar } else { CoveringVariant::Cov };
    let cells: Vec<Value> = cov_cells(&cycle, variant)
        .cells
        .iter()
        .map(|c| match c {
            Cell::Point { at } => json!({"point": f(at), "label": at.to_string()}),
            Cell::Open { left, right } => json!({"from": f(left), "to": f(right), "label": format!("({left}, {right})")}),
        })
        .collect();
    let hit = locate(&cycle, &x, variant);
    Ok(json!({
        "cells": cells,
        "x": f(&x),
        "index": hit.as_ref().ok(),
        "error": hit.err().map(err),
    })
    .to_string())
}

fn arc(iv: &StreamInterval) -> [f64; 2] {
    let start = f(&iv.start);
    [start, start + RatPoint::from_ratio(&iv.len).to_f64()]
}

/// The first `stages` stages of the transporter from `frac(√d1)` to `frac(√d2)`.
pub fn transport_json(d1: u32, d2: u32, stages: u32) -> Result<String, String> {
    let u = IntervalStream::quad(d1 as u64, 0, 1).map_err(err)?;
    let v = IntervalStream::quad(d2 as u64, 0, 1).map_err(err)?;
    let g = transport(&u, &v, TransportMode::Plain).map_err(err)?;
    let mut levels = Vec::new();
    for n in 1..=stages.clamp(1, 12) as usize {
        let stage = g.stage(n).map_err(err)?;
        let breakpoints: Vec<[f64; 2]> = stage.pairs().iter().map(|(x, y)| [f(x), f(y)]).collect();
        levels.push(json!({
            "domain": arc(&g.domain_intervals(n).map_err(err)?[0]),
            "target": arc(&g.target_intervals(n).map_err(err)?[0]),
            "breakpoints": breakpoints,
            "graph": sample(&stage, 720),
        }));
    }
    Ok(json!({ "u": u.approx(30).map_err(err)?, "v": v.approx(30).map_err(err)?, "stages": levels }).to_string())
}

#[wasm_bindgen]
pub fn pl_graph(pairs: &str, samples: u32) -> Result<String, JsValue> {
    pl_graph_json(pairs, samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn covering(cycle: &str, x: &str, star: bool) -> Result<String, JsValue> {
    covering_json(cycle, x, star).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn transport_stages(d1: u32, d2: u32, stages: u32) -> Result<String, JsValue> {
    transport_json(d1, d2, stages).map_err(|e| JsValue::from_str(&e))
}
