//! Browser bindings. Every export returns a JSON string or throws the error
//! message as a string.

use rox_core::experiments::separation_demo;
use rox_core::games::{estimate_advantage, ExperimentReport, Property};
use rox_core::registry::{adversary, Setup, ToyParams};
use rox_core::{BitString, Result};
use wasm_bindgen::prelude::*;

/// Trials are capped so a page stays responsive.
pub const MAX_TRIALS: u64 = 20_000;

fn setup(seed: u64, params: &str) -> Result<Setup> {
    Ok(Setup::new(params.parse::<ToyParams>()?, seed))
}

fn trials(n: u32) -> u64 {
    u64::from(n).clamp(1, MAX_TRIALS)
}

pub fn trace_json(seed: u64, params: &str, family: &str, key: &str, input: &str) -> Result<String> {
    let s = setup(seed, params)?;
    let (key, input): (BitString, BitString) = (key.trim().parse()?, input.trim().parse()?);
    let mut inst = s.instance(s.family(family)?)?;
    let rounds = inst.trace(&key, &input)?;
    let queries = inst.oracle_queries();
    let padded = inst.pad(&input)?;
    Ok(serde_json::json!({
        "digest": rounds.last().map(|r| r.chain_out.clone()),
        "ell": padded.ell,
        "q2": padded.q2,
        "xbar": padded.xbar,
        "queries": queries,
        "rounds": rounds,
    })
    .to_string())
}

pub fn game_json(seed: u64, params: &str, prop: &str, family: &str, adv: &str, n: u32) -> Result<String> {
    let s = setup(seed, params)?;
    let prop: Property = prop.parse()?;
    let est = estimate_advantage(
        prop,
        &s.family(family)?,
        &*adversary(adv)?,
        trials(n),
        &s.experiment_seed(),
    )?;
    Ok(ExperimentReport::new(prop, family, &est, seed).json())
}

pub fn separation_json(seed: u64, params: &str, which: &str, n: u32) -> Result<String> {
    let s = setup(seed, params)?;
    Ok(separation_demo(&s, which.parse()?, trials(n))?.json())
}

fn js(r: Result<String>) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

/// ROX evaluation with every round's block, mask, input and chain value.
#[wasm_bindgen]
pub fn rox_trace(
    seed: u32,
    params: &str,
    family: &str,
    key: &str,
    input: &str,
) -> std::result::Result<String, JsValue> {
    js(trace_json(seed.into(), params, family, key, input))
}

/// Advantage estimate with a Wilson interval.
#[wasm_bindgen]
pub fn estimate_game(
    seed: u32,
    params: &str,
    prop: &str,
    family: &str,
    adv: &str,
    trials: u32,
) -> std::result::Result<String, JsValue> {
    js(game_json(seed.into(), params, prop, family, adv, trials))
}

/// Trivial attack on a separating family, next to the base family.
#[wasm_bindgen]
pub fn run_separation(seed: u32, params: &str, which: &str, trials: u32) -> std::result::Result<String, JsValue> {
    js(separation_json(seed.into(), params, which, trials))
}

#[wasm_bindgen]
pub fn names() -> String {
    serde_json::json!({
        "properties": Property::ALL.map(Property::name),
        "families": rox_core::registry::BASE_FAMILIES,
        "modifiers": rox_core::registry::MODIFIERS,
        "adversaries": rox_core::registry::ADVERSARIES,
    })
    .to_string()
}
