//! Browser bindings for the compression demo in `www/`.
//!
//! Every export takes and returns strings: polynomials as text, one per
//! line, forests and results as JSON. Failures come back as
//! `{"error": "..."}` rather than exceptions so the page can show them inline.

use provcut::abstraction::{abstract_set, clean_forest, AbstractionForest, Vvs};
use provcut::benchgen::{count_cuts, gen_tree, numbered, TreeSpec};
use provcut::fixtures;
use provcut::optimizer::{brute_force_vvs, greedy_vvs, optimal_vvs_single_tree, CompressionResult, DEFAULT_CAP};
use provcut::polynomial::PolySet;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest input the bound sweep accepts, to keep the page responsive.
pub const SWEEP_MAX_MONOMIALS: usize = 2000;

fn reply(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn parse(polys: &str, forest: &str) -> Result<(PolySet, AbstractionForest), String> {
    let lines: Vec<&str> = polys.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if lines.is_empty() {
        return Err("enter at least one polynomial".into());
    }
    let set = PolySet::from_text(&lines).map_err(|e| e.to_string())?;
    let raw = AbstractionForest::from_json(forest).map_err(|e| e.to_string())?;
    let forest = clean_forest(&raw, &set);
    if forest.trees.is_empty() {
        return Err("no tree has a leaf among the polynomial's variables".into());
    }
    Ok((set, forest))
}

fn run(set: &PolySet, forest: &AbstractionForest, bound: u64, algo: &str) -> Result<CompressionResult, String> {
    let r = match algo {
        "opt" if forest.trees.len() == 1 => optimal_vvs_single_tree(set, &forest.trees[0], bound),
        "opt" => return Err("the exact algorithm handles one tree; pick greedy or brute for several".into()),
        "greedy" => greedy_vvs(set, forest, bound),
        "brute" => brute_force_vvs(set, forest, bound, DEFAULT_CAP),
        other => return Err(format!("unknown algorithm `{other}`")),
    };
    r.map_err(|e| e.to_string())
}

/// The telephony example: both zip polynomials and the plan tree.
#[wasm_bindgen]
pub fn example() -> String {
    let polys = [fixtures::ZIP_10001, fixtures::ZIP_10002].join("\n");
    let forest = AbstractionForest::single(fixtures::plans_tree());
    json!({ "polys": polys, "forest": forest.to_json() }).to_string()
}

/// Compresses `polys` under `bound` monomials with `opt`, `greedy` or
/// `brute`, returning the result and the compressed polynomials as text.
#[wasm_bindgen]
pub fn compress(polys: &str, forest: &str, bound: u32, algo: &str) -> String {
    reply((|| {
        let (set, forest) = parse(polys, forest)?;
        let r = run(&set, &forest, u64::from(bound), algo)?;
        let out = abstract_set(&set, &forest, &r.cut()).map_err(|e| e.to_string())?;
        Ok(json!({
            "result": r,
            "num_m": set.num_m(),
            "num_v": set.num_v(),
            "compressed": out.to_string(),
        }))
    })())
}

/// Runs `algo` for every bound from the coarsest cut's size up to the
/// uncompressed size; one `{bound, status, ml, vl, num_v, vvs}` per bound.
#[wasm_bindgen]
pub fn sweep(polys: &str, forest: &str, algo: &str) -> String {
    reply((|| {
        let (set, forest) = parse(polys, forest)?;
        if set.num_m() > SWEEP_MAX_MONOMIALS {
            return Err(format!(
                "sweeps are limited to {SWEEP_MAX_MONOMIALS} monomials, got {}",
                set.num_m()
            ));
        }
        let coarsest = abstract_set(&set, &forest, &Vvs::roots(&forest))
            .map_err(|e| e.to_string())?
            .num_m();
        let rows = (coarsest.max(1)..=set.num_m())
            .map(|b| {
                let r = run(&set, &forest, b as u64, algo)?;
                Ok(json!({
                    "bound": b,
                    "status": r.status,
                    "ml": r.ml,
                    "vl": r.vl,
                    "num_v": r.out_num_v,
                    "vvs": r.vvs,
                }))
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(json!({ "num_m": set.num_m(), "num_v": set.num_v(), "rows": rows }))
    })())
}

/// Size and cut count of a catalogue-style tree with the given type and
/// comma-separated fan-outs. Counts are decimal strings, as they can exceed
/// what a JavaScript number holds exactly.
#[wasm_bindgen]
pub fn cut_count(tree_type: u8, fanouts: &str) -> String {
    reply((|| {
        let fanouts = fanouts
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<usize>()
                    .map_err(|e| format!("fan-out `{}`: {e}", f.trim()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let leaves = fanouts
            .iter()
            .try_fold(1usize, |a, &f| a.checked_mul(f))
            .filter(|&n| n <= 1 << 16);
        let leaves = leaves.ok_or("at most 65536 leaves")?;
        let spec = TreeSpec::new(tree_type, fanouts, "Root", numbered("x", 1, leaves)).map_err(|e| e.to_string())?;
        let tree = gen_tree(&spec).map_err(|e| e.to_string())?;
        Ok(json!({
            "nodes": tree.len(),
            "leaves": leaves,
            "height": tree.height(),
            "num_cuts": count_cuts(&tree).to_string(),
        }))
    })())
}
