use std::fs;
use std::path::Path;
use std::time::Instant;

use provcut::abstraction::{
    abstract_set, check_compatibility, clean_forest, is_vvs, lift_valuation, validate_forest, AbstractionForest, Vvs,
};
use provcut::benchgen::{
    count_cuts, gen_telephony, gen_tpch_like, gen_tree, gen_upp, numbered, vc_reduce, GraphInstance, TelephonySpec,
    TreeSpec, UppSpec,
};
use provcut::optimizer::{
    brute_force_vvs, find_precise, greedy_vvs, optimal_vvs_single_tree, CompressionResult, Status,
};
use provcut::polynomial::{PolySet, Valuation};
use provcut::Error;
use serde_json::{json, Value};

use crate::{Algo, CompressArgs, DecideArgs, EvaluateArgs, Failure, Generate, Verify};

pub(crate) fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn write(path: &Path, text: &str) -> Result<(), Failure> {
    let mut text = text.to_owned();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))
}

fn in_file(path: &Path, e: Error) -> Failure {
    Failure::invalid(format!("{}: {e}", path.display()))
}

pub(crate) fn load_set(path: &Path) -> Result<PolySet, Failure> {
    PolySet::from_json(&read(path)?).map_err(|e| in_file(path, e))
}

pub(crate) fn load_forest(path: &Path) -> Result<AbstractionForest, Failure> {
    AbstractionForest::from_json(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_vvs(path: &Path) -> Result<Vvs, Failure> {
    Vvs::from_json(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_valuation(path: &Path) -> Result<Valuation, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

/// Structural and compatibility problems, one line each.
fn problems(set: Option<&PolySet>, forest: &AbstractionForest) -> Vec<String> {
    let mut out: Vec<String> = validate_forest(forest).iter().map(ToString::to_string).collect();
    if let (true, Some(set)) = (out.is_empty(), set) {
        out.extend(check_compatibility(set, forest).iter().map(ToString::to_string));
    }
    out
}

fn reject(problems: Vec<String>) -> Result<(), Failure> {
    if problems.is_empty() {
        return Ok(());
    }
    Err(Failure::invalid(format!(
        "{} problem(s):\n  {}",
        problems.len(),
        problems.join("\n  ")
    )))
}

/// u128 counts that outgrow JSON integers are written as strings.
fn big(n: u128) -> Value {
    u64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from)
}

fn write_instance(
    dir: &Path,
    set: Option<&PolySet>,
    forest: &AbstractionForest,
    manifest: Value,
) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::invalid(format!("cannot create {}: {e}", dir.display())))?;
    if let Some(set) = set {
        write(&dir.join("polyset.json"), &set.to_json())?;
    }
    write(&dir.join("forest.json"), &forest.to_json())?;
    write(
        &dir.join("manifest.json"),
        &serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
    )
}

fn manifest(spec: Value, seed: Option<u64>, set: &PolySet) -> Value {
    json!({"spec": spec, "seed": seed, "num_m": set.num_m(), "num_v": set.num_v()})
}

pub(crate) fn generate(what: Generate) -> Result<u8, Failure> {
    match what {
        Generate::Telephony {
            customers,
            seed,
            output,
        } => {
            let spec = TelephonySpec::new(customers, seed);
            let (set, forest) = gen_telephony(&spec)?;
            let spec = json!({"kind": "telephony", "num_customers": spec.num_customers,
                "num_plans": spec.num_plans, "num_months": spec.num_months});
            write_instance(&output, Some(&set), &forest, manifest(spec, Some(seed), &set))?;
        }
        Generate::Tpch {
            keys,
            modulus,
            seed,
            output,
        } => {
            let inst = gen_tpch_like(keys, modulus, seed)?;
            let spec = json!({"kind": "tpch", "num_keys": keys, "modulus": modulus});
            write_instance(
                &output,
                Some(&inst.set),
                &inst.forest(),
                manifest(spec, Some(seed), &inst.set),
            )?;
        }
        Generate::Tree {
            tree_type,
            fanouts,
            root,
            leaf_prefix,
            output,
        } => {
            let leaves = numbered(&leaf_prefix, 1, fanouts.iter().product());
            let spec = TreeSpec::new(tree_type, fanouts, root, leaves)?;
            let tree = gen_tree(&spec)?;
            let m = json!({
                "spec": {"kind": "tree", "tree_type": spec.tree_type, "fanouts": spec.fanouts, "root": spec.root},
                "seed": null, "num_m": null, "num_v": spec.leaves.len(),
                "nodes": tree.len(), "num_cuts": big(count_cuts(&tree)),
            });
            write_instance(&output, None, &AbstractionForest::single(tree), m)?;
        }
        Generate::Upp {
            metavars,
            n,
            pairs,
            output,
        } => {
            let spec = UppSpec::numbered(metavars, n, pairs.iter().map(|p| (p.0, p.1)).collect());
            let (set, forest) = gen_upp(&spec)?;
            let m = manifest(
                json!({"kind": "upp", "metavars": spec.metavars, "n": n, "pairs": spec.pairs}),
                None,
                &set,
            );
            write_instance(&output, Some(&set), &forest, m)?;
        }
        Generate::Vcreduce {
            vertices,
            edges,
            k,
            max_vertices,
            output,
        } => {
            let graph = GraphInstance {
                num_vertices: vertices,
                edges: edges.iter().map(|p| (p.0, p.1)).collect(),
                k,
            };
            let red = vc_reduce(&graph, max_vertices)?;
            let (set, forest) = gen_upp(&red.upp)?;
            let mut m = manifest(json!({"kind": "vcreduce", "graph": graph}), None, &set);
            m["granularity"] = json!(red.granularity);
            m["bounds"] = json!([red.bounds.start(), red.bounds.end()]);
            write_instance(&output, Some(&set), &forest, m)?;
        }
    }
    Ok(0)
}

pub(crate) fn verify(what: Verify) -> Result<u8, Failure> {
    let found = match what {
        Verify::Forest { forest } => problems(None, &load_forest(&forest)?),
        Verify::Compat { input, forest } => problems(Some(&load_set(&input)?), &load_forest(&forest)?),
        Verify::Vvs { forest, vvs } => {
            let forest = load_forest(&forest)?;
            let mut found = problems(None, &forest);
            if found.is_empty() {
                match is_vvs(&forest, &load_vvs(&vvs)?) {
                    Ok(true) => {}
                    Ok(false) => found.push("labels do not meet every root-to-leaf path exactly once".into()),
                    Err(e) => found.push(e.to_string()),
                }
            }
            found
        }
    };
    if found.is_empty() {
        println!("ok");
        return Ok(0);
    }
    for p in &found {
        println!("{p}");
    }
    Err(Failure::invalid(format!("{} problem(s) found", found.len())))
}

/// Runs one algorithm on an already cleaned forest.
pub(crate) fn run_algo(
    algo: Algo,
    set: &PolySet,
    forest: &AbstractionForest,
    bound: u64,
    cap: u128,
) -> Result<CompressionResult, Failure> {
    Ok(match algo {
        Algo::Opt => {
            if forest.trees.len() != 1 {
                return Err(Failure::invalid(format!(
                    "--algo opt needs exactly one tree, got {}; picking a cut over several trees is NP-hard, \
                     use --algo greedy or --algo brute",
                    forest.trees.len()
                )));
            }
            optimal_vvs_single_tree(set, &forest.trees[0], bound)?
        }
        Algo::Greedy => greedy_vvs(set, forest, bound)?,
        Algo::Brute => brute_force_vvs(set, forest, bound, cap)?,
    })
}

/// Result as JSON; counters and timing only on request so that plain runs
/// are byte-for-byte reproducible.
pub(crate) fn result_json(result: &CompressionResult, stats: bool) -> Value {
    let mut value = serde_json::to_value(result).expect("result serializes");
    if !stats {
        value.as_object_mut().expect("result is an object").remove("stats");
    }
    value
}

pub(crate) fn compress(args: CompressArgs) -> Result<u8, Failure> {
    let set = load_set(&args.input)?;
    let raw = load_forest(&args.forest)?;
    reject(problems(Some(&set), &raw))?;
    let forest = clean_forest(&raw, &set);
    if forest != raw {
        eprintln!("cleaned forest: {} -> {} nodes", raw.num_nodes(), forest.num_nodes());
    }
    let started = Instant::now();
    let mut result = run_algo(args.algo, &set, &forest, args.bound, args.cap)?;
    result.stats.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    let compressed = abstract_set(&set, &forest, &result.cut())?;
    if let Some(path) = &args.output {
        write(path, &compressed.to_json())?;
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&result_json(&result, args.stats)).expect("json")
    );
    if result.status == Status::Infeasible {
        eprintln!(
            "no cut leaves at most {} monomials: at most {} of {} can be removed",
            args.bound,
            result.max_achievable_ml,
            set.num_m()
        );
        return Ok(3);
    }
    Ok(0)
}

pub(crate) fn evaluate(args: EvaluateArgs) -> Result<u8, Failure> {
    let set = load_set(&args.input)?;
    let mut valuation = load_valuation(&args.valuation)?;
    if args.lift {
        let (Some(forest), Some(vvs)) = (&args.forest, &args.vvs) else {
            return Err(Failure::invalid("--lift needs --forest and --vvs"));
        };
        let raw = load_forest(forest)?;
        reject(problems(Some(&set), &raw))?;
        valuation = lift_valuation(&clean_forest(&raw, &set), &load_vvs(vvs)?, &valuation)?;
    }
    for value in set.evaluate_all(&valuation)? {
        println!("{value}");
    }
    Ok(0)
}

pub(crate) fn decide(args: DecideArgs) -> Result<u8, Failure> {
    let set = load_set(&args.input)?;
    let forest = load_forest(&args.forest)?;
    reject(problems(Some(&set), &forest))?;
    let (lo, hi) = (args.bound.lo, args.bound.hi);
    match find_precise(&set, &forest, lo..=hi, args.granularity, args.cap)? {
        Some(b) => {
            if lo != hi {
                eprintln!("witness bound {b}");
            }
            println!("yes");
            Ok(0)
        }
        None => {
            println!("no");
            Ok(1)
        }
    }
}
