//! Cut selection under a size bound.
//!
//! All three compressors take a polynomial set, the trees to cut and a bound
//! `B` on the number of monomials of the result. Trees must be compatible
//! with the set and cleaned (see [`crate::abstraction::clean_tree`]).

mod brute;
mod dp;
mod greedy;

use serde::{Deserialize, Serialize};

pub use brute::{
    achievable_sizes, brute_force_vvs, decide_precise, enumerate_cuts, find_precise, CutSize, DEFAULT_CAP,
};
pub use dp::{compute_array, optimal_vvs_single_tree, Entry, LossTable, Origin, SingleTreeDp};
pub use greedy::greedy_vvs;

use crate::abstraction::{abstract_set, check_compatibility, validate_forest, AbstractionForest, AbstractionTree, Vvs};
use crate::error::{Error, Result};
use crate::polynomial::PolySet;

/// Wall clock for [`Stats::elapsed_ms`]; reads zero on wasm, which has no
/// monotonic clock in std.
#[derive(Clone, Copy)]
pub(crate) struct Clock(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Clock {
    pub(crate) fn start() -> Self {
        Clock(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    pub(crate) fn elapsed_ms(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed().as_secs_f64() * 1e3;
        #[cfg(target_arch = "wasm32")]
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Optimal,
    HeuristicAdequate,
    Infeasible,
}

impl Status {
    pub fn is_adequate(self) -> bool {
        self != Status::Infeasible
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub node_visits: u64,
    pub table_entries: u64,
    pub elapsed_ms: f64,
    /// Elementary steps: table combinations for the exact algorithm,
    /// monomials rewritten for greedy, cuts scored for brute force.
    #[serde(skip)]
    pub ops: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressionResult {
    pub status: Status,
    /// Cut members, sorted.
    pub vvs: Vec<String>,
    pub ml: u64,
    pub vl: u64,
    pub out_num_m: u64,
    pub out_num_v: u64,
    /// Monomial loss of the coarsest cut (every root), the most any cut saves.
    pub max_achievable_ml: u64,
    pub stats: Stats,
    /// Labels promoted by greedy, in order.
    #[serde(skip)]
    pub promotions: Vec<String>,
}

impl CompressionResult {
    pub fn cut(&self) -> Vvs {
        Vvs::new(self.vvs.iter().cloned())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }
}

/// Rejects invalid forests, incompatible inputs, leaves absent from the
/// set and bounds outside `1..=numM`. Returns `k = numM - B`.
pub(crate) fn check_input(set: &PolySet, forest: &AbstractionForest, bound: u64) -> Result<u64> {
    check_forest(set, forest)?;
    let present = set.variable_names();
    for tree in &forest.trees {
        if let Some(leaf) = tree.leaves().map(|v| tree.label(v)).find(|l| !present.contains(l)) {
            return Err(Error::UncleanTree(leaf.to_owned()));
        }
    }
    let num_m = set.num_m() as u64;
    if bound < 1 || bound > num_m {
        return Err(Error::Bound { bound, num_m });
    }
    Ok(num_m - bound)
}

pub(crate) fn check_forest(set: &PolySet, forest: &AbstractionForest) -> Result<()> {
    let violations = validate_forest(forest);
    if !violations.is_empty() {
        return Err(Error::InvalidForest(
            violations.iter().map(ToString::to_string).collect(),
        ));
    }
    let compat = check_compatibility(set, forest);
    if !compat.is_empty() {
        return Err(Error::Compatibility(compat.iter().map(ToString::to_string).collect()));
    }
    Ok(())
}

/// Fills in sizes and losses of `vvs` by substitution.
pub(crate) fn finish(
    set: &PolySet,
    forest: &AbstractionForest,
    vvs: Vvs,
    k: u64,
    adequate: Status,
    stats: Stats,
    started: Clock,
) -> Result<CompressionResult> {
    let out = abstract_set(set, forest, &vvs)?;
    let coarsest = abstract_set(set, forest, &Vvs::roots(forest))?;
    let ml = (set.num_m() - out.num_m()) as u64;
    let vl = (set.num_v() - out.num_v()) as u64;
    Ok(CompressionResult {
        status: if ml >= k { adequate } else { Status::Infeasible },
        vvs: vvs.members.into_iter().collect(),
        ml,
        vl,
        out_num_m: out.num_m() as u64,
        out_num_v: out.num_v() as u64,
        max_achievable_ml: (set.num_m() - coarsest.num_m()) as u64,
        stats: Stats {
            elapsed_ms: started.elapsed_ms(),
            ..stats
        },
        promotions: Vec::new(),
    })
}

/// Greedy tie order: case-folded label, then raw bytes.
pub(crate) fn label_order(a: &str, b: &str) -> std::cmp::Ordering {
    a.to_lowercase().cmp(&b.to_lowercase()).then_with(|| a.cmp(b))
}

pub(crate) fn single(tree: &AbstractionTree) -> AbstractionForest {
    AbstractionForest::single(tree.clone())
}
