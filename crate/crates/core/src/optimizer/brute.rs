use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use super::{check_forest, check_input, finish, Clock, CompressionResult, Stats, Status};
use crate::abstraction::{AbstractionForest, AbstractionTree, NodeId, Vvs};
use crate::benchgen::count_cuts;
use crate::error::{Error, Result};
use crate::polynomial::{PolySet, VarId};

/// Largest number of cuts the enumerating procedures accept by default.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// Every cut of `tree`: the root alone, or a cut of each child.
pub fn enumerate_cuts(tree: &AbstractionTree) -> Vec<Vec<NodeId>> {
    fn cuts(t: &AbstractionTree, v: NodeId) -> Vec<Vec<NodeId>> {
        let mut out = vec![vec![v]];
        if t.is_leaf(v) {
            return out;
        }
        let mut partial: Vec<Vec<NodeId>> = vec![Vec::new()];
        for &c in t.children(v) {
            let below = cuts(t, c);
            partial = partial
                .iter()
                .flat_map(|p| {
                    below.iter().map(move |b| {
                        let mut q = p.clone();
                        q.extend_from_slice(b);
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
        out
    }
    cuts(tree, tree.root())
}

/// Sizes of the set abstracted by one cut of a forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSize {
    pub vvs: Vvs,
    pub num_m: usize,
    pub num_v: usize,
}

/// Walks every cut of the forest in a fixed order, handing the chosen nodes
/// per tree and the resulting `(numM, numV)` to `visit`. Stops early when
/// `visit` returns `false`.
fn for_each_cut(
    set: &PolySet,
    forest: &AbstractionForest,
    cap: u128,
    mut visit: impl FnMut(&[&[NodeId]], usize, usize) -> bool,
) -> Result<()> {
    let total = forest
        .trees
        .iter()
        .map(count_cuts)
        .fold(1u128, |a, b| a.saturating_mul(b));
    if total > cap {
        return Err(Error::TooManyCuts(total));
    }
    let per_tree: Vec<Vec<Vec<NodeId>>> = forest.trees.iter().map(enumerate_cuts).collect();

    // ids for every label, so a member can stand in for its leaves
    let mut symbols = set.symbols().clone();
    let ids: Vec<Vec<VarId>> = forest
        .trees
        .iter()
        .map(|t| t.labels().map(|l| symbols.intern(l)).collect())
        .collect();
    let identity: Vec<VarId> = (0..symbols.len()).map(VarId::from_index).collect();
    let mut map = identity.clone();

    let mut digits = vec![0usize; per_tree.len()];
    loop {
        let chosen: Vec<&[NodeId]> = digits
            .iter()
            .zip(&per_tree)
            .map(|(&d, cuts)| cuts[d].as_slice())
            .collect();
        map.copy_from_slice(&identity);
        for (t, members) in chosen.iter().enumerate() {
            let tree = &forest.trees[t];
            for &m in members.iter() {
                for leaf in tree.descendant_leaves(m) {
                    map[ids[t][leaf].index()] = ids[t][m];
                }
            }
        }
        let mut num_m = 0;
        let mut vars: BTreeSet<VarId> = BTreeSet::new();
        for p in set.polys() {
            let q = p.substitute(|v| map[v.index()]);
            num_m += q.num_m();
            vars.extend(q.variables());
        }
        if !visit(&chosen, num_m, vars.len()) {
            return Ok(());
        }
        // next combination, last tree fastest
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < per_tree[i].len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn to_vvs(forest: &AbstractionForest, chosen: &[&[NodeId]]) -> Vvs {
    Vvs::new(
        chosen
            .iter()
            .enumerate()
            .flat_map(|(t, members)| members.iter().map(move |&v| forest.trees[t].label(v))),
    )
}

/// Sizes reached by every cut of the forest.
pub fn achievable_sizes(set: &PolySet, forest: &AbstractionForest, cap: u128) -> Result<Vec<CutSize>> {
    check_forest(set, forest)?;
    let mut out = Vec::new();
    for_each_cut(set, forest, cap, |chosen, num_m, num_v| {
        out.push(CutSize {
            vvs: to_vvs(forest, chosen),
            num_m,
            num_v,
        });
        true
    })?;
    Ok(out)
}

/// Exact optimum by scoring every cut. Among adequate cuts the most
/// variables win, then the fewest monomials, then enumeration order.
pub fn brute_force_vvs(set: &PolySet, forest: &AbstractionForest, bound: u64, cap: u128) -> Result<CompressionResult> {
    let started = Clock::start();
    let k = check_input(set, forest, bound)?;
    let bound = bound as usize;
    let mut stats = Stats::default();
    // (adequate, numV, fewer monomials)
    let mut best: Option<((bool, usize, std::cmp::Reverse<usize>), Vvs)> = None;
    for_each_cut(set, forest, cap, |chosen, num_m, num_v| {
        stats.node_visits += 1;
        stats.ops += set.num_m() as u64;
        // infeasible fallback: most monomials saved, then most variables
        let score = if num_m <= bound {
            (true, num_v, std::cmp::Reverse(num_m))
        } else {
            (false, usize::MAX - num_m, std::cmp::Reverse(usize::MAX - num_v))
        };
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, to_vvs(forest, chosen)));
        }
        true
    })?;
    let (_, vvs) = best.expect("every forest has a cut");
    finish(set, forest, vvs, k, Status::Optimal, stats, started)
}

/// `true` iff some cut leaves exactly `b` monomials and `k` variables.
pub fn decide_precise(set: &PolySet, forest: &AbstractionForest, b: u64, k: u64, cap: u128) -> Result<bool> {
    check_forest(set, forest)?;
    let mut found = false;
    for_each_cut(set, forest, cap, |_, num_m, num_v| {
        found = num_m as u64 == b && num_v as u64 == k;
        !found
    })?;
    Ok(found)
}

/// Smallest `b` in `bounds` for which some cut leaves exactly `b` monomials
/// and `k` variables.
pub fn find_precise(
    set: &PolySet,
    forest: &AbstractionForest,
    bounds: RangeInclusive<u64>,
    k: u64,
    cap: u128,
) -> Result<Option<u64>> {
    check_forest(set, forest)?;
    let mut best: Option<u64> = None;
    for_each_cut(set, forest, cap, |_, num_m, num_v| {
        let b = num_m as u64;
        if num_v as u64 == k && bounds.contains(&b) && best.is_none_or(|x| b < x) {
            best = Some(b);
        }
        true
    })?;
    Ok(best)
}
