use std::collections::BTreeSet;

use super::{check_input, finish, label_order, Clock, CompressionResult, Stats, Status};
use crate::abstraction::{AbstractionForest, LeafIndex, NodeId, Vvs};
use crate::error::Result;
use crate::polynomial::{PolySet, VarId};

/// Heuristic for forests: start from every leaf and keep replacing a full
/// sibling group by its parent, cheapest variable loss first, until the
/// bound is met or nothing is left to promote.
pub fn greedy_vvs(set: &PolySet, forest: &AbstractionForest, bound: u64) -> Result<CompressionResult> {
    let started = Clock::start();
    let k = check_input(set, forest, bound)?;
    let occurring: Vec<Vec<u64>> = forest
        .trees
        .iter()
        .map(|t| LeafIndex::build(set, t).occurring_leaves(t))
        .collect();

    let mut chosen: Vec<Vec<bool>> = forest
        .trees
        .iter()
        .map(|t| t.node_ids().map(|v| t.is_leaf(v)).collect())
        .collect();
    let mut symbols = set.symbols().clone();
    let mut working = set.clone();
    let base_m = set.num_m() as u64;
    let mut promotions = Vec::new();
    let mut stats = Stats::default();

    let ready = |chosen: &[Vec<bool>], t: usize, v: NodeId| {
        let tree = &forest.trees[t];
        !tree.is_leaf(v) && !chosen[t][v] && tree.children(v).iter().all(|&c| chosen[t][c])
    };
    let mut candidates: BTreeSet<(usize, NodeId)> = BTreeSet::new();
    for (t, tree) in forest.trees.iter().enumerate() {
        candidates.extend(tree.node_ids().filter(|&v| ready(&chosen, t, v)).map(|v| (t, v)));
    }

    while base_m - (working.num_m() as u64) < k {
        // change in variable loss when (t, v) replaces its children
        let cost = |&(t, v): &(usize, NodeId)| -> i64 {
            let tree = &forest.trees[t];
            let before: u64 = tree.children(v).iter().map(|&c| occurring[t][c] - 1).sum();
            (occurring[t][v] - 1) as i64 - before as i64
        };
        stats.node_visits += candidates.len() as u64;
        let Some(&(t, v)) = candidates.iter().min_by(|a, b| {
            cost(a)
                .cmp(&cost(b))
                .then_with(|| label_order(forest.trees[a.0].label(a.1), forest.trees[b.0].label(b.1)))
        }) else {
            break;
        };
        candidates.remove(&(t, v));
        let tree = &forest.trees[t];
        for &c in tree.children(v) {
            chosen[t][c] = false;
        }
        chosen[t][v] = true;
        if let Some(p) = tree.parent(v) {
            if ready(&chosen, t, p) {
                candidates.insert((t, p));
            }
        }

        let target = symbols.intern(tree.label(v));
        let replaced: Vec<VarId> = tree
            .children(v)
            .iter()
            .filter_map(|&c| symbols.get(tree.label(c)))
            .collect();
        stats.ops += working.num_m() as u64;
        working = working.substitute(symbols.clone(), |x| if replaced.contains(&x) { target } else { x });
        promotions.push(tree.label(v).to_owned());
    }

    let vvs = Vvs::new(forest.trees.iter().enumerate().flat_map(|(t, tree)| {
        let chosen = &chosen[t];
        tree.node_ids()
            .filter(move |&v| chosen[v])
            .map(move |v| tree.label(v).to_owned())
    }));
    let mut result = finish(set, forest, vvs, k, Status::HeuristicAdequate, stats, started)?;
    result.promotions = promotions;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{abstract_set, clean_forest, is_vvs};
    use crate::fixtures;

    fn example_five_forest(set: &PolySet) -> AbstractionForest {
        clean_forest(
            &AbstractionForest::new(vec![fixtures::plans_tree(), fixtures::year_tree()]),
            set,
        )
    }

    #[test]
    fn promotion_sequence_on_example_five() {
        let set = fixtures::example_five();
        let forest = example_five_forest(&set);
        let r = greedy_vvs(&set, &forest, 4).unwrap();
        assert_eq!(r.promotions, vec!["q1", "SB", "Business", "Special"]);
        assert_eq!((r.vl, r.ml), (5, 11));
        assert_eq!(r.status, Status::HeuristicAdequate);
        assert_eq!(r.cut(), Vvs::new(["q1", "Business", "Special", "p1"]));
        assert!(is_vvs(&forest, &r.cut()).unwrap());
    }

    #[test]
    fn full_bound_promotes_nothing() {
        let set = fixtures::example_five();
        let forest = example_five_forest(&set);
        let r = greedy_vvs(&set, &forest, set.num_m() as u64).unwrap();
        assert!(r.promotions.is_empty());
        assert_eq!(r.cut(), Vvs::leaves(&forest));
    }

    #[test]
    fn gives_up_with_roots_when_bound_unreachable() {
        let set = fixtures::example_five();
        let forest = example_five_forest(&set);
        let r = greedy_vvs(&set, &forest, 1).unwrap();
        assert_eq!(r.status, Status::Infeasible);
        assert_eq!(r.cut(), Vvs::roots(&forest));
        assert_eq!(r.ml, r.max_achievable_ml);
        assert_eq!(
            abstract_set(&set, &forest, &r.cut()).unwrap().num_m() as u64,
            r.out_num_m
        );
    }
}
