//! Random compatible instances shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use provcut::abstraction::{clean_forest, AbstractionForest, AbstractionTree, NodeDoc, NodeId, Vvs};
use provcut::polynomial::{Monomial, PolySet, Polynomial, Symbols};
use rand::Rng;

/// One monomial: a leaf pick per tree (taken modulo the leaf count), a
/// bitmask over the extra variables `z0..z3`, the exponent applied to the
/// tree leaves, the coefficient and the target polynomial.
#[derive(Clone, Debug)]
pub struct MonoSpec {
    pub picks: Vec<Option<usize>>,
    pub extras: u8,
    pub exp: u32,
    pub coef: f64,
    pub poly: usize,
}

/// Tree `t` from a parent list: node `i + 1` hangs under `parents[i] % (i + 1)`.
/// Every node is labelled `t<t>n<i>`.
pub fn tree_from_parents(t: usize, parents: &[usize]) -> AbstractionTree {
    let n = parents.len() + 1;
    let mut children = vec![Vec::new(); n];
    for (i, &p) in parents.iter().enumerate() {
        children[p % (i + 1)].push(i + 1);
    }
    fn doc(t: usize, v: usize, children: &[Vec<usize>]) -> NodeDoc {
        NodeDoc::node(
            format!("t{t}n{v}"),
            children[v].iter().map(|&c| doc(t, c, children)).collect(),
        )
    }
    AbstractionTree::from_doc(&doc(t, 0, &children))
}

/// Builds the set and returns it with the forest cleaned against it.
/// `None` when no tree keeps an occurring leaf.
pub fn build(trees: &[Vec<usize>], monos: &[MonoSpec], num_polys: usize) -> Option<(PolySet, AbstractionForest)> {
    let forest = AbstractionForest::new(trees.iter().enumerate().map(|(t, p)| tree_from_parents(t, p)).collect());
    let leaves: Vec<Vec<NodeId>> = forest.trees.iter().map(|t| t.leaves().collect()).collect();
    let mut symbols = Symbols::new();
    let mut raw: Vec<Vec<Monomial>> = vec![Vec::new(); num_polys];
    for m in monos {
        let mut vars = Vec::new();
        for (t, pick) in m.picks.iter().enumerate() {
            if let Some(i) = pick {
                let tree = &forest.trees[t];
                let leaf = leaves[t][i % leaves[t].len()];
                vars.push((symbols.intern(tree.label(leaf)), m.exp));
            }
        }
        for z in 0..4 {
            if m.extras & (1 << z) != 0 {
                vars.push((symbols.intern(&format!("z{z}")), 1));
            }
        }
        raw[m.poly % num_polys].push(Monomial::new(m.coef, vars).unwrap());
    }
    let polys = raw.into_iter().map(|r| Polynomial::normalize(r).unwrap()).collect();
    let set = PolySet::new(symbols, polys);
    let forest = clean_forest(&forest, &set);
    (!forest.trees.is_empty() && set.num_m() > 0).then_some((set, forest))
}

fn mono_strategy(num_trees: usize) -> impl Strategy<Value = MonoSpec> {
    (
        proptest::collection::vec(proptest::option::weighted(0.9, 0usize..64), num_trees),
        0u8..16,
        prop_oneof![4 => Just(1u32), 1 => Just(2u32)],
        1u32..1000,
        0usize..4,
    )
        .prop_map(|(picks, extras, exp, c, poly)| MonoSpec {
            picks,
            extras,
            exp,
            coef: f64::from(c) / 8.0,
            poly,
        })
}

fn parents_strategy(max_nodes: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..64, 1..max_nodes)
}

/// Instances over `num_trees` random trees of at most `max_nodes` nodes.
pub fn instance(
    num_trees: usize,
    max_nodes: usize,
    max_monos: usize,
) -> impl Strategy<Value = (PolySet, AbstractionForest)> {
    (
        proptest::collection::vec(parents_strategy(max_nodes), num_trees),
        proptest::collection::vec(mono_strategy(num_trees), 1..max_monos),
        1usize..4,
    )
        .prop_filter_map("no occurring leaf", |(trees, monos, polys)| {
            build(&trees, &monos, polys)
        })
}

/// Same family drawn from a seeded generator, for the acceptance runs.
pub fn random_instance(
    rng: &mut impl Rng,
    num_trees: usize,
    max_nodes: usize,
    max_monos: usize,
) -> Option<(PolySet, AbstractionForest)> {
    // parents drawn from a window of recent nodes; narrow windows give
    // deep trees with many cuts, wide ones bushy trees
    let trees: Vec<Vec<usize>> = (0..num_trees)
        .map(|_| {
            let n = rng.random_range(1..max_nodes);
            let window = [2, 4, 8, 64][rng.random_range(0..4)];
            (0..n).map(|i| rng.random_range(i.saturating_sub(window)..=i)).collect()
        })
        .collect();
    let count = rng.random_range(1..max_monos);
    let monos: Vec<MonoSpec> = (0..count)
        .map(|_| MonoSpec {
            picks: (0..num_trees)
                .map(|_| rng.random_bool(0.9).then(|| rng.random_range(0..64)))
                .collect(),
            extras: rng.random_range(0..16),
            exp: if rng.random_bool(0.2) { 2 } else { 1 },
            coef: f64::from(rng.random_range(1u32..1000)) / 8.0,
            poly: rng.random_range(0..4),
        })
        .collect();
    let polys = rng.random_range(1..4);
    build(&trees, &monos, polys)
}

/// A uniformly chosen-ish cut: at each internal node keep it with
/// probability `stop`, otherwise descend.
pub fn random_cut(rng: &mut impl Rng, forest: &AbstractionForest, stop: f64) -> Vvs {
    let mut members = Vec::new();
    for tree in &forest.trees {
        let mut todo = vec![tree.root()];
        while let Some(v) = todo.pop() {
            if tree.is_leaf(v) || rng.random_bool(stop) {
                members.push(tree.label(v).to_owned());
            } else {
                todo.extend_from_slice(tree.children(v));
            }
        }
    }
    Vvs::new(members)
}
