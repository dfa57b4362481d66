use std::collections::BTreeMap;

use serde::Serialize;

use super::{check_input, finish, single, Clock, CompressionResult, Stats, Status};
use crate::abstraction::{AbstractionTree, LeafIndex, NodeId, Vvs};
use crate::error::Result;
use crate::polynomial::PolySet;

/// How a table entry is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Origin {
    /// The node is a leaf and keeps itself.
    Leaf,
    /// The node itself is the cut below it.
    Singleton,
    /// Every child is a leaf and is kept.
    ChildLeaves,
    /// Combination of child cuts, recorded in the node's stages.
    Children,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub vl: u64,
    pub origin: Origin,
}

/// Sparse map from monomial loss (clamped at `k`) to the least variable loss
/// of a cut of the subtree reaching it. Missing keys are unreachable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LossTable {
    entries: BTreeMap<u64, Entry>,
}

impl LossTable {
    pub fn leaf() -> Self {
        Self::from_pairs([(0, 0)], Origin::Leaf)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>, origin: Origin) -> Self {
        Self {
            entries: pairs.into_iter().map(|(i, vl)| (i, Entry { vl, origin })).collect(),
        }
    }

    pub fn get(&self, ml: u64) -> Option<&Entry> {
        self.entries.get(&ml)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Entry)> {
        self.entries.iter().map(|(&k, e)| (k, e))
    }

    /// `(ml, vl)` pairs in key order.
    pub fn pairs(&self) -> Vec<(u64, u64)> {
        self.iter().map(|(i, e)| (i, e.vl)).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_key(&self) -> Option<u64> {
        self.entries.keys().next_back().copied()
    }

    /// Keeps the smaller variable loss; on ties the existing entry stays.
    fn offer(&mut self, ml: u64, vl: u64, origin: Origin) {
        match self.entries.get(&ml) {
            Some(e) if e.vl <= vl => {}
            _ => {
                self.entries.insert(ml, Entry { vl, origin });
            }
        }
    }
}

/// One knapsack step: `key -> (vl, key in previous stage, key in child)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct StageEntry {
    key: u64,
    vl: u64,
    prev: u64,
    child: u64,
}

type Stage = Vec<StageEntry>;

/// Folds children tables left to right. Stage `i` holds the best
/// combinations of the first `i + 1` children; sums past `k` land on `k`.
fn combine_stages(children: &[&LossTable], k: u64, ops: &mut u64) -> Vec<Stage> {
    let width = k as usize + 1;
    let mut best: Vec<Option<(u64, u64, u64)>> = vec![None; width];
    let mut touched: Vec<usize> = Vec::new();
    let mut stages: Vec<Stage> = Vec::with_capacity(children.len());
    let start = [StageEntry {
        key: 0,
        vl: 0,
        prev: 0,
        child: 0,
    }];
    for (i, child) in children.iter().enumerate() {
        let prev: &[StageEntry] = if i == 0 { &start } else { &stages[i - 1] };
        for p in prev {
            for (t, e) in child.iter() {
                *ops += 1;
                let j = (p.key + t).min(k) as usize;
                let vl = p.vl + e.vl;
                match best[j] {
                    Some((old, _, _)) if old <= vl => {}
                    slot => {
                        if slot.is_none() {
                            touched.push(j);
                        }
                        best[j] = Some((vl, p.key, t));
                    }
                }
            }
        }
        touched.sort_unstable();
        let stage = touched
            .drain(..)
            .map(|j| {
                let (vl, prev, child) = best[j].take().expect("touched slot is set");
                StageEntry {
                    key: j as u64,
                    vl,
                    prev,
                    child,
                }
            })
            .collect();
        stages.push(stage);
    }
    stages
}

/// Combines the loss tables of disjoint sibling subtrees: entry `j < k` is
/// the least total variable loss over child keys summing to `j`, entry `k`
/// covers every sum of at least `k`.
pub fn compute_array(children: &[&LossTable], k: u64) -> LossTable {
    let mut ops = 0;
    let stages = combine_stages(children, k, &mut ops);
    let last = stages.last().map(Vec::as_slice).unwrap_or(&[]);
    LossTable::from_pairs(last.iter().map(|e| (e.key, e.vl)), Origin::Children)
}

/// Tables of the exact single-tree algorithm, kept for inspection and cut
/// reconstruction.
#[derive(Clone, Debug)]
pub struct SingleTreeDp {
    tree: AbstractionTree,
    k: u64,
    node_ml: Vec<u64>,
    tables: Vec<LossTable>,
    stages: Vec<Vec<Stage>>,
    stats: Stats,
}

impl SingleTreeDp {
    pub fn run(set: &PolySet, tree: &AbstractionTree, bound: u64) -> Result<Self> {
        let k = check_input(set, &single(tree), bound)?;
        let index = LeafIndex::build(set, tree);
        let node_ml = index.all_node_ml(tree);
        let occurring = index.occurring_leaves(tree);
        let mut ops = index.monomials_touched();
        let mut tables = vec![LossTable::default(); tree.len()];
        let mut stages: Vec<Vec<Stage>> = vec![Vec::new(); tree.len()];
        let mut visits = 0;
        for v in tree.postorder() {
            visits += 1;
            let kids = tree.children(v);
            if kids.is_empty() {
                tables[v] = LossTable::leaf();
                continue;
            }
            let mut table = if kids.iter().all(|&c| tree.is_leaf(c)) {
                LossTable::from_pairs([(0, 0)], Origin::ChildLeaves)
            } else {
                let child_tables: Vec<&LossTable> = kids.iter().map(|&c| &tables[c]).collect();
                let st = combine_stages(&child_tables, k, &mut ops);
                let table = LossTable::from_pairs(
                    st.last().expect("internal node").iter().map(|e| (e.key, e.vl)),
                    Origin::Children,
                );
                stages[v] = st;
                table
            };
            table.offer(node_ml[v].min(k), occurring[v] - 1, Origin::Singleton);
            tables[v] = table;
        }
        let table_entries = tables.iter().map(|t| t.len() as u64).sum();
        Ok(Self {
            tree: tree.clone(),
            k,
            node_ml,
            tables,
            stages,
            stats: Stats {
                node_visits: visits,
                table_entries,
                elapsed_ms: 0.0,
                ops,
            },
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn tree(&self) -> &AbstractionTree {
        &self.tree
    }

    pub fn table(&self, node: NodeId) -> &LossTable {
        &self.tables[node]
    }

    pub fn table_of(&self, label: &str) -> Option<&LossTable> {
        self.tree.find(label).map(|v| &self.tables[v])
    }

    pub fn node_ml(&self, node: NodeId) -> u64 {
        self.node_ml[node]
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    /// Cut of `node`'s subtree realizing table entry `key`.
    pub fn reconstruct(&self, node: NodeId, key: u64) -> Option<Vec<NodeId>> {
        let mut out = Vec::new();
        let mut todo = vec![(node, key)];
        while let Some((v, key)) = todo.pop() {
            match self.tables[v].get(key)?.origin {
                Origin::Leaf | Origin::Singleton => out.push(v),
                Origin::ChildLeaves => out.extend_from_slice(self.tree.children(v)),
                Origin::Children => {
                    let mut j = key;
                    for (i, &c) in self.tree.children(v).iter().enumerate().rev() {
                        let stage = &self.stages[v][i];
                        let e = stage[stage.binary_search_by_key(&j, |e| e.key).ok()?];
                        todo.push((c, e.child));
                        j = e.prev;
                    }
                }
            }
        }
        out.sort_unstable();
        Some(out)
    }

    fn labels(&self, nodes: &[NodeId]) -> Vvs {
        Vvs::new(nodes.iter().map(|&v| self.tree.label(v)))
    }

    /// Cut read at `A_root[k]`, or at the largest reachable key when `k` is
    /// out of reach.
    pub fn best_cut(&self) -> Vvs {
        let root = &self.tables[self.tree.root()];
        let key = if root.get(self.k).is_some() {
            self.k
        } else {
            root.max_key().expect("root table holds key 0")
        };
        self.labels(
            &self
                .reconstruct(self.tree.root(), key)
                .expect("stored entries reconstruct"),
        )
    }
}

/// Exact cut for a single tree: among cuts leaving at most `bound`
/// monomials, one keeping the most variables.
pub fn optimal_vvs_single_tree(set: &PolySet, tree: &AbstractionTree, bound: u64) -> Result<CompressionResult> {
    let started = Clock::start();
    let dp = SingleTreeDp::run(set, tree, bound)?;
    let vvs = dp.best_cut();
    finish(
        set,
        &single(tree),
        vvs,
        dp.k,
        Status::Optimal,
        dp.stats.clone(),
        started,
    )
}
