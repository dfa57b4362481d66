//! Abstraction trees and forests, valid variable sets (cuts), and the
//! substitution that replaces leaves by their chosen ancestors.

mod index;
mod tree;

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

pub use index::LeafIndex;
pub use tree::{AbstractionForest, AbstractionTree, NodeDoc, NodeId, TreeNode, Violation};

use crate::error::{Error, Result};
use crate::polynomial::{PolySet, Symbols, Valuation, VarId};

/// Reports duplicate labels inside a tree and labels shared between trees.
pub fn validate_forest(forest: &AbstractionForest) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut owners: HashMap<&str, Vec<usize>> = HashMap::new();
    for (t, tree) in forest.trees.iter().enumerate() {
        let mut seen = HashSet::new();
        for label in tree.labels() {
            if !seen.insert(label) {
                out.push(Violation::DuplicateLabel {
                    tree: t,
                    label: label.to_owned(),
                });
            } else {
                owners.entry(label).or_default().push(t);
            }
        }
    }
    let mut shared: Vec<_> = owners.into_iter().filter(|(_, ts)| ts.len() > 1).collect();
    shared.sort();
    out.extend(shared.into_iter().map(|(label, trees)| Violation::SharedLabel {
        label: label.to_owned(),
        trees,
    }));
    out
}

/// One monomial that breaks compatibility with one tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatViolation {
    pub poly: usize,
    pub monomial: usize,
    pub tree: usize,
    pub kind: CompatKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompatKind {
    /// More than one distinct node of the tree occurs in the monomial.
    SeveralNodes(Vec<String>),
    /// An internal metavariable occurs in the polynomial.
    InternalNode(String),
}

impl std::fmt::Display for CompatViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let at = format!("polynomial {} monomial {} tree {}", self.poly, self.monomial, self.tree);
        match &self.kind {
            CompatKind::SeveralNodes(l) => write!(f, "{at}: several nodes of one tree ({})", l.join(", ")),
            CompatKind::InternalNode(l) => write!(f, "{at}: metavariable `{l}` occurs in the polynomial"),
        }
    }
}

/// Checks that every monomial holds at most one node of each tree and that
/// no internal node occurs at all. Exponents are ignored: `m1^2` counts once.
pub fn check_compatibility(set: &PolySet, forest: &AbstractionForest) -> Vec<CompatViolation> {
    // var id -> (tree, is_leaf)
    let mut role: HashMap<VarId, (usize, bool)> = HashMap::new();
    for (t, tree) in forest.trees.iter().enumerate() {
        for v in tree.node_ids() {
            if let Some(id) = set.symbols().get(tree.label(v)) {
                role.insert(id, (t, tree.is_leaf(v)));
            }
        }
    }
    let mut out = Vec::new();
    for (pi, poly) in set.polys().iter().enumerate() {
        for (mi, m) in poly.monomials().iter().enumerate() {
            let mut hits: Vec<(usize, VarId, bool)> = m
                .variables()
                .filter_map(|v| role.get(&v).map(|&(t, leaf)| (t, v, leaf)))
                .collect();
            hits.sort();
            for &(t, v, leaf) in &hits {
                if !leaf {
                    out.push(CompatViolation {
                        poly: pi,
                        monomial: mi,
                        tree: t,
                        kind: CompatKind::InternalNode(set.symbols().name(v).to_owned()),
                    });
                }
            }
            let mut i = 0;
            while i < hits.len() {
                let t = hits[i].0;
                let j = hits[i..].iter().take_while(|h| h.0 == t).count() + i;
                if j - i > 1 {
                    out.push(CompatViolation {
                        poly: pi,
                        monomial: mi,
                        tree: t,
                        kind: CompatKind::SeveralNodes(
                            hits[i..j].iter().map(|h| set.symbols().name(h.1).to_owned()).collect(),
                        ),
                    });
                }
                i = j;
            }
        }
    }
    out
}

/// Drops leaves that do not occur in `set`, then removes childless internal
/// nodes and splices out every node left with a single child (the child
/// keeps its label and takes the node's place, the root included).
pub fn clean_tree(tree: &AbstractionTree, set: &PolySet) -> Result<AbstractionTree> {
    let present = set.variable_names();
    fn rebuild(t: &AbstractionTree, v: NodeId, present: &BTreeSet<&str>) -> Option<NodeDoc> {
        if t.is_leaf(v) {
            return present.contains(t.label(v)).then(|| NodeDoc::leaf(t.label(v)));
        }
        let mut kids: Vec<NodeDoc> = t.children(v).iter().filter_map(|&c| rebuild(t, c, present)).collect();
        match kids.len() {
            0 => None,
            1 => kids.pop(),
            _ => Some(NodeDoc::node(t.label(v), kids)),
        }
    }
    rebuild(tree, tree.root(), &present)
        .map(|doc| AbstractionTree::from_doc(&doc))
        .ok_or(Error::EmptyTree)
}

/// Cleans every tree, dropping trees with no occurring leaf.
pub fn clean_forest(forest: &AbstractionForest, set: &PolySet) -> AbstractionForest {
    AbstractionForest::new(forest.trees.iter().filter_map(|t| clean_tree(t, set).ok()).collect())
}

/// A valid variable set: one cut through every tree of a forest.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vvs {
    pub members: BTreeSet<String>,
}

impl Vvs {
    pub fn new<I, S>(members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            members: members.into_iter().map(Into::into).collect(),
        }
    }

    /// Every leaf of every tree.
    pub fn leaves(forest: &AbstractionForest) -> Self {
        Self::new(
            forest
                .trees
                .iter()
                .flat_map(|t| t.leaves().map(|v| t.label(v).to_owned())),
        )
    }

    /// The root of every tree.
    pub fn roots(forest: &AbstractionForest) -> Self {
        Self::new(forest.trees.iter().map(|t| t.label(t.root()).to_owned()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.members.contains(label)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("vvs serializes")
    }
}

/// `true` iff every root-to-leaf path of every tree holds exactly one member.
pub fn is_vvs(forest: &AbstractionForest, vvs: &Vvs) -> Result<bool> {
    for label in &vvs.members {
        if forest.locate(label).is_none() {
            return Err(Error::UnknownLabel(label.clone()));
        }
    }
    Ok(forest.trees.iter().all(|tree| {
        tree.leaves().all(|leaf| {
            let mut hits = 0;
            let mut cur = Some(leaf);
            while let Some(v) = cur {
                hits += vvs.contains(tree.label(v)) as usize;
                cur = tree.parent(v);
            }
            hits == 1
        })
    }))
}

/// Maps every leaf label to the label of its chosen ancestor-or-self.
pub fn leaf_assignment(forest: &AbstractionForest, vvs: &Vvs) -> Result<HashMap<String, String>> {
    if !is_vvs(forest, vvs)? {
        return Err(Error::InvalidVvs(format!("{:?}", vvs.members)));
    }
    let mut out = HashMap::new();
    for tree in &forest.trees {
        for leaf in tree.leaves() {
            let mut v = leaf;
            while !vvs.contains(tree.label(v)) {
                v = tree.parent(v).expect("a valid cut covers every leaf");
            }
            out.insert(tree.label(leaf).to_owned(), tree.label(v).to_owned());
        }
    }
    Ok(out)
}

/// Substitutes every leaf by its cut member and re-normalizes.
/// Variables outside the forest are left alone.
pub fn abstract_set(set: &PolySet, forest: &AbstractionForest, vvs: &Vvs) -> Result<PolySet> {
    let assignment = leaf_assignment(forest, vvs)?;
    let mut symbols: Symbols = set.symbols().clone();
    let mut map: Vec<VarId> = (0..symbols.len()).map(VarId::from_index).collect();
    for (leaf, member) in &assignment {
        if let Some(id) = set.symbols().get(leaf) {
            map[id.index()] = symbols.intern(member);
        }
    }
    Ok(set.substitute(symbols, |v| map[v.index()]))
}

/// Monomial and variable loss of a cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Losses {
    pub ml: u64,
    pub vl: u64,
}

pub fn losses(set: &PolySet, forest: &AbstractionForest, vvs: &Vvs) -> Result<Losses> {
    let out = abstract_set(set, forest, vvs)?;
    Ok(Losses {
        ml: (set.num_m() - out.num_m()) as u64,
        vl: (set.num_v() - out.num_v()) as u64,
    })
}

pub fn monomial_loss(set: &PolySet, forest: &AbstractionForest, vvs: &Vvs) -> Result<u64> {
    losses(set, forest, vvs).map(|l| l.ml)
}

pub fn variable_loss(set: &PolySet, forest: &AbstractionForest, vvs: &Vvs) -> Result<u64> {
    losses(set, forest, vvs).map(|l| l.vl)
}

/// Turns a valuation over cut members into one over the original leaves:
/// each leaf takes its member's value, every other assignment is kept.
pub fn lift_valuation(forest: &AbstractionForest, vvs: &Vvs, valuation: &Valuation) -> Result<Valuation> {
    let assignment = leaf_assignment(forest, vvs)?;
    let mut out = valuation.clone();
    for (leaf, member) in assignment {
        if let Some(x) = valuation.get(&member) {
            out.set(leaf, x);
        }
    }
    Ok(out)
}
