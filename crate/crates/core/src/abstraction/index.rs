use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::tree::{AbstractionTree, NodeId};
use crate::polynomial::{PolySet, VarId, VarKey};

/// Residue of a monomial once a tree leaf is taken out: the polynomial it
/// lives in, the remaining variables, and the leaf's exponent.
///
/// Two monomials of one polynomial merge under a metavariable exactly when
/// their residues are equal, so exponents stay part of the key.
type Residue = (usize, VarKey, u32);

/// For one tree, maps each leaf to the residues of the monomials holding it.
/// Built in a single pass over the polynomials.
#[derive(Clone, Debug)]
pub struct LeafIndex {
    residues: Vec<Residue>,
    by_leaf: BTreeMap<NodeId, Vec<u32>>,
    monomials_touched: u64,
}

impl LeafIndex {
    pub fn build(set: &PolySet, tree: &AbstractionTree) -> Self {
        let leaf_of: HashMap<VarId, NodeId> = tree
            .leaves()
            .filter_map(|v| set.symbols().get(tree.label(v)).map(|id| (id, v)))
            .collect();
        let mut ids: HashMap<Residue, u32> = HashMap::new();
        let mut residues = Vec::new();
        let mut by_leaf: BTreeMap<NodeId, Vec<u32>> = BTreeMap::new();
        let mut touched = 0;
        for (pi, poly) in set.polys().iter().enumerate() {
            for m in poly.monomials() {
                touched += 1;
                for (pos, &(var, exp)) in m.key().iter().enumerate() {
                    let Some(&leaf) = leaf_of.get(&var) else { continue };
                    let rest: VarKey = m
                        .key()
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != pos)
                        .map(|(_, &p)| p)
                        .collect();
                    let key = (pi, rest, exp);
                    let next = residues.len() as u32;
                    let id = *ids.entry(key.clone()).or_insert_with(|| {
                        residues.push(key);
                        next
                    });
                    by_leaf.entry(leaf).or_default().push(id);
                }
            }
        }
        Self {
            residues,
            by_leaf,
            monomials_touched: touched,
        }
    }

    /// Residue ids of the monomials containing `leaf`; empty when absent.
    pub fn entries(&self, leaf: NodeId) -> &[u32] {
        self.by_leaf.get(&leaf).map_or(&[], Vec::as_slice)
    }

    /// `D_P[leaf]` for polynomial `poly`, each residue rendered as its
    /// sorted variable names.
    pub fn residues(&self, set: &PolySet, poly: usize, leaf: NodeId) -> BTreeSet<Vec<String>> {
        self.entries(leaf)
            .iter()
            .map(|&id| &self.residues[id as usize])
            .filter(|r| r.0 == poly)
            .map(|r| {
                let mut names: Vec<String> = r.1.iter().map(|&(v, _)| set.symbols().name(v).to_owned()).collect();
                names.sort();
                names
            })
            .collect()
    }

    /// Monomials saved by collapsing all leaves below `node` into `node`:
    /// affected monomials minus distinct residues.
    pub fn node_ml(&self, tree: &AbstractionTree, node: NodeId) -> u64 {
        let mut all: Vec<u32> = tree
            .descendant_leaves(node)
            .into_iter()
            .flat_map(|l| self.entries(l).iter().copied())
            .collect();
        let affected = all.len();
        all.sort_unstable();
        all.dedup();
        (affected - all.len()) as u64
    }

    /// `node_ml` for every node, indexed by node id.
    pub fn all_node_ml(&self, tree: &AbstractionTree) -> Vec<u64> {
        // a node's residue list is the concatenation of its children's
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); tree.len()];
        let mut out = vec![0; tree.len()];
        for v in tree.postorder() {
            if tree.is_leaf(v) {
                lists[v] = self.entries(v).to_vec();
                continue;
            }
            let mut merged: Vec<u32> = Vec::new();
            for &c in tree.children(v) {
                merged.append(&mut lists[c]);
            }
            let affected = merged.len();
            let mut distinct = merged.clone();
            distinct.sort_unstable();
            distinct.dedup();
            out[v] = (affected - distinct.len()) as u64;
            lists[v] = merged;
        }
        out
    }

    /// Descendant leaves of each node that occur in the indexed polynomials.
    pub fn occurring_leaves(&self, tree: &AbstractionTree) -> Vec<u64> {
        let mut out = vec![0u64; tree.len()];
        for v in tree.postorder() {
            out[v] = if tree.is_leaf(v) {
                u64::from(!self.entries(v).is_empty())
            } else {
                tree.children(v).iter().map(|&c| out[c]).sum()
            };
        }
        out
    }

    pub fn monomials_touched(&self) -> u64 {
        self.monomials_touched
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{abstract_set, clean_tree, AbstractionForest, Vvs};
    use crate::fixtures;

    #[test]
    fn residues_of_example_five() {
        let set = fixtures::example_five();
        let tree = fixtures::plans_tree();
        let idx = LeafIndex::build(&set, &tree);
        let b1 = tree.find("b1").unwrap();
        let got = idx.residues(&set, 1, b1);
        assert_eq!(got, BTreeSet::from([vec!["m1".to_owned()], vec!["m3".to_owned()]]));
        assert_eq!(idx.residues(&set, 0, tree.find("p1").unwrap()).len(), 2);
        assert!(idx.entries(tree.find("p2").unwrap()).is_empty());
    }

    #[test]
    fn node_ml_of_example_five() {
        let set = fixtures::example_five();
        let tree = clean_tree(&fixtures::plans_tree(), &set).unwrap();
        let idx = LeafIndex::build(&set, &tree);
        let all = idx.all_node_ml(&tree);
        for (label, expected) in [("SB", 2), ("Special", 4), ("Business", 4), ("Plans", 10), ("b1", 0)] {
            let v = tree.find(label).unwrap();
            assert_eq!(idx.node_ml(&tree, v), expected, "{label}");
            assert_eq!(all[v], expected, "{label}");
        }
    }

    #[test]
    fn node_ml_matches_substitution() {
        let set = fixtures::example_five();
        let tree = clean_tree(&fixtures::plans_tree(), &set).unwrap();
        let idx = LeafIndex::build(&set, &tree);
        let forest = AbstractionForest::single(tree.clone());
        for v in tree.node_ids() {
            let below: Vec<NodeId> = tree.descendant_leaves(v);
            let mut members: Vec<String> = tree
                .leaves()
                .filter(|l| !below.contains(l))
                .map(|l| tree.label(l).to_owned())
                .collect();
            members.push(tree.label(v).to_owned());
            let out = abstract_set(&set, &forest, &Vvs::new(members)).unwrap();
            assert_eq!(idx.node_ml(&tree, v), (set.num_m() - out.num_m()) as u64);
        }
    }

    #[test]
    fn exponent_is_part_of_the_residue() {
        let set = crate::polynomial::PolySet::from_text(&["a^2*x + b*x + b^2*x"]).unwrap();
        let tree = crate::abstraction::AbstractionTree::from_doc(&crate::abstraction::NodeDoc::node(
            "g",
            vec![
                crate::abstraction::NodeDoc::leaf("a"),
                crate::abstraction::NodeDoc::leaf("b"),
            ],
        ));
        let idx = LeafIndex::build(&set, &tree);
        // g^2*x + g*x: a^2*x and b^2*x merge, b*x stays
        assert_eq!(idx.node_ml(&tree, tree.root()), 1);
    }
}
