use serde::{Deserialize, Serialize};

use crate::abstraction::{AbstractionTree, NodeDoc};
use crate::error::{Error, Result};

/// Shape of a catalogue tree: `fanouts[0]` is the root's fan-out, the last
/// entry the number of leaves under each lowest internal node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub tree_type: u8,
    pub fanouts: Vec<usize>,
    pub root: String,
    pub leaves: Vec<String>,
}

/// Levels and fixed leading fan-outs of each tree type.
fn layout(tree_type: u8) -> Option<(usize, &'static [usize])> {
    Some(match tree_type {
        1 => (2, &[]),
        2 => (3, &[2]),
        3 => (3, &[4]),
        4 => (3, &[8]),
        5 => (4, &[2, 2]),
        6 => (4, &[2, 4]),
        7 => (4, &[4, 2]),
        _ => return None,
    })
}

impl TreeSpec {
    pub fn new(tree_type: u8, fanouts: Vec<usize>, root: impl Into<String>, leaves: Vec<String>) -> Result<Self> {
        let spec = Self {
            tree_type,
            fanouts,
            root: root.into(),
            leaves,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        let Some((levels, fixed)) = layout(self.tree_type) else {
            return bad(format!("tree type {} not in 1..=7", self.tree_type));
        };
        if self.fanouts.len() != levels {
            return bad(format!(
                "type {} needs {levels} fan-outs, got {}",
                self.tree_type,
                self.fanouts.len()
            ));
        }
        if !self.fanouts.starts_with(fixed) {
            return bad(format!("type {} starts with fan-outs {fixed:?}", self.tree_type));
        }
        if self.fanouts.contains(&0) {
            return bad("fan-outs must be positive".into());
        }
        let want: usize = self.fanouts.iter().product();
        if want != self.leaves.len() {
            return bad(format!(
                "fan-outs give {want} leaves, {} labels supplied",
                self.leaves.len()
            ));
        }
        Ok(())
    }
}

/// `prefix1 .. prefixN`, or from `first` on.
pub fn numbered(prefix: &str, first: usize, count: usize) -> Vec<String> {
    (first..first + count).map(|i| format!("{prefix}{i}")).collect()
}

/// Builds a catalogue tree. Internal nodes are named by their path from the
/// root, e.g. `Plans/3/1`.
pub fn gen_tree(spec: &TreeSpec) -> Result<AbstractionTree> {
    spec.validate()?;
    let mut leaves = spec.leaves.iter();
    fn build<'a>(label: String, fanouts: &[usize], leaves: &mut impl Iterator<Item = &'a String>) -> NodeDoc {
        let (&f, rest) = fanouts.split_first().expect("at least one level");
        let children = (1..=f)
            .map(|i| {
                if rest.is_empty() {
                    NodeDoc::leaf(leaves.next().expect("validated leaf count").clone())
                } else {
                    build(format!("{label}/{i}"), rest, leaves)
                }
            })
            .collect();
        NodeDoc::node(label, children)
    }
    Ok(AbstractionTree::from_doc(&build(
        spec.root.clone(),
        &spec.fanouts,
        &mut leaves,
    )))
}

/// Two-level tree: the leaves split into consecutive groups of `group`
/// under `root`. A single group hangs directly under the root.
pub fn grouped_tree(root: &str, leaves: &[String], group: usize) -> AbstractionTree {
    let group = group.max(1);
    if leaves.len() <= group {
        return AbstractionTree::from_doc(&NodeDoc::node(root, leaves.iter().map(NodeDoc::leaf).collect()));
    }
    let children = leaves
        .chunks(group)
        .enumerate()
        .map(|(i, chunk)| NodeDoc::node(format!("{root}/{}", i + 1), chunk.iter().map(NodeDoc::leaf).collect()))
        .collect();
    AbstractionTree::from_doc(&NodeDoc::node(root, children))
}

/// Number of cuts: 1 for a leaf, `1 + Π cuts(child)` otherwise. Saturates.
pub fn count_cuts(tree: &AbstractionTree) -> u128 {
    let mut cuts = vec![0u128; tree.len()];
    for v in tree.postorder() {
        cuts[v] = if tree.is_leaf(v) {
            1
        } else {
            tree.children(v)
                .iter()
                .fold(1u128, |acc, &c| acc.saturating_mul(cuts[c]))
                .saturating_add(1)
        };
    }
    cuts[tree.root()]
}

/// One row of the tree catalogue over 128 leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogueRow {
    pub tree_type: u8,
    pub fanouts: &'static [usize],
    pub nodes: usize,
}

const fn row(tree_type: u8, fanouts: &'static [usize], nodes: usize) -> CatalogueRow {
    CatalogueRow {
        tree_type,
        fanouts,
        nodes,
    }
}

/// The benchmark catalogue of 128-leaf trees, by type.
pub const CATALOGUE: &[CatalogueRow] = &[
    row(1, &[2, 64], 131),
    row(1, &[4, 32], 133),
    row(1, &[8, 16], 137),
    row(1, &[16, 8], 145),
    row(1, &[32, 4], 161),
    row(1, &[64, 2], 193),
    row(2, &[2, 2, 32], 135),
    row(2, &[2, 4, 16], 139),
    row(2, &[2, 8, 8], 147),
    row(2, &[2, 16, 4], 163),
    row(2, &[2, 32, 2], 195),
    row(3, &[4, 2, 16], 141),
    row(3, &[4, 4, 8], 149),
    row(3, &[4, 8, 4], 165),
    row(3, &[4, 16, 2], 197),
    row(4, &[8, 2, 8], 153),
    row(4, &[8, 4, 4], 169),
    row(4, &[8, 8, 2], 201),
    row(5, &[2, 2, 2, 16], 143),
    row(5, &[2, 2, 4, 8], 151),
    row(5, &[2, 2, 8, 4], 167),
    row(5, &[2, 2, 16, 2], 199),
    row(6, &[2, 4, 2, 8], 155),
    row(6, &[2, 4, 4, 4], 171),
    row(6, &[2, 4, 8, 2], 203),
    row(7, &[4, 2, 2, 8], 157),
    row(7, &[4, 2, 4, 4], 173),
    row(7, &[4, 2, 8, 2], 205),
];

impl CatalogueRow {
    pub fn spec(&self, root: &str, leaf_prefix: &str) -> TreeSpec {
        TreeSpec::new(
            self.tree_type,
            self.fanouts.to_vec(),
            root,
            numbered(leaf_prefix, 1, 128),
        )
        .expect("catalogue rows are valid")
    }
}
