use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub label: String,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

/// A rooted labeled tree. Leaves name polynomial variables, internal nodes
/// name metavariables. Node ids are assigned in pre-order, so the root is 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractionTree {
    nodes: Vec<TreeNode>,
}

/// Nested form used by the JSON interchange format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub label: String,
    #[serde(default)]
    pub children: Vec<NodeDoc>,
}

impl NodeDoc {
    pub fn leaf(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            children: Vec::new(),
        }
    }

    pub fn node(label: impl Into<String>, children: Vec<NodeDoc>) -> Self {
        Self {
            label: label.into(),
            children,
        }
    }
}

/// Problems detected while assembling or validating trees and forests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateLabel { tree: usize, label: String },
    SharedLabel { label: String, trees: Vec<usize> },
    MultipleRoots(Vec<String>),
    NoRoot,
    MultipleParents(String),
    Cycle(String),
    EmptyForest,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DuplicateLabel { tree, label } => write!(f, "label `{label}` appears twice in tree {tree}"),
            Violation::SharedLabel { label, trees } => write!(f, "label `{label}` is shared by trees {trees:?}"),
            Violation::MultipleRoots(roots) => write!(f, "multiple roots: {}", roots.join(", ")),
            Violation::NoRoot => write!(f, "no root"),
            Violation::MultipleParents(label) => write!(f, "node `{label}` has more than one parent"),
            Violation::Cycle(label) => write!(f, "cycle through `{label}`"),
            Violation::EmptyForest => write!(f, "forest has no trees"),
        }
    }
}

impl AbstractionTree {
    pub fn from_doc(doc: &NodeDoc) -> Self {
        let mut nodes = Vec::new();
        fn walk(doc: &NodeDoc, parent: Option<NodeId>, nodes: &mut Vec<TreeNode>) -> NodeId {
            let id = nodes.len();
            nodes.push(TreeNode {
                label: doc.label.clone(),
                parent,
                children: Vec::with_capacity(doc.children.len()),
            });
            for child in &doc.children {
                let c = walk(child, Some(id), nodes);
                nodes[id].children.push(c);
            }
            id
        }
        walk(doc, None, &mut nodes);
        Self { nodes }
    }

    pub fn to_doc(&self) -> NodeDoc {
        fn walk(t: &AbstractionTree, v: NodeId) -> NodeDoc {
            NodeDoc::node(t.label(v), t.children(v).iter().map(|&c| walk(t, c)).collect())
        }
        walk(self, self.root())
    }

    /// Builds a tree from `(parent, child)` label pairs, reporting multiple
    /// roots, multiple parents and cycles instead of guessing.
    pub fn from_edges(edges: &[(&str, &str)]) -> std::result::Result<Self, Vec<Violation>> {
        let mut order: Vec<&str> = Vec::new();
        let mut parent: HashMap<&str, &str> = HashMap::new();
        let mut children: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        let mut violations = Vec::new();
        for &(p, c) in edges {
            for l in [p, c] {
                if !order.contains(&l) {
                    order.push(l);
                }
            }
            if parent.insert(c, p).is_some() {
                violations.push(Violation::MultipleParents(c.to_owned()));
            }
            children.entry(p).or_default().push(c);
        }
        for &start in &order {
            let mut seen = vec![start];
            let mut cur = start;
            while let Some(&p) = parent.get(cur) {
                if seen.contains(&p) {
                    if p == start {
                        violations.push(Violation::Cycle(start.to_owned()));
                    }
                    break;
                }
                seen.push(p);
                cur = p;
            }
        }
        let roots: Vec<&str> = order.iter().copied().filter(|l| !parent.contains_key(l)).collect();
        match roots.len() {
            0 => violations.push(Violation::NoRoot),
            1 => {}
            _ => violations.push(Violation::MultipleRoots(roots.iter().map(|s| s.to_string()).collect())),
        }
        if !violations.is_empty() {
            violations.dedup();
            return Err(violations);
        }
        fn build(label: &str, children: &BTreeMap<&str, Vec<&str>>) -> NodeDoc {
            let kids = children
                .get(label)
                .map(|k| k.iter().map(|c| build(c, children)).collect());
            NodeDoc::node(label, kids.unwrap_or_default())
        }
        Ok(Self::from_doc(&build(roots[0], &children)))
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, v: NodeId) -> &TreeNode {
        &self.nodes[v]
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.nodes[v].label
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v].children
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v].parent
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.nodes[v].children.is_empty()
    }

    pub fn node_ids(&self) -> std::ops::Range<NodeId> {
        0..self.nodes.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|n| n.label.as_str())
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|&v| self.is_leaf(v))
    }

    /// First node carrying `label` in pre-order.
    pub fn find(&self, label: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.label == label)
    }

    /// Children before parents.
    pub fn postorder(&self) -> Vec<NodeId> {
        // pre-order ids: reversing gives every child before its parent
        (0..self.nodes.len()).rev().collect()
    }

    pub fn descendant_leaves(&self, v: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if self.is_leaf(u) {
                out.push(u);
            } else {
                stack.extend(self.children(u).iter().rev());
            }
        }
        out
    }

    /// `true` when `a` is `b` or a descendant of `b`.
    pub fn is_below(&self, mut a: NodeId, b: NodeId) -> bool {
        loop {
            if a == b {
                return true;
            }
            match self.parent(a) {
                Some(p) => a = p,
                None => return false,
            }
        }
    }

    /// Largest number of children of any node.
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.children.len()).max().unwrap_or(0)
    }

    pub fn height(&self) -> usize {
        fn h(t: &AbstractionTree, v: NodeId) -> usize {
            t.children(v).iter().map(|&c| 1 + h(t, c)).max().unwrap_or(0)
        }
        h(self, self.root())
    }
}

/// Pairwise node-disjoint abstraction trees.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AbstractionForest {
    pub trees: Vec<AbstractionTree>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ForestDoc {
    trees: Vec<NodeDoc>,
}

impl AbstractionForest {
    pub fn new(trees: Vec<AbstractionTree>) -> Self {
        Self { trees }
    }

    pub fn single(tree: AbstractionTree) -> Self {
        Self { trees: vec![tree] }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ForestDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Ok(Self::new(doc.trees.iter().map(AbstractionTree::from_doc).collect()))
    }

    pub fn to_json(&self) -> String {
        let doc = ForestDoc {
            trees: self.trees.iter().map(AbstractionTree::to_doc).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("forest serializes")
    }

    /// `(tree, node)` of a label, assuming labels are unique.
    pub fn locate(&self, label: &str) -> Option<(usize, NodeId)> {
        self.trees
            .iter()
            .enumerate()
            .find_map(|(t, tree)| tree.find(label).map(|v| (t, v)))
    }

    pub fn num_nodes(&self) -> usize {
        self.trees.iter().map(AbstractionTree::len).sum()
    }
}
