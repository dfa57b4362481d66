use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::abstraction::{AbstractionForest, AbstractionTree, NodeDoc};
use crate::error::{Error, Result};
use crate::polynomial::{Monomial, PolySet, Polynomial, Symbols};

/// `Σ_{(a,b) ∈ pairs} Σ_{i,j ≤ n} x(a)_i · x(b)_j`, with `a` and `b`
/// indexing `metavars` from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UppSpec {
    pub metavars: Vec<String>,
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl UppSpec {
    /// Metavariables `x1 .. x<count>`.
    pub fn numbered(count: usize, n: usize, pairs: Vec<(usize, usize)>) -> Self {
        Self {
            metavars: (1..=count).map(|i| format!("x{i}")).collect(),
            n,
            pairs,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let size = self.metavars.len();
        if let Some(&(a, b)) = self.pairs.iter().find(|&&(a, b)| !(1 <= a && a < b && b <= size)) {
            return Err(Error::InvalidPair(a, b));
        }
        let distinct: BTreeSet<&String> = self.metavars.iter().collect();
        if distinct.len() != size {
            return Err(Error::InvalidSpec("metavariable labels must be distinct".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidSpec("blowup factor must be at least 1".into()));
        }
        Ok(())
    }

    /// Leaf `i` (from 1) of metavariable `a` (from 1).
    pub fn leaf(&self, a: usize, i: usize) -> String {
        format!("{}_{i}", self.metavars[a - 1])
    }

    fn distinct_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.pairs.iter().copied().collect()
    }
}

/// The polynomial (coefficients 1) and its flat forest: one depth-1 tree per
/// metavariable over its `n` copies.
pub fn gen_upp(spec: &UppSpec) -> Result<(PolySet, AbstractionForest)> {
    spec.validate()?;
    let mut symbols = Symbols::new();
    let ids: Vec<Vec<_>> = (1..=spec.metavars.len())
        .map(|a| (1..=spec.n).map(|i| symbols.intern(&spec.leaf(a, i))).collect())
        .collect();
    let mut raw = Vec::new();
    for (a, b) in spec.distinct_pairs() {
        for &x in &ids[a - 1] {
            for &y in &ids[b - 1] {
                raw.push(Monomial::new(1.0, [(x, 1), (y, 1)])?);
            }
        }
    }
    let set = PolySet::new(symbols, vec![Polynomial::normalize(raw)?]);
    let trees = (1..=spec.metavars.len())
        .map(|a| {
            let leaves = (1..=spec.n).map(|i| NodeDoc::leaf(spec.leaf(a, i))).collect();
            AbstractionTree::from_doc(&NodeDoc::node(&spec.metavars[a - 1], leaves))
        })
        .collect();
    Ok((set, AbstractionForest::new(trees)))
}

/// `(numM, numV)` after abstracting the metavariables in `abstracted`
/// (1-based) on the flat forest: per pair 1, `n` or `n²` monomials as both,
/// one or neither endpoint is abstracted; one variable per abstracted
/// metavariable and `n` per other one that occurs in some pair.
pub fn flat_sizes(spec: &UppSpec, abstracted: &BTreeSet<usize>) -> (usize, usize) {
    let n = spec.n;
    let pairs = spec.distinct_pairs();
    let num_m = pairs
        .iter()
        .map(|(a, b)| match (abstracted.contains(a), abstracted.contains(b)) {
            (true, true) => 1,
            (true, false) | (false, true) => n,
            (false, false) => n * n,
        })
        .sum();
    let occurring: BTreeSet<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let num_v = occurring
        .iter()
        .map(|a| if abstracted.contains(a) { 1 } else { n })
        .sum();
    (num_m, num_v)
}

/// Undirected graph on vertices `1..=num_vertices` and a cover size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphInstance {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub k: usize,
}

impl GraphInstance {
    /// Edges as ordered pairs `(i, j)` with `i < j`, deduplicated.
    pub fn normalized_edges(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect()
    }

    pub fn validate(&self, max_vertices: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidGraph(m));
        let v = self.num_vertices;
        if v < 2 {
            return bad(format!("need at least 2 vertices, got {v}"));
        }
        if v > max_vertices {
            return bad(format!("{v} vertices exceed the limit of {max_vertices}"));
        }
        if self.edges.is_empty() {
            return bad("edge set is empty".into());
        }
        for &(a, b) in &self.edges {
            if a == b {
                return bad(format!("self loop on vertex {a}"));
            }
            if a == 0 || b == 0 || a > v || b > v {
                return bad(format!("edge ({a}, {b}) leaves 1..={v}"));
            }
        }
        if self.k < 2 || self.k + 1 > v {
            return bad(format!("cover size {} not in 2..={}", self.k, v - 1));
        }
        Ok(())
    }

    /// Whether some set of exactly `k` vertices touches every edge.
    pub fn has_cover(&self, k: usize) -> bool {
        let edges = self.normalized_edges();
        (0u32..1 << self.num_vertices)
            .filter(|s| s.count_ones() as usize == k)
            .any(|s| {
                edges
                    .iter()
                    .all(|&(a, b)| s & (1 << (a - 1)) != 0 || s & (1 << (b - 1)) != 0)
            })
    }
}

/// Decision instance equivalent to a vertex-cover question.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcReduction {
    pub upp: UppSpec,
    pub granularity: u64,
    pub bounds: RangeInclusive<u64>,
}

/// Default largest graph accepted by [`vc_reduce`]; the instance has
/// `|E|·|V|⁶` monomials.
pub const VC_MAX_VERTICES: usize = 6;

/// One metavariable per vertex, one pair per edge, blowup `|V|³`, target
/// granularity `(|V|−k)·|V|³ + k` and sizes `2..=|V|⁵`.
pub fn vc_reduce(graph: &GraphInstance, max_vertices: usize) -> Result<VcReduction> {
    graph.validate(max_vertices)?;
    let v = graph.num_vertices as u64;
    let n = v.pow(3);
    let upp = UppSpec::numbered(
        graph.num_vertices,
        n as usize,
        graph.normalized_edges().into_iter().collect(),
    );
    Ok(VcReduction {
        upp,
        granularity: (v - graph.k as u64) * n + graph.k as u64,
        bounds: 2..=v.pow(5),
    })
}
