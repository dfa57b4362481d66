//! The telephony running example: plan and month abstraction trees and the
//! revenue polynomials for two zip codes.

use crate::abstraction::{AbstractionTree, NodeDoc};
use crate::polynomial::PolySet;

/// Revenue polynomial for zip 10001 over plan and month variables.
pub const ZIP_10001: &str = "220.8*p1*m1 + 240*p1*m3 + 127.4*f1*m1 + 114.45*f1*m3 \
    + 75.9*y1*m1 + 72.5*y1*m3 + 42*v*m1 + 24.2*v*m3";

/// Revenue polynomial for zip 10002 (business plans).
pub const ZIP_10002: &str = "77.9*b1*m1 + 80.5*b1*m3 + 52.2*e*m1 + 56.5*e*m3 + 69.7*b2*m1 + 100.65*b2*m3";

/// `{ZIP_10001}`.
pub fn example_p() -> PolySet {
    PolySet::from_text(&[ZIP_10001]).expect("fixture parses")
}

/// `{ZIP_10001, ZIP_10002}`.
pub fn example_five() -> PolySet {
    PolySet::from_text(&[ZIP_10001, ZIP_10002]).expect("fixture parses")
}

/// Calling plans grouped by business, special and standard offers.
pub fn plans_tree() -> AbstractionTree {
    let leaf = NodeDoc::leaf;
    let node = NodeDoc::node;
    AbstractionTree::from_doc(&node(
        "Plans",
        vec![
            node("Business", vec![node("SB", vec![leaf("b1"), leaf("b2")]), leaf("e")]),
            node(
                "Special",
                vec![
                    node("F", vec![leaf("f1"), leaf("f2")]),
                    node("Y", vec![leaf("y1"), leaf("y2"), leaf("y3")]),
                    leaf("v"),
                ],
            ),
            node("Standard", vec![leaf("p1"), leaf("p2")]),
        ],
    ))
}

/// Months `m1..m12` grouped into quarters `q1..q4` under `Year`.
pub fn year_tree() -> AbstractionTree {
    months_tree(12)
}

/// Quarter tree restricted to the first `months` months (at most 12).
pub fn months_tree(months: usize) -> AbstractionTree {
    let quarters = (1..=4)
        .filter_map(|q| {
            let leaves: Vec<NodeDoc> = (3 * q - 2..=3 * q)
                .filter(|&m| m <= months)
                .map(|m| NodeDoc::leaf(format!("m{m}")))
                .collect();
            (!leaves.is_empty()).then(|| NodeDoc::node(format!("q{q}"), leaves))
        })
        .collect();
    AbstractionTree::from_doc(&NodeDoc::node("Year", quarters))
}
